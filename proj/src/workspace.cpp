#include "spatopt/workspace.hpp"

#include "spatopt/error.hpp"
#include "spatopt/raster.hpp"

#include <cmath>

namespace spatopt {

PressureTriple PressureLattice::triple(std::size_t index) {
  if (index >= kSize) throw ValidationError("lattice index out of range");
  PressureTriple t;
  t.p = {kLevels[index / 9], kLevels[(index / 3) % 3], kLevels[index % 3]};
  return t;
}

std::array<PressureTriple, PressureLattice::kSize> PressureLattice::triples() {
  std::array<PressureTriple, kSize> out;
  for (std::size_t k = 0; k < kSize; ++k) out[k] = triple(k);
  return out;
}

std::size_t PressureLattice::swapped_index(std::size_t index, int a, int b) {
  std::array<int, 3> l = {static_cast<int>(index / 9), static_cast<int>((index / 3) % 3), static_cast<int>(index % 3)};
  std::swap(l[a], l[b]);
  return index_of(l[0], l[1], l[2]);
}

std::size_t WorkspaceDiagnostics::failed() const {
  std::size_t n = 0;
  for (bool c : converged) n += c ? 0 : 1;
  return n;
}

Eigen::Vector3d to_grid_frame(const SectionProperties& section, const Eigen::Vector3d& principal) {
  const double c = std::cos(section.theta_p), s = std::sin(section.theta_p);
  return {c * principal.x() - s * principal.y(), s * principal.x() + c * principal.y(), principal.z()};
}

namespace {

void solve_node(const SectionProperties& section, const MaterialParams& mat, const SolverConfig& cfg,
                std::size_t k, WorkspaceResult& out) {
  try {
    const RodSolution sol = solve_rod(section, mat, PressureLattice::triple(k), cfg);
    out.workspace.points[k] = to_grid_frame(section, sol.tip);
    out.diagnostics.converged[k] = true;
    out.diagnostics.residual[k] = sol.residual_norm;
  } catch (const NonConvergence& e) {
    out.workspace.points[k] = Eigen::Vector3d::Constant(std::nan(""));
    out.diagnostics.converged[k] = false;
    out.diagnostics.residual[k] = e.best_residual();
  }
}

WorkspaceResult prepare(const SectionProperties& section, const MaterialParams& mat) {
  mat.validate();
  // Fails early on a degenerate section instead of inside the parallel region.
  (void)stiffness_matrices(section, mat);
  WorkspaceResult out;
  out.section = section;
  out.workspace.provenance = Provenance::Computed;
  out.workspace.length = mat.length;
  return out;
}

}  // namespace

WorkspaceResult compute_workspace_serial(const SectionProperties& section, const MaterialParams& mat,
                                         const SolverConfig& cfg) {
  WorkspaceResult out = prepare(section, mat);
  for (std::size_t k = 0; k < PressureLattice::kSize; ++k) solve_node(section, mat, cfg, k, out);
  return out;
}

WorkspaceResult compute_workspace(const SectionProperties& section, const MaterialParams& mat,
                                  const SolverConfig& cfg) {
  WorkspaceResult out = prepare(section, mat);
  const int n = static_cast<int>(PressureLattice::kSize);
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < n; ++k) solve_node(section, mat, cfg, static_cast<std::size_t>(k), out);
  return out;
}

SectionProperties genotype_section(const Genotype& genotype) {
  const Grid grid(genotype.grid);
  return section_properties(enforce_walls(rasterize(genotype, grid)), grid);
}

WorkspaceResult compute_workspace(const Genotype& genotype, const MaterialParams& mat, const SolverConfig& cfg) {
  return compute_workspace(genotype_section(genotype), mat, cfg);
}

WorkspaceResult compute_workspace_serial(const Genotype& genotype, const MaterialParams& mat,
                                         const SolverConfig& cfg) {
  const Grid grid(genotype.grid);
  return compute_workspace_serial(section_properties(enforce_walls(rasterize_serial(genotype, grid)), grid), mat,
                                  cfg);
}

double loss_L(const Workspace& computed, const Workspace& target, const WorkspaceDiagnostics* diagnostics) {
  double sum = 0.0;
  for (std::size_t k = 0; k < PressureLattice::kSize; ++k) {
    if (diagnostics && !diagnostics->converged[k]) {
      sum += kNonConvergencePenalty;
      continue;
    }
    sum += (computed.points[k] - target.points[k]).squaredNorm();
  }
  return sum;
}

}  // namespace spatopt
