#pragma once

#include "spatopt/genotype.hpp"
#include "spatopt/rod.hpp"
#include "spatopt/section.hpp"

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace spatopt {

/// Pressure levels {0, 50, 100} kPa, 27 triples, P_1 outermost and P_3 fastest.
struct PressureLattice {
  static constexpr std::array<double, 3> kLevels = {0.0, 50.0, 100.0};
  static constexpr std::size_t kSize = 27;

  static PressureTriple triple(std::size_t index);
  static std::size_t index_of(int l1, int l2, int l3) { return static_cast<std::size_t>(9 * l1 + 3 * l2 + l3); }
  static std::array<PressureTriple, kSize> triples();
  /// Lattice index obtained by exchanging the levels of supplies a and b.
  static std::size_t swapped_index(std::size_t index, int a, int b);
};

enum class Provenance { Computed, Target };

inline std::array<Eigen::Vector3d, PressureLattice::kSize> zero_points() {
  std::array<Eigen::Vector3d, PressureLattice::kSize> p;
  p.fill(Eigen::Vector3d::Zero());
  return p;
}

struct Workspace {
  std::array<Eigen::Vector3d, PressureLattice::kSize> points = zero_points();
  Provenance provenance = Provenance::Computed;
  double length = 100.0;  // H in mm
};

struct WorkspaceDiagnostics {
  std::array<bool, PressureLattice::kSize> converged{};
  std::array<double, PressureLattice::kSize> residual{};
  std::size_t failed() const;
};

struct WorkspaceResult {
  Workspace workspace;
  WorkspaceDiagnostics diagnostics;
  SectionProperties section;
};

/// Tip position mapped from the principal frame back to the grid frame
/// (rotation by theta_p about e3; the origin is the material centroid).
Eigen::Vector3d to_grid_frame(const SectionProperties& section, const Eigen::Vector3d& principal);

/// 27 tip positions of a cross-section, solves distributed over OpenMP threads.
WorkspaceResult compute_workspace(const SectionProperties& section, const MaterialParams& mat,
                                  const SolverConfig& cfg = {});
/// Same result, solves performed in lattice order on the calling thread. Reference kernel.
WorkspaceResult compute_workspace_serial(const SectionProperties& section, const MaterialParams& mat,
                                         const SolverConfig& cfg = {});

/// rasterize -> enforce_walls -> section_properties -> 27 solves.
/// Throws DegenerateSectionError for a section without material.
WorkspaceResult compute_workspace(const Genotype& genotype, const MaterialParams& mat, const SolverConfig& cfg = {});
WorkspaceResult compute_workspace_serial(const Genotype& genotype, const MaterialParams& mat,
                                         const SolverConfig& cfg = {});

SectionProperties genotype_section(const Genotype& genotype);

/// Penalty per non-converged lattice node, mm^2.
inline constexpr double kNonConvergencePenalty = 1e6;

/// Sum of squared index-aligned distances, mm^2. Failed nodes contribute the penalty.
double loss_L(const Workspace& computed, const Workspace& target, const WorkspaceDiagnostics* diagnostics = nullptr);

}  // namespace spatopt
