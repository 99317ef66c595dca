#include "spatopt/error.hpp"
#include "spatopt/workspace.hpp"

#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <numbers>

using namespace spatopt;

namespace {

Genotype sample(std::uint64_t seed) {
  Rng rng(seed, 41);
  return random_genotype(GridSpec{}, 100, {}, rng);
}

}  // namespace

TEST_CASE("lattice ordering has P3 fastest") {
  CHECK(PressureLattice::triple(0) == PressureTriple{{0, 0, 0}});
  CHECK(PressureLattice::triple(1) == PressureTriple{{0, 0, 50}});
  CHECK(PressureLattice::triple(3) == PressureTriple{{0, 50, 0}});
  CHECK(PressureLattice::triple(9) == PressureTriple{{50, 0, 0}});
  CHECK(PressureLattice::triple(26) == PressureTriple{{100, 100, 100}});
  CHECK_THROWS_AS(PressureLattice::triple(27), ValidationError);
  for (std::size_t k = 0; k < 27; ++k) {
    const auto t = PressureLattice::triple(k);
    const auto s = PressureLattice::triple(PressureLattice::swapped_index(k, 0, 1));
    CHECK(s.p[0] == t.p[1]);
    CHECK(s.p[1] == t.p[0]);
    CHECK(s.p[2] == t.p[2]);
    CHECK(PressureLattice::swapped_index(PressureLattice::swapped_index(k, 0, 2), 0, 2) == k);
  }
}

TEST_CASE("all-material genotype does not move") {
  const Genotype g{GridSpec{}, {{5, 5, ElementType::Material}, {60, 200, ElementType::Material}}};
  const auto r = compute_workspace(g, MaterialParams{});
  for (const auto& p : r.workspace.points) CHECK((p - Eigen::Vector3d(0, 0, 100)).norm() < 1e-9);
  CHECK(r.diagnostics.failed() == 0);
}

TEST_CASE("parallel and serial workspaces are bit-identical") {
  for (int threads : {1, 3}) {
    omp_set_num_threads(threads);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const Genotype g = sample(seed);
      const auto a = compute_workspace(g, MaterialParams{});
      const auto b = compute_workspace_serial(g, MaterialParams{});
      for (std::size_t k = 0; k < 27; ++k) CHECK(a.workspace.points[k] == b.workspace.points[k]);
    }
  }
  omp_set_num_threads(1);
}

TEST_CASE("loss is zero against itself and counts squared distances") {
  const auto w = compute_workspace(sample(1), MaterialParams{}).workspace;
  CHECK(loss_L(w, w) == 0.0);
  Workspace shifted = w;
  for (auto& p : shifted.points) p.x() += 1.0;
  CHECK(loss_L(w, shifted) == doctest::Approx(27.0).epsilon(1e-12));
  Workspace diag = w;
  for (auto& p : diag.points) p += Eigen::Vector3d(1, 2, 2);
  CHECK(loss_L(w, diag) == doctest::Approx(27.0 * 9.0).epsilon(1e-12));
}

TEST_CASE("loss is invariant under a consistent lattice permutation") {
  const auto a = compute_workspace(sample(2), MaterialParams{}).workspace;
  const auto b = compute_workspace(sample(3), MaterialParams{}).workspace;
  Workspace pa = a, pb = b;
  for (std::size_t k = 0; k < 27; ++k) {
    pa.points[k] = a.points[26 - k];
    pb.points[k] = b.points[26 - k];
  }
  CHECK(loss_L(pa, pb) == doctest::Approx(loss_L(a, b)).epsilon(1e-14));
}

TEST_CASE("failed nodes are penalized") {
  Workspace a, b;
  WorkspaceDiagnostics d;
  d.converged.fill(true);
  d.converged[4] = false;
  d.converged[20] = false;
  CHECK(loss_L(a, b, &d) == 2 * kNonConvergencePenalty);
  CHECK(d.failed() == 2);
}

TEST_CASE("rotating the genotype rotates the workspace") {
  const Genotype g = sample(5);
  const auto a = compute_workspace(g, MaterialParams{}).workspace;
  const auto b = compute_workspace(rotate_columns(g, 90), MaterialParams{}).workspace;
  for (std::size_t k = 0; k < 27; ++k) {
    const Eigen::Vector3d rotated(-a.points[k].y(), a.points[k].x(), a.points[k].z());
    CHECK((b.points[k] - rotated).norm() < 1e-6);
  }
}

TEST_CASE("swapping chamber labels permutes the workspace") {
  const Genotype g = sample(6);
  const auto a = compute_workspace(g, MaterialParams{}).workspace;
  const auto b = compute_workspace(swap_chambers(g, ElementType::Chamber2, ElementType::Chamber3), MaterialParams{}).workspace;
  for (std::size_t k = 0; k < 27; ++k)
    CHECK((b.points[k] - a.points[PressureLattice::swapped_index(k, 1, 2)]).norm() < 1e-9);
}

TEST_CASE("grid frame mapping rotates about e3") {
  SectionProperties s;
  s.theta_p = std::numbers::pi / 2;
  const Eigen::Vector3d g = to_grid_frame(s, Eigen::Vector3d(1, 0, 3));
  CHECK(g.x() == doctest::Approx(0.0));
  CHECK(g.y() == doctest::Approx(1.0));
  CHECK(g.z() == 3.0);
}

TEST_CASE("degenerate section surfaces as an error") {
  const Genotype g{GridSpec{}, {{5, 5, ElementType::Chamber1}}};
  CHECK_THROWS_AS(compute_workspace(g, MaterialParams{}), DegenerateSectionError);
}
