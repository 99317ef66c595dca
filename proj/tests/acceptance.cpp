// Acceptance gate: one PASS/FAIL line per criterion. Optional arguments
// select criteria by number, e.g. `acceptance 1 4 8`.
#include "commands.hpp"
#include "oracles.hpp"

#include "spatopt/error.hpp"
#include "spatopt/evolve.hpp"
#include "spatopt/json_io.hpp"
#include "spatopt/rod.hpp"
#include "spatopt/section.hpp"
#include "spatopt/triangulation.hpp"
#include "spatopt/workspace.hpp"

#include <omp.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace spatopt;
namespace fs = std::filesystem;

namespace {

// Tolerances of the acceptance protocol.
constexpr double kAreaRelTol = 1e-9;
constexpr double kMomentRelTol = 2e-3;
constexpr double kStraightTipTol = 1e-9;
constexpr double kAxialRelTol = 1e-3;
constexpr double kClosedFormRelTol = 1e-6;
constexpr int kClosedFormSections = 20;
constexpr double kStrainVariationTol = 1e-8;
constexpr int kStrainGenotypes = 100;
constexpr int kDelaunaySets = 200;
constexpr int kDelaunayMaxPoints = 50;
constexpr double kRotationTol = 1e-3;
constexpr double kRelabelTol = 1e-9;
constexpr int kEquivarianceGenotypes = 20;
constexpr int kShortPopulation = 20;
constexpr int kShortGenerations = 20;
constexpr int kFullGenerations = 100;
constexpr double kRunLossBound = 500.0;
constexpr double kBestLossBound = 150.0;
constexpr double kLossIdentityTol = 1e-12;
constexpr double kStepChangeTol = 1e-6;
constexpr int kStepGenotypes = 10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

// Random genotypes with at least some material.
std::vector<Genotype> genotypes(std::uint64_t seed, int count) {
  std::vector<Genotype> out;
  Rng rng(seed, 0xACCE);
  while (static_cast<int>(out.size()) < count) {
    Genotype g = random_genotype(GridSpec{}, 100, {}, rng);
    try {
      (void)genotype_section(g);
      out.push_back(std::move(g));
    } catch (const DegenerateSectionError&) {
    }
  }
  return out;
}

Outcome annulus_section() {
  const auto s = section_properties(CrossSectionRaster(GridSpec{}, ElementType::Material));
  const double area = std::numbers::pi * 525.0;
  const double moment = std::numbers::pi / 4.0 * (std::pow(25.0, 4) - std::pow(10.0, 4));
  const double ea = std::abs(s.material_area - area) / area;
  const double e1 = std::abs(s.i1 - moment) / moment, e2 = std::abs(s.i2 - moment) / moment;
  return {ea < kAreaRelTol && e1 < kMomentRelTol && e2 < kMomentRelTol,
          fmt("area rel err %.3g, ", ea) + fmt("I1/I2 rel err %.3g / %.3g", e1, e2)};
}

Eigen::Vector3d uniform_strain_prediction(const SectionProperties& s, const PressureTriple& p) {
  const MaterialParams mat;
  const double e = mat.youngs_modulus * 1e-3, g = mat.shear_modulus * 1e-3, a = s.material_area;
  Eigen::Vector3d force = Eigen::Vector3d::Zero(), moment = Eigen::Vector3d::Zero();
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector3d f(0, 0, p.p[k] * 1e-3 * s.chamber_area[k]);
    force += f;
    moment += s.chamber_offset[k].cross(f);
  }
  const Eigen::Vector3d v(force.x() / (g * a), force.y() / (g * a), 1.0 + force.z() / (e * a));
  const Eigen::Vector3d u(moment.x() / (e * s.i1), moment.y() / (e * s.i2), 0.0);
  const Eigen::Vector3d tip = oracle::uniform_strain_tip(v, u, mat.length);
  const double c = std::cos(s.theta_p), sn = std::sin(s.theta_p);
  return {c * tip.x() - sn * tip.y(), sn * tip.x() + c * tip.y(), tip.z()};
}

Outcome rod_oracles() {
  const MaterialParams mat;
  // (a) unpressurized
  const auto annulus = section_properties(CrossSectionRaster(GridSpec{}, ElementType::Material));
  const double err_a = (solve_rod(annulus, mat, PressureTriple{}).tip - Eigen::Vector3d(0, 0, 100)).norm();

  // (b) a concentric chamber band has no lever arm
  CrossSectionRaster band(GridSpec{}, ElementType::Material);
  for (int i = 40; i < 60; ++i)
    for (int j = 0; j < 360; ++j) band.set(i, j, ElementType::Chamber1);
  const auto bs = section_properties(band);
  const auto bsol = solve_rod(bs, mat, PressureTriple{{100, 0, 0}});
  const double axial = 100.0 * (1.0 + 100e-3 * bs.chamber_area[0] / (mat.youngs_modulus * 1e-3 * bs.material_area));
  const double err_b = (bsol.tip - Eigen::Vector3d(0, 0, axial)).norm() / axial;

  // (c) offset chambers against the uniform-strain closed form
  double err_c = 0.0;
  for (const auto& g : genotypes(202, kClosedFormSections)) {
    const auto r = compute_workspace(g, mat);
    for (std::size_t k = 0; k < PressureLattice::kSize; ++k) {
      const Eigen::Vector3d ref = uniform_strain_prediction(r.section, PressureLattice::triple(k));
      err_c = std::max(err_c, (r.workspace.points[k] - ref).norm() / ref.norm());
    }
  }
  return {err_a < kStraightTipTol && err_b < kAxialRelTol && err_c < kClosedFormRelTol,
          fmt("(a) %.3g mm, ", err_a) + fmt("(b) rel %.3g, ", err_b) +
              fmt("(c) max rel %.3g over %.0f sections x 27", err_c, kClosedFormSections)};
}

Outcome constant_strain() {
  const MaterialParams mat;
  double worst = 0.0;
  int solves = 0;
  for (const auto& g : genotypes(303, kStrainGenotypes)) {
    const auto section = genotype_section(g);
    for (const auto& p : PressureLattice::triples()) {
      const RodModel model(section, mat, p);
      const auto sol = solve_rod(model);
      const Strains s0 = model.strains(sol.states.front());
      for (const auto& st : sol.states) {
        const Strains s = model.strains(st);
        worst = std::max({worst, (s.v - s0.v).norm(), (s.u - s0.u).norm()});
      }
      ++solves;
    }
  }
  return {worst < kStrainVariationTol, fmt("max variation %.3g over %.0f solves", worst, solves)};
}

Outcome delaunay_oracle() {
  Rng rng(404);
  int mismatches = 0;
  for (int t = 0; t < kDelaunaySets; ++t) {
    const int n = 3 + static_cast<int>(rng.below(kDelaunayMaxPoints - 2));
    std::vector<geom::Point> pts;
    for (int k = 0; k < n; ++k) pts.emplace_back(rng.uniform(-25, 25), rng.uniform(-25, 25));
    std::set<std::pair<int, int>> edges;
    try {
      for (const auto& e : delaunay(pts).edges) edges.insert({e[0], e[1]});
    } catch (const DegenerateTriangulationError&) {
    }
    if (edges != oracle::brute_force_delaunay(pts)) ++mismatches;
  }
  return {mismatches == 0, fmt("%.0f of %.0f sets differ", mismatches, kDelaunaySets)};
}

Outcome equivariance() {
  const MaterialParams mat;
  double rot = 0.0, swap = 0.0;
  for (const auto& g : genotypes(505, kEquivarianceGenotypes)) {
    const auto a = compute_workspace(g, mat).workspace;
    const auto b = compute_workspace(rotate_columns(g, 90), mat).workspace;
    const auto c = compute_workspace(swap_chambers(g, ElementType::Chamber1, ElementType::Chamber2), mat).workspace;
    for (std::size_t k = 0; k < PressureLattice::kSize; ++k) {
      const Eigen::Vector3d turned(-a.points[k].y(), a.points[k].x(), a.points[k].z());
      rot = std::max(rot, (b.points[k] - turned).norm());
      swap = std::max(swap, (c.points[k] - a.points[PressureLattice::swapped_index(k, 0, 1)]).norm());
    }
  }
  return {rot < kRotationTol && swap < kRelabelTol, fmt("rotation %.3g mm, relabel %.3g mm", rot, swap)};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("spatopt_accept_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int cli(const std::vector<std::string>& args) {
  std::vector<std::string> full = {"spatopt"};
  full.insert(full.end(), args.begin(), args.end());
  std::ostringstream out, err;
  return cli::run(full, out, err);
}

Workspace self_target(const fs::path& dir, const std::string& seed) {
  const auto g = (dir / "target_genotype.json").string(), t = (dir / "target.json").string();
  if (cli({"generate", "--seed", seed, "-o", g}) != 0 || cli({"simulate", g, "-o", t, "--provenance", "target"}) != 0)
    throw std::runtime_error("could not build the self-target");
  return io::workspace_from_json(io::read_json(t));
}

Outcome ga_bookkeeping() {
  TempDir dir("ga");
  const Workspace target = self_target(dir.path, "66");
  const std::string t = (dir.path / "target.json").string();

  // Byte identity across thread counts; every file but the manifest (timing, command line).
  const std::string n = std::to_string(kShortPopulation), gens = std::to_string(kShortGenerations);
  const std::vector<std::string> common = {"optimize", "--target", t, "--seed", "6", "--n-p", n, "--n-g", gens};
  auto with = [&](const std::string& out, const std::string& threads) {
    auto a = common;
    a.insert(a.end(), {"-o", out, "--threads", threads});
    return cli(a);
  };
  const fs::path a = dir.path / "t1", b = dir.path / "t4";
  if (with(a.string(), "1") != 0 || with(b.string(), "4") != 0) return {false, "optimize failed"};
  omp_set_num_threads(1);
  int differing = 0, files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file() || e.path().filename() == "manifest.json") continue;
    ++files;
    const fs::path other = b / fs::relative(e.path(), a);
    if (!fs::exists(other) || io::read_file(e.path()) != io::read_file(other)) ++differing;
  }

  // Population size and post-selection best from the recorded generations.
  bool sizes_ok = true, monotone = true;
  double prev = INFINITY;
  for (int gen = 0; gen <= kShortGenerations; ++gen) {
    char name[32];
    std::snprintf(name, sizeof name, "gen_%04d.json", gen);
    const auto rec = io::read_json(a / name);
    sizes_ok = sizes_ok && rec["selected"].size() == static_cast<std::size_t>(kShortPopulation) &&
               rec["population"].size() == static_cast<std::size_t>(kShortPopulation);
    double best = INFINITY;
    for (const auto& s : rec["selected"]) best = std::min(best, s["T"].get<double>());
    monotone = monotone && best <= prev;
    prev = best;
  }

  // Fixed crossover never changes the point count: every evaluated genotype has 100 points.
  std::atomic<int> wrong_size{0};
  GAConfig cfg;
  cfg.population_size = kShortPopulation;
  cfg.generations = kShortGenerations;
  cfg.recombination = Recombination::Fixed;
  cfg.seed = 7;
  const LossFunction base = workspace_loss(target, MaterialParams{}, SolverConfig{});
  const LossFunction checked = [&](const Genotype& g) {
    if (g.size() != 100) ++wrong_size;
    return base(g);
  };
  const auto res = run_ga(checked, cfg);
  const bool counts_ok = wrong_size == 0 && res.best.genotype.size() == 100;

  return {differing == 0 && files > 0 && sizes_ok && monotone && counts_ok,
          std::to_string(files) + " files compared, " + std::to_string(differing) + " differ; sizes " +
              (sizes_ok ? "ok" : "BAD") + "; best-T " + (monotone ? "non-increasing" : "INCREASED") + "; " +
              std::to_string(res.evaluations) + " fixed-crossover evaluations, " + std::to_string(wrong_size.load()) +
              " with N_f != 100"};
}

Outcome self_target_recovery() {
  TempDir dir("recovery");
  const Workspace target = self_target(dir.path, "2026");
  GAConfig base;
  base.population_size = kShortPopulation;
  base.generations = kFullGenerations;
  base.seed = 1;
  // One shared initial population, as in the four-combination protocol.
  const auto initial = initial_population(base);
  struct Combo {
    const char* name;
    Recombination r;
    Mutation m;
  };
  const Combo combos[] = {{"FD", Recombination::Fixed, Mutation::Direct},
                          {"FW", Recombination::Fixed, Mutation::Weighted},
                          {"RD", Recombination::Range, Mutation::Direct},
                          {"RW", Recombination::Range, Mutation::Weighted}};
  double best = INFINITY;
  bool all_ok = true;
  std::string detail;
  for (const auto& c : combos) {
    GAConfig cfg = base;
    cfg.recombination = c.r;
    cfg.mutation = c.m;
    const auto res = run_ga(target, cfg, MaterialParams{}, SolverConfig{}, &initial);
    const double l = res.best.score.loss;
    const double l0 = std::min_element(res.records.front().selected.begin(), res.records.front().selected.end(),
                                       [](const Score& a, const Score& b) { return a.loss < b.loss; })
                          ->loss;
    all_ok = all_ok && l <= kRunLossBound;
    best = std::min(best, l);
    detail += std::string(c.name) + fmt(" L=%.2f (init %.0f) ", l, l0);
  }
  return {all_ok && best <= kBestLossBound, detail + fmt("best %.2f mm^2", best)};
}

Outcome loss_identity() {
  TempDir dir("identity");
  const Workspace target = self_target(dir.path, "88");
  const Genotype g = io::genotype_from_json(io::read_json(dir.path / "target_genotype.json"));
  const auto r = compute_workspace(g, MaterialParams{});
  const double l = loss_L(r.workspace, target, &r.diagnostics);
  return {l < kLossIdentityTol, fmt("L = %.3g mm^2", l)};
}

Outcome step_convergence() {
  SolverConfig fine;
  fine.steps = 200;
  double worst = 0.0;
  for (const auto& g : genotypes(909, kStepGenotypes)) {
    const auto a = compute_workspace(g, MaterialParams{}).workspace;
    const auto b = compute_workspace(g, MaterialParams{}, fine).workspace;
    for (std::size_t k = 0; k < PressureLattice::kSize; ++k) worst = std::max(worst, (a.points[k] - b.points[k]).norm());
  }
  return {worst < kStepChangeTol, fmt("max tip change %.3g mm", worst)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"annulus section oracle", annulus_section},
      {"rod analytic oracles", rod_oracles},
      {"constant-strain invariance", constant_strain},
      {"Delaunay brute-force oracle", delaunay_oracle},
      {"rotation and relabel equivariance", equivariance},
      {"GA bookkeeping", ga_bookkeeping},
      {"self-target recovery", self_target_recovery},
      {"loss identity through JSON", loss_identity},
      {"step convergence", step_convergence},
  };
  std::set<int> chosen;
  for (int k = 1; k < argc; ++k) chosen.insert(std::atoi(argv[k]));
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!chosen.empty() && !chosen.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first, o.detail.c_str(), sec);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
