#include "commands.hpp"

#include "spatopt/error.hpp"
#include "spatopt/evolve.hpp"
#include "spatopt/json_io.hpp"
#include "spatopt/raster.hpp"
#include "spatopt/rng.hpp"
#include "spatopt/svg.hpp"
#include "spatopt/triangulation.hpp"
#include "spatopt/workspace.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>

namespace spatopt::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

// Same stream as the first member of an initial population with this seed.
constexpr std::uint64_t kGenerateStream = 0x10000;

struct Common {
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
};

struct GenerateArgs {
  int n_f = 100;
  std::optional<double> p_material;
  std::optional<double> p_chamber;
  int n_r = 128;
  int n_phi = 360;
};

struct SimulateArgs {
  std::string genotype;
  std::string svg;
  std::string backbones;
  std::string csv;
  std::string provenance = "computed";
  int n_s = 100;
};

struct EvaluateArgs {
  std::string genotype;
  std::string target;
  std::string edges_csv;
  double lambda = 1000.0;
  int n_s = 100;
};

struct OptimizeArgs {
  std::string target;
  std::string config;
  std::string initial_population;
  std::optional<int> n_p, n_g;
  std::optional<std::string> recombination, mutation;
  std::optional<double> lambda;
  int n_s = 100;
};

struct RenderArgs {
  std::string input;
  std::string target;
};

std::string hex64(std::uint64_t x) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::uint64_t digest(const std::string& bytes) { return fnv1a64(bytes.data(), bytes.size()); }

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

void apply_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

SolverConfig solver_with_steps(int n_s) {
  if (n_s < 1) throw ConfigurationError("--n-s must be positive");
  SolverConfig cfg;
  cfg.steps = n_s;
  return cfg;
}

Genotype load_genotype(const std::string& path) { return io::genotype_from_json(io::read_json(path)); }
Workspace load_workspace(const std::string& path) { return io::workspace_from_json(io::read_json(path)); }

bool all_converged(const WorkspaceDiagnostics& d) { return d.failed() == 0; }

int cmd_generate(const Common& c, const GenerateArgs& a, std::ostream& out) {
  GridSpec grid;
  grid.n_r = a.n_r;
  grid.n_phi = a.n_phi;
  TypeProbabilities probs;
  if (a.p_material) {
    probs.material = *a.p_material;
    probs.chamber = (1.0 - probs.material) / 3.0;
  }
  if (a.p_chamber) probs.chamber = *a.p_chamber;
  if (a.n_f < 1) throw ConfigurationError("--n-f must be positive");
  Rng rng(c.seed, kGenerateStream);
  const Genotype g = random_genotype(grid, static_cast<std::size_t>(a.n_f), probs, rng);
  io::write_json(c.out, io::to_json(g));
  const auto counts = g.type_counts();
  out << "points " << g.size() << ": material " << counts[0] << ", chamber1 " << counts[1] << ", chamber2 "
      << counts[2] << ", chamber3 " << counts[3] << "\n";
  return kOk;
}

// Backbone states mapped from the principal frame into the grid frame.
std::vector<RodState> backbone_in_grid_frame(const SectionProperties& section, std::vector<RodState> states) {
  const Eigen::Quaterniond rz(Eigen::AngleAxisd(section.theta_p, Eigen::Vector3d::UnitZ()));
  const Eigen::Matrix3d r = rz.toRotationMatrix();
  for (auto& s : states) {
    s.h = r * s.h;
    s.n = r * s.n;
    s.m = r * s.m;
    s.q = rz * s.q;
  }
  return states;
}

int cmd_simulate(const Common& c, const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  const Genotype g = load_genotype(a.genotype);
  if (a.provenance != "computed" && a.provenance != "target")
    throw ConfigurationError("--provenance must be 'computed' or 'target'");
  const SolverConfig solver = solver_with_steps(a.n_s);
  const MaterialParams mat;
  const Grid grid(g.grid);
  const CrossSectionRaster raster = enforce_walls(rasterize(g, grid));
  WorkspaceResult r = compute_workspace(section_properties(raster, grid), mat, solver);
  if (!all_converged(r.diagnostics)) {
    err << "error: " << r.diagnostics.failed() << " of 27 pressure triples did not converge\n";
    return kRuntimeFailure;
  }
  r.workspace.provenance = a.provenance == "target" ? Provenance::Target : Provenance::Computed;
  if (!c.out.empty()) io::write_json(c.out, io::to_json(r.workspace));
  if (!a.csv.empty()) io::write_file(a.csv, io::workspace_csv(r.workspace));
  if (!a.svg.empty()) io::write_file(a.svg, svg::render_raster(raster));
  if (!a.backbones.empty()) {
    fs::create_directories(a.backbones);
    for (std::size_t k = 0; k < PressureLattice::kSize; ++k) {
      const RodSolution sol = solve_rod(r.section, mat, PressureLattice::triple(k), solver);
      char name[32];
      std::snprintf(name, sizeof name, "backbone_%02zu.csv", k);
      io::write_file(fs::path(a.backbones) / name, io::backbone_csv(backbone_in_grid_frame(r.section, sol.states)));
    }
  }
  if (c.out.empty()) out << io::dump(io::to_json(r.workspace));
  return kOk;
}

int cmd_evaluate(const Common&, const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const Genotype g = load_genotype(a.genotype);
  const Workspace target = load_workspace(a.target);
  if (!(a.lambda >= 0.0)) throw ConfigurationError("--lambda must be non-negative");
  const WorkspaceResult r = compute_workspace(g, MaterialParams{}, solver_with_steps(a.n_s));
  const double l = loss_L(r.workspace, target, &r.diagnostics);
  const double k = penalty_K(g, a.lambda);
  if (!a.edges_csv.empty()) {
    const auto tri = delaunay(feature_positions(g));
    std::string csv = "a,b,same_type\n";
    for (const auto& e : classify_edges(tri, feature_types(g)))
      csv += std::to_string(e.a) + "," + std::to_string(e.b) + "," + (e.same_type ? "1" : "0") + "\n";
    io::write_file(a.edges_csv, csv);
  }
  if (r.diagnostics.failed() > 0)
    err << "warning: " << r.diagnostics.failed() << " pressure triples did not converge (penalized)\n";
  out << "L = " << fmt(l) << " mm^2\n";
  out << "K = " << fmt(k) << "\n";
  out << "T = " << fmt(l + k) << "\n";
  return kOk;
}

std::vector<Genotype> load_population(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<Genotype> pop;
  for (const auto& f : files) pop.push_back(load_genotype(f.string()));
  if (pop.empty()) throw ParseError("no genotype files in '" + dir.string() + "'");
  return pop;
}

Json best_json(const Individual& best, const MaterialParams& mat, const SolverConfig& solver) {
  Json j;
  j["version"] = 1;
  j["score"] = io::to_json(best.score);
  j["failed"] = best.failed;
  j["birth"] = best.birth;
  j["genotype"] = io::to_json(best.genotype);
  try {
    const WorkspaceResult r = compute_workspace(best.genotype, mat, solver);
    j["workspace"] = all_converged(r.diagnostics) ? io::to_json(r.workspace) : Json(nullptr);
  } catch (const DegenerateSectionError&) {
    j["workspace"] = nullptr;
  }
  return j;
}

int cmd_optimize(const Common& c, const OptimizeArgs& a, const std::vector<std::string>& argv, bool seed_given,
                 std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  const std::string target_bytes = io::read_file(a.target);
  const Workspace target = io::workspace_from_json(io::parse(target_bytes));

  GAConfig cfg;
  std::string config_bytes;
  if (!a.config.empty()) {
    config_bytes = io::read_file(a.config);
    cfg = io::config_from_json(io::parse(config_bytes), cfg);
  }
  if (seed_given) cfg.seed = c.seed;
  if (a.n_p) cfg.population_size = *a.n_p;
  if (a.n_g) cfg.generations = *a.n_g;
  if (a.recombination) cfg.recombination = recombination_from_string(*a.recombination);
  if (a.mutation) cfg.mutation = mutation_from_string(*a.mutation);
  if (a.lambda) cfg.lambda = *a.lambda;
  cfg.validate();
  const SolverConfig solver = solver_with_steps(a.n_s);
  const MaterialParams mat;

  std::optional<std::vector<Genotype>> initial;
  if (!a.initial_population.empty()) initial = load_population(a.initial_population);

  const fs::path dir(c.out);
  fs::create_directories(dir);

  Json manifest;
  manifest["tool"] = "spatopt";
  manifest["version"] = kVersion;
  Json cmd = Json::array();
  for (const auto& s : argv) cmd.push_back(s);
  manifest["command_line"] = std::move(cmd);
  manifest["config"] = io::to_json(cfg);
  manifest["n_s"] = solver.steps;
  manifest["seed"] = cfg.seed;
  Json inputs;
  inputs["target"] = hex64(digest(target_bytes));
  if (!a.config.empty()) inputs["config"] = hex64(digest(config_bytes));
  manifest["input_digests"] = std::move(inputs);
  manifest["complete"] = false;
  io::write_json(dir / "manifest.json", manifest);

  io::write_json(dir / "config.json", io::to_json(cfg));
  Workspace target_copy = target;
  target_copy.provenance = Provenance::Target;
  io::write_json(dir / "target.json", io::to_json(target_copy));

  std::string curve = io::loss_curve_header();
  auto on_generation = [&](const GenerationRecord& rec) {
    char name[32];
    std::snprintf(name, sizeof name, "gen_%04d.json", rec.generation);
    io::write_json(dir / name, io::to_json(rec));
    curve += io::loss_curve_row(rec);
    io::write_file(dir / "loss_curve.csv", curve);
  };
  const GAResult result = run_ga(target, cfg, mat, solver, initial ? &*initial : nullptr, on_generation);

  fs::create_directories(dir / "initial_population");
  for (std::size_t k = 0; k < result.initial_population.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "ind_%02zu.json", k);
    io::write_json(dir / "initial_population" / name, io::to_json(result.initial_population[k]));
  }
  io::write_json(dir / "best.json", best_json(result.best, mat, solver));

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  manifest["evaluations"] = result.evaluations;
  manifest["timing_s"] = seconds;
  manifest["complete"] = true;
  io::write_json(dir / "manifest.json", manifest);

  out << "best T = " << fmt(result.best.score.total) << " (L = " << fmt(result.best.score.loss)
      << " mm^2, K = " << fmt(result.best.score.penalty) << ") after " << cfg.generations << " generations\n";
  return kOk;
}

int cmd_render(const Common& c, const RenderArgs& a, std::ostream& out) {
  Json j = io::read_json(a.input);
  // A best-individual record renders as its cross-section, or as its workspace when a target is given.
  if (j.is_object() && j.contains("genotype")) {
    if (!a.target.empty() && j.contains("workspace") && !j["workspace"].is_null())
      j = Json(j["workspace"]);
    else
      j = Json(j["genotype"]);
  }
  std::string svg_text;
  if (io::is_genotype_json(j)) {
    const Genotype g = io::genotype_from_json(j);
    svg_text = svg::render_raster(enforce_walls(rasterize(g)));
  } else {
    const Workspace w = io::workspace_from_json(j);
    std::optional<Workspace> target;
    if (!a.target.empty()) target = load_workspace(a.target);
    svg_text = svg::render_workspace(w, target ? &*target : nullptr);
  }
  if (c.out.empty())
    out << svg_text;
  else
    io::write_file(c.out, svg_text);
  return kOk;
}

void add_common(CLI::App* sub, Common& c, bool out_required) {
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--threads", c.threads, "worker threads (default: all cores)")->check(CLI::NonNegativeNumber);
  auto* o = sub->add_option("-o,--out", c.out, "output path");
  if (out_required) o->required();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-section topology optimization of soft pneumatic actuators", "spatopt"};
  app.set_version_flag("--version", std::string("spatopt ") + kVersion);
  app.require_subcommand(1);

  Common common;
  GenerateArgs ga;
  SimulateArgs sa;
  EvaluateArgs ea;
  OptimizeArgs oa;
  RenderArgs ra;

  auto* gen = app.add_subcommand("generate", "write a random genotype");
  add_common(gen, common, true);
  gen->add_option("--n-f", ga.n_f, "number of feature points");
  gen->add_option("--p-material", ga.p_material, "material probability");
  gen->add_option("--p-chamber", ga.p_chamber, "per-chamber probability");
  gen->add_option("--n-r", ga.n_r, "grid rings");
  gen->add_option("--n-phi", ga.n_phi, "grid columns");

  auto* sim = app.add_subcommand("simulate", "compute the 27-point workspace of a genotype");
  add_common(sim, common, false);
  sim->add_option("genotype", sa.genotype, "genotype JSON")->required();
  sim->add_option("--svg", sa.svg, "write the cross-section as SVG");
  sim->add_option("--backbones", sa.backbones, "directory for 27 backbone CSVs");
  sim->add_option("--csv", sa.csv, "write the workspace as CSV");
  sim->add_option("--provenance", sa.provenance, "computed or target");
  sim->add_option("--n-s", sa.n_s, "integration steps");

  auto* ev = app.add_subcommand("evaluate", "print L, K and T of a genotype against a target");
  add_common(ev, common, false);
  ev->add_option("genotype", ea.genotype, "genotype JSON")->required();
  ev->add_option("target", ea.target, "target workspace JSON")->required();
  ev->add_option("--edges-csv", ea.edges_csv, "dump Delaunay edges as a,b,same_type");
  ev->add_option("--lambda", ea.lambda, "cluster penalty weight");
  ev->add_option("--n-s", ea.n_s, "integration steps");

  auto* opt = app.add_subcommand("optimize", "run the genetic algorithm into a run directory");
  add_common(opt, common, true);
  opt->add_option("--target", oa.target, "target workspace JSON")->required();
  opt->add_option("--config", oa.config, "GA config JSON");
  opt->add_option("--initial-population", oa.initial_population, "directory of genotype JSON files");
  opt->add_option("--n-p", oa.n_p, "population size");
  opt->add_option("--n-g", oa.n_g, "generations");
  opt->add_option("--recombination", oa.recombination, "range or fixed");
  opt->add_option("--mutation", oa.mutation, "direct or weighted");
  opt->add_option("--lambda", oa.lambda, "cluster penalty weight");
  opt->add_option("--n-s", oa.n_s, "integration steps");

  auto* ren = app.add_subcommand("render", "render a genotype or workspace as SVG");
  add_common(ren, common, false);
  ren->add_option("input", ra.input, "genotype or workspace JSON")->required();
  ren->add_option("--target", ra.target, "target workspace overlay");

  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsageFailure;
  }

  try {
    apply_threads(common.threads);
    if (gen->parsed()) return cmd_generate(common, ga, out);
    if (sim->parsed()) return cmd_simulate(common, sa, out, err);
    if (ev->parsed()) return cmd_evaluate(common, ea, out, err);
    if (opt->parsed()) return cmd_optimize(common, oa, args, opt->count("--seed") > 0, out);
    if (ren->parsed()) return cmd_render(common, ra, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
  return kUsageFailure;
}

}  // namespace spatopt::cli
