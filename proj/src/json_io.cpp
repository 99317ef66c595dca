#include "spatopt/json_io.hpp"

#include "spatopt/error.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace spatopt::io {

namespace {

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string hex64(std::uint64_t x) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw ParseError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

int integer(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw ParseError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

void check_version(const Json& j) {
  if (integer(j, "version") != 1) throw ParseError("unsupported version");
}

}  // namespace

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Json read_json(const std::filesystem::path& path) { return parse(read_file(path)); }
void write_json(const std::filesystem::path& path, const Json& j) { write_file(path, dump(j)); }

Json to_json(const GridSpec& grid) {
  Json j;
  j["r_s"] = grid.r_s;
  j["r_e"] = grid.r_e;
  j["phi_s"] = grid.phi_s;
  j["phi_e"] = grid.phi_e;
  j["n_r"] = grid.n_r;
  j["n_phi"] = grid.n_phi;
  return j;
}

GridSpec grid_from_json(const Json& j) {
  GridSpec g;
  g.r_s = number(j, "r_s");
  g.r_e = number(j, "r_e");
  g.phi_s = number(j, "phi_s");
  g.phi_e = number(j, "phi_e");
  g.n_r = integer(j, "n_r");
  g.n_phi = integer(j, "n_phi");
  try {
    g.validate();
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
  return g;
}

Json to_json(const Genotype& g) {
  Json j;
  j["version"] = 1;
  j["grid"] = to_json(g.grid);
  Json pts = Json::array();
  for (const auto& f : g.points) {
    Json p;
    p["n_r"] = f.n_r;
    p["n_phi"] = f.n_phi;
    p["type"] = std::string(to_string(f.type));
    pts.push_back(std::move(p));
  }
  j["points"] = std::move(pts);
  return j;
}

Genotype genotype_from_json(const Json& j) {
  check_version(j);
  Genotype g;
  g.grid = grid_from_json(field(j, "grid"));
  const Json& pts = field(j, "points");
  if (!pts.is_array()) throw ParseError("'points' must be an array");
  for (const auto& p : pts) {
    FeaturePoint f;
    f.n_r = integer(p, "n_r");
    f.n_phi = integer(p, "n_phi");
    const Json& t = field(p, "type");
    if (!t.is_string()) throw ParseError("feature type must be a string");
    try {
      f.type = element_type_from_string(t.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
    g.points.push_back(f);
  }
  try {
    g.validate();
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
  return g;
}

Json to_json(const Workspace& w) {
  Json j;
  j["version"] = 1;
  j["H_mm"] = w.length;
  Json levels = Json::array();
  for (double l : PressureLattice::kLevels) levels.push_back(static_cast<int>(l));
  j["lattice_kpa"] = std::move(levels);
  j["order"] = "p3_fastest";
  j["provenance"] = w.provenance == Provenance::Target ? "target" : "computed";
  Json pts = Json::array();
  for (const auto& p : w.points) pts.push_back(Json::array({p.x(), p.y(), p.z()}));
  j["points"] = std::move(pts);
  return j;
}

Workspace workspace_from_json(const Json& j) {
  check_version(j);
  Workspace w;
  w.length = number(j, "H_mm");
  const Json& levels = field(j, "lattice_kpa");
  bool lattice_ok = levels.is_array() && levels.size() == PressureLattice::kLevels.size();
  for (std::size_t k = 0; lattice_ok && k < levels.size(); ++k)
    lattice_ok = levels[k].is_number() && levels[k].get<double>() == PressureLattice::kLevels[k];
  if (!lattice_ok) throw ParseError("workspace lattice must be [0, 50, 100] kPa");
  const Json& order = field(j, "order");
  if (!order.is_string() || order.get<std::string>() != "p3_fastest")
    throw ParseError("workspace order must be 'p3_fastest'");
  w.provenance = Provenance::Target;
  if (auto it = j.find("provenance"); it != j.end()) {
    if (!it->is_string()) throw ParseError("'provenance' must be a string");
    const auto s = it->get<std::string>();
    if (s == "computed")
      w.provenance = Provenance::Computed;
    else if (s != "target")
      throw ParseError("unknown provenance '" + s + "'");
  }
  const Json& pts = field(j, "points");
  if (!pts.is_array() || pts.size() != PressureLattice::kSize)
    throw ParseError("workspace must hold exactly 27 points");
  for (std::size_t k = 0; k < PressureLattice::kSize; ++k) {
    const Json& p = pts[k];
    if (!p.is_array() || p.size() != 3) throw ParseError("workspace point must be [x, y, z]");
    for (int c = 0; c < 3; ++c) {
      if (!p[c].is_number()) throw ParseError("workspace coordinates must be numbers");
      w.points[k][c] = p[c].get<double>();
    }
  }
  return w;
}

std::string workspace_csv(const Workspace& w) {
  std::string out = "P1,P2,P3,x,y,z\n";
  for (std::size_t k = 0; k < PressureLattice::kSize; ++k) {
    const auto t = PressureLattice::triple(k);
    out += fmt(t.p[0]) + "," + fmt(t.p[1]) + "," + fmt(t.p[2]) + "," + fmt(w.points[k].x()) + "," +
           fmt(w.points[k].y()) + "," + fmt(w.points[k].z()) + "\n";
  }
  return out;
}

Json to_json(const GAConfig& cfg) {
  Json j;
  j["n_p"] = cfg.population_size;
  j["n_g"] = cfg.generations;
  j["crossover_prob"] = cfg.crossover_prob;
  j["mutation_ratio"] = cfg.mutation_ratio;
  j["edge_ratio"] = cfg.edge_ratio;
  j["swap_ratio"] = cfg.swap_ratio;
  j["lambda"] = cfg.lambda;
  j["recombination"] = std::string(to_string(cfg.recombination));
  j["mutation"] = std::string(to_string(cfg.mutation));
  j["seed"] = cfg.seed;
  j["n_f"] = cfg.n_features;
  j["p_material"] = cfg.probabilities.material;
  j["p_chamber"] = cfg.probabilities.chamber;
  j["grid"] = to_json(cfg.grid);
  return j;
}

GAConfig config_from_json(const Json& j, GAConfig cfg) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  static const std::vector<std::string> known = {"n_p", "n_g", "crossover_prob", "mutation_ratio", "edge_ratio",
                                                 "swap_ratio", "lambda", "recombination", "mutation", "seed",
                                                 "n_f", "p_material", "p_chamber", "grid"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ParseError("unknown config key '" + key + "'");
  auto has = [&](const char* k) { return j.contains(k); };
  try {
    if (has("n_p")) cfg.population_size = integer(j, "n_p");
    if (has("n_g")) cfg.generations = integer(j, "n_g");
    if (has("crossover_prob")) cfg.crossover_prob = number(j, "crossover_prob");
    if (has("mutation_ratio")) cfg.mutation_ratio = number(j, "mutation_ratio");
    if (has("edge_ratio")) cfg.edge_ratio = number(j, "edge_ratio");
    if (has("swap_ratio")) cfg.swap_ratio = number(j, "swap_ratio");
    if (has("lambda")) cfg.lambda = number(j, "lambda");
    if (has("recombination")) cfg.recombination = recombination_from_string(field(j, "recombination").get<std::string>());
    if (has("mutation")) cfg.mutation = mutation_from_string(field(j, "mutation").get<std::string>());
    if (has("seed")) {
      const Json& s = field(j, "seed");
      if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<std::int64_t>() < 0))
        throw ParseError("seed must be a non-negative integer");
      cfg.seed = s.get<std::uint64_t>();
    }
    if (has("n_f")) {
      const int n = integer(j, "n_f");
      if (n < 1) throw ParseError("n_f must be positive");
      cfg.n_features = static_cast<std::size_t>(n);
    }
    if (has("p_material")) {
      cfg.probabilities.material = number(j, "p_material");
      cfg.probabilities.chamber = (1.0 - cfg.probabilities.material) / 3.0;
    }
    if (has("p_chamber")) cfg.probabilities.chamber = number(j, "p_chamber");
    if (has("grid")) cfg.grid = grid_from_json(field(j, "grid"));
  } catch (const Json::exception& e) {
    throw ParseError(std::string("invalid config value: ") + e.what());
  } catch (const ConfigurationError& e) {
    throw ParseError(e.what());
  }
  return cfg;
}

Json to_json(const Score& s) {
  Json j;
  j["T"] = s.total;
  j["L"] = s.loss;
  j["K"] = s.penalty;
  return j;
}

Json to_json(const GenerationRecord& rec) {
  Json j;
  j["generation"] = rec.generation;
  Json sel = Json::array(), pop = Json::array();
  for (const auto& s : rec.selected) sel.push_back(to_json(s));
  for (const auto& s : rec.population) pop.push_back(to_json(s));
  j["selected"] = std::move(sel);
  j["population"] = std::move(pop);
  Json best;
  best["score"] = to_json(rec.best.score);
  best["failed"] = rec.best.failed;
  best["birth"] = rec.best.birth;
  best["genotype"] = to_json(rec.best.genotype);
  j["best"] = std::move(best);
  j["rng_digest"] = hex64(rec.rng_digest);
  return j;
}

std::string backbone_csv(const std::vector<RodState>& states) {
  std::string out = "s,x,y,z,qw,qx,qy,qz,nx,ny,nz,mx,my,mz\n";
  for (const auto& st : states) {
    const double row[] = {st.s,     st.h.x(),   st.h.y(),   st.h.z(),   st.q.w(),   st.q.x(),   st.q.y(),
                          st.q.z(), st.n.x(),   st.n.y(),   st.n.z(),   st.m.x(),   st.m.y(),   st.m.z()};
    for (std::size_t c = 0; c < std::size(row); ++c) {
      if (c) out += ',';
      out += fmt(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string loss_curve_header() { return "generation,min_T,mean_T,max_T,min_L,best_K\n"; }

std::string loss_curve_row(const GenerationRecord& rec) {
  const auto& s = rec.selected;
  double min_t = std::numeric_limits<double>::infinity(), max_t = -min_t, sum_t = 0.0;
  double min_l = std::numeric_limits<double>::infinity(), best_k = 0.0;
  for (const auto& x : s) {
    if (x.total < min_t) {
      min_t = x.total;
      best_k = x.penalty;
    }
    max_t = std::max(max_t, x.total);
    min_l = std::min(min_l, x.loss);
    sum_t += x.total;
  }
  const double mean_t = s.empty() ? 0.0 : sum_t / static_cast<double>(s.size());
  return std::to_string(rec.generation) + "," + fmt(min_t) + "," + fmt(mean_t) + "," + fmt(max_t) + "," +
         fmt(min_l) + "," + fmt(best_k) + "\n";
}

bool is_genotype_json(const Json& j) { return j.is_object() && j.contains("grid") && j.contains("points"); }

}  // namespace spatopt::io
