#include "spatopt/error.hpp"
#include "spatopt/json_io.hpp"
#include "spatopt/svg.hpp"

#include <doctest.h>

#include <regex>

using namespace spatopt;

namespace {

Genotype sample(std::uint64_t seed) {
  Rng rng(seed, 61);
  return random_genotype(GridSpec{}, 100, {}, rng);
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("genotype JSON round trip and field order") {
  const Genotype g = sample(1);
  const std::string text = io::dump(io::to_json(g));
  CHECK(io::genotype_from_json(io::parse(text)) == g);
  CHECK(io::dump(io::to_json(io::genotype_from_json(io::parse(text)))) == text);
  const auto v = text.find("\"version\""), grid = text.find("\"grid\""), pts = text.find("\"points\"");
  CHECK(v < grid);
  CHECK(grid < pts);
  CHECK(text.find("\"r_s\"") < text.find("\"n_phi\""));
}

TEST_CASE("workspace JSON round trip is bit-exact") {
  Workspace w;
  Rng rng(3);
  for (auto& p : w.points) p = Eigen::Vector3d(rng.uniform(-90, 90), rng.uniform(-90, 90), rng.uniform(-10, 130));
  w.points[4] = Eigen::Vector3d(0.1, 1e-300, -5e-324);
  w.provenance = Provenance::Target;
  const Workspace r = io::workspace_from_json(io::parse(io::dump(io::to_json(w))));
  for (std::size_t k = 0; k < 27; ++k) CHECK(r.points[k] == w.points[k]);
  CHECK(r.provenance == Provenance::Target);
  CHECK(r.length == 100.0);
}

TEST_CASE("workspace reader enforces the lattice contract") {
  io::Json j = io::to_json(Workspace{});
  j["lattice_kpa"] = io::Json::array({0, 40, 100});
  CHECK_THROWS_AS(io::workspace_from_json(j), ParseError);
  j = io::to_json(Workspace{});
  j["order"] = "p1_fastest";
  CHECK_THROWS_AS(io::workspace_from_json(j), ParseError);
  j = io::to_json(Workspace{});
  j["points"].erase(0);
  CHECK_THROWS_AS(io::workspace_from_json(j), ParseError);
  j = io::to_json(Workspace{});
  j.erase("provenance");
  CHECK(io::workspace_from_json(j).provenance == Provenance::Target);
}

TEST_CASE("malformed genotype files") {
  CHECK_THROWS_AS(io::parse("{\"version\": 1,"), ParseError);
  io::Json j = io::to_json(sample(2));
  j["points"][0]["type"] = "chamber7";
  CHECK_THROWS_AS(io::genotype_from_json(j), ParseError);
  j = io::to_json(sample(2));
  j["points"][0]["n_r"] = 500;
  CHECK_THROWS_AS(io::genotype_from_json(j), ParseError);
  j = io::to_json(sample(2));
  j["version"] = 2;
  CHECK_THROWS_AS(io::genotype_from_json(j), ParseError);
  j = io::to_json(sample(2));
  j["grid"].erase("n_r");
  CHECK_THROWS_AS(io::genotype_from_json(j), ParseError);
}

TEST_CASE("config JSON round trip and overrides") {
  GAConfig cfg;
  cfg.recombination = Recombination::Range;
  cfg.mutation = Mutation::Weighted;
  cfg.seed = 0xFFFFFFFFFFFFFFFFULL;
  cfg.lambda = 12.5;
  const GAConfig back = io::config_from_json(io::parse(io::dump(io::to_json(cfg))));
  CHECK(io::to_json(back) == io::to_json(cfg));
  const GAConfig partial = io::config_from_json(io::parse(R"({"n_g": 7, "p_material": 0.7})"));
  CHECK(partial.generations == 7);
  CHECK(partial.population_size == 20);
  CHECK(partial.probabilities.chamber == doctest::Approx(0.1));
  CHECK_THROWS_AS(io::config_from_json(io::parse(R"({"n_gen": 7})")), ParseError);
  CHECK_THROWS_AS(io::config_from_json(io::parse(R"({"mutation": "random"})")), ParseError);
  CHECK_THROWS_AS(io::config_from_json(io::parse(R"({"seed": -1})")), ParseError);
}

TEST_CASE("CSV layouts") {
  const std::string ws = io::workspace_csv(Workspace{});
  CHECK(ws.rfind("P1,P2,P3,x,y,z\n", 0) == 0);
  CHECK(count(ws, "\n") == 28);
  CHECK(ws.find("\n0,0,50,") != std::string::npos);
  std::vector<RodState> states(3);
  const std::string bb = io::backbone_csv(states);
  CHECK(bb.rfind("s,x,y,z,qw,qx,qy,qz,nx,ny,nz,mx,my,mz\n", 0) == 0);
  CHECK(count(bb, "\n") == 4);
  GenerationRecord rec;
  rec.generation = 3;
  rec.selected = {{5.0, 2.0, 3.0}, {7.0, 7.0, 0.0}, {9.0, 1.0, 8.0}};
  CHECK(io::loss_curve_row(rec) == "3,5,7,9,1,3\n");
}

TEST_CASE("generation record JSON") {
  GenerationRecord rec;
  rec.generation = 2;
  rec.selected = {{1.0, 0.5, 0.5}};
  rec.population = {{1.0, 0.5, 0.5}};
  rec.best.genotype = sample(4);
  rec.rng_digest = 0xabcULL;
  const io::Json j = io::to_json(rec);
  CHECK(j["generation"] == 2);
  CHECK(j["rng_digest"] == "0000000000000abc");
  CHECK(io::genotype_from_json(j["best"]["genotype"]) == rec.best.genotype);
}

TEST_CASE("raster SVG") {
  const CrossSectionRaster all(GridSpec{}, ElementType::Material);
  const std::string s = svg::render_raster(all);
  CHECK(count(s, "<path") == 128);  // one merged run per ring
  CHECK(count(s, std::string(svg::color(ElementType::Material))) == 128);
  for (ElementType t : {ElementType::Chamber1, ElementType::Chamber2, ElementType::Chamber3})
    CHECK(s.find(std::string(svg::color(t))) == std::string::npos);
  const std::string mixed = svg::render_raster(enforce_walls(rasterize(sample(5))));
  for (ElementType t : kElementTypes) CHECK(mixed.find(std::string(svg::color(t))) != std::string::npos);
}

TEST_CASE("workspace SVG markers") {
  Workspace w;
  for (std::size_t k = 0; k < 27; ++k) w.points[k] = Eigen::Vector3d(k, -double(k), 100 - double(k));
  const std::string s = svg::render_workspace(w);
  CHECK(count(s, "class=\"computed\"") == 54);
  CHECK(count(s, "<circle") == 54);
  Workspace t = w;
  t.provenance = Provenance::Target;
  const std::string o = svg::render_workspace(w, &t);
  CHECK(count(o, "<circle") == 108);
  CHECK(count(o, "class=\"target\"") == 54);
  CHECK(count(o, std::string(svg::kTargetColor)) == 54);
}
