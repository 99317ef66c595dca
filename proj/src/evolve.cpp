#include "spatopt/evolve.hpp"

#include "spatopt/error.hpp"
#include "spatopt/triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

namespace spatopt {

namespace {

constexpr std::uint64_t kGaStream = 1;
constexpr std::uint64_t kInitStreamBase = 0x10000;

int ceil_count(double ratio, std::size_t n) {
  return static_cast<int>(std::ceil(ratio * static_cast<double>(n) - 1e-9));
}

double wrap360(double x) {
  x = std::fmod(x, 360.0);
  return x < 0.0 ? x + 360.0 : x;
}

double angular_distance(double a, double b) {
  const double d = wrap360(a - b);
  return std::min(d, 360.0 - d);
}

// Evaluation cache keyed by content hash; collisions resolved by full comparison.
class EvaluationCache {
 public:
  const Individual* find(const Genotype& g, std::uint64_t hash) const {
    auto it = map_.find(hash);
    if (it == map_.end()) return nullptr;
    for (const auto& ind : it->second)
      if (ind.genotype == g) return &ind;
    return nullptr;
  }
  void insert(const Individual& ind) { map_[ind.eval_id].push_back(ind); }

 private:
  std::unordered_map<std::uint64_t, std::vector<Individual>> map_;
};

class Evaluator {
 public:
  Evaluator(const LossFunction& loss, double lambda) : loss_(loss), lambda_(lambda) {}

  // Fills scores of every individual in `batch`; distinct uncached genotypes
  // are evaluated in parallel.
  void evaluate(std::vector<Individual>& batch) {
    std::vector<std::size_t> todo;
    std::vector<std::uint64_t> hashes(batch.size());
    for (std::size_t k = 0; k < batch.size(); ++k) {
      hashes[k] = batch[k].genotype.content_hash();
      if (cache_.find(batch[k].genotype, hashes[k])) continue;
      bool queued = false;
      for (std::size_t t : todo)
        if (hashes[t] == hashes[k] && batch[t].genotype == batch[k].genotype) queued = true;
      if (!queued) todo.push_back(k);
    }

    std::vector<Individual> results(todo.size());
    const int n = static_cast<int>(todo.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (int t = 0; t < n; ++t) {
      const Individual& src = batch[todo[t]];
      Individual out;
      out.genotype = src.genotype;
      out.eval_id = hashes[todo[t]];
      LossEvaluation le;
      try {
        le = loss_(src.genotype);
      } catch (const DegenerateSectionError&) {
        le.loss = kNonConvergencePenalty * static_cast<double>(PressureLattice::kSize);
        le.failed = PressureLattice::kSize;
      }
      out.score.loss = le.loss;
      out.score.penalty = penalty_K(src.genotype, lambda_);
      out.score.total = out.score.loss + out.score.penalty;
      out.failed = le.failed;
      results[t] = std::move(out);
    }
    for (auto& r : results) cache_.insert(r);
    evaluations_ += results.size();

    for (std::size_t k = 0; k < batch.size(); ++k) {
      const Individual* hit = cache_.find(batch[k].genotype, hashes[k]);
      batch[k].eval_id = hashes[k];
      batch[k].score = hit->score;
      batch[k].failed = hit->failed;
    }
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  const LossFunction& loss_;
  double lambda_;
  EvaluationCache cache_;
  std::size_t evaluations_ = 0;
};

std::vector<Score> scores_of(const std::vector<Individual>& pop) {
  std::vector<Score> s;
  s.reserve(pop.size());
  for (const auto& ind : pop) s.push_back(ind.score);
  return s;
}

void update_best(Individual& best, bool& have_best, const std::vector<Individual>& candidates) {
  for (const auto& c : candidates) {
    if (!have_best || c.score.total < best.score.total) {
      best = c;
      have_best = true;
    }
  }
}

}  // namespace

std::string_view to_string(Recombination r) { return r == Recombination::Range ? "range" : "fixed"; }
std::string_view to_string(Mutation m) { return m == Mutation::Direct ? "direct" : "weighted"; }

Recombination recombination_from_string(std::string_view s) {
  if (s == "range") return Recombination::Range;
  if (s == "fixed") return Recombination::Fixed;
  throw ConfigurationError("unknown recombination '" + std::string(s) + "'");
}

Mutation mutation_from_string(std::string_view s) {
  if (s == "direct") return Mutation::Direct;
  if (s == "weighted") return Mutation::Weighted;
  throw ConfigurationError("unknown mutation '" + std::string(s) + "'");
}

int GAConfig::offspring_count() const {
  return static_cast<int>(std::nearbyint(crossover_prob * population_size));
}

int GAConfig::mutation_count() const { return ceil_count(mutation_ratio, static_cast<std::size_t>(population_size)); }

void GAConfig::validate() const {
  if (population_size < 2) throw ConfigurationError("population size must be at least 2");
  if (generations < 0) throw ConfigurationError("generation count must be non-negative");
  for (double r : {crossover_prob, mutation_ratio, edge_ratio, swap_ratio})
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigurationError("GA ratios must lie in [0, 1]");
  if (offspring_count() % 2 != 0) throw ConfigurationError("offspring count must be even");
  if (!(lambda >= 0.0)) throw ConfigurationError("lambda must be non-negative");
  if (n_features < 1) throw ConfigurationError("feature count must be positive");
  if (mutation_count() > population_size - 1)
    throw ConfigurationError("mutation count must leave the best individual untouched");
  grid.validate();
}

double penalty_K(const Genotype& genotype, double lambda) {
  const Grid grid(genotype.grid);
  try {
    const auto tri = delaunay(feature_positions(genotype, grid));
    const auto types = feature_types(genotype);
    return lambda * edge_type_ratio(classify_edges(tri, types));
  } catch (const DegenerateTriangulationError&) {
    const double n = static_cast<double>(genotype.size());
    return lambda * std::max(3.0, 3.0 * n - 6.0);
  }
}

double feature_angle_deg(const GridSpec& grid, const FeaturePoint& f) {
  const double step = (grid.phi_e - grid.phi_s) / grid.n_phi;
  return grid.phi_s + (f.n_phi + 0.5) * step;
}

std::pair<Genotype, Genotype> recombine_range_interval(const Genotype& a, const Genotype& b, double phi_a_deg,
                                                       double phi_b_deg) {
  double span = phi_b_deg - phi_a_deg;
  if (span < 0.0) span += 360.0;
  auto inside = [&](const GridSpec& grid, const FeaturePoint& f) {
    return wrap360(feature_angle_deg(grid, f) - phi_a_deg) <= span;
  };
  Genotype ca{a.grid, {}}, cb{b.grid, {}};
  for (const auto& f : a.points)
    if (!inside(a.grid, f)) ca.points.push_back(f);
  for (const auto& f : b.points)
    if (!inside(b.grid, f)) cb.points.push_back(f);
  for (const auto& f : b.points)
    if (inside(b.grid, f)) ca.points.push_back(f);
  for (const auto& f : a.points)
    if (inside(a.grid, f)) cb.points.push_back(f);
  return {std::move(ca), std::move(cb)};
}

std::pair<Genotype, Genotype> recombine_range(const Genotype& a, const Genotype& b, Rng& rng) {
  for (int attempt = 0; attempt < 10; ++attempt) {
    const double phi_a = rng.uniform(0.0, 360.0);
    const double phi_b = rng.uniform(0.0, 360.0);
    auto children = recombine_range_interval(a, b, phi_a, phi_b);
    if (!children.first.empty() && !children.second.empty()) return children;
  }
  return {a, b};
}

std::pair<Genotype, Genotype> recombine_fixed_at(const Genotype& a, const Genotype& b, double theta_deg, double nu) {
  if (a.size() != b.size()) throw ConfigurationError("fixed-amount crossover requires parents of equal size");
  const std::size_t n = a.size();
  const auto k = static_cast<std::size_t>(std::nearbyint(nu * static_cast<double>(n)));

  auto nearest = [&](const Genotype& g) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i) dist[i] = angular_distance(feature_angle_deg(g.grid, g.points[i]), theta_deg);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return dist[x] < dist[y]; });
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
  };
  const auto sa = nearest(a);
  const auto sb = nearest(b);
  Genotype ca = a, cb = b;
  for (std::size_t i = 0; i < k; ++i) {
    ca.points[sa[i]] = b.points[sb[i]];
    cb.points[sb[i]] = a.points[sa[i]];
  }
  return {std::move(ca), std::move(cb)};
}

std::pair<Genotype, Genotype> recombine_fixed(const Genotype& a, const Genotype& b, double nu, Rng& rng) {
  return recombine_fixed_at(a, b, rng.uniform(0.0, 360.0), nu);
}

Genotype mutate(const Genotype& genotype, Mutation method, double edge_ratio, Rng& rng) {
  Genotype out = genotype;
  Triangulation tri;
  try {
    tri = delaunay(feature_positions(genotype));
  } catch (const DegenerateTriangulationError&) {
    return out;
  }
  std::vector<std::array<int, 2>> boundary;
  for (const auto& e : tri.edges)
    if (out.points[e[0]].type != out.points[e[1]].type) boundary.push_back(e);
  if (boundary.empty()) return out;

  const auto want = static_cast<std::size_t>(std::max(0, ceil_count(edge_ratio, genotype.size())));
  const std::size_t count = std::min(want, boundary.size());
  // Partial Fisher-Yates: the first `count` entries become a uniform sample.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.below(boundary.size() - i);
    std::swap(boundary[i], boundary[j]);
  }

  std::vector<std::vector<int>> neighbors;
  if (method == Mutation::Weighted) {
    neighbors.resize(genotype.size());
    for (const auto& e : tri.edges) {
      neighbors[e[0]].push_back(e[1]);
      neighbors[e[1]].push_back(e[0]);
    }
  }

  for (std::size_t i = 0; i < count; ++i) {
    const auto& e = boundary[i];
    const std::size_t pick = rng.below(2);
    const int target = e[pick];
    const int other = e[1 - pick];
    if (method == Mutation::Direct) {
      out.points[target].type = out.points[other].type;
      continue;
    }
    const ElementType own = out.points[target].type;
    std::array<std::size_t, 4> counts{};
    for (int nb : neighbors[target]) {
      const ElementType t = out.points[nb].type;
      if (t != own) ++counts[static_cast<int>(t)];
    }
    const std::size_t total = counts[0] + counts[1] + counts[2] + counts[3];
    if (total == 0) continue;
    std::size_t draw = rng.below(total);
    for (int t = 0; t < 4; ++t) {
      if (draw < counts[t]) {
        out.points[target].type = static_cast<ElementType>(t);
        break;
      }
      draw -= counts[t];
    }
  }
  return out;
}

std::vector<Individual> select(std::vector<Individual> pool, std::size_t count) {
  std::stable_sort(pool.begin(), pool.end(), [](const Individual& x, const Individual& y) {
    if (x.score.total != y.score.total) return x.score.total < y.score.total;
    return x.birth < y.birth;
  });
  if (pool.size() > count) pool.resize(count);
  return pool;
}

LossFunction workspace_loss(const Workspace& target, const MaterialParams& mat, const SolverConfig& solver) {
  return [target, mat, solver](const Genotype& g) {
    const WorkspaceResult r = compute_workspace(g, mat, solver);
    return LossEvaluation{loss_L(r.workspace, target, &r.diagnostics), r.diagnostics.failed()};
  };
}

std::vector<Genotype> initial_population(const GAConfig& cfg) {
  std::vector<Genotype> pop;
  pop.reserve(cfg.population_size);
  for (int k = 0; k < cfg.population_size; ++k) {
    Rng rng(cfg.seed, kInitStreamBase + static_cast<std::uint64_t>(k));
    pop.push_back(random_genotype(cfg.grid, cfg.n_features, cfg.probabilities, rng));
  }
  return pop;
}

GAResult run_ga(const LossFunction& loss, const GAConfig& cfg, const std::vector<Genotype>* initial,
                const GenerationCallback& on_generation) {
  cfg.validate();
  const auto n_p = static_cast<std::size_t>(cfg.population_size);
  GAResult result;
  result.initial_population = initial ? *initial : initial_population(cfg);
  if (result.initial_population.size() != n_p)
    throw ConfigurationError("initial population size " + std::to_string(result.initial_population.size()) +
                             " does not match population_size " + std::to_string(n_p));
  for (const auto& g : result.initial_population) g.validate();
  if (cfg.recombination == Recombination::Fixed) {
    for (const auto& g : result.initial_population)
      if (g.size() != result.initial_population.front().size())
        throw ConfigurationError("fixed-amount crossover requires equally sized genotypes");
  }

  Evaluator evaluator(loss, cfg.lambda);
  Rng rng(cfg.seed, kGaStream);

  std::vector<Individual> population;
  population.reserve(n_p);
  for (const auto& g : result.initial_population) population.push_back(Individual{g, {}, 0, 0, 0});
  evaluator.evaluate(population);

  Individual best;
  bool have_best = false;
  update_best(best, have_best, population);

  auto emit = [&](GenerationRecord rec) {
    if (on_generation) on_generation(rec);
    result.records.push_back(std::move(rec));
  };
  emit(GenerationRecord{0, scores_of(population), scores_of(population), best, rng.state_digest()});

  const int n_o = cfg.offspring_count();
  const int n_mut = cfg.mutation_count();
  for (int gen = 1; gen <= cfg.generations; ++gen) {
    // Recombination.
    std::vector<Individual> offspring;
    offspring.reserve(n_o);
    for (int pair = 0; pair < n_o / 2; ++pair) {
      const std::size_t i = rng.below(n_p);
      std::size_t j = rng.below(n_p - 1);
      if (j >= i) ++j;
      auto children = cfg.recombination == Recombination::Range
                          ? recombine_range(population[i].genotype, population[j].genotype, rng)
                          : recombine_fixed(population[i].genotype, population[j].genotype, cfg.swap_ratio, rng);
      offspring.push_back(Individual{std::move(children.first), {}, 0, gen, 0});
      offspring.push_back(Individual{std::move(children.second), {}, 0, gen, 0});
    }
    evaluator.evaluate(offspring);
    update_best(best, have_best, offspring);

    // Selection over parents followed by offspring.
    std::vector<Individual> pool = std::move(population);
    pool.insert(pool.end(), std::make_move_iterator(offspring.begin()), std::make_move_iterator(offspring.end()));
    population = select(std::move(pool), n_p);
    std::vector<Score> selected = scores_of(population);

    // Mutation; rank 0 (the current best) is not a candidate.
    std::vector<std::size_t> candidates(n_p - 1);
    std::iota(candidates.begin(), candidates.end(), 1);
    std::vector<Individual> mutants;
    std::vector<std::size_t> slots;
    for (int k = 0; k < n_mut; ++k) {
      const std::size_t pick = k + rng.below(candidates.size() - k);
      std::swap(candidates[k], candidates[pick]);
      const std::size_t slot = candidates[k];
      Genotype g = mutate(population[slot].genotype, cfg.mutation, cfg.edge_ratio, rng);
      const int birth = g == population[slot].genotype ? population[slot].birth : gen;
      mutants.push_back(Individual{std::move(g), {}, 0, birth, 0});
      slots.push_back(slot);
    }
    evaluator.evaluate(mutants);
    update_best(best, have_best, mutants);
    for (std::size_t k = 0; k < slots.size(); ++k) population[slots[k]] = std::move(mutants[k]);

    emit(GenerationRecord{gen, std::move(selected), scores_of(population), best, rng.state_digest()});
  }

  result.best = best;
  result.evaluations = evaluator.evaluations();
  return result;
}

GAResult run_ga(const Workspace& target, const GAConfig& cfg, const MaterialParams& mat, const SolverConfig& solver,
                const std::vector<Genotype>* initial, const GenerationCallback& on_generation) {
  return run_ga(workspace_loss(target, mat, solver), cfg, initial, on_generation);
}

}  // namespace spatopt
