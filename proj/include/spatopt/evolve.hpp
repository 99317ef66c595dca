#pragma once

#include "spatopt/genotype.hpp"
#include "spatopt/rng.hpp"
#include "spatopt/rod.hpp"
#include "spatopt/workspace.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace spatopt {

enum class Recombination { Range, Fixed };
enum class Mutation { Direct, Weighted };

std::string_view to_string(Recombination r);
std::string_view to_string(Mutation m);
Recombination recombination_from_string(std::string_view s);
Mutation mutation_from_string(std::string_view s);

struct GAConfig {
  int population_size = 20;
  int generations = 100;
  double crossover_prob = 0.8;
  double mutation_ratio = 0.1;  // share of the population mutated per generation
  double edge_ratio = 0.1;      // boundary edges mutated per individual, relative to its point count
  double swap_ratio = 0.5;      // share of points exchanged by fixed-amount crossover
  double lambda = 1000.0;       // cluster penalty weight
  Recombination recombination = Recombination::Fixed;
  Mutation mutation = Mutation::Direct;
  std::uint64_t seed = 0;

  // Initial population.
  std::size_t n_features = 100;
  TypeProbabilities probabilities{};
  GridSpec grid{};

  int offspring_count() const;
  int mutation_count() const;
  void validate() const;
};

struct LossEvaluation {
  double loss = 0.0;
  std::size_t failed = 0;
};

/// Workspace loss of a genotype. Must be safe to call concurrently.
using LossFunction = std::function<LossEvaluation(const Genotype&)>;

struct Score {
  double total = 0.0;
  double loss = 0.0;
  double penalty = 0.0;
  bool operator==(const Score&) const = default;
};

struct Individual {
  Genotype genotype;
  Score score;
  std::uint64_t eval_id = 0;
  int birth = 0;  // generation in which the genotype was created
  std::size_t failed = 0;
};

struct GenerationRecord {
  int generation = 0;
  std::vector<Score> selected;    // after selection, before mutation
  std::vector<Score> population;  // after mutation
  Individual best;                // best individual observed so far
  std::uint64_t rng_digest = 0;
};

struct GAResult {
  Individual best;
  std::vector<GenerationRecord> records;
  std::vector<Genotype> initial_population;
  std::size_t evaluations = 0;  // distinct genotypes simulated
};

using GenerationCallback = std::function<void(const GenerationRecord&)>;

/// Cluster penalty lambda * edge_type_ratio over the feature-point Delaunay
/// triangulation. Degenerate triangulations receive lambda * max(3, 3n - 6).
double penalty_K(const Genotype& genotype, double lambda);

/// Feature-point angle (degrees) of its element centroid.
double feature_angle_deg(const GridSpec& grid, const FeaturePoint& f);

/// Range crossover over the counterclockwise interval [phi_a, phi_a + span],
/// span = phi_b - phi_a (+360 when negative). Points inside are exchanged.
std::pair<Genotype, Genotype> recombine_range_interval(const Genotype& a, const Genotype& b, double phi_a_deg,
                                                       double phi_b_deg);
/// Draws the interval; resamples up to 10 times when a child would be empty, then clones the parents.
std::pair<Genotype, Genotype> recombine_range(const Genotype& a, const Genotype& b, Rng& rng);

/// Fixed-amount crossover: the round(nu * N_f) points of each parent closest
/// in angle to theta are exchanged slot by slot. Throws ConfigurationError
/// for parents of different size.
std::pair<Genotype, Genotype> recombine_fixed_at(const Genotype& a, const Genotype& b, double theta_deg, double nu);
std::pair<Genotype, Genotype> recombine_fixed(const Genotype& a, const Genotype& b, double nu, Rng& rng);

/// Boundary-edge mutation. Changes at most ceil(edge_ratio * N_f) types and never moves points.
Genotype mutate(const Genotype& genotype, Mutation method, double edge_ratio, Rng& rng);

/// Stable truncation selection: ascending total loss, then older birth, then pool order.
std::vector<Individual> select(std::vector<Individual> pool, std::size_t count);

/// Loss function simulating the 27-point workspace against a target.
LossFunction workspace_loss(const Workspace& target, const MaterialParams& mat, const SolverConfig& solver);

/// Initial population drawn from per-individual streams of the seed.
std::vector<Genotype> initial_population(const GAConfig& cfg);

GAResult run_ga(const LossFunction& loss, const GAConfig& cfg, const std::vector<Genotype>* initial = nullptr,
                const GenerationCallback& on_generation = {});

GAResult run_ga(const Workspace& target, const GAConfig& cfg, const MaterialParams& mat = {},
                const SolverConfig& solver = {}, const std::vector<Genotype>* initial = nullptr,
                const GenerationCallback& on_generation = {});

}  // namespace spatopt
