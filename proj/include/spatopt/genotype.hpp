#pragma once

#include "spatopt/grid.hpp"
#include "spatopt/rng.hpp"

#include <cstdint>
#include <vector>

namespace spatopt {

/// Typed Voronoi site placed on an element of the grid.
struct FeaturePoint {
  int n_r = 0;
  int n_phi = 0;
  ElementType type = ElementType::Material;

  bool operator==(const FeaturePoint&) const = default;
};

struct Genotype {
  GridSpec grid;
  std::vector<FeaturePoint> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  /// Throws ValidationError if empty or if any index is out of range.
  void validate() const;
  /// Content hash over grid and points, used as evaluation cache key.
  std::uint64_t content_hash() const;
  /// Count of feature points per type (Material, Chamber1..3).
  std::array<std::size_t, 4> type_counts() const;

  bool operator==(const Genotype&) const = default;
};

struct TypeProbabilities {
  double material = 0.5;
  double chamber = 1.0 / 6.0;
};

/// Feature points with uniformly drawn element indices and types drawn from
/// (material, chamber, chamber, chamber).
Genotype random_genotype(const GridSpec& grid, std::size_t n_points, const TypeProbabilities& probs, Rng& rng);

/// Genotype with every n_phi shifted by `columns` (mod n_phi).
Genotype rotate_columns(const Genotype& g, int columns);

/// Genotype with two chamber labels exchanged.
Genotype swap_chambers(const Genotype& g, ElementType a, ElementType b);

}  // namespace spatopt
