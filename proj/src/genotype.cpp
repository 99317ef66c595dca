#include "spatopt/genotype.hpp"

#include "spatopt/error.hpp"

#include <cmath>
#include <string>

namespace spatopt {

void Genotype::validate() const {
  grid.validate();
  if (points.empty()) throw ValidationError("genotype has no feature points");
  for (const auto& p : points) {
    if (p.n_r < 0 || p.n_r >= grid.n_r || p.n_phi < 0 || p.n_phi >= grid.n_phi)
      throw ValidationError("feature point index (" + std::to_string(p.n_r) + ", " + std::to_string(p.n_phi) +
                            ") outside grid");
  }
}

std::uint64_t Genotype::content_hash() const {
  std::uint64_t h = fnv1a64(&grid.r_s, sizeof(double));
  h = fnv1a64(&grid.r_e, sizeof(double), h);
  h = fnv1a64(&grid.phi_s, sizeof(double), h);
  h = fnv1a64(&grid.phi_e, sizeof(double), h);
  h = fnv1a64(&grid.n_r, sizeof(int), h);
  h = fnv1a64(&grid.n_phi, sizeof(int), h);
  for (const auto& p : points) {
    const std::int32_t v[3] = {p.n_r, p.n_phi, static_cast<std::int32_t>(p.type)};
    h = fnv1a64(v, sizeof(v), h);
  }
  return h;
}

std::array<std::size_t, 4> Genotype::type_counts() const {
  std::array<std::size_t, 4> c{};
  for (const auto& p : points) ++c[static_cast<int>(p.type)];
  return c;
}

Genotype random_genotype(const GridSpec& grid, std::size_t n_points, const TypeProbabilities& probs, Rng& rng) {
  grid.validate();
  if (probs.material < 0.0 || probs.chamber < 0.0 || std::abs(probs.material + 3.0 * probs.chamber - 1.0) > 1e-12)
    throw ValidationError("type probabilities must be non-negative and satisfy p_material + 3 p_chamber = 1");
  Genotype g{grid, {}};
  g.points.reserve(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    FeaturePoint p;
    p.n_r = static_cast<int>(rng.below(grid.n_r));
    p.n_phi = static_cast<int>(rng.below(grid.n_phi));
    const double u = rng.uniform();
    if (u < probs.material)
      p.type = ElementType::Material;
    else if (u < probs.material + probs.chamber)
      p.type = ElementType::Chamber1;
    else if (u < probs.material + 2.0 * probs.chamber)
      p.type = ElementType::Chamber2;
    else
      p.type = ElementType::Chamber3;
    g.points.push_back(p);
  }
  return g;
}

Genotype rotate_columns(const Genotype& g, int columns) {
  Genotype out = g;
  const int n = g.grid.n_phi;
  for (auto& p : out.points) p.n_phi = ((p.n_phi + columns) % n + n) % n;
  return out;
}

Genotype swap_chambers(const Genotype& g, ElementType a, ElementType b) {
  Genotype out = g;
  for (auto& p : out.points) {
    if (p.type == a)
      p.type = b;
    else if (p.type == b)
      p.type = a;
  }
  return out;
}

}  // namespace spatopt
