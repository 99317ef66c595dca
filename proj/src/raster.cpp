#include "spatopt/raster.hpp"

#include "spatopt/error.hpp"

#include <limits>

namespace spatopt {

CrossSectionRaster::CrossSectionRaster(const GridSpec& grid, ElementType fill)
    : grid_(grid), types_(static_cast<std::size_t>(grid.n_r) * grid.n_phi, fill) {}

std::array<std::size_t, 4> CrossSectionRaster::type_counts() const {
  std::array<std::size_t, 4> c{};
  for (ElementType t : types_) ++c[static_cast<int>(t)];
  return c;
}

CrossSectionRaster rasterize_serial(const Genotype& genotype) { return rasterize_serial(genotype, Grid(genotype.grid)); }

CrossSectionRaster rasterize_serial(const Genotype& genotype, const Grid& grid) {
  genotype.validate();
  if (!(grid.spec() == genotype.grid)) throw ValidationError("genotype grid does not match rasterization grid");
  CrossSectionRaster raster(genotype.grid, ElementType::Material);
  for (int i = 0; i < grid.n_r(); ++i) {
    for (int j = 0; j < grid.n_phi(); ++j) {
      double best = std::numeric_limits<double>::infinity();
      ElementType type = ElementType::Material;
      for (const auto& f : genotype.points) {
        const double d = grid.centroid_distance2(i, j, f.n_r, f.n_phi);
        if (d < best) {
          best = d;
          type = f.type;
        }
      }
      raster.set(i, j, type);
    }
  }
  return raster;
}

CrossSectionRaster rasterize(const Genotype& genotype) { return rasterize(genotype, Grid(genotype.grid)); }

CrossSectionRaster rasterize(const Genotype& genotype, const Grid& grid) {
  genotype.validate();
  if (!(grid.spec() == genotype.grid)) throw ValidationError("genotype grid does not match rasterization grid");
  const int n_r = grid.n_r();
  const int n_phi = grid.n_phi();
  const std::size_t n_f = genotype.size();

  // Structure-of-arrays copy of the sites for the inner loop.
  std::vector<double> site_rho(n_f), site_rho2(n_f);
  std::vector<int> site_col(n_f);
  std::vector<ElementType> site_type(n_f);
  for (std::size_t k = 0; k < n_f; ++k) {
    const auto& f = genotype.points[k];
    site_rho[k] = grid.centroid_radius(f.n_r);
    site_rho2[k] = site_rho[k] * site_rho[k];
    site_col[k] = f.n_phi;
    site_type[k] = f.type;
  }

  CrossSectionRaster raster(genotype.grid, ElementType::Material);
  auto& out = raster.types();

#pragma omp parallel for schedule(static)
  for (int i = 0; i < n_r; ++i) {
    const double a = grid.centroid_radius(i);
    const double a2 = a * a;
    for (int j = 0; j < n_phi; ++j) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_k = 0;
      for (std::size_t k = 0; k < n_f; ++k) {
        const double b = site_rho[k];
        const double d = a2 + site_rho2[k] - 2.0 * a * b * grid.offset_cos(grid.column_offset(j, site_col[k]));
        if (d < best) {
          best = d;
          best_k = k;
        }
      }
      out[static_cast<std::size_t>(i) * n_phi + j] = site_type[best_k];
    }
  }
  return raster;
}

CrossSectionRaster enforce_walls(const CrossSectionRaster& raster, int thickness) {
  const int n_r = raster.n_r();
  const int n_phi = raster.n_phi();
  const bool wrap = raster.grid().full_ring();
  const int reach = thickness - 1;
  CrossSectionRaster out = raster;
  if (reach < 0) return out;

#pragma omp parallel for schedule(static)
  for (int i = 0; i < n_r; ++i) {
    for (int j = 0; j < n_phi; ++j) {
      const ElementType t = raster.at(i, j);
      if (!is_chamber(t)) continue;
      bool clash = false;
      for (int di = -reach; di <= reach && !clash; ++di) {
        const int ii = i + di;
        if (ii < 0 || ii >= n_r) continue;
        for (int dj = -reach; dj <= reach; ++dj) {
          int jj = j + dj;
          if (wrap) {
            jj %= n_phi;
            if (jj < 0) jj += n_phi;
          } else if (jj < 0 || jj >= n_phi) {
            continue;
          }
          const ElementType o = raster.at(ii, jj);
          if (is_chamber(o) && o != t) {
            clash = true;
            break;
          }
        }
      }
      if (clash) out.set(i, j, ElementType::Material);
    }
  }
  return out;
}

CrossSectionRaster rotate_columns(const CrossSectionRaster& raster, int columns) {
  CrossSectionRaster out = raster;
  const int n = raster.n_phi();
  for (int i = 0; i < raster.n_r(); ++i)
    for (int j = 0; j < n; ++j) out.set(i, ((j + columns) % n + n) % n, raster.at(i, j));
  return out;
}

}  // namespace spatopt
