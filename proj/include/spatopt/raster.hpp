#pragma once

#include "spatopt/genotype.hpp"
#include "spatopt/grid.hpp"

#include <array>
#include <vector>

namespace spatopt {

/// N_r x N_phi element types, row-major by ring.
class CrossSectionRaster {
 public:
  CrossSectionRaster() = default;
  CrossSectionRaster(const GridSpec& grid, ElementType fill);

  const GridSpec& grid() const { return grid_; }
  int n_r() const { return grid_.n_r; }
  int n_phi() const { return grid_.n_phi; }

  ElementType at(int i, int j) const { return types_[static_cast<std::size_t>(i) * grid_.n_phi + j]; }
  void set(int i, int j, ElementType t) { types_[static_cast<std::size_t>(i) * grid_.n_phi + j] = t; }

  const std::vector<ElementType>& types() const { return types_; }
  std::vector<ElementType>& types() { return types_; }

  std::array<std::size_t, 4> type_counts() const;

  bool operator==(const CrossSectionRaster&) const = default;

 private:
  GridSpec grid_;
  std::vector<ElementType> types_;
};

inline constexpr int kWallThickness = 4;

/// Nearest-site assignment, element by element, feature points scanned in
/// order with strict comparison (lowest index wins ties). Reference kernel.
CrossSectionRaster rasterize_serial(const Genotype& genotype);
CrossSectionRaster rasterize_serial(const Genotype& genotype, const Grid& grid);

/// Same assignment as rasterize_serial, OpenMP-parallel over rings.
CrossSectionRaster rasterize(const Genotype& genotype);
CrossSectionRaster rasterize(const Genotype& genotype, const Grid& grid);

/// Converts to Material every chamber element that has an element of a
/// different chamber type within Chebyshev index distance < thickness.
/// Columns wrap on a full ring. Idempotent.
CrossSectionRaster enforce_walls(const CrossSectionRaster& raster, int thickness = kWallThickness);

/// Raster with every column shifted by `columns` (full ring only).
CrossSectionRaster rotate_columns(const CrossSectionRaster& raster, int columns);

}  // namespace spatopt
