#pragma once

#include "spatopt/genotype.hpp"
#include "spatopt/grid.hpp"
#include "spatopt/predicates.hpp"

#include <array>
#include <span>
#include <vector>

namespace spatopt {

struct TriangulationEdge {
  int a = 0;
  int b = 0;
  bool same_type = false;

  bool operator==(const TriangulationEdge&) const = default;
  auto operator<=>(const TriangulationEdge&) const = default;
};

/// Delaunay triangulation result over the input indices.
///
/// Points sharing a position collapse onto the lowest input index holding
/// it (`representative`); edges only reference representatives. Edges are
/// sorted lexicographically with a < b.
struct Triangulation {
  std::vector<int> representative;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise, input indices
};

/// Incremental Bowyer-Watson with exact predicates. Co-circular ties are
/// resolved by vertex-index perturbation; the hull is tracked with ghost
/// triangles on a vertex at infinity. Throws DegenerateTriangulationError
/// for fewer than three distinct points or an all-collinear set.
Triangulation delaunay(std::span<const geom::Point> points);

/// Triangulation edges of a genotype's feature centroids, classified by type.
std::vector<TriangulationEdge> classify_edges(const Triangulation& tri, std::span<const ElementType> types);

/// Centroid positions of a genotype's feature points.
std::vector<geom::Point> feature_positions(const Genotype& g);
std::vector<geom::Point> feature_positions(const Genotype& g, const Grid& grid);
std::vector<ElementType> feature_types(const Genotype& g);

std::vector<TriangulationEdge> boundary_edges(std::span<const TriangulationEdge> edges);

/// Different-type edges over same-type edges; the total edge count when no
/// same-type edge exists. Throws ValidationError on an empty edge set.
double edge_type_ratio(std::span<const TriangulationEdge> edges);

}  // namespace spatopt
