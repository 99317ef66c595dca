#include "spatopt/triangulation.hpp"

#include "spatopt/error.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace spatopt {

namespace {

constexpr int kInfinite = -1;

struct Tri {
  std::array<int, 3> v;  // vertex ids into the unique point list; kInfinite allowed at v[2]
  bool alive = true;
  bool ghost() const { return v[2] == kInfinite; }
};

// v[2] holds the infinite vertex for ghosts; the visible side of edge
// v[0] -> v[1] is to its left.
Tri make_tri(int a, int b, int c) {
  if (a == kInfinite) return {{b, c, a}};
  if (b == kInfinite) return {{c, a, b}};
  return {{a, b, c}};
}

bool strictly_between(const geom::Point& p, const geom::Point& a, const geom::Point& b) {
  if (a.x() != b.x()) return (p.x() > std::min(a.x(), b.x())) && (p.x() < std::max(a.x(), b.x()));
  return (p.y() > std::min(a.y(), b.y())) && (p.y() < std::max(a.y(), b.y()));
}

bool in_conflict(const Tri& t, const std::vector<geom::Point>& pts, int p) {
  const auto& P = pts[p];
  if (t.ghost()) {
    const auto& a = pts[t.v[0]];
    const auto& b = pts[t.v[1]];
    const int o = geom::orient2d(a, b, P);
    if (o > 0) return true;
    return o == 0 && strictly_between(P, a, b);
  }
  return geom::incircle_perturbed(pts[t.v[0]], pts[t.v[1]], pts[t.v[2]], P, t.v[0], t.v[1], t.v[2], p) > 0;
}

}  // namespace

Triangulation delaunay(std::span<const geom::Point> points) {
  Triangulation out;
  out.representative.resize(points.size());

  // Collapse duplicate positions onto their first occurrence.
  std::vector<geom::Point> unique;
  std::vector<int> unique_to_input;
  {
    std::map<std::pair<double, double>, int> seen;
    for (std::size_t k = 0; k < points.size(); ++k) {
      const auto key = std::make_pair(points[k].x(), points[k].y());
      auto [it, inserted] = seen.emplace(key, static_cast<int>(unique.size()));
      if (inserted) {
        unique.push_back(points[k]);
        unique_to_input.push_back(static_cast<int>(k));
      }
      out.representative[k] = unique_to_input[it->second];
    }
  }
  const int n = static_cast<int>(unique.size());
  if (n < 3) throw DegenerateTriangulationError("fewer than three distinct points");

  int third = -1;
  int seed_orient = 0;
  for (int k = 2; k < n; ++k) {
    seed_orient = geom::orient2d(unique[0], unique[1], unique[k]);
    if (seed_orient != 0) {
      third = k;
      break;
    }
  }
  if (third < 0) throw DegenerateTriangulationError("all points are collinear");

  std::vector<Tri> tris;
  {
    int a = 0, b = 1, c = third;
    if (seed_orient < 0) std::swap(a, b);
    tris.push_back(make_tri(a, b, c));
    tris.push_back(make_tri(b, a, kInfinite));
    tris.push_back(make_tri(c, b, kInfinite));
    tris.push_back(make_tri(a, c, kInfinite));
  }

  std::vector<int> cavity;
  std::map<std::pair<int, int>, int> boundary;  // directed edge -> multiplicity marker
  for (int p = 0; p < n; ++p) {
    if (p == 0 || p == 1 || p == third) continue;
    cavity.clear();
    for (std::size_t t = 0; t < tris.size(); ++t)
      if (tris[t].alive && in_conflict(tris[t], unique, p)) cavity.push_back(static_cast<int>(t));

    // Cavity boundary: directed edges whose reverse is not also in the cavity.
    boundary.clear();
    for (int t : cavity) {
      const auto& v = tris[t].v;
      for (int e = 0; e < 3; ++e) boundary[{v[e], v[(e + 1) % 3]}] = 1;
    }
    for (int t : cavity) tris[t].alive = false;
    for (const auto& [edge, unused] : boundary) {
      (void)unused;
      if (boundary.count({edge.second, edge.first})) continue;
      tris.push_back(make_tri(edge.first, edge.second, p));
    }
    // Compact dead triangles now and then.
    if (tris.size() > 8u * static_cast<std::size_t>(n) + 64u) {
      std::erase_if(tris, [](const Tri& t) { return !t.alive; });
    }
  }

  std::vector<std::array<int, 2>> edges;
  for (const auto& t : tris) {
    if (!t.alive || t.ghost()) continue;
    std::array<int, 3> tri_in{unique_to_input[t.v[0]], unique_to_input[t.v[1]], unique_to_input[t.v[2]]};
    out.triangles.push_back(tri_in);
    for (int e = 0; e < 3; ++e) {
      int a = tri_in[e], b = tri_in[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      edges.push_back({a, b});
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::sort(out.triangles.begin(), out.triangles.end());
  out.edges = std::move(edges);
  return out;
}

std::vector<TriangulationEdge> classify_edges(const Triangulation& tri, std::span<const ElementType> types) {
  std::vector<TriangulationEdge> out;
  out.reserve(tri.edges.size());
  for (const auto& e : tri.edges) out.push_back({e[0], e[1], types[e[0]] == types[e[1]]});
  return out;
}

std::vector<geom::Point> feature_positions(const Genotype& g) { return feature_positions(g, Grid(g.grid)); }

std::vector<geom::Point> feature_positions(const Genotype& g, const Grid& grid) {
  std::vector<geom::Point> pts;
  pts.reserve(g.size());
  for (const auto& f : g.points) pts.push_back(grid.centroid(f.n_r, f.n_phi));
  return pts;
}

std::vector<ElementType> feature_types(const Genotype& g) {
  std::vector<ElementType> t;
  t.reserve(g.size());
  for (const auto& f : g.points) t.push_back(f.type);
  return t;
}

std::vector<TriangulationEdge> boundary_edges(std::span<const TriangulationEdge> edges) {
  std::vector<TriangulationEdge> out;
  for (const auto& e : edges)
    if (!e.same_type) out.push_back(e);
  return out;
}

double edge_type_ratio(std::span<const TriangulationEdge> edges) {
  if (edges.empty()) throw ValidationError("edge_type_ratio of an empty edge set");
  std::size_t same = 0;
  for (const auto& e : edges) same += e.same_type ? 1 : 0;
  const std::size_t different = edges.size() - same;
  if (same == 0) return static_cast<double>(edges.size());
  return static_cast<double>(different) / static_cast<double>(same);
}

}  // namespace spatopt
