#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace vem {

using Point = Eigen::Vector2d;

/// Unique mesh edge; vertices[0] < vertices[1] defines the canonical direction.
struct Edge {
  std::array<int, 2> vertices{-1, -1};
  std::array<int, 2> cells{-1, -1};
  bool boundary = false;
};

/// Edge reference from a cell. sign is +1 when the cell's counter-clockwise
/// traversal runs along the canonical direction of the edge.
struct CellEdge {
  int edge = -1;
  int sign = 1;
};

/// Geometry of one cell edge as seen from the cell, in traversal order.
struct CellEdgeGeometry {
  int edge = -1;
  int sign = 1;
  Point start;    // canonical start (lower vertex index)
  Point end;      // canonical end
  double length = 0.0;
  Point normal;   // outward unit normal of the cell
  Point tangent;  // normal rotated by +90 degrees (counter-clockwise traversal)
};

struct CellGeometry {
  std::vector<Point> vertices;  // counter-clockwise
  std::vector<CellEdgeGeometry> edges;  // edge i joins vertex i and i+1
  double area = 0.0;
  Point centroid;
  double diameter = 0.0;
};

/// Polygonal tessellation. Immutable after construction; the constructor
/// derives edges, orientation signs and boundary flags and validates the
/// topology (simple, positively oriented cells; manifold edges).
class PolyMesh {
 public:
  PolyMesh(std::vector<Point> vertices, std::vector<std::vector<int>> cells);

  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_cells() const { return static_cast<int>(cells_.size()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }

  const Point& vertex(int v) const { return vertices_[v]; }
  const std::vector<Point>& vertices() const { return vertices_; }
  std::span<const int> cell_vertices(int c) const { return cells_[c]; }
  std::span<const CellEdge> cell_edges(int c) const { return cell_edges_[c]; }
  const Edge& edge(int e) const { return edges_[e]; }
  bool vertex_on_boundary(int v) const { return vertex_boundary_[v]; }
  const CellGeometry& cell_geometry(int c) const { return geometry_[c]; }

  double edge_length(int e) const;
  /// Unit vector from the lower to the higher vertex index.
  Point edge_tangent(int e) const;
  /// Canonical normal: the canonical tangent rotated 90 degrees clockwise.
  Point edge_normal(int e) const;

  /// Largest cell diameter.
  double max_diameter() const;
  double total_area() const;

 private:
  std::vector<Point> vertices_;
  std::vector<std::vector<int>> cells_;
  std::vector<Edge> edges_;
  std::vector<std::vector<CellEdge>> cell_edges_;
  std::vector<bool> vertex_boundary_;
  std::vector<CellGeometry> geometry_;
};

/// Unit square split into n x n squares, each cut along the diagonal from
/// lower-left to upper-right.
PolyMesh build_structured_triangles(int n);

/// Hexagon-dominant tessellation of the unit square with n hexagons across,
/// clipped at the boundary, then moved by the boundary preserving map
/// (x, y) -> (x, y) + delta * sin(2 pi x) sin(2 pi y) * (1, 1).
PolyMesh build_remapped_hexagons(int n, double delta = 0.05);

/// JSON document {"vertices": [[x, y], ...], "cells": [[i, j, k, ...], ...]}.
PolyMesh parse_mesh(const std::string& text);
std::string serialize_mesh(const PolyMesh& mesh);
PolyMesh load_mesh(const std::filesystem::path& path);
void save_mesh(const PolyMesh& mesh, const std::filesystem::path& path);

struct RegularityReport {
  std::vector<double> edge_ratio;  // per cell: min h_e / h_K
  std::vector<double> ball_ratio;  // per cell: radius of largest star ball / h_K
  std::vector<bool> star_wrt_centroid;
  double min_edge_ratio = 0.0;
  double min_ball_ratio = 0.0;
  int worst_edge_cell = -1;
  int worst_ball_cell = -1;
  bool all_star_wrt_centroid = true;

  bool passes(double rho) const {
    return min_edge_ratio >= rho && min_ball_ratio >= rho;
  }
};

RegularityReport check_regularity(const PolyMesh& mesh);

/// Min h_e / h_K of a single polygon.
double edge_diameter_ratio(std::span<const Point> polygon);
/// Radius of the largest disc contained in the kernel of the polygon
/// (every point of that disc sees the whole polygon).
double star_ball_radius(std::span<const Point> polygon);

}  // namespace vem
