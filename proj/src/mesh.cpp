#include "vem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "vem/error.hpp"

namespace vem {

namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double signed_area(std::span<const Point> poly) {
  double a = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * a;
}

// Closed-segment intersection test.
bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  auto orient = [](const Point& a, const Point& b, const Point& c) {
    const double v = cross(b - a, c - a);
    const double scale = (b - a).norm() * (c - a).norm();
    if (std::abs(v) <= 1e-14 * scale) return 0;
    return v > 0 ? 1 : -1;
  };
  auto on_segment = [](const Point& a, const Point& b, const Point& c) {
    return std::min(a.x(), b.x()) - 1e-14 <= c.x() && c.x() <= std::max(a.x(), b.x()) + 1e-14 &&
           std::min(a.y(), b.y()) - 1e-14 <= c.y() && c.y() <= std::max(a.y(), b.y()) + 1e-14;
  };
  const int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
  const int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

bool is_simple(std::span<const Point> poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i)
    if ((poly[i] - poly[(i + 1) % n]).norm() == 0.0) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]))
        return false;
    }
  }
  return true;
}

CellGeometry make_geometry(std::span<const Point> poly) {
  CellGeometry g;
  g.vertices.assign(poly.begin(), poly.end());
  const std::size_t n = poly.size();
  double a = 0.0;
  Point c = Point::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % n];
    const double w = cross(p, q);
    a += w;
    c += w * (p + q);
  }
  g.area = 0.5 * a;
  g.centroid = c / (3.0 * a);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      g.diameter = std::max(g.diameter, (poly[i] - poly[j]).norm());
  return g;
}

}  // namespace

PolyMesh::PolyMesh(std::vector<Point> vertices, std::vector<std::vector<int>> cells)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
  const int nv = n_vertices();
  std::map<std::pair<int, int>, int> edge_index;
  cell_edges_.resize(cells_.size());
  geometry_.reserve(cells_.size());

  for (int c = 0; c < n_cells(); ++c) {
    const auto& loop = cells_[c];
    if (loop.size() < 3)
      throw Error("mesh", "cell " + std::to_string(c) + " has fewer than 3 vertices");
    std::vector<Point> poly;
    for (int v : loop) {
      if (v < 0 || v >= nv)
        throw Error("mesh", "cell " + std::to_string(c) + " references vertex " +
                                std::to_string(v) + " out of range");
      poly.push_back(vertices_[v]);
    }
    if (signed_area(poly) <= 0.0)
      throw Error("mesh", "cell " + std::to_string(c) + " is inverted or degenerate");
    if (!is_simple(poly))
      throw Error("mesh", "cell " + std::to_string(c) + " is not a simple polygon");

    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
      const int a = loop[i];
      const int b = loop[(i + 1) % n];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_index.try_emplace({key.first, key.second}, n_edges());
      if (inserted) {
        Edge e;
        e.vertices = {key.first, key.second};
        edges_.push_back(e);
      }
      Edge& e = edges_[it->second];
      const int sign = (a < b) ? 1 : -1;
      if (e.cells[0] < 0) {
        e.cells[0] = c;
      } else if (e.cells[1] < 0) {
        // the two neighbours must traverse the shared edge in opposite directions
        const auto& other = cell_edges_[e.cells[0]];
        const auto prev = std::find_if(other.begin(), other.end(),
                                       [&](const CellEdge& ce) { return ce.edge == it->second; });
        if (prev != other.end() && prev->sign == sign)
          throw Error("mesh", "cells " + std::to_string(e.cells[0]) + " and " + std::to_string(c) +
                                  " overlap along edge (" + std::to_string(a) + "," +
                                  std::to_string(b) + ")");
        e.cells[1] = c;
      } else {
        throw Error("mesh", "non-manifold edge (" + std::to_string(key.first) + "," +
                                std::to_string(key.second) + ") shared by more than two cells");
      }
      cell_edges_[c].push_back({it->second, sign});
    }
  }

  vertex_boundary_.assign(nv, false);
  for (auto& e : edges_) {
    e.boundary = e.cells[1] < 0;
    if (e.boundary) {
      vertex_boundary_[e.vertices[0]] = true;
      vertex_boundary_[e.vertices[1]] = true;
    }
  }

  for (int c = 0; c < n_cells(); ++c) {
    std::vector<Point> poly;
    for (int v : cells_[c]) poly.push_back(vertices_[v]);
    CellGeometry g = make_geometry(poly);
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      const CellEdge ce = cell_edges_[c][i];
      CellEdgeGeometry eg;
      eg.edge = ce.edge;
      eg.sign = ce.sign;
      eg.start = vertices_[edges_[ce.edge].vertices[0]];
      eg.end = vertices_[edges_[ce.edge].vertices[1]];
      eg.length = (eg.end - eg.start).norm();
      eg.normal = ce.sign * edge_normal(ce.edge);
      eg.tangent = Point(-eg.normal.y(), eg.normal.x());
      g.edges.push_back(eg);
    }
    geometry_.push_back(std::move(g));
  }
}

double PolyMesh::edge_length(int e) const {
  return (vertices_[edges_[e].vertices[1]] - vertices_[edges_[e].vertices[0]]).norm();
}

Point PolyMesh::edge_tangent(int e) const {
  return (vertices_[edges_[e].vertices[1]] - vertices_[edges_[e].vertices[0]]).normalized();
}

Point PolyMesh::edge_normal(int e) const {
  const Point t = edge_tangent(e);
  return Point(t.y(), -t.x());
}

double PolyMesh::max_diameter() const {
  double h = 0.0;
  for (const auto& g : geometry_) h = std::max(h, g.diameter);
  return h;
}

double PolyMesh::total_area() const {
  double a = 0.0;
  for (const auto& g : geometry_) a += g.area;
  return a;
}

PolyMesh build_structured_triangles(int n) {
  if (n < 1) throw Error("mesh", "structured triangle mesh needs n >= 1");
  std::vector<Point> vertices;
  vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> cells;
  cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int ll = id(i, j), lr = id(i + 1, j), ur = id(i + 1, j + 1), ul = id(i, j + 1);
      cells.push_back({ll, lr, ur});
      cells.push_back({ll, ur, ul});
    }
  }
  return PolyMesh(std::move(vertices), std::move(cells));
}

namespace {

// Sutherland-Hodgman clip against one axis-aligned half plane. Intersection
// coordinates are set exactly to the clip value.
std::vector<Point> clip(const std::vector<Point>& poly, int axis, double value, bool keep_above) {
  auto inside = [&](const Point& p) {
    return keep_above ? p[axis] >= value - 1e-13 : p[axis] <= value + 1e-13;
  };
  std::vector<Point> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % n];
    const bool pin = inside(p), qin = inside(q);
    auto intersection = [&] {
      const double s = (value - p[axis]) / (q[axis] - p[axis]);
      Point x = p + s * (q - p);
      x[axis] = value;
      return x;
    };
    if (qin) {
      if (!pin) out.push_back(intersection());
      out.push_back(q);
    } else if (pin) {
      out.push_back(intersection());
    }
  }
  // drop repeated points produced by vertices lying on the clip line
  std::vector<Point> clean;
  for (const Point& p : out)
    if (clean.empty() || (p - clean.back()).norm() > 1e-12) clean.push_back(p);
  while (clean.size() > 1 && (clean.front() - clean.back()).norm() <= 1e-12) clean.pop_back();
  return clean;
}

}  // namespace

PolyMesh build_remapped_hexagons(int n, double delta) {
  if (n < 2) throw Error("mesh", "hexagon mesh needs n >= 2");
  // Regular pointy-top hexagons of circumradius R: even rows centred on
  // columns x = 2ka, odd rows shifted by a, rows 1.5R apart. The lattice is
  // clipped to [0, 2na] x [0, 1.5Rm]; the first and last column and level
  // intervals are then stretched so that the clipped boundary cells are not
  // slivers, while interior cells stay regular.
  const double a = 1.0 / (2.0 * n + 1.5);  // boundary column width 1.75a
  const double R = 2.0 * a / std::numbers::sqrt3;
  const double s = 0.5 * R;
  const double t = R;
  const double dy = 1.5 * R;
  const int m = std::max(1, static_cast<int>(std::floor((1.0 - R) / dy)));
  const double width = 2.0 * n * a, height = m * dy;
  const double bx = 0.5 * (1.0 - (width - 2.0 * a));
  const double by = 0.5 * (1.0 - (height - 2.0 * s));
  auto stretch = [](double v, double inner, double outer, double total) {
    if (v <= inner) return v * outer / inner;
    if (v >= total - inner) return 1.0 - (total - v) * outer / inner;
    return outer + (v - inner);
  };

  std::vector<Point> vertices;
  std::map<std::pair<long long, long long>, int> index;
  // Coordinates of shared vertices can differ by round-off, so look in the
  // neighbouring buckets too instead of trusting a single rounded key.
  const double tol = 1e-9 * a;
  auto vertex_id = [&](const Point& p) {
    const long long kx = std::llround(p.x() / tol), ky = std::llround(p.y() / tol);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy2 = -1; dy2 <= 1; ++dy2) {
        const auto it = index.find({kx + dx, ky + dy2});
        if (it != index.end() && (vertices[it->second] - p).norm() <= tol) return it->second;
      }
    const int id = static_cast<int>(vertices.size());
    index.emplace(std::make_pair(kx, ky), id);
    vertices.push_back(p);
    return id;
  };

  std::vector<std::vector<int>> cells;
  for (int j = 0; j <= m; ++j) {
    const bool odd = (j % 2) == 1;
    const int count = odd ? n : n + 1;
    const double yc = j * dy;
    for (int i = 0; i < count; ++i) {
      const double xc = odd ? (2 * i + 1) * a : 2 * i * a;
      std::vector<Point> hex = {
          {xc, yc - t}, {xc + a, yc - s}, {xc + a, yc + s},
          {xc, yc + t}, {xc - a, yc + s}, {xc - a, yc - s}};
      hex = clip(hex, 0, 0.0, true);
      hex = clip(hex, 0, width, false);
      hex = clip(hex, 1, 0.0, true);
      hex = clip(hex, 1, height, false);
      if (hex.size() < 3) continue;
      std::vector<int> loop;
      for (const Point& p : hex) loop.push_back(vertex_id(p));
      cells.push_back(std::move(loop));
    }
  }
  // Snap boundary coordinates exactly, then stretch the boundary layers.
  for (Point& p : vertices) {
    const double x = std::abs(p.x()) <= tol ? 0.0 : std::abs(p.x() - width) <= tol ? width : p.x();
    const double y = std::abs(p.y()) <= tol ? 0.0 : std::abs(p.y() - height) <= tol ? height : p.y();
    p = Point(x == width ? 1.0 : stretch(x, a, bx, width), y == height ? 1.0 : stretch(y, s, by, height));
  }

  for (Point& p : vertices) {
    const bool on_boundary = p.x() == 0.0 || p.x() == 1.0 || p.y() == 0.0 || p.y() == 1.0;
    if (on_boundary) continue;
    const double d = delta * std::sin(2.0 * std::numbers::pi * p.x()) *
                     std::sin(2.0 * std::numbers::pi * p.y());
    p += Point(d, d);
  }
  return PolyMesh(std::move(vertices), std::move(cells));
}

PolyMesh parse_mesh(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error("parse", e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("cells"))
    throw Error("parse", "mesh document needs \"vertices\" and \"cells\" arrays");
  std::vector<Point> vertices;
  std::vector<std::vector<int>> cells;
  try {
    for (const auto& v : doc.at("vertices")) {
      if (!v.is_array() || v.size() != 2) throw Error("parse", "vertex entries must be [x, y]");
      vertices.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    for (const auto& c : doc.at("cells")) cells.push_back(c.get<std::vector<int>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error("parse", e.what());
  }
  return PolyMesh(std::move(vertices), std::move(cells));
}

std::string serialize_mesh(const PolyMesh& mesh) {
  nlohmann::json doc;
  doc["vertices"] = nlohmann::json::array();
  for (const Point& p : mesh.vertices()) doc["vertices"].push_back({p.x(), p.y()});
  doc["cells"] = nlohmann::json::array();
  for (int c = 0; c < mesh.n_cells(); ++c) {
    auto loop = mesh.cell_vertices(c);
    doc["cells"].push_back(std::vector<int>(loop.begin(), loop.end()));
  }
  return doc.dump();
}

PolyMesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("parse", "cannot open mesh file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_mesh(buffer.str());
}

void save_mesh(const PolyMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("io", "cannot write mesh file " + path.string());
  out << serialize_mesh(mesh) << '\n';
}

double edge_diameter_ratio(std::span<const Point> polygon) {
  const CellGeometry g = make_geometry(polygon);
  double shortest = std::numeric_limits<double>::infinity();
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i)
    shortest = std::min(shortest, (polygon[(i + 1) % n] - polygon[i]).norm());
  return shortest / g.diameter;
}

double star_ball_radius(std::span<const Point> polygon) {
  // Chebyshev centre of the kernel: maximise r subject to
  // nu_i . (c - v_i) >= r for every edge i (nu_i the inward normal). The
  // optimum sits on a vertex of this 3-variable LP, so enumerate triples.
  const std::size_t n = polygon.size();
  std::vector<Point> nu(n);
  std::vector<double> offset(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point d = (polygon[(i + 1) % n] - polygon[i]).normalized();
    nu[i] = Point(-d.y(), d.x());
    offset[i] = nu[i].dot(polygon[i]);
  }
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        Eigen::Matrix3d A;
        Eigen::Vector3d b;
        const std::size_t idx[3] = {i, j, k};
        for (int r = 0; r < 3; ++r) {
          A.row(r) << nu[idx[r]].x(), nu[idx[r]].y(), -1.0;
          b(r) = offset[idx[r]];
        }
        Eigen::FullPivLU<Eigen::Matrix3d> lu(A);
        if (!lu.isInvertible()) continue;
        const Eigen::Vector3d sol = lu.solve(b);
        const Point c(sol(0), sol(1));
        const double r = sol(2);
        if (r <= best) continue;
        bool feasible = true;
        for (std::size_t e = 0; e < n && feasible; ++e)
          feasible = nu[e].dot(c) - offset[e] >= r - 1e-12 * (1.0 + std::abs(r));
        if (feasible) best = r;
      }
  return best;
}

RegularityReport check_regularity(const PolyMesh& mesh) {
  RegularityReport report;
  report.min_edge_ratio = std::numeric_limits<double>::infinity();
  report.min_ball_ratio = std::numeric_limits<double>::infinity();
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellGeometry& g = mesh.cell_geometry(c);
    const double er = edge_diameter_ratio(g.vertices);
    const double br = star_ball_radius(g.vertices) / g.diameter;
    bool star = true;
    for (const auto& e : g.edges) star = star && e.normal.dot(g.centroid - e.start) < 0.0;
    report.edge_ratio.push_back(er);
    report.ball_ratio.push_back(br);
    report.star_wrt_centroid.push_back(star);
    report.all_star_wrt_centroid = report.all_star_wrt_centroid && star;
    if (er < report.min_edge_ratio) {
      report.min_edge_ratio = er;
      report.worst_edge_cell = c;
    }
    if (br < report.min_ball_ratio) {
      report.min_ball_ratio = br;
      report.worst_ball_cell = c;
    }
  }
  return report;
}

}  // namespace vem
