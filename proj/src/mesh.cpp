#include "xhho/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "xhho/errors.hpp"

namespace xhho {

bool point_strictly_inside(const Point2& p, const std::vector<Point2>& poly) {
  // crossing-number test; points on the boundary count as outside
  const int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % n];
    if (point_segment_distance(p, a, b) < 1e-14) return false;
  }
  bool inside = false;
  for (int i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = poly[i];
    const Point2& b = poly[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

double point_polygon_distance(const Point2& p, const std::vector<Point2>& poly) {
  if (point_strictly_inside(p, poly)) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i)
    d = std::min(d, point_segment_distance(p, poly[i], poly[(i + 1) % n]));
  return d;
}

int Mesh::num_internal_faces() const {
  int n = 0;
  for (const Face& f : faces)
    if (!f.boundary) ++n;
  return n;
}

std::vector<Point2> Mesh::polygon(int e) const {
  std::vector<Point2> pts;
  pts.reserve(elements[e].vertex_ids.size());
  for (int v : elements[e].vertex_ids) pts.push_back(vertices[v].coords);
  return pts;
}

double Mesh::regularity_surrogate() const {
  double worst = std::numeric_limits<double>::infinity();
  for (const Element& T : elements)
    for (int f : T.face_ids) worst = std::min(worst, faces[f].diameter / T.diameter);
  return worst;
}

double element_diameter(const Mesh& mesh, const Element& elem) {
  double d = 0.0;
  const auto& ids = elem.vertex_ids;
  for (size_t i = 0; i < ids.size(); ++i)
    for (size_t j = i + 1; j < ids.size(); ++j)
      d = std::max(d, (mesh.vertex(ids[i]) - mesh.vertex(ids[j])).norm());
  return d;
}

namespace {

// Shoelace area (signed) and area centroid of a simple polygon.
std::pair<double, Point2> polygon_area_centroid(const std::vector<Point2>& pts) {
  double area2 = 0.0;
  Point2 c(0.0, 0.0);
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i) {
    const Point2& a = pts[i];
    const Point2& b = pts[(i + 1) % n];
    const double w = cross2(a, b);
    area2 += w;
    c += w * (a + b);
  }
  const double area = 0.5 * area2;
  if (std::abs(area) < 1e-300) throw TopologyError("degenerate polygon with zero area");
  c /= (3.0 * area2);
  return {area, c};
}

bool polygon_is_simple(const std::vector<Point2>& pts) {
  const int n = static_cast<int>(pts.size());
  auto proper_intersect = [](const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
    const double d1 = cross2(b - a, c - a);
    const double d2 = cross2(b - a, d - a);
    const double d3 = cross2(d - c, a - c);
    const double d4 = cross2(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (proper_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n])) return false;
    }
  return true;
}

uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<uint64_t>(a) << 32) | static_cast<uint64_t>(b);
}

} // namespace

Mesh build_mesh(std::vector<Vertex> vertices, std::vector<std::vector<int>> cells) {
  Mesh mesh;
  mesh.vertices = std::move(vertices);

  const int nv = static_cast<int>(mesh.vertices.size());
  for (const Vertex& v : mesh.vertices)
    if (!v.coords.allFinite()) throw TopologyError("non-finite vertex coordinates");

  std::unordered_map<uint64_t, int> face_of_edge;
  mesh.elements.reserve(cells.size());

  for (size_t e = 0; e < cells.size(); ++e) {
    const std::vector<int>& loop = cells[e];
    if (loop.size() < 3) throw TopologyError("element with fewer than 3 vertices");
    for (int v : loop)
      if (v < 0 || v >= nv) throw TopologyError("vertex index out of range");

    Element T;
    T.vertex_ids = loop;
    std::vector<Point2> pts;
    pts.reserve(loop.size());
    for (int v : loop) pts.push_back(mesh.vertices[v].coords);

    auto [area, centroid] = polygon_area_centroid(pts);
    if (area < 0.0) throw TopologyError("element " + std::to_string(e) + " is not counter-clockwise");
    if (!polygon_is_simple(pts)) throw TopologyError("element " + std::to_string(e) + " is self-intersecting");
    T.area = area;
    T.centroid = centroid;
    T.diameter = 0.0;
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = i + 1; j < pts.size(); ++j)
        T.diameter = std::max(T.diameter, (pts[i] - pts[j]).norm());

    const int nf = static_cast<int>(loop.size());
    T.face_ids.resize(nf);
    T.face_signs.resize(nf);
    for (int i = 0; i < nf; ++i) {
      const int a = loop[i];
      const int b = loop[(i + 1) % nf];
      const uint64_t key = edge_key(a, b);
      auto it = face_of_edge.find(key);
      if (it == face_of_edge.end()) {
        Face f;
        f.v0 = a;
        f.v1 = b;
        f.elem0 = static_cast<int>(e);
        const Point2 pa = mesh.vertices[a].coords, pb = mesh.vertices[b].coords;
        f.diameter = (pb - pa).norm();
        if (f.diameter <= 0.0) throw TopologyError("zero-length face");
        f.midpoint = 0.5 * (pa + pb);
        f.normal = rot_minus90(pb - pa) / f.diameter; // outward from elem0
        const int id = static_cast<int>(mesh.faces.size());
        mesh.faces.push_back(f);
        face_of_edge.emplace(key, id);
        T.face_ids[i] = id;
        T.face_signs[i] = 1.0;
      } else {
        Face& f = mesh.faces[it->second];
        if (f.elem1 >= 0)
          throw TopologyError("face (" + std::to_string(a) + "," + std::to_string(b) +
                              ") shared by more than 2 elements");
        f.elem1 = static_cast<int>(e);
        T.face_ids[i] = it->second;
        T.face_signs[i] = -1.0; // second element sees the reversed normal
      }
    }
    mesh.elements.push_back(std::move(T));
  }

  for (Face& f : mesh.faces) f.boundary = (f.elem1 < 0);

  mesh.h = 0.0;
  for (const Element& T : mesh.elements) mesh.h = std::max(mesh.h, T.diameter);
  return mesh;
}

namespace {

Mesh generate_grid(Domain domain, int cells_per_unit, bool split_triangles) {
  if (cells_per_unit < 1) throw ConfigError("cells_per_unit must be >= 1");
  const int n = cells_per_unit;
  const double s = 1.0 / n;

  // index ranges in cell units
  int ix0, ix1, iy0, iy1;
  if (domain == Domain::Square) {
    ix0 = 0; ix1 = n; iy0 = 0; iy1 = n;
  } else {
    ix0 = -n; ix1 = n; iy0 = -n; iy1 = n;
  }

  auto in_domain = [&](int ix, int iy) {
    if (domain == Domain::Square) return true;
    return !(ix >= 0 && iy >= 0); // cut quadrant [0,1]^2
  };

  std::unordered_map<int64_t, int> vertex_id;
  std::vector<Vertex> verts;
  auto vid = [&](int ix, int iy) {
    const int64_t key = (static_cast<int64_t>(ix + (1 << 20)) << 32) | static_cast<int64_t>(iy + (1 << 20));
    auto it = vertex_id.find(key);
    if (it != vertex_id.end()) return it->second;
    const int id = static_cast<int>(verts.size());
    verts.push_back(Vertex{Point2(ix * s, iy * s)});
    vertex_id.emplace(key, id);
    return id;
  };

  std::vector<std::vector<int>> cells;
  for (int iy = iy0; iy < iy1; ++iy)
    for (int ix = ix0; ix < ix1; ++ix) {
      if (!in_domain(ix, iy)) continue;
      const int a = vid(ix, iy), b = vid(ix + 1, iy), c = vid(ix + 1, iy + 1), d = vid(ix, iy + 1);
      if (split_triangles) {
        cells.push_back({a, b, c});
        cells.push_back({a, c, d});
      } else {
        cells.push_back({a, b, c, d});
      }
    }
  return build_mesh(std::move(verts), std::move(cells));
}

} // namespace

Mesh generate_cartesian(Domain domain, int cells_per_unit) {
  return generate_grid(domain, cells_per_unit, false);
}

Mesh generate_triangular(Domain domain, int cells_per_unit) {
  return generate_grid(domain, cells_per_unit, true);
}

Mesh read_mesh(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto next_line = [&]() -> std::string {
    while (std::getline(in, line)) {
      ++lineno;
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos) continue;
      return line;
    }
    throw MeshFormatError(lineno + 1, "unexpected end of file");
  };

  std::istringstream header(next_line());
  int nv = 0, ne = 0;
  if (!(header >> nv >> ne) || nv < 3 || ne < 1)
    throw MeshFormatError(lineno, "expected 'NV NE' header");

  std::vector<Vertex> verts(nv);
  for (int i = 0; i < nv; ++i) {
    std::istringstream ls(next_line());
    double x, y;
    if (!(ls >> x >> y)) throw MeshFormatError(lineno, "expected 'x y'");
    if (!std::isfinite(x) || !std::isfinite(y))
      throw MeshFormatError(lineno, "non-finite coordinate");
    verts[i].coords = Point2(x, y);
  }

  std::vector<std::vector<int>> cells(ne);
  for (int e = 0; e < ne; ++e) {
    std::istringstream ls(next_line());
    int m = 0;
    if (!(ls >> m) || m < 3) throw MeshFormatError(lineno, "expected vertex count >= 3");
    cells[e].resize(m);
    for (int j = 0; j < m; ++j) {
      if (!(ls >> cells[e][j])) throw MeshFormatError(lineno, "expected vertex index");
      if (cells[e][j] < 0 || cells[e][j] >= nv)
        throw MeshFormatError(lineno, "vertex index out of range");
    }
  }

  return build_mesh(std::move(verts), std::move(cells));
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << mesh.vertices.size() << ' ' << mesh.elements.size() << '\n';
  out.precision(17);
  for (const Vertex& v : mesh.vertices) out << v.coords.x() << ' ' << v.coords.y() << '\n';
  for (const Element& T : mesh.elements) {
    out << T.vertex_ids.size();
    for (int v : T.vertex_ids) out << ' ' << v;
    out << '\n';
  }
}

} // namespace xhho
