#pragma once

#include <iosfwd>
#include <vector>

#include "xhho/geometry.hpp"

namespace xhho {

struct Vertex {
  Point2 coords;
};

/// Straight mesh edge. n_F follows a fixed convention: it points out of the
/// lower-index adjacent element (outward for boundary faces), which makes
/// interior normals of the two neighbours exact negations of each other.
struct Face {
  int v0 = -1, v1 = -1;       // endpoint vertex indices, oriented with n_F
  int elem0 = -1, elem1 = -1; // adjacent elements, elem1 == -1 on the boundary
  double diameter = 0.0;      // h_F = |v1 - v0|
  Point2 midpoint;            // x_F
  Point2 normal;              // n_F, unit
  bool boundary = false;

  int num_elements() const { return elem1 < 0 ? 1 : 2; }
};

struct Element {
  std::vector<int> vertex_ids; // simple CCW loop
  std::vector<int> face_ids;   // face_ids[i] joins vertex_ids[i] and vertex_ids[i+1]
  std::vector<double> face_signs; // n_TF = face_signs[i] * faces[face_ids[i]].normal
  double diameter = 0.0;       // h_T, max pairwise vertex distance
  double area = 0.0;
  Point2 centroid;             // x_T, polygon area centroid

  int num_faces() const { return static_cast<int>(face_ids.size()); }
};

class Mesh {
public:
  std::vector<Vertex> vertices;
  std::vector<Face> faces;
  std::vector<Element> elements;
  double h = 0.0; // max element diameter

  int num_elements() const { return static_cast<int>(elements.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }
  int num_internal_faces() const;

  Point2 vertex(int v) const { return vertices[v].coords; }
  /// Outward unit normal of element e on its i-th face.
  Point2 outward_normal(int e, int i) const {
    const Element& T = elements[e];
    return T.face_signs[i] * faces[T.face_ids[i]].normal;
  }
  /// Polygon vertex coordinates of an element.
  std::vector<Point2> polygon(int e) const;
  /// min face length / element diameter over the mesh; a small value flags
  /// degenerate elements.
  double regularity_surrogate() const;
};

enum class Domain { Square, LShape };

/// Uniform axis-aligned grid. Square is (0,1)^2; LShape is (-1,1)^2 minus
/// the closed quadrant [0,1]^2, tiled by squares of side 1/cells_per_unit.
Mesh generate_cartesian(Domain domain, int cells_per_unit);

/// Cartesian grid with every cell split along the diagonal from its
/// bottom-left to its top-right corner.
Mesh generate_triangular(Domain domain, int cells_per_unit);

/// Read a mesh from the text format:
///   line 1: NV NE
///   NV lines: x y
///   NE lines: m i1 ... im   (0-based vertex indices, counter-clockwise)
/// Faces, adjacency, normals and diameters are derived, never stored.
Mesh read_mesh(std::istream& in);

/// Inverse of read_mesh; coordinates written with 17 significant digits so a
/// write/read round trip is bit exact.
void write_mesh(std::ostream& out, const Mesh& mesh);

/// Builds derived data (faces, adjacency, geometry) from vertices and element
/// vertex loops; the entry point for programmatic mesh construction.
Mesh build_mesh(std::vector<Vertex> vertices, std::vector<std::vector<int>> cells);

double element_diameter(const Mesh& mesh, const Element& elem);

} // namespace xhho
