#pragma once

#include "grpfem/geometry.hpp"

#include <array>
#include <iosfwd>
#include <utility>
#include <vector>

namespace grpfem {

/// Linear simplicial mesh with boundary vertices placed on the exact boundary
/// and numbered first. Within each cell the boundary vertices occupy the
/// leading slots and the cell is positively oriented (det B_T > 0 for the
/// affine map that sends the reference vertices 0, e_1, ..., e_n to the cell
/// vertices in storage order).
struct Mesh {
  int dim = 2;
  std::vector<double> coords;                      // vertex_count * dim
  std::vector<std::array<int, 4>> cells;           // dim+1 leading entries used
  std::vector<std::pair<int, int>> boundary_faces; // (cell, local face)
  int boundary_vertex_count = 0;                   // N_Gamma
  double h = 0.0;                                  // max cell diameter
  double shape_ratio = 0.0;  // max diameter / min inscribed-ball diameter

  int vertex_count() const { return static_cast<int>(coords.size()) / dim; }
  int cell_count() const { return static_cast<int>(cells.size()); }

  Vec vertex(int v) const;
  // Vertices of local face f (the face opposite cell vertex f), in ascending
  // slot order.
  std::vector<int> face_vertices(int cell, int local_face) const;
  // Number of cell vertices on the boundary; they occupy the leading slots.
  int boundary_vertices_in_cell(int cell) const;
};

/// Coarse mesh of the domain refined until h <= target_h.
Mesh generate_linear_mesh(const Domain& domain, double target_h);

/// Uniform red refinement; new vertices on boundary faces/edges are projected
/// onto the boundary. 2D: 1 -> 4 triangles; 3D: 1 -> 8 tetrahedra with the
/// shortest-interior-diagonal octahedron split.
Mesh refine(const Mesh& mesh, const Domain& domain);

/// Renumbers vertices so boundary vertices occupy indices 0..N_Gamma-1 and
/// re-indexes cells and faces consistently. Idempotent.
Mesh order_nodes_boundary_first(const Mesh& mesh);

/// Max over cells of the max pairwise vertex distance.
double mesh_size(const Mesh& mesh);

/// Quasi-uniformity measure: max cell diameter over min inscribed-ball
/// diameter, over the whole mesh.
double shape_regularity_ratio(const Mesh& mesh);

/// Full invariant audit (boundary placement, orientation, conformity,
/// strip containment). Throws NumericalError on the first violation.
void validate_mesh(const Mesh& mesh, const Domain& domain);

// Text format: line 1 "n nv nc nbf"; nv coordinate lines; nc index lines;
// nbf "cell-index local-face-index" lines. 17 significant digits.
void write_mesh(const Mesh& mesh, std::ostream& out);
Mesh read_mesh(std::istream& in);

}  // namespace grpfem
