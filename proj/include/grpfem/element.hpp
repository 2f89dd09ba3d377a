#pragma once

#include "grpfem/geometry.hpp"
#include "grpfem/mesh.hpp"

#include <array>
#include <vector>

namespace grpfem {

/// Lagrange element of degree k on the unit reference simplex. Nodes are the
/// equispaced barycentric lattice; basis functions are evaluated through the
/// classical one-dimensional factor products, so the Lagrange property holds
/// at lattice points up to rounding only.
class ReferenceElement {
 public:
  ReferenceElement(int dim, int degree);

  int dimension() const { return dim_; }
  int degree() const { return degree_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Vec>& nodes() const { return nodes_; }
  const std::array<int, 4>& multi_index(int node) const {
    return multis_[static_cast<std::size_t>(node)];
  }

  // values: node_count() entries.
  void eval_basis(const Vec& x, double* values) const;
  // gradients: node_count() entries of dimension() each.
  void eval_basis_gradients(const Vec& x, Vec* gradients) const;

  // Lattice node sitting on reference vertex v.
  int vertex_node(int v) const;
  // Lattice nodes on the local face opposite vertex f, ordered to match the
  // node enumeration of the (dim-1)-dimensional reference element over the
  // ascending list of remaining vertices.
  const std::vector<int>& face_nodes(int f) const {
    return face_nodes_[static_cast<std::size_t>(f)];
  }

 private:
  int lattice_index(const std::array<int, 4>& multi) const;

  int dim_;
  int degree_;
  std::vector<Vec> nodes_;
  std::vector<std::array<int, 4>> multis_;
  std::vector<std::vector<int>> face_nodes_;
};

/// Reference-to-physical maps of one cell: affine part Phi_T, the boundary
/// correction rho_T that bends cells with at least two boundary vertices onto
/// the exact boundary, and the degree-k interpolated map Phi_T^(k) given by
/// the stored control points.
struct CurvedElementMap {
  int cell = -1;
  int dim = 2;
  int degree = 1;
  int boundary_vertex_count = 0;  // l
  Mat affine_matrix;              // B_T
  Vec affine_offset;              // b_T
  std::vector<Vec> vertices;      // cell vertices, boundary-first
  std::vector<Vec> control_points;  // Phi_T^c at the reference lattice

  bool curved() const { return boundary_vertex_count >= 2; }
};

/// Affine map of a cell: Phi_T(x) = B_T x + b_T with b_T the first vertex.
std::pair<Mat, Vec> affine_map(const Mesh& mesh, int cell);

/// Sum of the barycentric coordinates of the l boundary vertices.
double lambda_star(const Vec& xhat, int l);

/// Projection of Phi_T(xhat) onto the boundary-vertex face: requires
/// lambda_star > 0.
Vec face_projection_y(const CurvedElementMap& map, const Vec& xhat);

/// Correction rho_T(xhat) = lambda*^(k+2) (p(y) - y), zero on the opposite
/// sub-simplex.
Vec rho(const CurvedElementMap& map, const Domain& domain, const Vec& xhat);
Mat rho_jacobian(const CurvedElementMap& map, const Domain& domain, const Vec& xhat);

Vec exact_map(const CurvedElementMap& map, const Domain& domain, const Vec& xhat);
Mat exact_map_jacobian(const CurvedElementMap& map, const Domain& domain,
                       const Vec& xhat);

Vec isoparametric_map(const CurvedElementMap& map, const ReferenceElement& ref,
                      const Vec& xhat);

struct JacobianResult {
  Mat matrix;
  double det = 0.0;
};

/// D Phi_T^(k) assembled from tabulated basis gradients and control points.
JacobianResult bulk_jacobian(const CurvedElementMap& map, const ReferenceElement& ref,
                             const Vec& xhat);
JacobianResult bulk_jacobian_from_gradients(const CurvedElementMap& map,
                                            const Vec* gradients);

struct FaceFrame {
  Mat tangent;          // dim x (dim-1)
  double measure = 0.0; // sqrt(det(G^T G))
  Vec normal;           // unit, outward
};

/// Derivative data of the face parametrization of Phi_T^(k) on a local face.
FaceFrame face_jacobian(const CurvedElementMap& map, const ReferenceElement& ref,
                        const ReferenceElement& face_ref, int local_face,
                        const Vec& xhat_face);

/// Embeds a reference-face point into the cell reference simplex (the face
/// opposite vertex f, parametrized over the ascending remaining vertices).
Vec embed_face_point(int dim, int local_face, const Vec& xhat_face);
/// Derivative of that embedding, dim x (dim-1).
Mat face_embedding_matrix(int dim, int local_face);

CurvedElementMap build_curved_map(const Mesh& mesh, const Domain& domain,
                                  const ReferenceElement& ref, int cell);

/// Sampled sup of |D rho_T B_T^{-1}| (spectral norm) over a barycentric
/// lattice of the given degree; must stay below 1 for a valid curved cell.
double derivative_bound_sample(const CurvedElementMap& map, const Domain& domain,
                               int sample_degree);

}  // namespace grpfem
