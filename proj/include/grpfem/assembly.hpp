#pragma once

#include "grpfem/element.hpp"
#include "grpfem/geometry.hpp"
#include "grpfem/mesh.hpp"
#include "grpfem/sparse.hpp"

#include <vector>

namespace grpfem {

/// Global Lagrange space of degree k on the isoparametric triangulation.
/// Node j carries the coordinate Phi_T^(k)(xhat^j); the first
/// boundary_node_count nodes lie on the discrete (= exact, for lattice
/// points) boundary.
struct FeSpace {
  const Mesh* mesh = nullptr;
  const Domain* domain = nullptr;
  int degree = 1;
  ReferenceElement ref;       // bulk element
  ReferenceElement face_ref;  // (dim-1)-dimensional trace element

  int node_count = 0;           // N
  int boundary_node_count = 0;  // N_Gamma
  std::vector<double> node_coords;  // node_count * dim
  std::vector<int> cell_nodes;      // cell_count * ref.node_count()
  std::vector<CurvedElementMap> maps;

  struct BoundaryFace {
    int cell = -1;
    int local_face = -1;
    std::vector<int> nodes;  // global ids in face_ref enumeration order
  };
  std::vector<BoundaryFace> boundary_faces;

  Vec node(int j) const;
  int cell_node(int cell, int a) const {
    return cell_nodes[static_cast<std::size_t>(cell) * ref.node_count() +
                      static_cast<std::size_t>(a)];
  }
};

FeSpace build_space(const Mesh& mesh, const Domain& domain, int degree);

// Discrete bilinear forms of the isoparametric method. Quadrature exactness
// 2k+2 throughout; accumulation order is fixed, so assembly is bit
// deterministic.
SparseSpdMatrix assemble_bulk_mass(const FeSpace& space);
SparseSpdMatrix assemble_bulk_stiffness(const FeSpace& space);
SparseSpdMatrix assemble_surface_mass(const FeSpace& space);       // N_Gamma^2
SparseSpdMatrix assemble_surface_stiffness(const FeSpace& space);  // N_Gamma^2

/// Applies the trace selection (I_{N_Gamma}, 0): keeps the first N_Gamma
/// entries.
std::vector<double> trace_restrict(const FeSpace& space, const std::vector<double>& v);
/// Transpose of the selection: zero-pads to length N.
std::vector<double> trace_prolong(const FeSpace& space, const std::vector<double>& v);

/// K = gamma^T (alpha M_Gamma + beta A_Gamma) gamma + kappa M_Omega + A_Omega
/// from already assembled blocks.
SparseSpdMatrix combine_system(const SparseSpdMatrix& bulk_mass,
                               const SparseSpdMatrix& bulk_stiffness,
                               const SparseSpdMatrix& surface_mass,
                               const SparseSpdMatrix& surface_stiffness,
                               double alpha, double beta, double kappa);

SparseSpdMatrix system_matrix(const FeSpace& space, double alpha, double beta,
                              double kappa);

/// b = M_Omega f + gamma^T M_Gamma g.
std::vector<double> load_vector(const SparseSpdMatrix& bulk_mass,
                                const SparseSpdMatrix& surface_mass,
                                const std::vector<double>& f_nodal,
                                const std::vector<double>& g_nodal);
std::vector<double> load_vector(const FeSpace& space, const std::vector<double>& f_nodal,
                                const std::vector<double>& g_nodal);

/// Rejects parameter sets for which K is not positive definite.
void check_parameters(double alpha, double beta, double kappa);

}  // namespace grpfem
