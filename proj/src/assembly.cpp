#include "grpfem/assembly.hpp"

#include "grpfem/quadrature.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace grpfem {

namespace {

int assembly_quadrature_degree(int k) { return 2 * k + 2; }

struct TabulatedBasis {
  std::vector<double> values;   // nq * nb
  std::vector<Vec> gradients;   // nq * nb
};

TabulatedBasis tabulate(const ReferenceElement& ref, const QuadratureRule& rule) {
  TabulatedBasis tab;
  const int nb = ref.node_count();
  tab.values.resize(static_cast<std::size_t>(rule.size()) * nb);
  tab.gradients.resize(static_cast<std::size_t>(rule.size()) * nb);
  for (int q = 0; q < rule.size(); ++q) {
    ref.eval_basis(rule.points[static_cast<std::size_t>(q)],
                   tab.values.data() + static_cast<std::size_t>(q) * nb);
    ref.eval_basis_gradients(rule.points[static_cast<std::size_t>(q)],
                             tab.gradients.data() + static_cast<std::size_t>(q) * nb);
  }
  return tab;
}

// Node key: the supporting sub-simplex (global vertex ids of slots with a
// positive barycentric index) plus the lattice position on it, vertex-sorted
// so both sides of a shared entity agree.
struct NodeKey {
  std::array<std::pair<int, int>, 4> entries;
  int size = 0;
  bool operator<(const NodeKey& o) const {
    return std::tie(size, entries) < std::tie(o.size, o.entries);
  }
};

SparseSpdMatrix pattern_from_cells(int rows, const std::vector<int>& cell_nodes,
                                   int nb, int cell_count) {
  std::vector<std::vector<int>> columns(static_cast<std::size_t>(rows));
  for (int c = 0; c < cell_count; ++c) {
    const int* nodes = cell_nodes.data() + static_cast<std::size_t>(c) * nb;
    for (int a = 0; a < nb; ++a) {
      for (int b = 0; b < nb; ++b) {
        columns[static_cast<std::size_t>(nodes[a])].push_back(nodes[b]);
      }
    }
  }
  return SparseSpdMatrix::from_pattern(std::move(columns));
}

SparseSpdMatrix surface_pattern(const FeSpace& space) {
  std::vector<std::vector<int>> columns(
      static_cast<std::size_t>(space.boundary_node_count));
  for (const auto& face : space.boundary_faces) {
    for (const int a : face.nodes) {
      for (const int b : face.nodes) columns[static_cast<std::size_t>(a)].push_back(b);
    }
  }
  return SparseSpdMatrix::from_pattern(std::move(columns));
}

enum class BulkKind { Mass, Stiffness };

SparseSpdMatrix assemble_bulk(const FeSpace& space, BulkKind kind) {
  const int nb = space.ref.node_count();
  const QuadratureRule rule =
      make_quadrature(space.mesh->dim, assembly_quadrature_degree(space.degree));
  const TabulatedBasis tab = tabulate(space.ref, rule);

  SparseSpdMatrix matrix = pattern_from_cells(space.node_count, space.cell_nodes, nb,
                                              space.mesh->cell_count());
  std::vector<double> local(static_cast<std::size_t>(nb) * nb);
  std::vector<Vec> physical_gradients(static_cast<std::size_t>(nb));

  for (int c = 0; c < space.mesh->cell_count(); ++c) {
    const CurvedElementMap& map = space.maps[static_cast<std::size_t>(c)];
    std::fill(local.begin(), local.end(), 0.0);
    for (int q = 0; q < rule.size(); ++q) {
      const double* phi = tab.values.data() + static_cast<std::size_t>(q) * nb;
      const Vec* grad = tab.gradients.data() + static_cast<std::size_t>(q) * nb;
      const JacobianResult jac = bulk_jacobian_from_gradients(map, grad);
      const double scale = rule.weights[static_cast<std::size_t>(q)] * jac.det;
      if (kind == BulkKind::Mass) {
        for (int a = 0; a < nb; ++a) {
          for (int b = 0; b <= a; ++b) {
            local[static_cast<std::size_t>(a) * nb + b] += scale * phi[a] * phi[b];
          }
        }
      } else {
        const Mat jinv_t = jac.matrix.inverse().transpose();
        for (int a = 0; a < nb; ++a) physical_gradients[static_cast<std::size_t>(a)] = jinv_t * grad[a];
        for (int a = 0; a < nb; ++a) {
          for (int b = 0; b <= a; ++b) {
            local[static_cast<std::size_t>(a) * nb + b] +=
                scale * physical_gradients[static_cast<std::size_t>(a)].dot(
                            physical_gradients[static_cast<std::size_t>(b)]);
          }
        }
      }
    }
    for (int a = 0; a < nb; ++a) {
      for (int b = 0; b <= a; ++b) {
        const double v = local[static_cast<std::size_t>(a) * nb + b];
        matrix.add(space.cell_node(c, a), space.cell_node(c, b), v);
        if (a != b) matrix.add(space.cell_node(c, b), space.cell_node(c, a), v);
      }
    }
  }
  return matrix;
}

enum class SurfaceKind { Mass, Stiffness };

SparseSpdMatrix assemble_surface(const FeSpace& space, SurfaceKind kind) {
  const int nfb = space.face_ref.node_count();
  const QuadratureRule rule =
      make_quadrature(space.mesh->dim - 1, assembly_quadrature_degree(space.degree));
  const TabulatedBasis tab = tabulate(space.face_ref, rule);

  SparseSpdMatrix matrix = surface_pattern(space);
  std::vector<double> local(static_cast<std::size_t>(nfb) * nfb);

  for (const auto& face : space.boundary_faces) {
    const CurvedElementMap& map = space.maps[static_cast<std::size_t>(face.cell)];
    const auto& fn = space.ref.face_nodes(face.local_face);
    std::fill(local.begin(), local.end(), 0.0);
    for (int q = 0; q < rule.size(); ++q) {
      const double* phi = tab.values.data() + static_cast<std::size_t>(q) * nfb;
      const Vec* grad = tab.gradients.data() + static_cast<std::size_t>(q) * nfb;
      Mat tangent = Mat::Zero(map.dim, map.dim - 1);
      for (int a = 0; a < nfb; ++a) {
        tangent += map.control_points[static_cast<std::size_t>(
                       fn[static_cast<std::size_t>(a)])] *
                   grad[a].transpose();
      }
      const Mat metric = tangent.transpose() * tangent;
      const double det = metric.determinant();
      if (!(det > 0.0)) {
        throw NumericalError("assemble_surface: degenerate face in cell " +
                             std::to_string(face.cell));
      }
      const double scale = rule.weights[static_cast<std::size_t>(q)] * std::sqrt(det);
      if (kind == SurfaceKind::Mass) {
        for (int a = 0; a < nfb; ++a) {
          for (int b = 0; b <= a; ++b) {
            local[static_cast<std::size_t>(a) * nfb + b] += scale * phi[a] * phi[b];
          }
        }
      } else {
        const Mat metric_inv = metric.inverse();
        for (int a = 0; a < nfb; ++a) {
          const Vec ga = metric_inv * grad[a];
          for (int b = 0; b <= a; ++b) {
            local[static_cast<std::size_t>(a) * nfb + b] +=
                scale * ga.dot(grad[b]);
          }
        }
      }
    }
    for (int a = 0; a < nfb; ++a) {
      for (int b = 0; b <= a; ++b) {
        const double v = local[static_cast<std::size_t>(a) * nfb + b];
        matrix.add(face.nodes[static_cast<std::size_t>(a)],
                   face.nodes[static_cast<std::size_t>(b)], v);
        if (a != b) {
          matrix.add(face.nodes[static_cast<std::size_t>(b)],
                     face.nodes[static_cast<std::size_t>(a)], v);
        }
      }
    }
  }
  return matrix;
}

}  // namespace

Vec FeSpace::node(int j) const {
  Vec x(mesh->dim);
  for (int d = 0; d < mesh->dim; ++d) {
    x[d] = node_coords[static_cast<std::size_t>(j) * mesh->dim + d];
  }
  return x;
}

FeSpace build_space(const Mesh& mesh, const Domain& domain, int degree) {
  FeSpace space{&mesh, &domain, degree, ReferenceElement(mesh.dim, degree),
                ReferenceElement(mesh.dim - 1, degree)};
  const int nb = space.ref.node_count();
  const int cell_count = mesh.cell_count();

  space.maps.reserve(static_cast<std::size_t>(cell_count));
  for (int c = 0; c < cell_count; ++c) {
    space.maps.push_back(build_curved_map(mesh, domain, space.ref, c));
  }

  // Global numbering through sub-entity keys; ids are handed out in cell and
  // lattice order, then permuted boundary-first.
  std::map<NodeKey, int> ids;
  space.cell_nodes.assign(static_cast<std::size_t>(cell_count) * nb, -1);
  std::vector<double> coords;
  int next = 0;
  for (int c = 0; c < cell_count; ++c) {
    const auto& cell = mesh.cells[static_cast<std::size_t>(c)];
    for (int a = 0; a < nb; ++a) {
      const auto& multi = space.ref.multi_index(a);
      NodeKey key;
      for (int s = 0; s <= mesh.dim; ++s) {
        if (multi[static_cast<std::size_t>(s)] > 0) {
          key.entries[static_cast<std::size_t>(key.size++)] = {
              cell[static_cast<std::size_t>(s)], multi[static_cast<std::size_t>(s)]};
        }
      }
      std::sort(key.entries.begin(), key.entries.begin() + key.size);
      for (int s = key.size; s < 4; ++s) key.entries[static_cast<std::size_t>(s)] = {-1, -1};

      auto [it, inserted] = ids.emplace(key, next);
      if (inserted) {
        const Vec x = space.maps[static_cast<std::size_t>(c)]
                          .control_points[static_cast<std::size_t>(a)];
        for (int d = 0; d < mesh.dim; ++d) coords.push_back(x[d]);
        ++next;
      }
      space.cell_nodes[static_cast<std::size_t>(c) * nb + a] = it->second;
    }
  }
  space.node_count = next;

  // Boundary-first renumbering of the global nodes.
  std::vector<bool> on_boundary(static_cast<std::size_t>(next), false);
  for (const auto& [c, f] : mesh.boundary_faces) {
    for (const int a : space.ref.face_nodes(f)) {
      on_boundary[static_cast<std::size_t>(
          space.cell_nodes[static_cast<std::size_t>(c) * nb + a])] = true;
    }
  }
  std::vector<int> new_of_old(static_cast<std::size_t>(next));
  int counter = 0;
  for (int j = 0; j < next; ++j) {
    if (on_boundary[static_cast<std::size_t>(j)]) new_of_old[static_cast<std::size_t>(j)] = counter++;
  }
  space.boundary_node_count = counter;
  for (int j = 0; j < next; ++j) {
    if (!on_boundary[static_cast<std::size_t>(j)]) new_of_old[static_cast<std::size_t>(j)] = counter++;
  }
  for (int& id : space.cell_nodes) id = new_of_old[static_cast<std::size_t>(id)];
  space.node_coords.resize(coords.size());
  for (int j = 0; j < next; ++j) {
    for (int d = 0; d < mesh.dim; ++d) {
      space.node_coords[static_cast<std::size_t>(new_of_old[static_cast<std::size_t>(j)]) *
                            mesh.dim + d] = coords[static_cast<std::size_t>(j) * mesh.dim + d];
    }
  }

  space.boundary_faces.reserve(mesh.boundary_faces.size());
  for (const auto& [c, f] : mesh.boundary_faces) {
    FeSpace::BoundaryFace face;
    face.cell = c;
    face.local_face = f;
    for (const int a : space.ref.face_nodes(f)) {
      face.nodes.push_back(space.cell_nodes[static_cast<std::size_t>(c) * nb + a]);
    }
    space.boundary_faces.push_back(std::move(face));
  }
  return space;
}

SparseSpdMatrix assemble_bulk_mass(const FeSpace& space) {
  return assemble_bulk(space, BulkKind::Mass);
}

SparseSpdMatrix assemble_bulk_stiffness(const FeSpace& space) {
  return assemble_bulk(space, BulkKind::Stiffness);
}

SparseSpdMatrix assemble_surface_mass(const FeSpace& space) {
  return assemble_surface(space, SurfaceKind::Mass);
}

SparseSpdMatrix assemble_surface_stiffness(const FeSpace& space) {
  return assemble_surface(space, SurfaceKind::Stiffness);
}

std::vector<double> trace_restrict(const FeSpace& space, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != space.node_count) {
    throw std::invalid_argument("trace_restrict: length mismatch");
  }
  return std::vector<double>(v.begin(), v.begin() + space.boundary_node_count);
}

std::vector<double> trace_prolong(const FeSpace& space, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != space.boundary_node_count) {
    throw std::invalid_argument("trace_prolong: length mismatch");
  }
  std::vector<double> out(static_cast<std::size_t>(space.node_count), 0.0);
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

void check_parameters(double alpha, double beta, double kappa) {
  if (alpha < 0.0 || beta < 0.0 || kappa < 0.0) {
    throw std::invalid_argument("system_matrix: parameters must be nonnegative");
  }
  if (alpha == 0.0 && kappa == 0.0) {
    throw std::invalid_argument(
        "system_matrix: alpha = kappa = 0 leaves a singular Neumann operator");
  }
}

SparseSpdMatrix combine_system(const SparseSpdMatrix& bulk_mass,
                               const SparseSpdMatrix& bulk_stiffness,
                               const SparseSpdMatrix& surface_mass,
                               const SparseSpdMatrix& surface_stiffness,
                               double alpha, double beta, double kappa) {
  check_parameters(alpha, beta, kappa);
  const int n = bulk_mass.rows();
  std::vector<std::vector<int>> columns(static_cast<std::size_t>(n));
  auto collect = [&](const SparseSpdMatrix& m) {
    for (int i = 0; i < m.rows(); ++i) {
      for (int idx = m.row_offsets()[static_cast<std::size_t>(i)];
           idx < m.row_offsets()[static_cast<std::size_t>(i) + 1]; ++idx) {
        columns[static_cast<std::size_t>(i)].push_back(
            m.columns()[static_cast<std::size_t>(idx)]);
      }
    }
  };
  collect(bulk_mass);
  collect(bulk_stiffness);
  collect(surface_mass);
  collect(surface_stiffness);
  SparseSpdMatrix combined = SparseSpdMatrix::from_pattern(std::move(columns));

  auto accumulate = [&](const SparseSpdMatrix& m, double factor) {
    if (factor == 0.0) return;
    for (int i = 0; i < m.rows(); ++i) {
      for (int idx = m.row_offsets()[static_cast<std::size_t>(i)];
           idx < m.row_offsets()[static_cast<std::size_t>(i) + 1]; ++idx) {
        combined.add(i, m.columns()[static_cast<std::size_t>(idx)],
                     factor * m.values()[static_cast<std::size_t>(idx)]);
      }
    }
  };
  accumulate(bulk_stiffness, 1.0);
  accumulate(bulk_mass, kappa);
  accumulate(surface_mass, alpha);
  accumulate(surface_stiffness, beta);
  return combined;
}

SparseSpdMatrix system_matrix(const FeSpace& space, double alpha, double beta,
                              double kappa) {
  check_parameters(alpha, beta, kappa);
  return combine_system(assemble_bulk_mass(space), assemble_bulk_stiffness(space),
                        assemble_surface_mass(space), assemble_surface_stiffness(space),
                        alpha, beta, kappa);
}

std::vector<double> load_vector(const SparseSpdMatrix& bulk_mass,
                                const SparseSpdMatrix& surface_mass,
                                const std::vector<double>& f_nodal,
                                const std::vector<double>& g_nodal) {
  if (static_cast<int>(f_nodal.size()) != bulk_mass.rows() ||
      static_cast<int>(g_nodal.size()) != surface_mass.rows()) {
    throw std::invalid_argument("load_vector: coefficient length mismatch");
  }
  std::vector<double> b = bulk_mass.multiply(f_nodal);
  const std::vector<double> surf = surface_mass.multiply(g_nodal);
  for (std::size_t i = 0; i < surf.size(); ++i) b[i] += surf[i];
  return b;
}

std::vector<double> load_vector(const FeSpace& space, const std::vector<double>& f_nodal,
                                const std::vector<double>& g_nodal) {
  return load_vector(assemble_bulk_mass(space), assemble_surface_mass(space), f_nodal,
                     g_nodal);
}

}  // namespace grpfem
