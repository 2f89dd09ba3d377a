#include "grpfem/element.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace grpfem {

namespace {

constexpr int kMaxDegree = 30;

// One-dimensional equispaced Lagrange factors: P_m(t) = prod_{r<m} (k t - r)/(m - r).
// P_m(i/k) = delta_{mi} for lattice values i = 0..k restricted to the simplex.
void factor_table(int k, double t, double* value, double* derivative) {
  value[0] = 1.0;
  derivative[0] = 0.0;
  for (int m = 1; m <= k; ++m) {
    const double factor = (k * t - (m - 1)) / m;
    derivative[m] = derivative[m - 1] * factor + value[m - 1] * (static_cast<double>(k) / m);
    value[m] = value[m - 1] * factor;
  }
}

void barycentric(int dim, const Vec& x, double* lambda) {
  double sum = 0.0;
  for (int d = 0; d < dim; ++d) {
    lambda[d + 1] = x[d];
    sum += x[d];
  }
  lambda[0] = 1.0 - sum;
}

}  // namespace

ReferenceElement::ReferenceElement(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 1 || dim > 3) {
    throw std::invalid_argument("ReferenceElement: dimension must be 1, 2 or 3");
  }
  if (degree < 1 || degree > kMaxDegree) {
    throw std::invalid_argument("ReferenceElement: unsupported degree");
  }
  const int k = degree;
  if (dim == 1) {
    for (int i1 = 0; i1 <= k; ++i1) {
      multis_.push_back({k - i1, i1, 0, 0});
    }
  } else if (dim == 2) {
    for (int i1 = 0; i1 <= k; ++i1) {
      for (int i2 = 0; i2 <= k - i1; ++i2) {
        multis_.push_back({k - i1 - i2, i1, i2, 0});
      }
    }
  } else {
    for (int i1 = 0; i1 <= k; ++i1) {
      for (int i2 = 0; i2 <= k - i1; ++i2) {
        for (int i3 = 0; i3 <= k - i1 - i2; ++i3) {
          multis_.push_back({k - i1 - i2 - i3, i1, i2, i3});
        }
      }
    }
  }
  nodes_.reserve(multis_.size());
  for (const auto& multi : multis_) {
    Vec node(dim);
    for (int d = 0; d < dim; ++d) node[d] = static_cast<double>(multi[d + 1]) / k;
    nodes_.push_back(node);
  }

  face_nodes_.resize(static_cast<std::size_t>(dim) + 1);
  if (dim == 1) {
    face_nodes_[0] = {vertex_node(0)};
    face_nodes_[1] = {vertex_node(1)};
  } else {
    const ReferenceElement face_element(dim - 1, degree);
    for (int f = 0; f <= dim; ++f) {
      std::vector<int> slots;
      for (int s = 0; s <= dim; ++s) {
        if (s != f) slots.push_back(s);
      }
      for (const auto& face_multi : face_element.multis_) {
        std::array<int, 4> multi = {0, 0, 0, 0};
        for (int t = 0; t < dim; ++t) multi[static_cast<std::size_t>(slots[t])] = face_multi[t];
        face_nodes_[static_cast<std::size_t>(f)].push_back(lattice_index(multi));
      }
    }
  }
}

int ReferenceElement::lattice_index(const std::array<int, 4>& multi) const {
  for (std::size_t j = 0; j < multis_.size(); ++j) {
    if (multis_[j] == multi) return static_cast<int>(j);
  }
  throw std::logic_error("ReferenceElement: lattice index lookup failed");
}

int ReferenceElement::vertex_node(int v) const {
  std::array<int, 4> multi = {0, 0, 0, 0};
  multi[static_cast<std::size_t>(v)] = degree_;
  return lattice_index(multi);
}

void ReferenceElement::eval_basis(const Vec& x, double* values) const {
  double lambda[4];
  barycentric(dim_, x, lambda);
  double table[4][kMaxDegree + 1];
  double dtable[4][kMaxDegree + 1];
  for (int j = 0; j <= dim_; ++j) factor_table(degree_, lambda[j], table[j], dtable[j]);
  for (std::size_t a = 0; a < multis_.size(); ++a) {
    double v = 1.0;
    for (int j = 0; j <= dim_; ++j) v *= table[j][multis_[a][static_cast<std::size_t>(j)]];
    values[a] = v;
  }
}

void ReferenceElement::eval_basis_gradients(const Vec& x, Vec* gradients) const {
  double lambda[4];
  barycentric(dim_, x, lambda);
  double table[4][kMaxDegree + 1];
  double dtable[4][kMaxDegree + 1];
  for (int j = 0; j <= dim_; ++j) factor_table(degree_, lambda[j], table[j], dtable[j]);
  for (std::size_t a = 0; a < multis_.size(); ++a) {
    // d/d lambda_j of the factor product, then chain through
    // grad lambda_0 = -1, grad lambda_j = e_j.
    double dl[4];
    for (int j = 0; j <= dim_; ++j) {
      double prod = dtable[j][multis_[a][static_cast<std::size_t>(j)]];
      for (int i = 0; i <= dim_; ++i) {
        if (i != j) prod *= table[i][multis_[a][static_cast<std::size_t>(i)]];
      }
      dl[j] = prod;
    }
    Vec g(dim_);
    for (int d = 0; d < dim_; ++d) g[d] = dl[d + 1] - dl[0];
    gradients[a] = g;
  }
}

std::pair<Mat, Vec> affine_map(const Mesh& mesh, int cell) {
  const int n = mesh.dim;
  const auto& ids = mesh.cells[static_cast<std::size_t>(cell)];
  const Vec origin = mesh.vertex(ids[0]);
  Mat B(n, n);
  for (int j = 0; j < n; ++j) B.col(j) = mesh.vertex(ids[j + 1]) - origin;
  if (B.determinant() <= 0.0) {
    throw NumericalError("affine_map: non-positive orientation in cell " +
                         std::to_string(cell));
  }
  return {B, origin};
}

double lambda_star(const Vec& xhat, int l) {
  double lam0 = 1.0;
  for (int d = 0; d < xhat.size(); ++d) lam0 -= xhat[d];
  double sum = l >= 1 ? lam0 : 0.0;
  for (int j = 1; j < l; ++j) sum += xhat[j - 1];
  return sum;
}

Vec face_projection_y(const CurvedElementMap& map, const Vec& xhat) {
  const int l = map.boundary_vertex_count;
  const double star = lambda_star(xhat, l);
  if (!(star > 0.0)) {
    throw std::invalid_argument("face_projection_y: lambda* vanishes");
  }
  double lam0 = 1.0;
  for (int d = 0; d < xhat.size(); ++d) lam0 -= xhat[d];
  Vec y = Vec::Zero(map.dim);
  for (int j = 0; j < l; ++j) {
    const double lam = j == 0 ? lam0 : xhat[j - 1];
    y += (lam / star) * map.vertices[static_cast<std::size_t>(j)];
  }
  return y;
}

Vec rho(const CurvedElementMap& map, const Domain& domain, const Vec& xhat) {
  const int l = map.boundary_vertex_count;
  if (l < 2) return Vec::Zero(map.dim);
  const double star = lambda_star(xhat, l);
  if (star < 1e-13) return Vec::Zero(map.dim);
  const Vec y = face_projection_y(map, xhat);
  return std::pow(star, map.degree + 2) * (domain.closest_point(y) - y);
}

Mat rho_jacobian(const CurvedElementMap& map, const Domain& domain, const Vec& xhat) {
  const int n = map.dim;
  const int l = map.boundary_vertex_count;
  if (l < 2) return Mat::Zero(n, n);
  const double star = lambda_star(xhat, l);
  if (star < 1e-13) return Mat::Zero(n, n);

  const Vec y = face_projection_y(map, xhat);
  const Vec p = domain.closest_point(y);
  const Mat dp = domain.projection_jacobian(y);

  // Gradients of the barycentric coordinates: lambda_0 -> -1 in every
  // component, lambda_j -> e_j.
  Vec dstar = -Vec::Ones(n);  // from lambda_0, always in the boundary set
  for (int j = 1; j < l; ++j) dstar[j - 1] += 1.0;

  Mat dy(n, n);
  for (int m = 0; m < n; ++m) {
    Vec col = Vec::Zero(n);
    col -= map.vertices[0];  // d lambda_0 / d xhat_m = -1
    if (m + 1 < l) col += map.vertices[static_cast<std::size_t>(m + 1)];
    col -= y * dstar[m];
    dy.col(m) = col / star;
  }

  const double pow1 = std::pow(star, map.degree + 1);
  Mat jac = (map.degree + 2) * pow1 * (p - y) * dstar.transpose();
  jac += star * pow1 * (dp - Mat::Identity(n, n)) * dy;
  return jac;
}

Vec exact_map(const CurvedElementMap& map, const Domain& domain, const Vec& xhat) {
  Vec x = map.affine_matrix * xhat + map.affine_offset;
  if (map.curved()) x += rho(map, domain, xhat);
  return x;
}

Mat exact_map_jacobian(const CurvedElementMap& map, const Domain& domain,
                       const Vec& xhat) {
  Mat jac = map.affine_matrix;
  if (map.curved()) jac += rho_jacobian(map, domain, xhat);
  return jac;
}

Vec isoparametric_map(const CurvedElementMap& map, const ReferenceElement& ref,
                      const Vec& xhat) {
  std::vector<double> values(static_cast<std::size_t>(ref.node_count()));
  ref.eval_basis(xhat, values.data());
  Vec x = Vec::Zero(map.dim);
  for (int a = 0; a < ref.node_count(); ++a) {
    x += values[static_cast<std::size_t>(a)] * map.control_points[static_cast<std::size_t>(a)];
  }
  return x;
}

JacobianResult bulk_jacobian_from_gradients(const CurvedElementMap& map,
                                            const Vec* gradients) {
  const int n = map.dim;
  JacobianResult result;
  result.matrix = Mat::Zero(n, n);
  for (std::size_t a = 0; a < map.control_points.size(); ++a) {
    result.matrix += map.control_points[a] * gradients[a].transpose();
  }
  result.det = result.matrix.determinant();
  if (!(result.det > 0.0)) {
    throw NumericalError("bulk_jacobian: non-positive determinant in cell " +
                         std::to_string(map.cell));
  }
  return result;
}

JacobianResult bulk_jacobian(const CurvedElementMap& map, const ReferenceElement& ref,
                             const Vec& xhat) {
  std::vector<Vec> gradients(static_cast<std::size_t>(ref.node_count()));
  ref.eval_basis_gradients(xhat, gradients.data());
  return bulk_jacobian_from_gradients(map, gradients.data());
}

Vec embed_face_point(int dim, int local_face, const Vec& xhat_face) {
  Vec x = Vec::Zero(dim);
  double mu0 = 1.0;
  for (int d = 0; d < dim - 1; ++d) mu0 -= xhat_face[d];
  int t = 0;
  for (int s = 0; s <= dim; ++s) {
    if (s == local_face) continue;
    const double mu = t == 0 ? mu0 : xhat_face[t - 1];
    if (s >= 1) x[s - 1] += mu;
    ++t;
  }
  return x;
}

Mat face_embedding_matrix(int dim, int local_face) {
  std::vector<int> slots;
  for (int s = 0; s <= dim; ++s) {
    if (s != local_face) slots.push_back(s);
  }
  auto ref_vertex = [&](int slot) {
    Vec v = Vec::Zero(dim);
    if (slot >= 1) v[slot - 1] = 1.0;
    return v;
  };
  Mat jac(dim, dim - 1);
  for (int t = 1; t < dim; ++t) {
    jac.col(t - 1) = ref_vertex(slots[static_cast<std::size_t>(t)]) - ref_vertex(slots[0]);
  }
  return jac;
}

FaceFrame face_jacobian(const CurvedElementMap& map, const ReferenceElement& ref,
                        const ReferenceElement& face_ref, int local_face,
                        const Vec& xhat_face) {
  const int n = map.dim;
  const auto& fn = ref.face_nodes(local_face);
  const int nfn = face_ref.node_count();
  std::vector<double> values(static_cast<std::size_t>(nfn));
  std::vector<Vec> gradients(static_cast<std::size_t>(nfn));
  face_ref.eval_basis(xhat_face, values.data());
  face_ref.eval_basis_gradients(xhat_face, gradients.data());

  FaceFrame frame;
  frame.tangent = Mat::Zero(n, n - 1);
  Vec point = Vec::Zero(n);
  for (int a = 0; a < nfn; ++a) {
    const Vec& cp = map.control_points[static_cast<std::size_t>(fn[static_cast<std::size_t>(a)])];
    frame.tangent += cp * gradients[static_cast<std::size_t>(a)].transpose();
    point += values[static_cast<std::size_t>(a)] * cp;
  }
  const Mat metric = frame.tangent.transpose() * frame.tangent;
  const double det = metric.determinant();
  if (!(det > 0.0)) {
    throw NumericalError("face_jacobian: degenerate face in cell " +
                         std::to_string(map.cell));
  }
  frame.measure = std::sqrt(det);

  Vec normal(n);
  if (n == 2) {
    const Vec t = frame.tangent.col(0);
    normal << t[1], -t[0];
  } else {
    const Vec a = frame.tangent.col(0);
    const Vec b = frame.tangent.col(1);
    normal << a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0];
  }
  normal.normalize();
  // Orient away from the cell vertex opposite the face.
  if (normal.dot(point - map.vertices[static_cast<std::size_t>(local_face)]) < 0.0) {
    normal = -normal;
  }
  frame.normal = normal;
  return frame;
}

CurvedElementMap build_curved_map(const Mesh& mesh, const Domain& domain,
                                  const ReferenceElement& ref, int cell) {
  CurvedElementMap map;
  map.cell = cell;
  map.dim = mesh.dim;
  map.degree = ref.degree();
  map.boundary_vertex_count = mesh.boundary_vertices_in_cell(cell);
  if (map.boundary_vertex_count == mesh.dim + 1) {
    throw NumericalError("build_curved_map: cell with every vertex on the boundary");
  }
  auto [B, b] = affine_map(mesh, cell);
  map.affine_matrix = B;
  map.affine_offset = b;
  map.vertices.reserve(static_cast<std::size_t>(mesh.dim) + 1);
  for (int s = 0; s <= mesh.dim; ++s) {
    map.vertices.push_back(mesh.vertex(mesh.cells[static_cast<std::size_t>(cell)][s]));
  }
  map.control_points.reserve(static_cast<std::size_t>(ref.node_count()));
  for (const Vec& node : ref.nodes()) {
    map.control_points.push_back(exact_map(map, domain, node));
  }
  return map;
}

double derivative_bound_sample(const CurvedElementMap& map, const Domain& domain,
                               int sample_degree) {
  if (!map.curved()) return 0.0;
  const Mat binv = map.affine_matrix.inverse();
  double bound = 0.0;
  auto probe = [&](const Vec& xhat) {
    const Eigen::MatrixXd m = rho_jacobian(map, domain, xhat) * binv;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    bound = std::max(bound, svd.singularValues()(0));
  };
  const int s = sample_degree;
  if (map.dim == 2) {
    for (int i = 0; i <= s; ++i) {
      for (int j = 0; j <= s - i; ++j) {
        probe(make_vec(static_cast<double>(i) / s, static_cast<double>(j) / s));
      }
    }
  } else {
    for (int i = 0; i <= s; ++i) {
      for (int j = 0; j <= s - i; ++j) {
        for (int l = 0; l <= s - i - j; ++l) {
          probe(make_vec(static_cast<double>(i) / s, static_cast<double>(j) / s,
                         static_cast<double>(l) / s));
        }
      }
    }
  }
  return bound;
}

}  // namespace grpfem
