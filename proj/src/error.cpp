#include "grpfem/error.hpp"

#include "grpfem/quadrature.hpp"

#include <cmath>

namespace grpfem {

namespace {

int error_quadrature_degree(int k) { return 2 * k + 4; }

void validate_derivatives(const ExactSolution& u) {
  // Spot-check the hand-derived gradient and Laplacian against central
  // differences before they feed manufactured right-hand sides.
  const double step = 1e-5;
  const int samples = 20;
  unsigned state = 12345u;
  auto next = [&state]() {
    state = 1664525u * state + 1013904223u;
    return static_cast<double>(state >> 8) / static_cast<double>(1u << 24) - 0.5;
  };
  for (int s = 0; s < samples; ++s) {
    Vec x(u.dim);
    for (int d = 0; d < u.dim; ++d) x[d] = next();
    const Vec grad = u.gradient(x);
    const Mat hess = u.hessian(x);
    double lap_fd = 0.0;
    for (int d = 0; d < u.dim; ++d) {
      Vec xp = x, xm = x;
      xp[d] += step;
      xm[d] -= step;
      const double fd = (u.value(xp) - u.value(xm)) / (2.0 * step);
      if (std::abs(fd - grad[d]) > 1e-5 * (1.0 + std::abs(grad[d]))) {
        throw NumericalError("builtin_solution '" + u.name + "': gradient mismatch");
      }
      lap_fd += (u.value(xp) - 2.0 * u.value(x) + u.value(xm)) / (step * step);
      const Vec row_fd = (u.gradient(xp) - u.gradient(xm)) / (2.0 * step);
      for (int e = 0; e < u.dim; ++e) {
        if (std::abs(row_fd[e] - hess(d, e)) > 1e-4 * (1.0 + std::abs(hess(d, e)))) {
          throw NumericalError("builtin_solution '" + u.name + "': Hessian mismatch");
        }
      }
    }
    if (std::abs(lap_fd - u.laplacian(x)) > 1e-4 * (1.0 + std::abs(u.laplacian(x)))) {
      throw NumericalError("builtin_solution '" + u.name + "': Laplacian mismatch");
    }
  }
}

ExactSolution poly_2d() {
  ExactSolution u;
  u.dim = 2;
  u.name = "poly";
  u.value = [](const Vec& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    return x[0] * x[1] * r2 * r2;
  };
  u.gradient = [](const Vec& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    return make_vec(x[1] * r2 * r2 + 4.0 * x[0] * x[0] * x[1] * r2,
                    x[0] * r2 * r2 + 4.0 * x[0] * x[1] * x[1] * r2);
  };
  u.hessian = [](const Vec& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    Mat h(2, 2);
    h(0, 0) = 12.0 * x[0] * x[1] * r2 + 8.0 * x[0] * x[0] * x[0] * x[1];
    h(1, 1) = 12.0 * x[0] * x[1] * r2 + 8.0 * x[0] * x[1] * x[1] * x[1];
    h(0, 1) = h(1, 0) = r2 * r2 + 4.0 * r2 * r2 + 8.0 * x[0] * x[0] * x[1] * x[1];
    return h;
  };
  u.laplacian = [](const Vec& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    return 32.0 * x[0] * x[1] * r2;
  };
  return u;
}

ExactSolution poly_3d() {
  ExactSolution u;
  u.dim = 3;
  u.name = "poly";
  u.value = [](const Vec& x) {
    return x[0] * x[0] + x[1] * x[1] - x[0] * x[0] * x[2] * x[2];
  };
  u.gradient = [](const Vec& x) {
    return make_vec(2.0 * x[0] - 2.0 * x[0] * x[2] * x[2], 2.0 * x[1],
                    -2.0 * x[0] * x[0] * x[2]);
  };
  u.hessian = [](const Vec& x) {
    Mat h = Mat::Zero(3, 3);
    h(0, 0) = 2.0 - 2.0 * x[2] * x[2];
    h(1, 1) = 2.0;
    h(2, 2) = -2.0 * x[0] * x[0];
    h(0, 2) = h(2, 0) = -4.0 * x[0] * x[2];
    return h;
  };
  u.laplacian = [](const Vec& x) {
    return 4.0 - 2.0 * x[2] * x[2] - 2.0 * x[0] * x[0];
  };
  return u;
}

ExactSolution constant_one(int dim) {
  ExactSolution u;
  u.dim = dim;
  u.name = "one";
  u.value = [](const Vec&) { return 1.0; };
  u.gradient = [dim](const Vec&) { return Vec(Vec::Zero(dim)); };
  u.hessian = [dim](const Vec&) { return Mat(Mat::Zero(dim, dim)); };
  u.laplacian = [](const Vec&) { return 0.0; };
  return u;
}

}  // namespace

ExactSolution builtin_solution(const std::string& name, int dim) {
  ExactSolution u;
  if (name == "poly") {
    u = dim == 2 ? poly_2d() : poly_3d();
  } else if (name == "one") {
    u = constant_one(dim);
  } else {
    throw ConfigError("unknown built-in solution '" + name + "'");
  }
  validate_derivatives(u);
  return u;
}

ProblemData manufactured_rhs(const ExactSolution& exact, double alpha, double beta,
                             double kappa, const Domain& domain) {
  if (exact.dim != domain.dimension()) {
    throw std::invalid_argument("manufactured_rhs: dimension mismatch");
  }
  ProblemData data;
  data.f = [exact, kappa](const Vec& x) {
    return -exact.laplacian(x) + kappa * exact.value(x);
  };
  const int n = exact.dim;
  data.g = [exact, alpha, beta, n, domain](const Vec& s) {
    const Vec nu = domain.outward_normal(s);
    const Vec grad = exact.gradient(s);
    const double du_dnu = grad.dot(nu);
    const double d_rr = nu.dot(exact.hessian(s) * nu);
    const double lap_gamma = exact.laplacian(s) - (n - 1) * du_dnu - d_rr;
    return du_dnu + alpha * exact.value(s) - beta * lap_gamma;
  };
  return data;
}

std::pair<Vec, Vec> lift_pair(const CurvedElementMap& map, const Domain& domain,
                              const ReferenceElement& ref, const Vec& xhat) {
  return {exact_map(map, domain, xhat), isoparametric_map(map, ref, xhat)};
}

namespace {

struct QuadratureContext {
  QuadratureRule bulk_rule;
  QuadratureRule face_rule;
  std::vector<double> bulk_values;
  std::vector<Vec> bulk_gradients;
  std::vector<double> face_values;   // bulk basis at embedded face points
  std::vector<Vec> face_gradients;   // bulk basis gradients there
  std::vector<Vec> face_points;      // embedded reference points
  Mat embedding;                     // dim x (dim-1), boundary face only
};

QuadratureContext make_context(const FeSpace& space) {
  const int dim = space.mesh->dim;
  const int nb = space.ref.node_count();
  QuadratureContext ctx;
  ctx.bulk_rule = make_quadrature(dim, error_quadrature_degree(space.degree));
  ctx.face_rule = make_quadrature(dim - 1, error_quadrature_degree(space.degree));
  ctx.bulk_values.resize(static_cast<std::size_t>(ctx.bulk_rule.size()) * nb);
  ctx.bulk_gradients.resize(static_cast<std::size_t>(ctx.bulk_rule.size()) * nb);
  for (int q = 0; q < ctx.bulk_rule.size(); ++q) {
    space.ref.eval_basis(ctx.bulk_rule.points[static_cast<std::size_t>(q)],
                         ctx.bulk_values.data() + static_cast<std::size_t>(q) * nb);
    space.ref.eval_basis_gradients(
        ctx.bulk_rule.points[static_cast<std::size_t>(q)],
        ctx.bulk_gradients.data() + static_cast<std::size_t>(q) * nb);
  }
  // Boundary faces always sit opposite the last cell vertex.
  ctx.embedding = face_embedding_matrix(dim, dim);
  ctx.face_values.resize(static_cast<std::size_t>(ctx.face_rule.size()) * nb);
  ctx.face_gradients.resize(static_cast<std::size_t>(ctx.face_rule.size()) * nb);
  for (int q = 0; q < ctx.face_rule.size(); ++q) {
    const Vec xhat =
        embed_face_point(dim, dim, ctx.face_rule.points[static_cast<std::size_t>(q)]);
    ctx.face_points.push_back(xhat);
    space.ref.eval_basis(xhat, ctx.face_values.data() + static_cast<std::size_t>(q) * nb);
    space.ref.eval_basis_gradients(
        xhat, ctx.face_gradients.data() + static_cast<std::size_t>(q) * nb);
  }
  return ctx;
}

struct Accumulator {
  double bulk_l2 = 0.0;
  double bulk_h1 = 0.0;
  double surf_l2 = 0.0;
  double surf_h1 = 0.0;
};

// Shared bulk/surface sweep: with an exact solution it accumulates the
// squared error integrands, without one the squared norms of u_h itself.
Accumulator sweep(const FeSpace& space, const std::vector<double>& u_h,
                  const ExactSolution* exact) {
  const int dim = space.mesh->dim;
  const int nb = space.ref.node_count();
  const Domain& domain = *space.domain;
  const QuadratureContext ctx = make_context(space);
  Accumulator acc;

  for (int c = 0; c < space.mesh->cell_count(); ++c) {
    const CurvedElementMap& map = space.maps[static_cast<std::size_t>(c)];
    for (int q = 0; q < ctx.bulk_rule.size(); ++q) {
      const double* phi = ctx.bulk_values.data() + static_cast<std::size_t>(q) * nb;
      const Vec* grad = ctx.bulk_gradients.data() + static_cast<std::size_t>(q) * nb;
      const Vec& xhat = ctx.bulk_rule.points[static_cast<std::size_t>(q)];
      const Mat jac = exact_map_jacobian(map, domain, xhat);
      const double det = jac.determinant();
      if (!(det > 0.0)) {
        throw NumericalError("error_norms: exact map folds in cell " + std::to_string(c));
      }
      double uh = 0.0;
      Vec ref_grad = Vec::Zero(dim);
      for (int a = 0; a < nb; ++a) {
        const double coeff = u_h[static_cast<std::size_t>(space.cell_node(c, a))];
        uh += coeff * phi[a];
        ref_grad += coeff * grad[a];
      }
      const Vec lifted_grad = jac.inverse().transpose() * ref_grad;
      const double w = ctx.bulk_rule.weights[static_cast<std::size_t>(q)] * det;
      if (exact != nullptr) {
        const Vec point = exact_map(map, domain, xhat);
        const double dv = exact->value(point) - uh;
        acc.bulk_l2 += w * dv * dv;
        acc.bulk_h1 += w * (exact->gradient(point) - lifted_grad).squaredNorm();
      } else {
        acc.bulk_l2 += w * uh * uh;
        acc.bulk_h1 += w * lifted_grad.squaredNorm();
      }
    }
  }

  for (const auto& face : space.boundary_faces) {
    const CurvedElementMap& map = space.maps[static_cast<std::size_t>(face.cell)];
    for (int q = 0; q < ctx.face_rule.size(); ++q) {
      const double* phi = ctx.face_values.data() + static_cast<std::size_t>(q) * nb;
      const Vec* grad = ctx.face_gradients.data() + static_cast<std::size_t>(q) * nb;
      const Vec& xhat = ctx.face_points[static_cast<std::size_t>(q)];
      const Mat jac = exact_map_jacobian(map, domain, xhat);
      const Mat tangent = jac * ctx.embedding;  // dim x (dim-1)
      const Mat metric = tangent.transpose() * tangent;
      const double det = metric.determinant();
      if (!(det > 0.0)) {
        throw NumericalError("error_norms: degenerate exact face in cell " +
                             std::to_string(face.cell));
      }
      const double measure = std::sqrt(det);
      double uh = 0.0;
      Vec ref_grad = Vec::Zero(dim);
      for (int a = 0; a < nb; ++a) {
        const double coeff =
            u_h[static_cast<std::size_t>(space.cell_node(face.cell, a))];
        uh += coeff * phi[a];
        ref_grad += coeff * grad[a];
      }
      const Vec face_grad = ctx.embedding.transpose() * ref_grad;  // (dim-1)
      const Vec surface_grad = tangent * (metric.inverse() * face_grad);
      const double w = ctx.face_rule.weights[static_cast<std::size_t>(q)] * measure;
      if (exact != nullptr) {
        const Vec point = exact_map(map, domain, xhat);  // on Gamma
        const Vec nu = domain.outward_normal(point);
        const Vec exact_tangential = tangential_gradient(exact->gradient(point), nu);
        const double dv = exact->value(point) - uh;
        acc.surf_l2 += w * dv * dv;
        acc.surf_h1 += w * (exact_tangential - surface_grad).squaredNorm();
      } else {
        acc.surf_l2 += w * uh * uh;
        acc.surf_h1 += w * surface_grad.squaredNorm();
      }
    }
  }
  return acc;
}

}  // namespace

ErrorPair error_norms(const FeSpace& space, const std::vector<double>& u_h,
                      const ExactSolution& exact) {
  if (static_cast<int>(u_h.size()) != space.node_count) {
    throw std::invalid_argument("error_norms: coefficient length mismatch");
  }
  const Accumulator acc = sweep(space, u_h, &exact);
  ErrorPair err;
  err.l2 = std::sqrt(acc.bulk_l2 + acc.surf_l2);
  err.h1 = std::sqrt(acc.bulk_l2 + acc.bulk_h1 + acc.surf_l2 + acc.surf_h1);
  return err;
}

NormTriple lifted_norms(const FeSpace& space, const std::vector<double>& u_h) {
  if (static_cast<int>(u_h.size()) != space.node_count) {
    throw std::invalid_argument("lifted_norms: coefficient length mismatch");
  }
  const Accumulator acc = sweep(space, u_h, nullptr);
  NormTriple norms;
  norms.l2 = std::sqrt(acc.bulk_l2);
  norms.h1_semi = std::sqrt(acc.bulk_h1);
  norms.surface_semi = std::sqrt(acc.surf_h1);
  return norms;
}

std::vector<double> interpolate(const FeSpace& space,
                                const std::function<double(const Vec&)>& fn) {
  std::vector<double> coeffs(static_cast<std::size_t>(space.node_count));
  for (int j = 0; j < space.node_count; ++j) coeffs[static_cast<std::size_t>(j)] = fn(space.node(j));
  return coeffs;
}

std::vector<double> interpolate_boundary(const FeSpace& space,
                                         const std::function<double(const Vec&)>& fn) {
  std::vector<double> coeffs(static_cast<std::size_t>(space.boundary_node_count));
  for (int j = 0; j < space.boundary_node_count; ++j) {
    coeffs[static_cast<std::size_t>(j)] = fn(space.node(j));
  }
  return coeffs;
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs) {
  if (errors.size() != hs.size() || errors.size() < 2) {
    throw std::invalid_argument("eoc: need two or more matching entries");
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0) || !(hs[i] > 0.0)) {
      throw std::invalid_argument("eoc: entries must be positive");
    }
  }
  std::vector<double> orders;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    orders.push_back(std::log(errors[i - 1] / errors[i]) / std::log(hs[i - 1] / hs[i]));
  }
  return orders;
}

}  // namespace grpfem
