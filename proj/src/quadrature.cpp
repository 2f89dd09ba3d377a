#include "grpfem/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace grpfem {

namespace {

struct Rule1d {
  std::vector<double> points;
  std::vector<double> weights;
};

// Gauss rule for the weight (1-t)^alpha on [0,1] by Golub--Welsch on the
// Jacobi matrix of the (alpha, 0) Jacobi polynomials. alpha = 0 gives plain
// Gauss--Legendre. Exact for weighted polynomials of degree <= 2m-1.
Rule1d gauss_jacobi_01(int m, int alpha) {
  const double a = static_cast<double>(alpha);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    const double n = static_cast<double>(i);
    double diag;
    if (i == 0) {
      diag = -a / (a + 2.0);
    } else {
      diag = (-a * a) / ((2.0 * n + a) * (2.0 * n + a + 2.0));
    }
    jac(i, i) = diag;
    if (i >= 1) {
      const double num = 4.0 * n * (n + a) * n * (n + a);
      const double den = (2.0 * n + a) * (2.0 * n + a) *
                         (2.0 * n + a + 1.0) * (2.0 * n + a - 1.0);
      const double off = std::sqrt(num / den);
      jac(i, i - 1) = off;
      jac(i - 1, i) = off;
    }
  }
  // Total mass of (1-x)^alpha on [-1,1].
  const double mu0 = std::pow(2.0, a + 1.0) / (a + 1.0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  Rule1d rule;
  rule.points.resize(m);
  rule.weights.resize(m);
  const double scale = std::pow(2.0, -(a + 1.0));
  for (int i = 0; i < m; ++i) {
    const double x = es.eigenvalues()(i);
    const double w = mu0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    rule.points[i] = 0.5 * (x + 1.0);
    rule.weights[i] = w * scale;
  }
  return rule;
}

int point_count(int degree) { return degree / 2 + 1; }

QuadratureRule interval_rule(int degree) {
  const Rule1d gl = gauss_jacobi_01(point_count(degree), 0);
  QuadratureRule rule;
  rule.dim = 1;
  rule.exactness_degree = degree;
  for (std::size_t i = 0; i < gl.points.size(); ++i) {
    Vec p(1);
    p << gl.points[i];
    rule.points.push_back(p);
    rule.weights.push_back(gl.weights[i]);
  }
  return rule;
}

// Stroud conical product on the unit triangle:
//   int_T f = int_0^1 int_0^1 f(xi, eta (1-xi)) (1-xi) deta dxi.
QuadratureRule triangle_rule(int degree) {
  const int m = point_count(degree);
  const Rule1d gj1 = gauss_jacobi_01(m, 1);
  const Rule1d gl = gauss_jacobi_01(m, 0);
  QuadratureRule rule;
  rule.dim = 2;
  rule.exactness_degree = degree;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double xi = gj1.points[i];
      const double eta = gl.points[j];
      rule.points.push_back(make_vec(xi, eta * (1.0 - xi)));
      rule.weights.push_back(gj1.weights[i] * gl.weights[j]);
    }
  }
  return rule;
}

QuadratureRule tetrahedron_rule(int degree) {
  if (degree == 2) {
    // Classical symmetric 4-point rule, exact for quadratics.
    const double a = (5.0 + 3.0 * std::sqrt(5.0)) / 20.0;
    const double b = (5.0 - std::sqrt(5.0)) / 20.0;
    QuadratureRule rule;
    rule.dim = 3;
    rule.exactness_degree = 2;
    rule.points = {make_vec(a, b, b), make_vec(b, a, b), make_vec(b, b, a),
                   make_vec(b, b, b)};
    rule.weights = {1.0 / 24.0, 1.0 / 24.0, 1.0 / 24.0, 1.0 / 24.0};
    return rule;
  }
  // Conical product: x = xi, y = eta(1-xi), z = zeta(1-xi)(1-eta),
  // Jacobian (1-xi)^2 (1-eta).
  const int m = point_count(degree);
  const Rule1d gj2 = gauss_jacobi_01(m, 2);
  const Rule1d gj1 = gauss_jacobi_01(m, 1);
  const Rule1d gl = gauss_jacobi_01(m, 0);
  QuadratureRule rule;
  rule.dim = 3;
  rule.exactness_degree = degree;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int l = 0; l < m; ++l) {
        const double xi = gj2.points[i];
        const double eta = gj1.points[j];
        const double zeta = gl.points[l];
        rule.points.push_back(make_vec(xi, eta * (1.0 - xi),
                                       zeta * (1.0 - xi) * (1.0 - eta)));
        rule.weights.push_back(gj2.weights[i] * gj1.weights[j] * gl.weights[l]);
      }
    }
  }
  return rule;
}

}  // namespace

QuadratureRule make_quadrature(int dim, int degree) {
  if (degree < 0 || degree > 30) {
    throw std::invalid_argument("make_quadrature: unsupported exactness degree " +
                                std::to_string(degree));
  }
  switch (dim) {
    case 1:
      return interval_rule(degree);
    case 2:
      return triangle_rule(degree);
    case 3:
      return tetrahedron_rule(degree);
    default:
      throw std::invalid_argument("make_quadrature: unsupported dimension " +
                                  std::to_string(dim));
  }
}

double simplex_monomial_integral(int dim, const int* exponents) {
  auto factorial = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  double num = 1.0;
  int total = 0;
  for (int d = 0; d < dim; ++d) {
    num *= factorial(exponents[d]);
    total += exponents[d];
  }
  return num / factorial(total + dim);
}

}  // namespace grpfem
