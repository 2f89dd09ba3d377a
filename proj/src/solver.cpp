#include "grpfem/solver.hpp"

#include "grpfem/core.hpp"

#include <cmath>

namespace grpfem {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace

std::pair<std::vector<double>, SolveReport> solve_spd(const SparseSpdMatrix& matrix,
                                                      const std::vector<double>& rhs,
                                                      double tol,
                                                      bool jacobi_preconditioner) {
  const int n = matrix.rows();
  if (static_cast<int>(rhs.size()) != n) {
    throw std::invalid_argument("solve_spd: right-hand side size mismatch");
  }
  if (!(tol > 0.0) || tol > 1e-4) {
    throw std::invalid_argument("solve_spd: tolerance must lie in (0, 1e-4]");
  }

  std::vector<double> inv_diag(static_cast<std::size_t>(n), 1.0);
  if (jacobi_preconditioner) {
    const std::vector<double> diag = matrix.diagonal();
    for (int i = 0; i < n; ++i) {
      if (!(diag[static_cast<std::size_t>(i)] > 0.0)) {
        throw NumericalError("solve_spd: non-positive diagonal entry at row " +
                             std::to_string(i));
      }
      inv_diag[static_cast<std::size_t>(i)] = 1.0 / diag[static_cast<std::size_t>(i)];
    }
  }

  std::vector<double> u(static_cast<std::size_t>(n), 0.0);
  SolveReport report;

  const double rhs_norm = std::sqrt(dot(rhs, rhs));
  if (rhs_norm == 0.0) {
    return {u, report};
  }

  std::vector<double> residual = rhs;
  std::vector<double> z(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    z[static_cast<std::size_t>(i)] =
        inv_diag[static_cast<std::size_t>(i)] * residual[static_cast<std::size_t>(i)];
  }
  std::vector<double> direction = z;
  std::vector<double> kp(static_cast<std::size_t>(n));
  double rz = dot(residual, z);

  const long max_iterations = 20L * n;
  double residual_norm = rhs_norm;
  for (long it = 0; it < max_iterations; ++it) {
    matrix.multiply(direction.data(), kp.data());
    const double curvature = dot(direction, kp);
    if (!(curvature > 0.0)) {
      throw NumericalError(
          "solve_spd: non-positive curvature direction, matrix is not positive "
          "definite (p^T K p = " + std::to_string(curvature) + ")");
    }
    const double step = rz / curvature;
    for (int i = 0; i < n; ++i) {
      u[static_cast<std::size_t>(i)] += step * direction[static_cast<std::size_t>(i)];
      residual[static_cast<std::size_t>(i)] -= step * kp[static_cast<std::size_t>(i)];
    }
    report.iterations = static_cast<int>(it) + 1;
    residual_norm = std::sqrt(dot(residual, residual));
    if (residual_norm <= tol * rhs_norm) break;
    for (int i = 0; i < n; ++i) {
      z[static_cast<std::size_t>(i)] =
          inv_diag[static_cast<std::size_t>(i)] * residual[static_cast<std::size_t>(i)];
    }
    const double rz_next = dot(residual, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (int i = 0; i < n; ++i) {
      direction[static_cast<std::size_t>(i)] =
          z[static_cast<std::size_t>(i)] + beta * direction[static_cast<std::size_t>(i)];
    }
  }

  report.relative_residual = residual_norm / rhs_norm;
  if (report.relative_residual > tol) {
    throw NumericalError("solve_spd: no convergence within 20 N iterations, "
                         "relative residual " +
                         std::to_string(report.relative_residual));
  }
  report.solution_ah_norm = ah_norm(matrix, u);
  return {u, report};
}

double ah_norm(const SparseSpdMatrix& matrix, const std::vector<double>& w) {
  const std::vector<double> kw = matrix.multiply(w);
  const double quad = dot(w, kw);
  if (quad < -1e-12 * matrix.max_abs() * dot(w, w)) {
    throw NumericalError("ah_norm: negative quadratic form, matrix defect");
  }
  return std::sqrt(std::max(quad, 0.0));
}

}  // namespace grpfem
