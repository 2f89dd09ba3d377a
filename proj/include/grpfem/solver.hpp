#pragma once

#include "grpfem/sparse.hpp"

#include <utility>
#include <vector>

namespace grpfem {

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  double solution_ah_norm = 0.0;
};

/// Conjugate gradients with optional Jacobi preconditioning. Stops when
/// ||K u - b||_2 <= tol ||b||_2; throws NumericalError when the iteration
/// budget (20 N) runs out or a negative-curvature direction reveals an
/// indefinite matrix. Deterministic: fixed-order reductions, no parallelism.
std::pair<std::vector<double>, SolveReport> solve_spd(const SparseSpdMatrix& matrix,
                                                      const std::vector<double>& rhs,
                                                      double tol,
                                                      bool jacobi_preconditioner = true);

/// sqrt(w^T K w); throws NumericalError if the quadratic form is negative.
double ah_norm(const SparseSpdMatrix& matrix, const std::vector<double>& w);

}  // namespace grpfem
