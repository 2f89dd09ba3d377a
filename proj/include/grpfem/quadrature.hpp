#pragma once

#include "grpfem/core.hpp"

#include <vector>

namespace grpfem {

/// Quadrature rule on the unit reference simplex of the given dimension
/// (interval [0,1], unit triangle, unit tetrahedron). All weights are
/// positive and sum to the simplex measure 1/dim!.
struct QuadratureRule {
  int dim = 0;
  int exactness_degree = 0;
  std::vector<Vec> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

/// Builds a rule that integrates all polynomials of total degree <= degree
/// exactly. Supported: dim in {1,2,3}, 0 <= degree <= 30.
QuadratureRule make_quadrature(int dim, int degree);

/// Exact integral of x^a (* y^b (* z^c)) over the unit reference simplex:
/// prod(exponents!) / (sum(exponents) + dim)!. Used as the exactness oracle.
double simplex_monomial_integral(int dim, const int* exponents);

}  // namespace grpfem
