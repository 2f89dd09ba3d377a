#pragma once

#include "grpfem/assembly.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace grpfem {

/// Closed-form solution with hand-derived derivatives. The derivatives are
/// cross-checked against finite differences on construction.
struct ExactSolution {
  int dim = 2;
  std::string name;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Mat(const Vec&)> hessian;
  std::function<double(const Vec&)> laplacian;
};

/// Built-in solutions: "poly" is the dimension-specific validation
/// polynomial (2D: x y (x^2+y^2)^2, 3D: x^2+y^2-x^2 z^2), "one" is the
/// constant 1.
ExactSolution builtin_solution(const std::string& name, int dim);

struct ProblemData {
  std::function<double(const Vec&)> f;  // on the bulk
  std::function<double(const Vec&)> g;  // on the boundary
};

/// f = -lap(u) + kappa u; g = du/dnu + alpha u - beta lap_Gamma u, with the
/// boundary Laplacian evaluated through the radial identity
/// lap_Gamma w = lap w - (n-1) d_r w - d_rr w on the unit circle/sphere.
ProblemData manufactured_rhs(const ExactSolution& exact, double alpha, double beta,
                             double kappa, const Domain& domain);

/// The same reference point seen through the exact map and through the
/// isoparametric map: (Phi^c(xhat), Phi^(k)(xhat)).
std::pair<Vec, Vec> lift_pair(const CurvedElementMap& map, const Domain& domain,
                              const ReferenceElement& ref, const Vec& xhat);

struct ErrorPair {
  double l2 = 0.0;  // combined L2(Omega;Gamma)
  double h1 = 0.0;  // combined H1(Omega;Gamma)
};

/// || u - u_h^l || measured on the exact domain: all integrals are pulled
/// back to the reference element through the exact map Phi^c, so the lift is
/// never inverted numerically. Quadrature exactness 2k+4.
ErrorPair error_norms(const FeSpace& space, const std::vector<double>& u_h,
                      const ExactSolution& exact);

/// Nodal interpolant: coefficients are the function values at the global
/// node coordinates.
std::vector<double> interpolate(const FeSpace& space,
                                const std::function<double(const Vec&)>& fn);
/// Nodal interpolant on the boundary nodes only (length N_Gamma).
std::vector<double> interpolate_boundary(const FeSpace& space,
                                         const std::function<double(const Vec&)>& fn);

/// eoc_i = log(e_{i-1}/e_i) / log(h_{i-1}/h_i), one entry per level pair.
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs);

struct NormTriple {
  double l2 = 0.0;            // ||w||_{L2(Omega)}
  double h1_semi = 0.0;       // ||grad w||_{L2(Omega)}
  double surface_semi = 0.0;  // ||grad_Gamma (trace w)||_{L2(Gamma)}
};

/// Norms of the lifted finite element function, integrated on the exact
/// domain through Phi^c.
NormTriple lifted_norms(const FeSpace& space, const std::vector<double>& u_h);

}  // namespace grpfem
