#pragma once

#include "grpfem/core.hpp"

namespace grpfem {

enum class DomainKind { UnitDisk, UnitBall };

/// Implicit description of a smooth domain: signed distance, outward normal
/// and closest-point projection. The projection is guaranteed unique inside
/// the strip |d(x)| < strip_width().
class Domain {
 public:
  static Domain unit_disk();
  static Domain unit_ball();

  DomainKind kind() const { return kind_; }
  int dimension() const { return dim_; }
  double strip_width() const { return delta_; }

  // Negative inside, zero on the boundary, positive outside.
  double signed_distance(const Vec& x) const;

  // Nearest boundary point; rejects points outside the uniqueness strip.
  Vec closest_point(const Vec& x) const;

  // Unit outward normal at a boundary point (|d(s)| <= 1e-10 required).
  Vec outward_normal(const Vec& s) const;

  // Derivative of the closest-point projection at x, |d(x)| < strip_width().
  Mat projection_jacobian(const Vec& x) const;

 private:
  Domain(DomainKind kind, int dim, double delta)
      : kind_(kind), dim_(dim), delta_(delta) {}

  DomainKind kind_;
  int dim_;
  double delta_;
};

/// Tangential part of a gradient: g - (g . nu) nu. Requires |nu| = 1.
Vec tangential_gradient(const Vec& gradient, const Vec& normal);

}  // namespace grpfem
