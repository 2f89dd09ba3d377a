#include "grpfem/geometry.hpp"

#include <cmath>

namespace grpfem {

namespace {
// Any delta < 1 keeps the radial projection of the unit disk/ball unique.
constexpr double kStripWidth = 0.5;
}  // namespace

Domain Domain::unit_disk() { return Domain(DomainKind::UnitDisk, 2, kStripWidth); }

Domain Domain::unit_ball() { return Domain(DomainKind::UnitBall, 3, kStripWidth); }

double Domain::signed_distance(const Vec& x) const {
  return x.norm() - 1.0;
}

Vec Domain::closest_point(const Vec& x) const {
  // The radial projection of the disk/ball is unique away from the center;
  // the strip width only marks the band guaranteed for a general smooth
  // boundary.
  const double r = x.norm();
  if (r < 1e-12) {
    throw std::invalid_argument(
        "Domain::closest_point: projection undefined at the center");
  }
  return x / r;
}

Vec Domain::outward_normal(const Vec& s) const {
  const double r = s.norm();
  if (std::abs(r - 1.0) > 1e-10) {
    throw std::invalid_argument(
        "Domain::outward_normal: point not on the boundary, |d(s)| = " +
        std::to_string(std::abs(r - 1.0)));
  }
  return s / r;
}

Mat Domain::projection_jacobian(const Vec& x) const {
  const double r = x.norm();
  if (r < 1e-12) {
    throw std::invalid_argument(
        "Domain::projection_jacobian: projection undefined at the center");
  }
  const Vec p = x / r;
  Mat jac = Mat::Identity(dim_, dim_);
  jac -= p * p.transpose();
  jac /= r;
  return jac;
}

Vec tangential_gradient(const Vec& gradient, const Vec& normal) {
  return gradient - gradient.dot(normal) * normal;
}

}  // namespace grpfem
