#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grpfem/geometry.hpp"

#include <cmath>
#include <random>

using namespace grpfem;

TEST_CASE("signed distance of disk and ball") {
  const Domain disk = Domain::unit_disk();
  const Domain ball = Domain::unit_ball();
  CHECK(disk.signed_distance(make_vec(0.0, 0.0)) == doctest::Approx(-1.0));
  CHECK(disk.signed_distance(make_vec(1.0, 0.0)) == doctest::Approx(0.0));
  CHECK(ball.signed_distance(make_vec(2.0, 0.0, 0.0)) == doctest::Approx(1.0));
}

TEST_CASE("closest point projection") {
  const Domain disk = Domain::unit_disk();
  const Domain ball = Domain::unit_ball();
  CHECK((disk.closest_point(make_vec(2.0, 0.0)) - make_vec(1.0, 0.0)).norm() < 1e-15);
  CHECK((disk.closest_point(make_vec(0.6, 0.8)) - make_vec(0.6, 0.8)).norm() < 1e-15);
  CHECK((ball.closest_point(make_vec(0.0, 0.0, 0.5)) - make_vec(0.0, 0.0, 1.0)).norm() <
        1e-15);
}

TEST_CASE("closest point rejects the center") {
  const Domain disk = Domain::unit_disk();
  CHECK_THROWS_AS(disk.closest_point(make_vec(0.0, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(Domain::unit_ball().closest_point(make_vec(0.0, 0.0, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("outward normal") {
  const Domain disk = Domain::unit_disk();
  const Domain ball = Domain::unit_ball();
  CHECK((disk.outward_normal(make_vec(0.0, 1.0)) - make_vec(0.0, 1.0)).norm() < 1e-14);
  CHECK((disk.outward_normal(make_vec(-1.0, 0.0)) - make_vec(-1.0, 0.0)).norm() < 1e-14);
  CHECK((ball.outward_normal(make_vec(1.0, 0.0, 0.0)) - make_vec(1.0, 0.0, 0.0)).norm() <
        1e-14);
  CHECK_THROWS_AS(disk.outward_normal(make_vec(0.9, 0.0)), std::invalid_argument);
}

TEST_CASE("tangential gradient") {
  CHECK((tangential_gradient(make_vec(1.0, 0.0), make_vec(0.0, 1.0)) -
         make_vec(1.0, 0.0)).norm() < 1e-15);
  CHECK(tangential_gradient(make_vec(0.0, 2.0), make_vec(0.0, 1.0)).norm() < 1e-15);
  CHECK((tangential_gradient(make_vec(1.0, 1.0), make_vec(1.0, 0.0)) -
         make_vec(0.0, 1.0)).norm() < 1e-15);
}

TEST_CASE("tangential gradient is orthogonal to the normal") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int dim = trial % 2 == 0 ? 2 : 3;
    Vec g(dim), nu(dim);
    do {
      for (int d = 0; d < dim; ++d) {
        g[d] = dist(rng);
        nu[d] = dist(rng);
      }
    } while (nu.norm() < 1e-3);
    nu.normalize();
    CHECK(std::abs(tangential_gradient(g, nu).dot(nu)) <= 1e-13);
  }
}

TEST_CASE("projection identity x = p(x) + d(x) nu(p(x))") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> radial(0.55, 1.45);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  for (const int dim : {2, 3}) {
    const Domain domain = dim == 2 ? Domain::unit_disk() : Domain::unit_ball();
    for (int trial = 0; trial < 200; ++trial) {
      Vec direction(dim);
      if (dim == 2) {
        const double a = angle(rng);
        direction << std::cos(a), std::sin(a);
      } else {
        const double a = angle(rng), z = std::cos(angle(rng) / 2.0);
        const double s = std::sqrt(1.0 - z * z);
        direction << s * std::cos(a), s * std::sin(a), z;
      }
      const Vec x = radial(rng) * direction;
      const Vec p = domain.closest_point(x);
      CHECK(std::abs(domain.signed_distance(p)) <= 1e-12);
      const Vec nu = domain.outward_normal(p);
      CHECK(std::abs(nu.norm() - 1.0) <= 1e-14);
      const Vec reconstructed = p + domain.signed_distance(x) * nu;
      CHECK((x - reconstructed).lpNorm<Eigen::Infinity>() <= 1e-12);
      // Idempotence.
      CHECK((domain.closest_point(p) - p).norm() <= 1e-12);
    }
  }
}

TEST_CASE("eikonal property of the signed distance") {
  const double step = 1e-6;
  for (const int dim : {2, 3}) {
    const Domain domain = dim == 2 ? Domain::unit_disk() : Domain::unit_ball();
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> coord(-1.4, 1.4);
    int tested = 0;
    while (tested < 100) {
      Vec x(dim);
      for (int d = 0; d < dim; ++d) x[d] = coord(rng);
      if (std::abs(domain.signed_distance(x)) >= 0.45) continue;
      ++tested;
      double grad_sq = 0.0;
      for (int d = 0; d < dim; ++d) {
        Vec xp = x, xm = x;
        xp[d] += step;
        xm[d] -= step;
        const double g =
            (domain.signed_distance(xp) - domain.signed_distance(xm)) / (2.0 * step);
        grad_sq += g * g;
      }
      CHECK(std::sqrt(grad_sq) == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("projection jacobian matches finite differences") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> coord(-1.2, 1.2);
  const double step = 1e-6;
  for (const int dim : {2, 3}) {
    const Domain domain = dim == 2 ? Domain::unit_disk() : Domain::unit_ball();
    int tested = 0;
    while (tested < 50) {
      Vec x(dim);
      for (int d = 0; d < dim; ++d) x[d] = coord(rng);
      if (std::abs(domain.signed_distance(x)) >= 0.4) continue;
      ++tested;
      const Mat jac = domain.projection_jacobian(x);
      for (int d = 0; d < dim; ++d) {
        Vec xp = x, xm = x;
        xp[d] += step;
        xm[d] -= step;
        const Vec col = (domain.closest_point(xp) - domain.closest_point(xm)) / (2.0 * step);
        CHECK((jac.col(d) - col).norm() <= 1e-8);
      }
    }
  }
}
