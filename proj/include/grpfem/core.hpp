#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace grpfem {

// Small dense types with a compile-time capacity of 3: runtime dimension
// (2 or 3) without heap allocation in element kernels.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;

inline Vec make_vec(double x) {
  Vec v(1);
  v << x;
  return v;
}

inline Vec make_vec(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

inline Vec make_vec(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace grpfem
