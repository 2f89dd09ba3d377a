#include "grpfem/sparse.hpp"

#include "grpfem/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace grpfem {

SparseSpdMatrix SparseSpdMatrix::from_pattern(
    std::vector<std::vector<int>> columns_per_row) {
  SparseSpdMatrix m;
  m.row_offsets_.assign(1, 0);
  m.row_offsets_.reserve(columns_per_row.size() + 1);
  std::size_t total = 0;
  for (auto& cols : columns_per_row) {
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    total += cols.size();
    m.row_offsets_.push_back(static_cast<int>(total));
  }
  m.columns_.reserve(total);
  for (const auto& cols : columns_per_row) {
    m.columns_.insert(m.columns_.end(), cols.begin(), cols.end());
  }
  m.values_.assign(total, 0.0);
  return m;
}

int SparseSpdMatrix::find(int row, int col) const {
  const auto begin = columns_.begin() + row_offsets_[static_cast<std::size_t>(row)];
  const auto end = columns_.begin() + row_offsets_[static_cast<std::size_t>(row) + 1];
  const auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col) return -1;
  return static_cast<int>(it - columns_.begin());
}

void SparseSpdMatrix::add(int row, int col, double value) {
  const int idx = find(row, col);
  if (idx < 0) {
    throw std::logic_error("SparseSpdMatrix::add: entry outside the pattern");
  }
  values_[static_cast<std::size_t>(idx)] += value;
}

double SparseSpdMatrix::coeff(int row, int col) const {
  const int idx = find(row, col);
  return idx < 0 ? 0.0 : values_[static_cast<std::size_t>(idx)];
}

void SparseSpdMatrix::multiply(const double* x, double* y) const {
  const int n = rows();
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int idx = row_offsets_[static_cast<std::size_t>(i)];
         idx < row_offsets_[static_cast<std::size_t>(i) + 1]; ++idx) {
      sum += values_[static_cast<std::size_t>(idx)] *
             x[columns_[static_cast<std::size_t>(idx)]];
    }
    y[i] = sum;
  }
}

std::vector<double> SparseSpdMatrix::multiply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != rows()) {
    throw std::invalid_argument("SparseSpdMatrix::multiply: size mismatch");
  }
  std::vector<double> y(x.size());
  multiply(x.data(), y.data());
  return y;
}

std::vector<double> SparseSpdMatrix::diagonal() const {
  std::vector<double> diag(static_cast<std::size_t>(rows()));
  for (int i = 0; i < rows(); ++i) diag[static_cast<std::size_t>(i)] = coeff(i, i);
  return diag;
}

double SparseSpdMatrix::max_abs() const {
  double m = 0.0;
  for (const double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SparseSpdMatrix::symmetry_defect() const {
  double defect = 0.0;
  for (int i = 0; i < rows(); ++i) {
    for (int idx = row_offsets_[static_cast<std::size_t>(i)];
         idx < row_offsets_[static_cast<std::size_t>(i) + 1]; ++idx) {
      const int j = columns_[static_cast<std::size_t>(idx)];
      defect = std::max(defect,
                        std::abs(values_[static_cast<std::size_t>(idx)] - coeff(j, i)));
    }
  }
  return defect;
}

void write_matrix_market(const SparseSpdMatrix& matrix, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << matrix.rows() << ' ' << matrix.rows() << ' ' << matrix.nonzeros() << '\n';
  char buf[32];
  for (int i = 0; i < matrix.rows(); ++i) {
    for (int idx = matrix.row_offsets()[static_cast<std::size_t>(i)];
         idx < matrix.row_offsets()[static_cast<std::size_t>(i) + 1]; ++idx) {
      std::snprintf(buf, sizeof buf, "%.17g",
                    matrix.values()[static_cast<std::size_t>(idx)]);
      out << i + 1 << ' ' << matrix.columns()[static_cast<std::size_t>(idx)] + 1
          << ' ' << buf << '\n';
    }
  }
}

}  // namespace grpfem
