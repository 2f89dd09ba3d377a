#pragma once

#include <iosfwd>
#include <vector>

namespace grpfem {

/// Square sparse matrix in compressed sparse row layout with sorted column
/// indices. Both triangles of symmetric matrices are stored.
class SparseSpdMatrix {
 public:
  SparseSpdMatrix() = default;

  /// Builds the fixed sparsity pattern; column lists are sorted and
  /// deduplicated, values start at zero.
  static SparseSpdMatrix from_pattern(std::vector<std::vector<int>> columns_per_row);

  int rows() const { return static_cast<int>(row_offsets_.size()) - 1; }
  int nonzeros() const { return static_cast<int>(values_.size()); }

  void add(int row, int col, double value);
  double coeff(int row, int col) const;  // zero outside the pattern

  void multiply(const double* x, double* y) const;
  std::vector<double> multiply(const std::vector<double>& x) const;

  const std::vector<int>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& columns() const { return columns_; }
  const std::vector<double>& values() const { return values_; }

  std::vector<double> diagonal() const;
  double max_abs() const;
  /// Entrywise max of |A - A^T|.
  double symmetry_defect() const;

 private:
  int find(int row, int col) const;  // -1 when outside the pattern

  std::vector<int> row_offsets_ = {0};
  std::vector<int> columns_;
  std::vector<double> values_;
};

/// Matrix Market coordinate export (real general, 1-based indices).
void write_matrix_market(const SparseSpdMatrix& matrix, std::ostream& out);

}  // namespace grpfem
