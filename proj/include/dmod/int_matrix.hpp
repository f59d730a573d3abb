#pragma once

#include "dmod/errors.hpp"
#include "dmod/integer.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace dmod {

/// Dense row-major matrix of arbitrary-precision integers.
///
/// Alongside the exact entries the matrix keeps a 64-bit shadow copy while
/// every entry fits, so the elimination kernels can try machine arithmetic
/// first and fall back to Integer on overflow.
class IntMatrix {
public:
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(checked_size(rows, cols)),
        narrow_(rows * cols, 0) {}

  IntMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != checked_size(rows, cols))
      throw DimensionError("entry count does not match " +
                           std::to_string(rows) + "x" + std::to_string(cols));
    rebuild_shadow();
  }

  /// Row-wise literal, e.g. `IntMatrix::from_rows({{1, 2}, {3, 4}})`.
  static IntMatrix
  from_rows(std::initializer_list<std::initializer_list<long long>> rows) {
    std::vector<std::vector<Integer>> tmp;
    for (const auto& r : rows) tmp.emplace_back(r.begin(), r.end());
    return from_rows(tmp);
  }

  static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows) {
    if (rows.empty()) throw DimensionError("matrix needs at least one row");
    const std::size_t n = rows.front().size();
    std::vector<Integer> entries;
    entries.reserve(rows.size() * n);
    for (const auto& r : rows) {
      if (r.size() != n) throw DimensionError("ragged rows");
      entries.insert(entries.end(), r.begin(), r.end());
    }
    return IntMatrix(rows.size(), n, std::move(entries));
  }

  /// Columns must share a common nonzero length.
  static IntMatrix from_columns(const std::vector<IntVector>& columns) {
    if (columns.empty()) throw DimensionError("matrix needs at least one column");
    const std::size_t m = columns.front().size();
    IntMatrix a(m, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != m) throw DimensionError("ragged columns");
      for (std::size_t i = 0; i < m; ++i) a.set(i, j, columns[j][i]);
    }
    return a;
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) a.set(i, i, 1);
    return a;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  const Integer& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  const Integer& at(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_)
      throw DimensionError("index (" + std::to_string(i) + "," +
                           std::to_string(j) + ") out of range");
    return (*this)(i, j);
  }

  void set(std::size_t i, std::size_t j, const Integer& v) {
    if (i >= rows_ || j >= cols_)
      throw DimensionError("index (" + std::to_string(i) + "," +
                           std::to_string(j) + ") out of range");
    entries_[i * cols_ + j] = v;
    // Once a wide entry has been seen the shadow stays disabled; the exact
    // path is always correct.
    auto small = to_int64(v);
    if (small)
      narrow_[i * cols_ + j] = *small;
    else
      narrow_ok_ = false;
  }

  IntVector column(std::size_t j) const {
    if (j >= cols_) throw DimensionError("column " + std::to_string(j) + " out of range");
    IntVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  std::vector<IntVector> columns() const {
    std::vector<IntVector> out;
    out.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  bool is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const Integer& x) { return x == 0; });
  }

  /// Columns in the given order (indices may repeat).
  IntMatrix select_columns(std::span<const std::size_t> cols) const {
    IntMatrix out(rows_, cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] >= cols_) throw DimensionError("column index out of range");
      for (std::size_t i = 0; i < rows_; ++i) out.set(i, k, (*this)(i, cols[k]));
    }
    return out;
  }

  IntMatrix submatrix(std::span<const std::size_t> rows,
                      std::span<const std::size_t> cols) const {
    IntMatrix out(rows.size(), cols.size());
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = 0; b < cols.size(); ++b)
        out.set(a, b, at(rows[a], cols[b]));
    return out;
  }

  /// Non-null while every entry fits in 64 bits.
  const std::int64_t* narrow_data() const noexcept {
    return narrow_ok_ ? narrow_.data() : nullptr;
  }
  std::span<const Integer> data() const noexcept { return entries_; }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("product dimension mismatch");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) {
        Integer s = 0;
        for (std::size_t k = 0; k < a.cols_; ++k) s += a(i, k) * b(k, j);
        c.set(i, j, s);
      }
    return c;
  }

private:
  static std::size_t checked_size(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0)
      throw DimensionError("matrix dimensions must be positive");
    return rows * cols;
  }

  void rebuild_shadow() {
    narrow_.assign(entries_.size(), 0);
    narrow_ok_ = true;
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      auto small = to_int64(entries_[k]);
      if (!small) {
        narrow_ok_ = false;
        return;
      }
      narrow_[k] = *small;
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<Integer> entries_;
  std::vector<std::int64_t> narrow_;
  bool narrow_ok_ = true;
};

} // namespace dmod
