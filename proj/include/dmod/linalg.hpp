#pragma once

#include "dmod/errors.hpp"
#include "dmod/int_matrix.hpp"
#include "dmod/integer.hpp"

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

namespace dmod {

namespace detail {

template <class T> T entry(const IntMatrix& a, std::size_t i, std::size_t j) {
  if constexpr (std::is_same_v<T, std::int64_t>)
    return a.narrow_data()[i * a.cols() + j];
  else
    return a(i, j);
}

/// Row-major copy of A[rows, cols].
template <class T>
std::vector<T> gather(const IntMatrix& a, std::span<const std::size_t> rows,
                      std::span<const std::size_t> cols) {
  std::vector<T> out;
  out.reserve(rows.size() * cols.size());
  for (auto i : rows)
    for (auto j : cols) out.push_back(entry<T>(a, i, j));
  return out;
}

/// Runs `f.template operator()<std::int64_t>()` when `a` has a 64-bit shadow,
/// retrying on Integer if any intermediate overflows.
template <class F> auto with_fallback(const IntMatrix& a, F&& f) {
  if (a.narrow_data() != nullptr) {
    try {
      return f.template operator()<std::int64_t>();
    } catch (const Overflow&) {
    }
  }
  return f.template operator()<Integer>();
}

/// Fraction-free (Bareiss) echelon reduction in place; returns the rank.
/// Every intermediate entry is a minor of the input, so the divisions by the
/// previous pivot are exact.
template <class T>
std::size_t bareiss_rank(std::vector<T>& m, std::size_t rows, std::size_t cols) {
  using A = Arith<T>;
  T prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p * cols + c] == 0) ++p;
    if (p == rows) continue;
    if (p != r)
      for (std::size_t j = c; j < cols; ++j) std::swap(m[p * cols + j], m[r * cols + j]);
    const T pivot = m[r * cols + c];
    for (std::size_t i = r + 1; i < rows; ++i) {
      const T lead = m[i * cols + c];
      for (std::size_t j = c + 1; j < cols; ++j)
        m[i * cols + j] =
            A::div(A::sub(A::mul(pivot, m[i * cols + j]), A::mul(lead, m[r * cols + j])), prev);
      m[i * cols + c] = 0;
    }
    prev = pivot;
    ++r;
  }
  return r;
}

template <class T> T bareiss_det(std::vector<T> m, std::size_t n) {
  using A = Arith<T>;
  if (n == 0) return T(1);
  T prev = 1;
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t p = k;
    while (p < n && m[p * n + k] == 0) ++p;
    if (p == n) return T(0);
    if (p != k) {
      for (std::size_t j = k; j < n; ++j) std::swap(m[p * n + j], m[k * n + j]);
      negate = !negate;
    }
    const T pivot = m[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const T lead = m[i * n + k];
      for (std::size_t j = k + 1; j < n; ++j)
        m[i * n + j] =
            A::div(A::sub(A::mul(pivot, m[i * n + j]), A::mul(lead, m[k * n + j])), prev);
    }
    prev = pivot;
  }
  T d = m[n * n - 1];
  return negate ? A::neg(d) : d;
}

inline std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

} // namespace detail

/// Rank of A[:, cols] over the rationals. An empty selection has rank 0.
inline std::size_t column_rank(const IntMatrix& a, std::span<const std::size_t> cols) {
  if (cols.empty()) return 0;
  for (auto c : cols)
    if (c >= a.cols()) throw DimensionError("column index out of range");
  const auto rows = detail::iota_indices(a.rows());
  return detail::with_fallback(a, [&]<class T>() {
    auto m = detail::gather<T>(a, rows, cols);
    return detail::bareiss_rank<T>(m, rows.size(), cols.size());
  });
}

inline std::size_t rank(const IntMatrix& a) {
  const auto cols = detail::iota_indices(a.cols());
  return column_rank(a, cols);
}

/// Determinant of the square submatrix A[rows, cols].
inline Integer submatrix_determinant(const IntMatrix& a,
                                     std::span<const std::size_t> rows,
                                     std::span<const std::size_t> cols) {
  if (rows.size() != cols.size())
    throw DimensionError("determinant needs a square selection");
  for (auto r : rows)
    if (r >= a.rows()) throw DimensionError("row index out of range");
  for (auto c : cols)
    if (c >= a.cols()) throw DimensionError("column index out of range");
  return detail::with_fallback(a, [&]<class T>() {
    return detail::Arith<T>::widen(detail::bareiss_det<T>(detail::gather<T>(a, rows, cols),
                                                          rows.size()));
  });
}

inline Integer determinant(const IntMatrix& a) {
  if (a.rows() != a.cols())
    throw DimensionError("determinant of a non-square " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + " matrix");
  const auto idx = detail::iota_indices(a.rows());
  return submatrix_determinant(a, idx, idx);
}

/// Rank of a list of equal-length vectors; an empty list has rank 0.
inline std::size_t rank_of_vectors(const std::vector<IntVector>& vs) {
  if (vs.empty() || vs.front().empty()) return 0;
  return rank(IntMatrix::from_columns(vs));
}

/// True iff `target` lies in the rational span of `vs`.
inline bool in_span(const std::vector<IntVector>& vs, const IntVector& target) {
  bool zero = true;
  for (const auto& x : target) zero = zero && x == 0;
  if (zero) return true;
  if (vs.empty()) return false;
  auto with = vs;
  with.push_back(target);
  return rank_of_vectors(with) == rank_of_vectors(vs);
}

} // namespace dmod
