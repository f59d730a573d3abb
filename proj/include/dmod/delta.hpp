#pragma once

#include "dmod/errors.hpp"
#include "dmod/int_matrix.hpp"
#include "dmod/integer.hpp"
#include "dmod/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace dmod {

/// Largest absolute rank x rank subdeterminant and where it occurs.
struct DeltaReport {
  std::size_t rank = 0;
  Integer delta = 0;
  std::vector<std::size_t> witness_rows;
  std::vector<std::size_t> witness_cols;
};

struct DeltaOptions {
  /// Root branches (first column of the subset) are dealt round-robin to
  /// this many workers. Results do not depend on the value.
  unsigned threads = 1;
  /// Skip column prefixes whose Hadamard bound cannot reach the current best.
  bool hadamard_pruning = false;
};

/// A rank x rank submatrix whose determinant exceeds a bound.
struct Violation {
  Integer determinant;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};

namespace detail {

inline std::vector<std::vector<std::size_t>> k_subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(k);
  std::iota(cur.begin(), cur.end(), std::size_t{0});
  if (k > n) return out;
  while (true) {
    out.push_back(cur);
    std::size_t i = k;
    while (i > 0 && cur[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

/// Depth-first enumeration of rank-sized column subsets in lexicographic
/// order. A prefix is cut as soon as a column is dependent on the ones
/// already chosen, or when the remaining suffix cannot supply enough rank.
template <class T> class SubdeterminantSearch {
public:
  enum class Mode { maximize, exceed };

  SubdeterminantSearch(const IntMatrix& a, std::size_t rank, Mode mode,
                       std::optional<Integer> bound, bool hadamard)
      : a_(a), m_(a.rows()), n_(a.cols()), r_(rank), mode_(mode),
        bound_(std::move(bound)), hadamard_(hadamard && mode == Mode::maximize) {
    columns_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      columns_[j].resize(m_);
      for (std::size_t i = 0; i < m_; ++i) columns_[j][i] = entry<T>(a_, i, j);
    }
    suffix_rank_.assign(n_ + 1, 0);
    for (std::size_t j = n_; j-- > 0;) {
      auto idx = iota_indices(n_ - j);
      for (auto& x : idx) x += j;
      suffix_rank_[j] = column_rank(a_, idx);
    }
    row_sets_ = k_subsets(m_, r_);
    if (hadamard_) {
      norms_.resize(n_);
      for (std::size_t j = 0; j < n_; ++j) {
        Integer s = 0;
        for (std::size_t i = 0; i < m_; ++i) s += a_(i, j) * a_(i, j);
        norms_[j] = s;
      }
      suffix_max_norm_.assign(n_ + 1, 0);
      for (std::size_t j = n_; j-- > 0;)
        suffix_max_norm_[j] = std::max(norms_[j], suffix_max_norm_[j + 1]);
    }
  }

  struct Best {
    bool found = false;
    Integer value = 0;
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    std::size_t leaves = 0;
  };

  /// Explores every root branch j with j % stride == offset.
  Best run(std::size_t offset, std::size_t stride, std::atomic<bool>& stop) const {
    Worker w{*this, stop};
    for (std::size_t j = offset; j < n_; j += stride) {
      if (stop.load(std::memory_order_relaxed)) break;
      if (suffix_rank_[j] < r_) break;
      w.branch(j, 0);
    }
    return w.best;
  }

private:
  struct Level {
    std::vector<T> reduced;
    std::size_t pivot;
  };

  struct Worker {
    const SubdeterminantSearch& s;
    std::atomic<bool>& stop;
    Best best{};
    std::vector<std::size_t> chosen{};
    std::vector<Level> levels{};
    Integer hadamard_prefix = 1;

    void branch(std::size_t j, std::size_t depth) {
      using A = Arith<T>;
      std::vector<T> v = s.columns_[j];
      for (const auto& lv : levels) {
        const T c = v[lv.pivot];
        if (c == 0) continue;
        const T p = lv.reduced[lv.pivot];
        for (std::size_t i = 0; i < v.size(); ++i)
          v[i] = A::sub(A::mul(p, v[i]), A::mul(c, lv.reduced[i]));
        T g = 0;
        for (const auto& x : v) g = A::gcd(g, x);
        if (g > 1)
          for (auto& x : v) x = A::div(x, g);
      }
      std::size_t pivot = 0;
      while (pivot < v.size() && v[pivot] == 0) ++pivot;
      if (pivot == v.size()) return; // dependent prefix

      chosen.push_back(j);
      levels.push_back(Level{std::move(v), pivot});
      Integer saved = hadamard_prefix;
      if (s.hadamard_) hadamard_prefix *= s.norms_[j];

      if (depth + 1 == s.r_) {
        leaf();
      } else if (!prune(j + 1, depth + 1)) {
        for (std::size_t k = j + 1; k < s.n_; ++k) {
          if (stop.load(std::memory_order_relaxed)) break;
          if (depth + 1 + s.suffix_rank_[k] < s.r_) break;
          branch(k, depth + 1);
        }
      }
      hadamard_prefix = saved;
      levels.pop_back();
      chosen.pop_back();
    }

    bool prune(std::size_t next, std::size_t depth) const {
      if (!s.hadamard_ || !best.found) return false;
      Integer bound = hadamard_prefix;
      for (std::size_t k = depth; k < s.r_; ++k) bound *= s.suffix_max_norm_[next];
      return bound < best.value * best.value;
    }

    void leaf() {
      ++best.leaves;
      for (const auto& rows : s.row_sets_) {
        auto d = abs(Arith<T>::widen(bareiss_det<T>(gather<T>(s.a_, rows, chosen), s.r_)));
        if (d == 0) continue;
        if (s.mode_ == Mode::exceed) {
          if (d > *s.bound_) {
            best = Best{true, d, rows, chosen, best.leaves};
            stop.store(true, std::memory_order_relaxed);
            return;
          }
          continue;
        }
        if (!best.found || d > best.value ||
            (d == best.value && std::tie(rows, chosen) < std::tie(best.rows, best.cols)))
          best = Best{true, d, rows, chosen, best.leaves};
      }
    }
  };

  const IntMatrix& a_;
  std::size_t m_, n_, r_;
  Mode mode_;
  std::optional<Integer> bound_;
  bool hadamard_;
  std::vector<std::vector<T>> columns_;
  std::vector<std::size_t> suffix_rank_;
  std::vector<std::vector<std::size_t>> row_sets_;
  std::vector<Integer> norms_;
  std::vector<Integer> suffix_max_norm_;
};

template <class T>
typename SubdeterminantSearch<T>::Best
run_search(const IntMatrix& a, std::size_t r,
           typename SubdeterminantSearch<T>::Mode mode, std::optional<Integer> bound,
           const DeltaOptions& opt) {
  using Search = SubdeterminantSearch<T>;
  using Best = typename Search::Best;
  Search search(a, r, mode, std::move(bound), opt.hadamard_pruning);
  const std::size_t workers = std::max(1u, opt.threads);
  std::atomic<bool> stop{false};
  std::vector<Best> results(workers);
  if (workers == 1) {
    results[0] = search.run(0, 1, stop);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          results[w] = search.run(w, workers, stop);
        } catch (...) {
          errors[w] = std::current_exception();
          stop.store(true);
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  // Deterministic merge: larger value first, then lexicographic (rows, cols).
  Best merged;
  for (auto& b : results) {
    merged.leaves += b.leaves;
    if (!b.found) continue;
    if (!merged.found || b.value > merged.value ||
        (b.value == merged.value &&
         std::tie(b.rows, b.cols) < std::tie(merged.rows, merged.cols))) {
      auto leaves = merged.leaves;
      merged = b;
      merged.leaves = leaves;
    }
  }
  return merged;
}

inline auto search_with_fallback(const IntMatrix& a, std::size_t r, bool exceed,
                          std::optional<Integer> bound, const DeltaOptions& opt) {
  struct Out {
    bool found;
    Integer value;
    std::vector<std::size_t> rows, cols;
  };
  return with_fallback(a, [&]<class T>() {
    using S = SubdeterminantSearch<T>;
    auto b = run_search<T>(a, r, exceed ? S::Mode::exceed : S::Mode::maximize, bound, opt);
    return Out{b.found, b.value, b.rows, b.cols};
  });
}

inline std::size_t require_positive_rank(const IntMatrix& a) {
  const std::size_t r = rank(a);
  if (r == 0) throw DomainError("rank zero, delta undefined");
  return r;
}

} // namespace detail

/// Maximum absolute determinant over all rank x rank submatrices, with the
/// lexicographically smallest (rows, then columns) maximizer as witness.
inline DeltaReport delta_of(const IntMatrix& a, const DeltaOptions& opt = {}) {
  const std::size_t r = detail::require_positive_rank(a);
  auto out = detail::search_with_fallback(a, r, false, std::nullopt, opt);
  return DeltaReport{r, out.value, out.rows, out.cols};
}

/// First rank x rank submatrix in search order with |det| > bound. Runs on a
/// single worker so the reported witness is reproducible.
inline std::optional<Violation> find_violation(const IntMatrix& a, const Integer& bound) {
  if (bound < 1) throw DomainError("delta bound must be a positive integer");
  const std::size_t r = detail::require_positive_rank(a);
  auto out = detail::search_with_fallback(a, r, true, bound, DeltaOptions{});
  if (!out.found) return std::nullopt;
  return Violation{out.value, out.rows, out.cols};
}

/// Exits on the first violating subdeterminant.
inline bool is_delta_modular(const IntMatrix& a, const Integer& bound,
                             const DeltaOptions& opt = {}) {
  if (bound < 1) throw DomainError("delta bound must be a positive integer");
  const std::size_t r = detail::require_positive_rank(a);
  return !detail::search_with_fallback(a, r, true, bound, opt).found;
}

} // namespace dmod
