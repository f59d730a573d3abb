#pragma once

#include "dmod/delta.hpp"
#include "dmod/errors.hpp"
#include "dmod/integer.hpp"
#include "dmod/points.hpp"

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace dmod {

/// Parameters that define the finite space a search certified.
struct Normalization {
  std::string scheme;
  std::vector<std::pair<std::string, long long>> parameters;
  std::string argument;
};

/// Best configuration found by an extremal search.
struct SearchResult {
  std::size_t rank = 0;
  long long delta_bound = 0;
  std::size_t maximum = 0;
  std::vector<IntVector> witness;
  Normalization normalization;
  std::uint64_t nodes_explored = 0;
  /// False when the node budget ran out; `maximum` is then only a lower bound.
  bool exhaustive = true;
};

namespace detail {

using Vec = std::vector<std::int64_t>;

inline IntVector widen(const Vec& v) { return IntVector(v.begin(), v.end()); }

/// Dense bitset over vertex indices.
class Bits {
public:
  explicit Bits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
  bool none() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  std::size_t first() const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k]) return k * 64 + std::countr_zero(words_[k]);
    return npos;
  }
  std::size_t next(std::size_t i) const {
    ++i;
    std::size_t k = i / 64;
    if (k >= words_.size()) return npos;
    std::uint64_t w = words_[k] & (~std::uint64_t{0} << (i % 64));
    while (true) {
      if (w) return k * 64 + std::countr_zero(w);
      if (++k >= words_.size()) return npos;
      w = words_[k];
    }
  }
  Bits operator&(const Bits& o) const {
    Bits r = *this;
    for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] &= o.words_[k];
    return r;
  }
  Bits& and_not(const Bits& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
    return *this;
  }
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
  std::vector<std::uint64_t> words_;
};

/// Maximum clique by branch and bound with a greedy colouring bound.
class CliqueSolver {
public:
  explicit CliqueSolver(std::vector<Bits> adj, std::uint64_t budget)
      : adj_(std::move(adj)), n_(adj_.size()), budget_(budget) {}

  /// Size of a maximum clique (0 for an empty graph).
  std::size_t maximum() {
    Bits all(n_);
    for (std::size_t v = 0; v < n_; ++v) all.set(v);
    best_ = 0;
    expand(all, 0);
    return best_;
  }

  /// The clique of the given size that is smallest as a sorted index
  /// sequence, or empty if none exists.
  std::vector<std::size_t> first_clique(std::size_t size) {
    Bits all(n_);
    for (std::size_t v = 0; v < n_; ++v) all.set(v);
    std::vector<std::size_t> chosen;
    if (size == 0) return chosen;
    if (!lex(all, chosen, size)) chosen.clear();
    return chosen;
  }

  std::uint64_t nodes() const noexcept { return nodes_; }
  bool exhausted() const noexcept { return exhausted_; }

private:
  void colour(const Bits& p, std::vector<std::size_t>& order,
              std::vector<std::size_t>& colours) const {
    Bits left = p;
    std::size_t c = 0;
    while (!left.none()) {
      ++c;
      Bits q = left;
      for (std::size_t v = q.first(); v != Bits::npos; v = q.first()) {
        q.reset(v);
        q.and_not(adj_[v]);
        left.reset(v);
        order.push_back(v);
        colours.push_back(c);
      }
    }
  }

  void expand(Bits p, std::size_t size) {
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return;
    }
    std::vector<std::size_t> order, colours;
    colour(p, order, colours);
    for (std::size_t k = order.size(); k-- > 0;) {
      if (exhausted_ || size + colours[k] <= best_) return;
      const std::size_t v = order[k];
      Bits np = p & adj_[v];
      if (np.none()) best_ = std::max(best_, size + 1);
      else expand(np, size + 1);
      p.reset(v);
    }
  }

  bool lex(const Bits& p, std::vector<std::size_t>& chosen, std::size_t target) {
    if (chosen.size() == target) return true;
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return false;
    }
    if (chosen.size() + p.count() < target) return false;
    std::vector<std::size_t> order, colours;
    colour(p, order, colours);
    if (chosen.size() + (colours.empty() ? 0 : colours.back()) < target) return false;
    Bits rest = p;
    for (std::size_t v = p.first(); v != Bits::npos; v = p.next(v)) {
      rest.reset(v);
      if (chosen.size() + 1 + rest.count() < target) return false;
      chosen.push_back(v);
      if (lex(rest & adj_[v], chosen, target)) return true;
      chosen.pop_back();
      if (exhausted_) return false;
    }
    return false;
  }

  std::vector<Bits> adj_;
  std::size_t n_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::size_t best_ = 0;
  bool exhausted_ = false;
};

inline std::int64_t det2(const Vec& a, const Vec& b) {
  using A = Arith<std::int64_t>;
  return A::sub(A::mul(a[0], b[1]), A::mul(a[1], b[0]));
}

/// Determinant of the square matrix whose columns are `cols`.
inline std::int64_t det_columns(const std::vector<const Vec*>& cols) {
  const std::size_t n = cols.size();
  if (n == 2) return det2(*cols[0], *cols[1]);
  std::vector<std::int64_t> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = (*cols[j])[i];
  return bareiss_det<std::int64_t>(std::move(m), n);
}

} // namespace detail

/// Exact answer to the rank-2 column-number question for `delta`.
///
/// Every rank-2 configuration can be assumed primitive and, after a
/// unimodular change of basis, to contain (1,0). All other members then have
/// 1 <= |y| <= delta (their determinant against (1,0)). Shearing so the
/// member with smallest |y| has 0 <= x < |y| bounds every |x| by delta, well
/// inside the box |x| <= delta (delta + 1). The search is a maximum clique in
/// the graph on canonical primitive box vectors (y > 0, or (1,0)) joined when
/// 1 <= |det| <= delta, restricted to neighbours of (1,0).
inline SearchResult rank2_maximum(long long delta, long long box_scale = 1,
                                  std::uint64_t budget = 2'000'000'000ULL) {
  if (delta < 1 || delta > 12)
    throw BudgetExceeded("rank2_maximum supports 1 <= delta <= 12, got " + std::to_string(delta));
  if (box_scale < 1) throw DomainError("box scale must be >= 1");
  const long long ymax = box_scale * delta;
  const long long xmax = box_scale * delta * (delta + 1);

  // Neighbours of (1,0) ordered by (y, |x|, x < 0).
  std::vector<detail::Vec> cand;
  for (long long y = 1; y <= std::min(ymax, delta); ++y)
    for (long long ax = 0; ax <= xmax; ++ax)
      for (long long x : {ax, -ax}) {
        if (ax == 0 && x != ax) continue;
        if (std::gcd(x, y) != 1) continue;
        cand.push_back({x, y});
      }
  const std::size_t n = cand.size();
  std::vector<detail::Bits> adj(n, detail::Bits(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto d = std::llabs(detail::det2(cand[a], cand[b]));
      if (d >= 1 && d <= delta) {
        adj[a].set(b);
        adj[b].set(a);
      }
    }
  detail::CliqueSolver solver(std::move(adj), budget);
  const std::size_t omega = solver.maximum();
  const auto clique = solver.first_clique(omega);

  SearchResult res;
  res.rank = 2;
  res.delta_bound = delta;
  res.maximum = omega + 1;
  res.witness.push_back(IntVector{1, 0});
  for (auto v : clique) res.witness.push_back(canonical_column(detail::widen(cand[v])));
  res.nodes_explored = solver.nodes();
  res.exhaustive = !solver.exhausted();
  res.normalization.scheme = "rank2-box";
  res.normalization.parameters = {{"fixed_x", 1},        {"fixed_y", 0},
                                  {"box_scale", box_scale}, {"y_max", ymax},
                                  {"x_max", xmax},        {"vertices", static_cast<long long>(n + 1)}};
  res.normalization.argument =
      "(1,0) fixed by unimodular action; |y| <= delta from det against (1,0); "
      "shearing the minimal-|y| member to 0 <= x < |y| gives |x| <= delta <= x_max";
  return res;
}

/// Upper-triangular Hermite bases H (left action) with positive diagonal
/// d_1..d_r of product `det` and 0 <= H[i][j] < d_j above the diagonal.
/// Columns are returned as vectors.
inline std::vector<std::vector<detail::Vec>> hermite_bases(std::size_t r, long long det) {
  std::vector<std::vector<detail::Vec>> out;
  std::vector<long long> diag(r);
  auto fill = [&](auto&& self, std::size_t col, std::vector<detail::Vec>& cols) -> void {
    if (col == r) {
      out.push_back(cols);
      return;
    }
    // enumerate entries above the diagonal in this column
    detail::Vec c(r, 0);
    c[col] = diag[col];
    auto rec = [&](auto&& me, std::size_t row) -> void {
      if (row == col) {
        cols.push_back(c);
        self(self, col + 1, cols);
        cols.pop_back();
        return;
      }
      for (long long v = 0; v < diag[col]; ++v) {
        c[row] = v;
        me(me, row + 1);
      }
      c[row] = 0;
    };
    rec(rec, 0);
  };
  auto split = [&](auto&& self, std::size_t i, long long left) -> void {
    if (i + 1 == r) {
      diag[i] = left;
      std::vector<detail::Vec> cols;
      fill(fill, 0, cols);
      return;
    }
    for (long long d = 1; d <= left; ++d)
      if (left % d == 0) {
        diag[i] = d;
        self(self, i + 1, left / d);
      }
  };
  if (r == 0) return out;
  split(split, 0, det);
  return out;
}

/// Exhaustive rank-r search for the column-number question.
///
/// Normalization: among the bases of a configuration pick one with minimal
/// |det| = d and move it to Hermite form H. Cramer's rule writes every other
/// member as H mu / d with integer mu, |mu_i| <= delta, and mu_i = 0 or
/// |mu_i| >= d (replacing column i of H gives determinant mu_i, and d is
/// minimal). Configurations are grown depth-first over these candidates,
/// checking every new r-subset determinant against [d, delta] or zero.
inline SearchResult exact_maximum(std::size_t r, long long delta,
                                  std::uint64_t budget = 200'000'000ULL) {
  if (r < 1 || r > 4) throw BudgetExceeded("exact_maximum supports 1 <= r <= 4");
  if (delta < 1) throw DomainError("delta must be positive");
  if (delta > 12) throw BudgetExceeded("exact_maximum supports delta <= 12");
  using detail::Vec;
  using A = detail::Arith<std::int64_t>;

  SearchResult res;
  res.rank = r;
  res.delta_bound = delta;
  std::uint64_t nodes = 0;
  bool out_of_budget = false;

  for (long long d = 1; d <= delta && !out_of_budget; ++d) {
    for (const auto& basis : hermite_bases(r, d)) {
      if (out_of_budget) break;
      bool primitive = true;
      for (const auto& c : basis) {
        long long g = 0;
        for (auto x : c) g = std::gcd(g, x);
        primitive = primitive && g == 1;
      }
      if (!primitive) continue;

      // Candidates H mu / d.
      std::vector<Vec> cand;
      {
        std::vector<IntVector> seen;
        Vec mu(r, -delta);
        while (true) {
          std::size_t nz = 0;
          bool allowed = true;
          for (auto m : mu) {
            if (m != 0) ++nz;
            if (m != 0 && std::llabs(m) < d) allowed = false;
          }
          if (allowed && nz >= 2) {
            Vec v(r, 0);
            bool integral = true;
            for (std::size_t i = 0; i < r; ++i) {
              std::int64_t s = 0;
              for (std::size_t j = 0; j < r; ++j) s = A::add(s, A::mul(basis[j][i], mu[j]));
              if (s % d != 0) integral = false;
              v[i] = s / d;
            }
            if (integral) {
              long long g = 0;
              for (auto x : v) g = std::gcd(g, x);
              if (g == 1) {
                auto c = canonical_column(detail::widen(v));
                if (std::find(seen.begin(), seen.end(), c) == seen.end()) {
                  seen.push_back(c);
                  Vec cv;
                  for (const auto& x : c) cv.push_back(static_cast<std::int64_t>(x));
                  cand.push_back(std::move(cv));
                }
              }
            }
          }
          std::size_t k = 0;
          while (k < r && mu[k] == delta) mu[k++] = -delta;
          if (k == r) break;
          ++mu[k];
        }
        std::sort(cand.begin(), cand.end());
      }

      std::vector<Vec> config(basis.begin(), basis.end());
      auto ok_det = [&](std::int64_t x) {
        const auto a = std::llabs(x);
        return a == 0 || (a >= d && a <= delta);
      };
      // All (r-2)-subsets of the current configuration, extended by v and w.
      auto compatible = [&](const Vec& v, const Vec& w) {
        if (r == 1) return false;
        std::vector<const Vec*> cols(r);
        cols[r - 2] = &v;
        cols[r - 1] = &w;
        if (r == 2) return ok_det(detail::det_columns(cols));
        for (const auto& pick : detail::k_subsets(config.size(), r - 2)) {
          for (std::size_t k = 0; k < r - 2; ++k) cols[k] = &config[pick[k]];
          if (!ok_det(detail::det_columns(cols))) return false;
        }
        return true;
      };

      auto grow = [&](auto&& self, const std::vector<std::size_t>& pool) -> void {
        if (out_of_budget) return;
        if (++nodes > budget) {
          out_of_budget = true;
          return;
        }
        if (config.size() > res.maximum) {
          res.maximum = config.size();
          res.witness.clear();
          for (const auto& c : config) res.witness.push_back(canonical_column(detail::widen(c)));
        }
        for (std::size_t k = 0; k < pool.size(); ++k) {
          if (config.size() + (pool.size() - k) <= res.maximum) return;
          const Vec& v = cand[pool[k]];
          std::vector<std::size_t> next;
          for (std::size_t l = k + 1; l < pool.size(); ++l)
            if (compatible(v, cand[pool[l]])) next.push_back(pool[l]);
          config.push_back(v);
          self(self, next);
          config.pop_back();
          if (out_of_budget) return;
        }
      };
      std::vector<std::size_t> pool(cand.size());
      std::iota(pool.begin(), pool.end(), std::size_t{0});
      if (r == 1) pool.clear();
      grow(grow, pool);
    }
  }
  res.nodes_explored = nodes;
  res.exhaustive = !out_of_budget;
  res.normalization.scheme = "min-det-hermite-basis";
  res.normalization.parameters = {{"rank", static_cast<long long>(r)},
                                  {"delta", delta},
                                  {"coordinate_bound", delta},
                                  {"budget", static_cast<long long>(budget)}};
  res.normalization.argument =
      "configuration contains a basis of minimal |det| d in Hermite form H; "
      "other members are H mu / d with |mu_i| <= delta and mu_i = 0 or |mu_i| >= d; "
      "exhaustive only for configurations with such a basis (all primitive, "
      "pairwise non-parallel, full rank)";
  return res;
}

// ---------------------------------------------------------------------------
// Closed-form bounds

namespace detail {
inline Integer choose2(std::uint64_t n) { return Integer(n) * (n - 1) / 2; }
inline std::uint64_t floor_log2_u(std::uint64_t x) {
  std::uint64_t k = 0;
  while (x >>= 1) ++k;
  return k;
}
inline Integer pow_int(std::uint64_t b, unsigned e) {
  Integer r = 1;
  for (unsigned k = 0; k < e; ++k) r *= b;
  return r;
}
inline void require_positive(std::uint64_t delta, std::uint64_t r) {
  if (delta < 1 || r < 1) throw DomainError("bounds need delta >= 1 and r >= 1");
}
} // namespace detail

/// delta^2 * C(r+1, 2)
inline Integer bound_lpsx(std::uint64_t delta, std::uint64_t r) {
  detail::require_positive(delta, r);
  return Integer(delta) * delta * detail::choose2(r + 1);
}

/// C(r+1, 2) + 80 delta^7 r
inline Integer bound_main(std::uint64_t delta, std::uint64_t r) {
  detail::require_positive(delta, r);
  return detail::choose2(r + 1) + 80 * detail::pow_int(delta, 7) * r;
}

/// C(r+1, 2) + (70 delta^7 + 8 delta^3 floor(log2 delta)^2) r
inline Integer bound_final(std::uint64_t delta, std::uint64_t r) {
  detail::require_positive(delta, r);
  const auto l = detail::floor_log2_u(delta);
  return detail::choose2(r + 1) +
         (70 * detail::pow_int(delta, 7) + 8 * detail::pow_int(delta, 3) * l * l) * r;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

inline std::uint64_t next_prime_above(std::uint64_t n) {
  std::uint64_t p = n + 1;
  while (!is_prime(p)) ++p;
  return p;
}

struct Rank2Bounds {
  Integer lower;          ///< delta + 2
  Integer three_halves;   ///< floor(3 delta / 2) + 1
  std::uint64_t prime = 0; ///< smallest prime > delta
  Integer prime_plus_one;
  Integer upper;          ///< min of the two upper bounds
  /// lower > upper; happens at delta = 1 where the true answer is 3.
  bool conflicting = false;
};

inline Rank2Bounds rank2_bounds(std::uint64_t delta) {
  if (delta < 1) throw DomainError("delta must be positive");
  Rank2Bounds b;
  b.lower = Integer(delta) + 2;
  b.three_halves = Integer(3 * delta / 2) + 1;
  b.prime = next_prime_above(delta);
  b.prime_plus_one = Integer(b.prime) + 1;
  b.upper = std::min(b.three_halves, b.prime_plus_one);
  b.conflicting = b.lower > b.upper;
  return b;
}

} // namespace dmod
