#pragma once

#include "dmod/delta.hpp"
#include "dmod/errors.hpp"
#include "dmod/int_matrix.hpp"
#include "dmod/linalg.hpp"
#include "dmod/points.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace dmod {

/// The matroid (M / T) | X, where M is the column matroid of `ground`.
///
/// Minors are never materialized by row reduction: ranks are answered by the
/// contraction identity r(S) = rank(ground[S u T]) - rank(ground[T]), so every
/// subdeterminant question still refers to the original matrix.
class MinorView {
public:
  /// The whole column matroid of `ground`.
  explicit MinorView(IntMatrix ground)
      : MinorView(std::make_shared<const IntMatrix>(std::move(ground)), {}, {}, true) {}

  MinorView(IntMatrix ground, std::vector<std::size_t> contracted,
            std::vector<std::size_t> restricted)
      : MinorView(std::make_shared<const IntMatrix>(std::move(ground)), std::move(contracted),
                  std::move(restricted), false) {}

  MinorView(std::shared_ptr<const IntMatrix> ground, std::vector<std::size_t> contracted,
            std::vector<std::size_t> restricted)
      : MinorView(std::move(ground), std::move(contracted), std::move(restricted), false) {}

  const IntMatrix& ground() const noexcept { return *ground_; }
  const std::shared_ptr<const IntMatrix>& ground_ptr() const noexcept { return ground_; }
  const std::vector<std::size_t>& contracted() const noexcept { return contracted_; }
  const std::vector<std::size_t>& restricted() const noexcept { return restricted_; }
  std::size_t contracted_rank() const noexcept { return contracted_rank_; }

  bool contains(std::size_t e) const {
    return std::binary_search(restricted_.begin(), restricted_.end(), e);
  }

  /// Moves `more` (a subset of the restricted set) into the contracted set.
  MinorView contract(std::span<const std::size_t> more) const {
    std::vector<std::size_t> t = contracted_;
    std::vector<std::size_t> x;
    std::set<std::size_t> gone(more.begin(), more.end());
    for (auto e : gone) {
      if (!contains(e)) throw DimensionError("element " + std::to_string(e) + " not in view");
      t.push_back(e);
    }
    for (auto e : restricted_)
      if (!gone.count(e)) x.push_back(e);
    return MinorView(ground_, std::move(t), std::move(x));
  }

  /// Keeps only `keep` (a subset of the restricted set).
  MinorView restrict_to(std::span<const std::size_t> keep) const {
    std::vector<std::size_t> x(keep.begin(), keep.end());
    for (auto e : x)
      if (!contains(e)) throw DimensionError("element " + std::to_string(e) + " not in view");
    return MinorView(ground_, contracted_, std::move(x));
  }

private:
  MinorView(std::shared_ptr<const IntMatrix> ground, std::vector<std::size_t> contracted,
            std::vector<std::size_t> restricted, bool everything)
      : ground_(std::move(ground)), contracted_(std::move(contracted)),
        restricted_(std::move(restricted)) {
    const std::size_t n = ground_->cols();
    if (everything) restricted_ = detail::iota_indices(n);
    std::sort(contracted_.begin(), contracted_.end());
    std::sort(restricted_.begin(), restricted_.end());
    auto check = [n](const std::vector<std::size_t>& v, const char* what) {
      if (std::adjacent_find(v.begin(), v.end()) != v.end())
        throw DimensionError(std::string("duplicate index in ") + what + " set");
      if (!v.empty() && v.back() >= n)
        throw DimensionError(std::string(what) + " index " + std::to_string(v.back()) +
                             " out of range");
    };
    check(contracted_, "contracted");
    check(restricted_, "restricted");
    std::vector<std::size_t> both;
    std::set_intersection(contracted_.begin(), contracted_.end(), restricted_.begin(),
                          restricted_.end(), std::back_inserter(both));
    if (!both.empty())
      throw DimensionError("contracted and restricted sets overlap at " +
                           std::to_string(both.front()));
    contracted_rank_ = column_rank(*ground_, contracted_);
  }

  std::shared_ptr<const IntMatrix> ground_;
  std::vector<std::size_t> contracted_;
  std::vector<std::size_t> restricted_;
  std::size_t contracted_rank_ = 0;
};

/// Rank of S in (M / T) | X.
inline std::size_t minor_rank(const MinorView& v, std::span<const std::size_t> s) {
  std::vector<std::size_t> cols(v.contracted());
  for (auto e : s) {
    if (!v.contains(e))
      throw DimensionError("index " + std::to_string(e) + " out of range for view");
    cols.push_back(e);
  }
  return column_rank(v.ground(), cols) - v.contracted_rank();
}

inline std::size_t minor_rank(const MinorView& v) { return minor_rank(v, v.restricted()); }

/// Elements of X spanned by S.
inline std::vector<std::size_t> closure(const MinorView& v, std::span<const std::size_t> s) {
  const std::size_t base = minor_rank(v, s);
  std::vector<std::size_t> with(s.begin(), s.end());
  std::vector<std::size_t> out;
  for (auto e : v.restricted()) {
    with.push_back(e);
    if (minor_rank(v, with) == base) out.push_back(e);
    with.pop_back();
  }
  return out;
}

/// S is dependent and every S - b is independent.
inline bool is_circuit(const MinorView& v, std::span<const std::size_t> s) {
  if (s.empty()) return false;
  std::vector<std::size_t> set(s.begin(), s.end());
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  if (minor_rank(v, set) != set.size() - 1) return false;
  for (std::size_t b = 0; b < set.size(); ++b) {
    std::vector<std::size_t> rest;
    for (std::size_t k = 0; k < set.size(); ++k)
      if (k != b) rest.push_back(set[k]);
    if (minor_rank(v, rest) != rest.size()) return false;
  }
  return true;
}

namespace detail {

/// u <- w[p] * u - u[p] * w, then divide out the content. The map kills
/// exactly span(w); per-vector scaling does not change the matroid.
inline void eliminate(IntVector& u, const IntVector& w, std::size_t p) {
  if (u[p] == 0) return;
  const Integer c = u[p];
  Integer g = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = w[p] * u[i] - c * w[i];
    g = gcd(g, u[i]);
  }
  if (g > 1)
    for (auto& x : u) x /= g;
}

inline std::optional<std::size_t> first_nonzero(const IntVector& w) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] != 0) return i;
  return std::nullopt;
}

/// Projects `vectors` modulo the span of `kill`.
inline void project_out(std::vector<IntVector>& vectors, std::vector<IntVector> kill) {
  for (std::size_t k = 0; k < kill.size(); ++k) {
    auto p = first_nonzero(kill[k]);
    if (!p) continue;
    for (auto& u : vectors) eliminate(u, kill[k], *p);
    for (std::size_t l = k + 1; l < kill.size(); ++l) eliminate(kill[l], kill[k], *p);
  }
}

} // namespace detail

/// Integer vectors representing (M / T) | X over the rationals, one per
/// element of X in order. Used by the combinatorial searches; ranks agree
/// with minor_rank.
inline std::vector<IntVector> contracted_vectors(const MinorView& v) {
  std::vector<IntVector> out;
  out.reserve(v.restricted().size());
  for (auto e : v.restricted()) out.push_back(v.ground().column(e));
  std::vector<IntVector> kill;
  for (auto t : v.contracted()) kill.push_back(v.ground().column(t));
  detail::project_out(out, std::move(kill));
  return out;
}

inline IntMatrix contracted_representation(const MinorView& v) {
  if (v.restricted().empty()) throw DimensionError("view has no elements");
  return IntMatrix::from_columns(contracted_vectors(v));
}

/// Parallel classes and loops of the view, reported as ground indices.
inline ParallelClasses point_classes(const MinorView& v) {
  auto local = parallel_classes(contracted_vectors(v));
  const auto& x = v.restricted();
  for (auto& cls : local.classes)
    for (auto& e : cls) e = x[e];
  for (auto& e : local.loops) e = x[e];
  return local;
}

/// One representative (the smallest index) per non-loop parallel class.
inline std::vector<std::size_t> simplify(const MinorView& v) {
  std::vector<std::size_t> reps;
  for (const auto& cls : point_classes(v).classes) reps.push_back(cls.front());
  std::sort(reps.begin(), reps.end());
  return reps;
}

struct Line {
  std::vector<std::vector<std::size_t>> point_classes;
  std::size_t rank = 2;

  bool is_long() const noexcept { return point_classes.size() >= 3; }
  bool contains(std::size_t e) const {
    for (const auto& c : point_classes)
      if (std::find(c.begin(), c.end(), e) != c.end()) return true;
    return false;
  }
  std::vector<std::size_t> elements() const {
    std::vector<std::size_t> out;
    for (const auto& c : point_classes) out.insert(out.end(), c.begin(), c.end());
    std::sort(out.begin(), out.end());
    return out;
  }
};

/// All maximal rank-2 unions of point classes, ordered by their first two
/// points.
inline std::vector<Line> lines(const MinorView& v) {
  if (v.restricted().empty() || minor_rank(v) < 2) return {};
  const auto vecs = contracted_vectors(v);
  const auto pc = parallel_classes(vecs);
  const auto& x = v.restricted();
  const std::size_t p = pc.classes.size();
  std::vector<IntVector> rep;
  for (const auto& c : pc.classes) rep.push_back(vecs[c.front()]);

  std::vector<std::vector<bool>> covered(p, std::vector<bool>(p, false));
  std::vector<Line> out;
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a + 1; b < p; ++b) {
      if (covered[a][b]) continue;
      std::vector<std::size_t> members;
      for (std::size_t c = 0; c < p; ++c) {
        if (c == a || c == b || rank_of_vectors({rep[a], rep[b], rep[c]}) == 2)
          members.push_back(c);
      }
      Line line;
      for (auto i : members) {
        for (auto j : members) covered[i][j] = true;
        std::vector<std::size_t> cls;
        for (auto k : pc.classes[i]) cls.push_back(x[k]);
        line.point_classes.push_back(std::move(cls));
      }
      out.push_back(std::move(line));
    }
  return out;
}

/// Lines through f that carry at least three points.
inline std::vector<Line> long_lines_through(const MinorView& v, std::size_t f) {
  if (!v.contains(f)) throw DimensionError("element " + std::to_string(f) + " not in view");
  std::vector<Line> out;
  for (auto& l : lines(v))
    if (l.is_long() && l.contains(f)) out.push_back(std::move(l));
  return out;
}

/// A U_{2,4} minor: contract `contracted` (independent, inside the view) and
/// the four `points` become pairwise non-parallel elements of a rank-2 minor.
struct U24Witness {
  std::vector<std::size_t> contracted;
  std::array<std::size_t, 4> points{};
};

struct MinorSearchOptions {
  std::size_t max_rank = 8;
  std::uint64_t max_nodes = 50'000'000;
};

/// Searches for a U_{2,4} minor. Any minor N = M / C \ D can be taken with C
/// independent and D coindependent, so a U_{2,4} minor exists iff contracting
/// some independent set of size r - 2 leaves at least four points. For
/// rationally representable matroids this is exactly non-regularity.
inline std::optional<U24Witness> find_u24_minor(const MinorView& v,
                                                const MinorSearchOptions& opt = {}) {
  if (v.restricted().empty()) return std::nullopt;
  const std::size_t rho = minor_rank(v);
  if (rho < 2) return std::nullopt;
  if (rho > opt.max_rank)
    throw BudgetExceeded("U24 minor search: view rank " + std::to_string(rho) +
                         " exceeds cap " + std::to_string(opt.max_rank));
  const auto reps = simplify(v);
  std::vector<IntVector> start;
  {
    const auto all = contracted_vectors(v);
    const auto& x = v.restricted();
    for (auto e : reps)
      start.push_back(all[std::lower_bound(x.begin(), x.end(), e) - x.begin()]);
  }
  const std::size_t need = rho - 2;
  std::uint64_t nodes = 0;
  std::vector<std::size_t> chosen;
  std::optional<U24Witness> found;

  auto search = [&](auto&& self, const std::vector<IntVector>& cur, std::size_t from) -> void {
    if (found) return;
    if (++nodes > opt.max_nodes)
      throw BudgetExceeded("U24 minor search exceeded " + std::to_string(opt.max_nodes) +
                           " nodes");
    auto pc = parallel_classes(cur);
    const std::size_t remaining = need - chosen.size();
    if (pc.classes.size() < 4 + remaining) return;
    if (remaining == 0) {
      U24Witness w;
      for (auto c : chosen) w.contracted.push_back(reps[c]);
      for (std::size_t k = 0; k < 4; ++k) w.points[k] = reps[pc.classes[k].front()];
      found = std::move(w);
      return;
    }
    for (std::size_t k = from; k < cur.size() && !found; ++k) {
      auto p = detail::first_nonzero(cur[k]);
      if (!p) continue;
      auto next = cur;
      for (auto& u : next) detail::eliminate(u, cur[k], *p);
      chosen.push_back(k);
      self(self, next, k + 1);
      chosen.pop_back();
    }
  };
  search(search, start, 0);
  return found;
}

inline bool has_u24_minor(const MinorView& v, const MinorSearchOptions& opt = {}) {
  return find_u24_minor(v, opt).has_value();
}

/// A partition (X, Y) with r(X) + r(Y) - r(M) < j <= min(r(X), r(Y)), j < s.
struct VerticalSeparation {
  std::vector<std::size_t> x;
  std::vector<std::size_t> y;
  std::size_t order = 0; ///< the witnessing j
};

inline std::optional<VerticalSeparation>
find_vertical_separation(const MinorView& v, std::size_t s, std::size_t max_elements = 20) {
  if (s == 0) throw DomainError("s must be a positive integer");
  const auto& e = v.restricted();
  const std::size_t n = e.size();
  if (n > max_elements)
    throw BudgetExceeded("vertical connectivity: " + std::to_string(n) +
                         " elements exceeds cap " + std::to_string(max_elements));
  if (n < 2) return std::nullopt;
  const IntMatrix rep = contracted_representation(v);
  const std::size_t total = rank(rep);
  std::vector<std::size_t> xs, ys;
  // Element 0 always sits in X; the other side may be empty.
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
    xs.assign(1, 0);
    ys.clear();
    for (std::size_t k = 1; k < n; ++k)
      ((mask >> (k - 1)) & 1 ? xs : ys).push_back(k);
    const std::size_t rx = column_rank(rep, xs);
    const std::size_t ry = column_rank(rep, ys);
    const std::size_t lambda = rx + ry - total;
    const std::size_t cap = std::min({rx, ry, s - 1});
    if (lambda < cap) {
      VerticalSeparation sep;
      for (auto k : xs) sep.x.push_back(e[k]);
      for (auto k : ys) sep.y.push_back(e[k]);
      sep.order = lambda + 1;
      return sep;
    }
  }
  return std::nullopt;
}

inline bool is_vertically_s_connected(const MinorView& v, std::size_t s,
                                      std::size_t max_elements = 20) {
  return !find_vertical_separation(v, s, max_elements).has_value();
}

struct CriticalReport {
  std::size_t long_lines = 0;
  std::size_t span_rank = 0; ///< r(Z), Z the union of the long lines through f
  bool critical = false;
};

/// f is critical when the number of long lines through it exceeds
/// r(Z) + threshold.
inline CriticalReport critical_report(const MinorView& v, std::size_t f, long long threshold) {
  if (minor_rank(v, std::array{f}) == 0)
    throw DomainError("element " + std::to_string(f) + " is a loop");
  const auto ls = long_lines_through(v, f);
  std::set<std::size_t> z;
  for (const auto& l : ls)
    for (auto e : l.elements()) z.insert(e);
  std::vector<std::size_t> zs(z.begin(), z.end());
  CriticalReport rep;
  rep.long_lines = ls.size();
  rep.span_rank = minor_rank(v, zs);
  rep.critical = static_cast<long long>(rep.long_lines) >
                 static_cast<long long>(rep.span_rank) + threshold;
  return rep;
}

inline bool is_critical(const MinorView& v, std::size_t f, long long threshold) {
  return critical_report(v, f, threshold).critical;
}

} // namespace dmod
