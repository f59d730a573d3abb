#pragma once

#include "dmod/int_matrix.hpp"
#include "dmod/integer.hpp"

#include <cstddef>
#include <map>
#include <vector>

namespace dmod {

/// Primitive representative of the parallel class of `v`: divide by the gcd
/// of the entries and make the first nonzero entry positive. Zero maps to zero.
inline IntVector canonical_column(IntVector v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, x);
  if (g == 0) return v;
  bool flip = false;
  for (const auto& x : v)
    if (x != 0) {
      flip = x < 0;
      break;
    }
  for (auto& x : v) {
    x /= g;
    if (flip) x = -x;
  }
  return v;
}

struct ParallelClasses {
  /// Non-loop classes, each sorted, ordered by smallest member.
  std::vector<std::vector<std::size_t>> classes;
  /// Zero columns.
  std::vector<std::size_t> loops;
};

/// Groups vectors by canonical form; index k refers to vs[k].
inline ParallelClasses parallel_classes(const std::vector<IntVector>& vs) {
  ParallelClasses out;
  std::map<IntVector, std::size_t> slot;
  for (std::size_t j = 0; j < vs.size(); ++j) {
    auto c = canonical_column(vs[j]);
    bool zero = true;
    for (const auto& x : c) zero = zero && x == 0;
    if (zero) {
      out.loops.push_back(j);
      continue;
    }
    auto [it, fresh] = slot.emplace(std::move(c), out.classes.size());
    if (fresh) out.classes.emplace_back();
    out.classes[it->second].push_back(j);
  }
  return out;
}

inline ParallelClasses parallel_classes(const IntMatrix& a) {
  return parallel_classes(a.columns());
}

/// Number of nonzero, pairwise non-parallel columns.
inline std::size_t count_points(const IntMatrix& a) {
  return parallel_classes(a).classes.size();
}

} // namespace dmod
