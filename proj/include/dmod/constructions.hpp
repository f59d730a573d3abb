#pragma once

#include "dmod/errors.hpp"
#include "dmod/int_matrix.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dmod {

// Column orders below are part of the interface: witnesses and certificates
// refer to them by index.

/// [I_r | D_r]: units e_1..e_r, then e_i - e_j for i < j in lexicographic
/// order. Represents the clique M(K_{r+1}).
inline IntMatrix clique_matrix(std::size_t r) {
  if (r < 1) throw DomainError("clique_matrix needs r >= 1");
  IntMatrix a(r, r + r * (r - 1) / 2);
  std::size_t c = 0;
  for (std::size_t i = 0; i < r; ++i) a.set(i, c++, 1);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      a.set(i, c, 1);
      a.set(j, c, -1);
      ++c;
    }
  return a;
}

/// Column index of e_i - e_j (i < j) inside clique_matrix(r).
inline std::size_t clique_difference_index(std::size_t r, std::size_t i, std::size_t j) {
  if (!(i < j && j < r)) throw DimensionError("need i < j < r");
  std::size_t idx = r;
  for (std::size_t k = 0; k < i; ++k) idx += r - 1 - k;
  return idx + (j - i - 1);
}

/// [I_r | D_r | X_r] where X_r holds k e_1 - e_j for k = 2..delta (outer) and
/// j = 2..r (inner).
inline IntMatrix conjecture_matrix(std::size_t delta, std::size_t r) {
  if (delta < 1) throw DomainError("conjecture_matrix needs delta >= 1");
  if (r < 2) throw DomainError("conjecture_matrix needs r >= 2");
  const IntMatrix base = clique_matrix(r);
  IntMatrix a(r, base.cols() + (delta - 1) * (r - 1));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < base.cols(); ++j) a.set(i, j, base(i, j));
  std::size_t c = base.cols();
  for (std::size_t k = 2; k <= delta; ++k)
    for (std::size_t j = 1; j < r; ++j) {
      a.set(0, c, static_cast<long long>(k));
      a.set(j, c, -1);
      ++c;
    }
  return a;
}

/// The rank-2*delta spike meeting the spike rank bound:
///
///   [ 1 | 0^T | 1^T | delta-1 | delta ]
///   [ 0 |  I  |  I  |    1    |   1   ]
///
/// with I of order 2*delta - 1. Column 0 is the tip.
inline IntMatrix spike_tight(std::size_t delta) {
  if (delta < 2) throw DomainError("spike_tight needs delta >= 2 (rank >= 3)");
  const std::size_t n = 2 * delta - 1;
  IntMatrix a(2 * delta, 4 * delta + 1);
  a.set(0, 0, 1);
  for (std::size_t i = 0; i < n; ++i) {
    a.set(i + 1, 1 + i, 1);
    a.set(0, 1 + n + i, 1);
    a.set(i + 1, 1 + n + i, 1);
  }
  const std::size_t c = 1 + 2 * n;
  a.set(0, c, static_cast<long long>(delta) - 1);
  a.set(0, c + 1, static_cast<long long>(delta));
  for (std::size_t i = 0; i < n; ++i) {
    a.set(i + 1, c, 1);
    a.set(i + 1, c + 1, 1);
  }
  return a;
}

/// Rank-n spike: tip e_1, then (1, e_i) for i < n, (1, 1), then (0, e_i),
/// (0, 1). n = 3 gives rank3_spike().
inline IntMatrix spike_generic(std::size_t n) {
  if (n < 3) throw DomainError("spike_generic needs n >= 3");
  const std::size_t k = n - 1;
  IntMatrix a(n, 2 * n + 1);
  a.set(0, 0, 1);
  for (std::size_t i = 0; i < k; ++i) {
    a.set(0, 1 + i, 1);
    a.set(1 + i, 1 + i, 1);
  }
  for (std::size_t i = 0; i <= n - 1; ++i) a.set(i, n, 1);
  for (std::size_t i = 0; i < k; ++i) a.set(1 + i, n + 1 + i, 1);
  for (std::size_t i = 1; i < n; ++i) a.set(i, 2 * n, 1);
  return a;
}

inline IntMatrix rank3_spike() {
  return IntMatrix::from_rows({{1, 1, 1, 1, 0, 0, 0},
                               {0, 1, 0, 1, 1, 0, 1},
                               {0, 0, 1, 1, 0, 1, 1}});
}

/// U_{2,4} with columns (1,0), (0,1), (1,1), (1,2); delta 2.
inline IntMatrix u24_matrix() { return IntMatrix::from_rows({{1, 0, 1, 1}, {0, 1, 1, 2}}); }

/// [I_r | D_r | f] with f = e_1 + ... + e_delta - e_{delta+1} - ... - e_{2 delta}.
inline IntMatrix extension_tight(std::size_t delta, std::size_t r) {
  if (delta < 1) throw DomainError("extension_tight needs delta >= 1");
  if (r < 2 * delta) throw DomainError("extension_tight needs r >= 2 * delta");
  const IntMatrix base = clique_matrix(r);
  IntMatrix a(r, base.cols() + 1);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < base.cols(); ++j) a.set(i, j, base(i, j));
  for (std::size_t i = 0; i < delta; ++i) {
    a.set(i, base.cols(), 1);
    a.set(delta + i, base.cols(), -1);
  }
  return a;
}

/// Block diagonal with the operands in order.
inline IntMatrix direct_sum(const std::vector<IntMatrix>& blocks) {
  if (blocks.empty()) throw DomainError("direct_sum needs at least one operand");
  std::size_t m = 0, n = 0;
  for (const auto& b : blocks) {
    m += b.rows();
    n += b.cols();
  }
  IntMatrix a(m, n);
  std::size_t r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) a.set(r0 + i, c0 + j, b(i, j));
    r0 += b.rows();
    c0 += b.cols();
  }
  return a;
}

enum class Family {
  clique,
  conjecture,
  spike_tight,
  spike_generic,
  rank3_spike,
  extension_tight,
  u24,
  direct_sum
};

/// A generator plus its parameters. For direct_sum the operands are given in
/// `operands` and `parameters` is empty.
struct ConstructionSpec {
  Family family;
  std::vector<long long> parameters;
  std::vector<ConstructionSpec> operands;
};

inline std::string_view family_name(Family f) {
  switch (f) {
  case Family::clique: return "clique";
  case Family::conjecture: return "conjecture";
  case Family::spike_tight: return "spike_tight";
  case Family::spike_generic: return "spike_generic";
  case Family::rank3_spike: return "rank3_spike";
  case Family::extension_tight: return "extension_tight";
  case Family::u24: return "u24";
  case Family::direct_sum: return "direct_sum";
  }
  return "?";
}

inline Family parse_family(std::string_view name) {
  for (auto f : {Family::clique, Family::conjecture, Family::spike_tight, Family::spike_generic,
                 Family::rank3_spike, Family::extension_tight, Family::u24, Family::direct_sum})
    if (family_name(f) == name) return f;
  throw DomainError("unknown family '" + std::string(name) + "'");
}

/// Number of integer parameters each family takes.
inline std::size_t family_arity(Family f) {
  switch (f) {
  case Family::clique:
  case Family::spike_tight:
  case Family::spike_generic: return 1;
  case Family::conjecture:
  case Family::extension_tight: return 2;
  case Family::rank3_spike:
  case Family::u24:
  case Family::direct_sum: return 0;
  }
  return 0;
}

inline IntMatrix build(const ConstructionSpec& spec) {
  const auto& p = spec.parameters;
  if (p.size() != family_arity(spec.family))
    throw DomainError(std::string(family_name(spec.family)) + " takes " +
                      std::to_string(family_arity(spec.family)) + " parameter(s)");
  for (auto x : p)
    if (x < 0) throw DomainError("parameters must be nonnegative");
  auto u = [&](std::size_t k) { return static_cast<std::size_t>(p[k]); };
  switch (spec.family) {
  case Family::clique: return clique_matrix(u(0));
  case Family::conjecture: return conjecture_matrix(u(0), u(1));
  case Family::spike_tight: return spike_tight(u(0));
  case Family::spike_generic: return spike_generic(u(0));
  case Family::rank3_spike: return rank3_spike();
  case Family::extension_tight: return extension_tight(u(0), u(1));
  case Family::u24: return u24_matrix();
  case Family::direct_sum: {
    std::vector<IntMatrix> blocks;
    for (const auto& op : spec.operands) blocks.push_back(build(op));
    return direct_sum(blocks);
  }
  }
  throw DomainError("unknown family");
}

} // namespace dmod
