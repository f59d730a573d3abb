#pragma once

#include "dmod/constructions.hpp"
#include "dmod/delta.hpp"
#include "dmod/errors.hpp"
#include "dmod/linalg.hpp"
#include "dmod/matroid_view.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace dmod {

/// Either a certificate or the first clause that failed.
template <class Cert> struct Checked {
  std::optional<Cert> certificate;
  std::string reason;

  bool ok() const noexcept { return certificate.has_value(); }
  explicit operator bool() const noexcept { return ok(); }

  static Checked accept(Cert c) { return Checked{std::move(c), {}}; }
  static Checked reject(std::string why) { return Checked{std::nullopt, std::move(why)}; }
};

// ---------------------------------------------------------------------------
// Spikes

struct SpikeCertificate {
  std::size_t tip = 0;
  /// The size-2 parallel classes of S / tip.
  std::vector<std::pair<std::size_t, std::size_t>> partner_pairs;
  /// One element per pair; a circuit of S / tip.
  std::vector<std::size_t> circuit_witness;
  std::size_t rank = 0;
};

/// Checks that A is simple, that every parallel class of A / tip has exactly
/// two elements, and that one element from each class forms a circuit.
inline Checked<SpikeCertificate> is_spike(const IntMatrix& a, std::size_t tip) {
  if (tip >= a.cols())
    throw DimensionError("tip " + std::to_string(tip) + " out of range");
  const std::size_t r = rank(a);
  if (r < 3) throw DomainError("degenerate rank: spikes need rank >= 3, got " + std::to_string(r));
  using Result = Checked<SpikeCertificate>;

  const MinorView whole(a);
  const auto pc = point_classes(whole);
  if (!pc.loops.empty())
    return Result::reject("not simple: column " + std::to_string(pc.loops.front()) + " is zero");
  for (const auto& cls : pc.classes)
    if (cls.size() > 1)
      return Result::reject("not simple: columns " + std::to_string(cls[0]) + " and " +
                            std::to_string(cls[1]) + " are parallel");

  const std::size_t t[] = {tip};
  const MinorView contracted = whole.contract(t);
  const auto classes = point_classes(contracted);
  SpikeCertificate cert;
  cert.tip = tip;
  cert.rank = r;
  for (const auto& cls : classes.classes) {
    if (cls.size() != 2)
      return Result::reject("parallel class of size != 2 in S/t (class of column " +
                            std::to_string(cls.front()) + " has " +
                            std::to_string(cls.size()) + ")");
    cert.partner_pairs.emplace_back(cls[0], cls[1]);
    cert.circuit_witness.push_back(cls[0]);
  }
  std::sort(cert.circuit_witness.begin(), cert.circuit_witness.end());
  if (!is_circuit(contracted, cert.circuit_witness))
    return Result::reject("simplification of S/t is not a circuit");
  return Result::accept(std::move(cert));
}

struct SpikeBoundVerdict {
  std::size_t delta = 0;
  /// Tight side: spike_tight(delta) is a rank-2*delta spike within the bound.
  bool tight_skipped = false;
  std::string tight_skip_reason;
  std::optional<SpikeCertificate> tight_certificate;
  std::optional<DeltaReport> tight_delta;
  /// Excluded side: spike_generic(2*delta + 1) is a spike beyond the bound.
  std::optional<SpikeCertificate> excluded_certificate;
  std::optional<DeltaReport> excluded_delta;
  bool passed = false;
};

inline SpikeBoundVerdict verify_spike_bound(std::size_t delta, const DeltaOptions& opt = {}) {
  if (delta < 1) throw DomainError("delta must be positive");
  if (delta > 4)
    throw BudgetExceeded("spike check limited to delta <= 4 (rank-" +
                         std::to_string(2 * delta + 1) + " enumeration)");
  SpikeBoundVerdict v;
  v.delta = delta;
  bool ok = true;
  if (delta == 1) {
    v.tight_skipped = true;
    v.tight_skip_reason = "a spike needs rank >= 3 > 2 * delta";
  } else {
    const IntMatrix tight = spike_tight(delta);
    auto cert = is_spike(tight, 0);
    v.tight_delta = delta_of(tight, opt);
    ok = ok && cert && cert.certificate->rank == 2 * delta && v.tight_delta->delta <= delta;
    v.tight_certificate = cert.certificate;
  }
  const IntMatrix over = spike_generic(2 * delta + 1);
  auto cert = is_spike(over, 0);
  v.excluded_delta = delta_of(over, opt);
  ok = ok && cert && v.excluded_delta->delta > delta;
  v.excluded_certificate = cert.certificate;
  v.passed = ok;
  return v;
}

// ---------------------------------------------------------------------------
// Stacks

struct StackPart {
  std::vector<std::size_t> elements;
  std::size_t rank = 0; ///< rank of (M / (P_1 u ... u P_{i-1})) | P_i
  U24Witness non_regular;
};

struct StackCertificate {
  std::size_t m = 0;
  std::vector<StackPart> parts;
};

/// (M_1, m, h)-stack check on the view, with h = parts.size().
inline Checked<StackCertificate> is_stack(const MinorView& v,
                                          const std::vector<std::vector<std::size_t>>& parts,
                                          std::size_t m, const MinorSearchOptions& opt = {}) {
  using Result = Checked<StackCertificate>;
  if (m < 2) throw DomainError("stack height parameter m must be >= 2");
  if (parts.empty()) throw DomainError("a stack needs at least one part");
  std::set<std::size_t> seen;
  for (const auto& p : parts)
    for (auto e : p) {
      if (!v.contains(e)) throw DimensionError("element " + std::to_string(e) + " not in view");
      if (!seen.insert(e).second)
        throw DimensionError("parts overlap at element " + std::to_string(e));
    }
  std::vector<std::size_t> all(seen.begin(), seen.end());
  if (minor_rank(v, all) != minor_rank(v)) return Result::reject("does not span");

  StackCertificate cert;
  cert.m = m;
  std::vector<std::size_t> before = v.contracted();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].empty())
      return Result::reject("part " + std::to_string(i + 1) + " is empty");
    const MinorView sub(v.ground_ptr(), before, parts[i]);
    StackPart part;
    part.elements = sub.restricted();
    part.rank = minor_rank(sub);
    if (part.rank > m)
      return Result::reject("part " + std::to_string(i + 1) + " has rank " +
                            std::to_string(part.rank) + " > m = " + std::to_string(m));
    auto w = find_u24_minor(sub, opt);
    if (!w)
      return Result::reject("part " + std::to_string(i + 1) +
                            " is regular (no U24 minor)");
    part.non_regular = std::move(*w);
    cert.parts.push_back(std::move(part));
    before.insert(before.end(), parts[i].begin(), parts[i].end());
  }
  return Result::accept(std::move(cert));
}

/// h copies of u24_matrix() on the diagonal, with the column blocks as parts.
inline std::pair<IntMatrix, std::vector<std::vector<std::size_t>>> u24_stack(std::size_t h) {
  if (h < 1) throw DomainError("stack height must be >= 1");
  std::vector<IntMatrix> blocks(h, u24_matrix());
  std::vector<std::vector<std::size_t>> parts(h);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t k = 0; k < 4; ++k) parts[i].push_back(4 * i + k);
  return {direct_sum(blocks), parts};
}

inline std::size_t floor_log2(std::uint64_t x) {
  std::size_t k = 0;
  while (x >>= 1) ++k;
  return k;
}

struct StackBoundEntry {
  std::size_t height = 0;
  StackCertificate certificate;
  DeltaReport delta;
};

struct StackBoundVerdict {
  std::size_t delta = 0;
  std::size_t excluded_height = 0; ///< floor(log2 delta) + 1
  std::vector<StackBoundEntry> entries;
  bool passed = false;
};

/// Builds u24 stacks of height 1..floor(log2 delta)+1 and checks that height h
/// forces delta exactly 2^h: the last height is not delta-modular and the one
/// below it is.
inline StackBoundVerdict verify_stack_bound(std::size_t delta, const DeltaOptions& opt = {}) {
  if (delta < 1) throw DomainError("delta must be positive");
  if (delta > 8) throw BudgetExceeded("stack check limited to delta <= 8");
  StackBoundVerdict v;
  v.delta = delta;
  v.excluded_height = floor_log2(delta) + 1;
  bool ok = true;
  for (std::size_t h = 1; h <= v.excluded_height; ++h) {
    auto [a, parts] = u24_stack(h);
    auto cert = is_stack(MinorView(a), parts, 2);
    if (!cert) {
      ok = false;
      break;
    }
    StackBoundEntry e{h, *cert.certificate, delta_of(a, opt)};
    ok = ok && e.delta.delta == (Integer(1) << h);
    if (h == v.excluded_height) ok = ok && e.delta.delta > delta;
    else if (h + 1 == v.excluded_height) ok = ok && e.delta.delta <= delta;
    v.entries.push_back(std::move(e));
  }
  v.passed = ok;
  return v;
}

// ---------------------------------------------------------------------------
// Clique extensions

/// A column of [I_r | D_r]: e_i when `j` is empty, otherwise e_i - e_j, i < j.
struct CliqueColumn {
  std::size_t i = 0;
  std::optional<std::size_t> j;

  std::size_t index(std::size_t r) const {
    return j ? clique_difference_index(r, i, *j) : i;
  }
  IntVector vector(std::size_t r) const {
    IntVector v(r, 0);
    v[i] = 1;
    if (j) v[*j] = -1;
    return v;
  }
  friend bool operator==(const CliqueColumn&, const CliqueColumn&) = default;
};

struct SpanCertificate {
  IntVector target;
  std::vector<CliqueColumn> chosen;
  Integer k = 0; ///< max(sum of positive entries, sum of |negative entries|)
  bool verified = false;
};

/// Greedy decomposition of f over the columns of [I_r | D_r]: while f has a
/// positive entry i and a negative entry j (smallest of each), take e_i - e_j
/// and move f toward zero along it; once f is single-signed take the units
/// of its support. At most k distinct columns are used.
inline SpanCertificate span_decompose(const IntVector& f) {
  SpanCertificate cert;
  cert.target = f;
  Integer pos = 0, neg = 0;
  for (const auto& x : f) (x > 0 ? pos : neg) += abs(x);
  cert.k = std::max(pos, neg);

  IntVector g = f;
  auto take = [&](CliqueColumn c) {
    if (std::find(cert.chosen.begin(), cert.chosen.end(), c) == cert.chosen.end())
      cert.chosen.push_back(c);
  };
  while (true) {
    std::optional<std::size_t> i, j;
    for (std::size_t t = 0; t < g.size(); ++t) {
      if (!i && g[t] > 0) i = t;
      if (!j && g[t] < 0) j = t;
    }
    if (!i || !j) break;
    // Repeating the unit step with the same (i, j) emits the same column, so
    // take the whole run at once.
    const Integer step = std::min(g[*i], Integer(-g[*j]));
    g[*i] -= step;
    g[*j] += step;
    take(CliqueColumn{std::min(*i, *j), std::max(*i, *j)});
  }
  for (std::size_t t = 0; t < g.size(); ++t)
    if (g[t] != 0) take(CliqueColumn{t, std::nullopt});

  std::vector<IntVector> cols;
  for (const auto& c : cert.chosen) cols.push_back(c.vector(f.size()));
  cert.verified = in_span(cols, f) && Integer(cert.chosen.size()) <= cert.k;
  return cert;
}

/// Smallest S within `x` (columns of A) whose span contains f; ties broken
/// lexicographically on the sorted index list.
inline std::vector<std::size_t> min_spanning_subset(const IntMatrix& a,
                                                    std::vector<std::size_t> x,
                                                    const IntVector& f,
                                                    std::uint64_t max_subsets = 20'000'000) {
  if (f.size() != a.rows()) throw DimensionError("target length must equal row count");
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  for (auto e : x)
    if (e >= a.cols()) throw DimensionError("column index out of range");

  std::vector<IntVector> cols;
  for (auto e : x) cols.push_back(a.column(e));
  if (!in_span(cols, f)) throw DomainError("not spanned: target is outside span(X)");

  std::uint64_t tried = 0;
  for (std::size_t size = 0; size <= x.size(); ++size)
    for (const auto& pick : detail::k_subsets(x.size(), size)) {
      if (++tried > max_subsets)
        throw BudgetExceeded("min_spanning_subset exceeded " + std::to_string(max_subsets) +
                             " subsets");
      std::vector<IntVector> sub;
      for (auto k : pick) sub.push_back(cols[k]);
      if (in_span(sub, f)) {
        std::vector<std::size_t> out;
        for (auto k : pick) out.push_back(x[k]);
        return out;
      }
    }
  throw DomainError("not spanned");
}

struct ExtensionBoundVerdict {
  std::size_t delta = 0;
  std::size_t rank = 0;
  DeltaReport matrix_delta;
  std::vector<std::size_t> minimum_subset;
  SpanCertificate greedy;
  bool passed = false;
};

/// extension_tight(delta, r) is delta-modular and its extra column needs
/// exactly delta clique columns.
inline ExtensionBoundVerdict verify_extension_bound(std::size_t delta, std::size_t r,
                                                    const DeltaOptions& opt = {}) {
  if (delta < 1) throw DomainError("delta must be positive");
  if (delta > 3 || r > 8)
    throw BudgetExceeded("extension check limited to delta <= 3, r <= 8");
  const IntMatrix a = extension_tight(delta, r);
  ExtensionBoundVerdict v;
  v.delta = delta;
  v.rank = r;
  v.matrix_delta = delta_of(a, opt);
  const std::size_t extra = a.cols() - 1;
  v.minimum_subset = min_spanning_subset(a, detail::iota_indices(extra), a.column(extra));
  v.greedy = span_decompose(a.column(extra));
  v.passed = v.matrix_delta.delta == delta && v.minimum_subset.size() == delta &&
             v.greedy.verified && v.greedy.chosen.size() <= delta;
  return v;
}

} // namespace dmod
