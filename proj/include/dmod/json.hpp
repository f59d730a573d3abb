#pragma once

// JSON encodings of reports and certificates. Integers that fit in 64 bits
// are numbers; larger ones are decimal strings.

#include "dmod/delta.hpp"
#include "dmod/extremal.hpp"
#include "dmod/matroid_view.hpp"
#include "dmod/structures.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace dmod::json {

using nlohmann::ordered_json;
using Json = ordered_json;

inline Json integer(const Integer& x) {
  if (auto v = to_int64(x)) return *v;
  return to_string(x);
}

inline Json vector(const IntVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(integer(x));
  return out;
}

inline Json matrix(const IntMatrix& a) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(integer(a(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json delta_report(const DeltaReport& d) {
  return Json{{"rank", d.rank},
              {"delta", integer(d.delta)},
              {"witness_rows", d.witness_rows},
              {"witness_cols", d.witness_cols}};
}

inline Json certificate(std::string kind, Json indices, bool verified, std::string reason) {
  return Json{{"kind", std::move(kind)},
              {"indices", std::move(indices)},
              {"verified", verified},
              {"reason", std::move(reason)}};
}

inline Json spike_indices(const SpikeCertificate& c) {
  Json pairs = Json::array();
  for (auto [a, b] : c.partner_pairs) pairs.push_back(Json::array({a, b}));
  return Json{{"tip", c.tip},
              {"rank", c.rank},
              {"partner_pairs", std::move(pairs)},
              {"circuit_witness", c.circuit_witness}};
}

inline Json spike(const Checked<SpikeCertificate>& c, std::size_t tip) {
  return certificate("spike", c ? spike_indices(*c.certificate) : Json{{"tip", tip}}, c.ok(),
                     c.reason);
}

inline Json u24_witness(const U24Witness& w) {
  return Json{{"contracted", w.contracted},
              {"points", std::vector<std::size_t>(w.points.begin(), w.points.end())}};
}

inline Json stack_indices(const StackCertificate& c) {
  Json parts = Json::array();
  for (const auto& p : c.parts)
    parts.push_back(Json{{"elements", p.elements},
                         {"rank", p.rank},
                         {"u24_minor", u24_witness(p.non_regular)}});
  return Json{{"m", c.m}, {"parts", std::move(parts)}};
}

inline Json stack(const Checked<StackCertificate>& c,
                  const std::vector<std::vector<std::size_t>>& parts, std::size_t m) {
  return certificate("stack",
                     c ? stack_indices(*c.certificate) : Json{{"m", m}, {"parts", parts}},
                     c.ok(), c.reason);
}

inline Json span(const SpanCertificate& c) {
  const std::size_t r = c.target.size();
  Json chosen = Json::array();
  for (const auto& col : c.chosen) {
    Json e{{"column", col.index(r)}, {"i", col.i}};
    e["j"] = col.j ? Json(*col.j) : Json(nullptr);
    chosen.push_back(std::move(e));
  }
  Json idx{{"target", vector(c.target)},
           {"chosen", std::move(chosen)},
           {"size", c.chosen.size()},
           {"k", integer(c.k)}};
  return certificate("span", std::move(idx), c.verified,
                     c.verified ? "" : "target not in span of chosen columns");
}

inline Json vertical(const MinorView& v, std::size_t s,
                     const std::optional<VerticalSeparation>& sep) {
  Json idx{{"s", s}, {"contracted", v.contracted()}, {"restricted", v.restricted()}};
  if (sep) {
    idx["x"] = sep->x;
    idx["y"] = sep->y;
    idx["order"] = sep->order;
  }
  return certificate("vertical_connectivity", std::move(idx), !sep.has_value(),
                     sep ? "vertical " + std::to_string(sep->order) + "-separation" : "");
}

inline Json spike_bound(const SpikeBoundVerdict& v) {
  Json out{{"delta", v.delta}, {"passed", v.passed}};
  Json tight{{"skipped", v.tight_skipped}};
  if (v.tight_skipped) tight["reason"] = v.tight_skip_reason;
  if (v.tight_certificate)
    tight["certificate"] = certificate("spike", spike_indices(*v.tight_certificate), true, "");
  if (v.tight_delta) tight["delta"] = delta_report(*v.tight_delta);
  Json excluded = Json::object();
  excluded["certificate"] =
      v.excluded_certificate
          ? certificate("spike", spike_indices(*v.excluded_certificate), true, "")
          : certificate("spike", Json{{"tip", 0}}, false, "not a spike");
  if (v.excluded_delta) excluded["delta"] = delta_report(*v.excluded_delta);
  out["tight"] = std::move(tight);
  out["excluded"] = std::move(excluded);
  return out;
}

inline Json stack_bound(const StackBoundVerdict& v) {
  Json entries = Json::array();
  for (const auto& e : v.entries)
    entries.push_back(Json{{"height", e.height},
                           {"certificate", certificate("stack", stack_indices(e.certificate), true, "")},
                           {"delta", delta_report(e.delta)}});
  return Json{{"delta", v.delta},
              {"excluded_height", v.excluded_height},
              {"entries", std::move(entries)},
              {"passed", v.passed}};
}

inline Json extension_bound(const ExtensionBoundVerdict& v) {
  return Json{{"delta", v.delta},
              {"rank", v.rank},
              {"matrix_delta", delta_report(v.matrix_delta)},
              {"minimum_subset", v.minimum_subset},
              {"greedy", span(v.greedy)},
              {"passed", v.passed}};
}

inline Json search_result(const SearchResult& s) {
  Json params = Json::object();
  for (const auto& [k, v] : s.normalization.parameters) params[k] = v;
  Json witness = Json::array();
  for (const auto& w : s.witness) witness.push_back(vector(w));
  return Json{{"rank", s.rank},
              {"delta_bound", s.delta_bound},
              {"maximum", s.maximum},
              {"witness", std::move(witness)},
              {"normalization",
               Json{{"scheme", s.normalization.scheme},
                    {"parameters", std::move(params)},
                    {"argument", s.normalization.argument}}},
              {"nodes_explored", s.nodes_explored},
              {"exhaustive", s.exhaustive}};
}

inline Json rank2_bounds(const Rank2Bounds& b) {
  return Json{{"lower", integer(b.lower)},
              {"three_halves", integer(b.three_halves)},
              {"prime", b.prime},
              {"prime_plus_one", integer(b.prime_plus_one)},
              {"upper", integer(b.upper)},
              {"conflicting", b.conflicting}};
}

} // namespace dmod::json
