#pragma once

// Command-line front end. `dispatch` is kept separate from main() so tests can
// drive it with in-memory streams.

#include "dmod/dmod.hpp"
#include "dmod/json.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace dmod::cli {

using dmod::json::Json;

/// Bad flag values detected after CLI11 parsing; exit code 2.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 failed");
  std::string hex;
  char buf[3];
  for (unsigned int k = 0; k < len; ++k) {
    std::snprintf(buf, sizeof buf, "%02x", md[k]);
    hex += buf;
  }
  return hex;
}

/// "0,3,5" -> {0,3,5}; "0-3" ranges are also accepted.
inline std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  auto number = [&](const std::string& s) -> std::size_t {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw UsageError("bad index '" + s + "' in '" + text + "'");
    return std::stoull(s);
  };
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove(item.begin(), item.end(), ' '), item.end());
    if (item.empty()) continue;
    auto dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(number(item));
    } else {
      const auto lo = number(item.substr(0, dash)), hi = number(item.substr(dash + 1));
      if (lo > hi) throw UsageError("empty range '" + item + "'");
      for (auto k = lo; k <= hi; ++k) out.push_back(k);
    }
  }
  return out;
}

/// "0-3;4-7" -> {{0,1,2,3},{4,5,6,7}}
inline std::vector<std::vector<std::size_t>> parse_parts(const std::string& text) {
  std::vector<std::vector<std::size_t>> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) parts.push_back(parse_index_list(item));
  if (parts.empty()) throw UsageError("--parts is empty");
  return parts;
}

inline IntVector parse_vector(const std::string& text) {
  IntVector v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove(item.begin(), item.end(), ' '), item.end());
    if (!detail::is_integer_token(item)) throw UsageError("bad vector entry '" + item + "'");
    v.push_back(detail::parse_integer(item));
  }
  if (v.empty()) throw UsageError("--vector is empty");
  return v;
}

/// Operand token for direct_sum: "u24", "clique:3", "conjecture:3,4".
inline ConstructionSpec parse_operand(const std::string& token) {
  ConstructionSpec spec{};
  const auto colon = token.find(':');
  try {
    spec.family = parse_family(token.substr(0, colon));
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  if (spec.family == Family::direct_sum) throw UsageError("nested direct_sum is not supported");
  if (colon != std::string::npos) {
    std::stringstream ss(token.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!detail::is_integer_token(item)) throw UsageError("bad parameter '" + item + "'");
      spec.parameters.push_back(std::stoll(item));
    }
  }
  return spec;
}

struct Context {
  std::istream& in;
  std::ostream& out;
  bool as_json = false;
  std::string threads = "auto";

  unsigned thread_count() const {
    if (threads == "auto") return std::max(1u, std::thread::hardware_concurrency());
    try {
      const long long t = std::stoll(threads);
      if (t >= 1 && t <= 1024) return static_cast<unsigned>(t);
    } catch (const std::exception&) {
    }
    throw UsageError("--threads must be 'auto' or a positive integer");
  }
  DeltaOptions delta_options() const { return DeltaOptions{thread_count(), false}; }
};

struct Input {
  IntMatrix matrix;
  Json echo;
};

inline Input read_matrix(Context& ctx, const std::string& path) {
  std::string bytes;
  if (path == "-") {
    bytes.assign(std::istreambuf_iterator<char>(ctx.in), std::istreambuf_iterator<char>());
  } else {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "'");
    bytes.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  }
  Input in{parse_matrix(bytes), Json::object()};
  in.echo = Json{{"path", path}, {"sha256", sha256_hex(bytes)}};
  return in;
}

struct ViewFlags {
  std::string contract;
  std::string restrict_to;

  void attach(CLI::App* app) {
    app->add_option("--contract", contract, "elements to contract, e.g. 0,3");
    app->add_option("--restrict", restrict_to, "elements to keep, e.g. 1,2,5 (default: the rest)");
  }

  MinorView build(const IntMatrix& a, Json& echo) const {
    const auto t = parse_index_list(contract);
    std::vector<std::size_t> x;
    if (restrict_to.empty()) {
      for (std::size_t e = 0; e < a.cols(); ++e)
        if (std::find(t.begin(), t.end(), e) == t.end()) x.push_back(e);
    } else {
      x = parse_index_list(restrict_to);
    }
    for (auto e : t)
      if (e >= a.cols()) throw UsageError("--contract index " + std::to_string(e) + " out of range");
    for (auto e : x)
      if (e >= a.cols()) throw UsageError("--restrict index " + std::to_string(e) + " out of range");
    try {
      MinorView v(a, t, x);
      echo["contract"] = v.contracted();
      echo["restrict"] = v.restricted();
      return v;
    } catch (const DimensionError& e) {
      throw UsageError(e.what());
    }
  }
};

inline void check_element(const MinorView& v, std::size_t e, const char* flag) {
  if (!v.contains(e))
    throw UsageError(std::string(flag) + " " + std::to_string(e) + " is not an element of the view");
}

inline std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? " " : "") + std::to_string(v[k]);
  return s;
}

inline std::string join(const IntVector& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? " " : "") + to_string(v[k]);
  return s;
}

inline std::string certificate_line(const Json& c) {
  return c["kind"].get<std::string>() + ": " +
         (c["verified"].get<bool>() ? "certified" : "rejected (" + c["reason"].get<std::string>() + ")");
}

/// Runs one command line. Returns 0 on success, 1 on a domain or input error,
/// 2 on a usage error.
inline int dispatch(std::vector<std::string> args, std::istream& in, std::ostream& out,
                    std::ostream& err) {
  Context ctx{in, out};
  CLI::App app{"Exact tools for delta-modular integer matrices", "dmod"};
  app.require_subcommand(1);
  app.add_flag("--json", ctx.as_json, "print a JSON report instead of text");
  app.add_option("--threads", ctx.threads, "worker threads for delta searches ('auto' or N)")
      ->capture_default_str();

  std::string command;
  Json inputs = Json::object();
  Json outcome = Json::object();
  std::string text;
  // Verdict-style commands may succeed while reporting a failed check.
  bool verdict_failed = false;

  auto file_option = [](CLI::App* sub, std::string& path) {
    sub->add_option("file", path, "matrix file in text format, '-' for stdin")->required();
  };

  // delta
  std::string delta_file;
  std::optional<std::string> limit;
  bool hadamard = false;
  auto* delta_cmd = app.add_subcommand("delta", "largest rank x rank subdeterminant");
  file_option(delta_cmd, delta_file);
  delta_cmd->add_option("--limit", limit, "only decide whether delta <= limit");
  delta_cmd->add_flag("--hadamard", hadamard, "enable Hadamard-bound pruning");

  // points
  std::string points_file;
  ViewFlags points_view;
  auto* points_cmd = app.add_subcommand("points", "parallel classes (points) of a matrix or minor");
  file_option(points_cmd, points_file);
  points_view.attach(points_cmd);

  // check ...
  auto* check_cmd = app.add_subcommand("check", "certify a structure");
  check_cmd->require_subcommand(1);
  std::string check_file;
  ViewFlags check_view;
  std::size_t tip = 0;
  auto* spike_cmd = check_cmd->add_subcommand("spike", "is the matrix a spike with this tip");
  file_option(spike_cmd, check_file);
  spike_cmd->add_option("--tip", tip, "tip column")->required();
  std::string parts_text;
  std::size_t stack_m = 2;
  auto* stack_cmd = check_cmd->add_subcommand("stack", "is the view an (M_1, m, h)-stack");
  file_option(stack_cmd, check_file);
  stack_cmd->add_option("--parts", parts_text, "parts, e.g. \"0-3;4-7\"")->required();
  stack_cmd->add_option("--m", stack_m, "rank cap per part")->capture_default_str();
  check_view.attach(stack_cmd);
  std::size_t vconn_s = 2;
  auto* vconn_cmd = check_cmd->add_subcommand("vconn", "vertical s-connectivity");
  file_option(vconn_cmd, check_file);
  vconn_cmd->add_option("--s", vconn_s, "connectivity s")->required();
  check_view.attach(vconn_cmd);
  auto* u24_cmd = check_cmd->add_subcommand("u24", "search for a U_{2,4} minor");
  file_option(u24_cmd, check_file);
  check_view.attach(u24_cmd);
  std::size_t element = 0;
  long long threshold = 0;
  auto* critical_cmd = check_cmd->add_subcommand("critical", "long lines through an element");
  file_option(critical_cmd, check_file);
  critical_cmd->add_option("--element", element, "element f")->required();
  critical_cmd->add_option("--threshold", threshold, "critical when #long lines > r(Z) + threshold")
      ->capture_default_str();
  check_view.attach(critical_cmd);

  // decompose
  std::string vector_text;
  bool minimum = false;
  auto* decompose_cmd =
      app.add_subcommand("decompose", "greedy span decomposition over [I_r | D_r]");
  decompose_cmd->add_option("--vector", vector_text, "target f, e.g. \"2,-1,-1\"")->required();
  decompose_cmd->add_flag("--minimum", minimum, "also compute an exact minimum spanning subset");

  // construct
  std::string family_text;
  std::vector<std::string> family_args;
  auto* construct_cmd = app.add_subcommand("construct", "emit a matrix family");
  construct_cmd->add_option("family", family_text, "clique, conjecture, spike_tight, spike_generic, "
                                                   "rank3_spike, extension_tight, u24, direct_sum")
      ->required();
  construct_cmd->add_option("params", family_args,
                            "integer parameters, or operands like u24 clique:3 for direct_sum");

  // search
  auto* search_cmd = app.add_subcommand("search", "exhaustive column-number search");
  search_cmd->require_subcommand(1);
  long long search_delta = 1, box_scale = 1;
  std::size_t search_rank = 3;
  std::uint64_t budget = 200'000'000ULL;
  auto* rank2_cmd = search_cmd->add_subcommand("rank2", "maximum rank-2 configuration");
  rank2_cmd->add_option("--delta", search_delta, "delta")->required();
  rank2_cmd->add_option("--box-scale", box_scale, "enlarge the search box")->capture_default_str();
  auto* exact_cmd = search_cmd->add_subcommand("exact", "maximum rank-r configuration");
  exact_cmd->add_option("--rank", search_rank, "rank r")->required();
  exact_cmd->add_option("--delta", search_delta, "delta")->required();
  exact_cmd->add_option("--budget", budget, "node budget")->capture_default_str();

  // bounds
  std::uint64_t bound_delta = 1, bound_rank = 1;
  auto* bounds_cmd = app.add_subcommand("bounds", "evaluate closed-form bounds");
  bounds_cmd->add_option("--delta", bound_delta, "delta")->required();
  bounds_cmd->add_option("--rank", bound_rank, "rank r")->required();

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "desk-scale checks of the forbidden structures");
  verify_cmd->require_subcommand(1);
  std::size_t verify_delta = 1;
  std::optional<std::size_t> verify_rank;
  auto* prop1_cmd = verify_cmd->add_subcommand("prop1", "spike rank bound");
  auto* prop2_cmd = verify_cmd->add_subcommand("prop2", "stack height bound");
  auto* prop3_cmd = verify_cmd->add_subcommand("prop3", "clique extension span bound");
  for (auto* c : {prop1_cmd, prop2_cmd, prop3_cmd})
    c->add_option("--delta", verify_delta, "delta")->required();
  prop3_cmd->add_option("--rank", verify_rank, "rank r (default 2*delta+1)");

  for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();
  for (auto* parent : {check_cmd, search_cmd, verify_cmd})
    for (auto* sub : parent->get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  auto fail = [&](const std::string& message, int code) {
    if (ctx.as_json) {
      Json report{{"schema", 1},
                  {"command", command},
                  {"inputs", inputs},
                  {"status", "error"},
                  {"message", message},
                  {"exit_code", code}};
      out << report.dump(2) << '\n';
    }
    err << "error: " << message << '\n';
    return code;
  };

  try {
    std::ostringstream t;
    if (delta_cmd->parsed()) {
      command = "delta";
      auto input = read_matrix(ctx, delta_file);
      inputs["file"] = input.echo;
      if (hadamard) inputs["hadamard"] = true;
      auto opt = ctx.delta_options();
      opt.hadamard_pruning = hadamard;
      if (limit) {
        Integer bound;
        if (!detail::is_integer_token(*limit)) throw UsageError("--limit must be an integer");
        bound = detail::parse_integer(*limit);
        if (bound < 1) throw UsageError("--limit must be positive");
        inputs["limit"] = json::integer(bound);
        auto v = find_violation(input.matrix, bound);
        outcome["delta_modular"] = !v.has_value();
        if (v) {
          outcome["violation"] = Json{{"determinant", json::integer(v->determinant)},
                                      {"rows", v->rows},
                                      {"cols", v->cols}};
          t << "not " << *limit << "-modular: |det| = " << v->determinant << " at rows "
            << join(v->rows) << ", cols " << join(v->cols) << '\n';
        } else {
          outcome["violation"] = nullptr;
          t << *limit << "-modular\n";
        }
      } else {
        const auto d = delta_of(input.matrix, opt);
        outcome = json::delta_report(d);
        t << "rank   " << d.rank << "\ndelta  " << d.delta << "\nrows   " << join(d.witness_rows)
          << "\ncols   " << join(d.witness_cols) << '\n';
      }
    } else if (points_cmd->parsed()) {
      command = "points";
      auto input = read_matrix(ctx, points_file);
      inputs["file"] = input.echo;
      const MinorView v = points_view.build(input.matrix, inputs);
      const auto pc = point_classes(v);
      outcome = Json{{"points", pc.classes.size()}, {"classes", pc.classes}, {"loops", pc.loops}};
      t << "points " << pc.classes.size() << '\n';
      for (const auto& c : pc.classes) t << "  {" << join(c) << "}\n";
      if (!pc.loops.empty()) t << "loops  {" << join(pc.loops) << "}\n";
    } else if (check_cmd->parsed()) {
      auto input = read_matrix(ctx, check_file);
      inputs["file"] = input.echo;
      const IntMatrix& a = input.matrix;
      if (spike_cmd->parsed()) {
        command = "check spike";
        inputs["tip"] = tip;
        if (tip >= a.cols())
          throw UsageError("--tip " + std::to_string(tip) + " out of range (matrix has " +
                           std::to_string(a.cols()) + " columns)");
        outcome = json::spike(is_spike(a, tip), tip);
      } else if (stack_cmd->parsed()) {
        command = "check stack";
        const MinorView v = check_view.build(a, inputs);
        const auto parts = parse_parts(parts_text);
        inputs["parts"] = parts;
        inputs["m"] = stack_m;
        for (const auto& p : parts)
          for (auto e : p) check_element(v, e, "--parts element");
        outcome = json::stack(is_stack(v, parts, stack_m), parts, stack_m);
      } else if (vconn_cmd->parsed()) {
        command = "check vconn";
        const MinorView v = check_view.build(a, inputs);
        if (vconn_s < 1) throw UsageError("--s must be positive");
        inputs["s"] = vconn_s;
        outcome = json::vertical(v, vconn_s, find_vertical_separation(v, vconn_s));
      } else if (u24_cmd->parsed()) {
        command = "check u24";
        const MinorView v = check_view.build(a, inputs);
        const auto w = find_u24_minor(v);
        outcome = json::certificate("u24_minor", w ? json::u24_witness(*w) : Json::object(),
                                    w.has_value(), w ? "" : "no U24 minor (binary)");
      } else if (critical_cmd->parsed()) {
        command = "check critical";
        const MinorView v = check_view.build(a, inputs);
        check_element(v, element, "--element");
        inputs["element"] = element;
        inputs["threshold"] = threshold;
        const auto rep = critical_report(v, element, threshold);
        outcome = json::certificate(
            "critical",
            Json{{"element", element}, {"long_lines", rep.long_lines}, {"span_rank", rep.span_rank}},
            rep.critical, rep.critical ? "" : "long lines do not exceed r(Z) + threshold");
      }
      t << certificate_line(outcome) << '\n' << outcome["indices"].dump() << '\n';
    } else if (decompose_cmd->parsed()) {
      command = "decompose";
      const IntVector f = parse_vector(vector_text);
      inputs["vector"] = json::vector(f);
      const auto cert = span_decompose(f);
      outcome["greedy"] = json::span(cert);
      t << "greedy  " << cert.chosen.size() << " columns (k = " << cert.k << ")\n";
      for (const auto& c : cert.chosen)
        t << "  " << c.index(f.size()) << ": " << join(c.vector(f.size())) << '\n';
      if (minimum) {
        inputs["minimum"] = true;
        const IntMatrix a = clique_matrix(f.size());
        const auto s = min_spanning_subset(a, detail::iota_indices(a.cols()), f);
        outcome["minimum_subset"] = s;
        t << "minimum " << s.size() << " columns: " << join(s) << '\n';
      }
    } else if (construct_cmd->parsed()) {
      command = "construct";
      ConstructionSpec spec{};
      try {
        spec.family = parse_family(family_text);
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
      inputs["family"] = family_text;
      if (spec.family == Family::direct_sum) {
        for (const auto& tok : family_args) spec.operands.push_back(parse_operand(tok));
        inputs["operands"] = family_args;
      } else {
        for (const auto& tok : family_args) {
          if (!detail::is_integer_token(tok)) throw UsageError("bad parameter '" + tok + "'");
          spec.parameters.push_back(std::stoll(tok));
        }
        if (spec.parameters.size() != family_arity(spec.family))
          throw UsageError(family_text + " takes " + std::to_string(family_arity(spec.family)) +
                           " parameter(s)");
        inputs["parameters"] = spec.parameters;
      }
      const IntMatrix a = build(spec);
      outcome = Json{{"rows", a.rows()}, {"cols", a.cols()}, {"matrix", json::matrix(a)}};
      t << emit_matrix(a);
    } else if (search_cmd->parsed()) {
      SearchResult res;
      if (rank2_cmd->parsed()) {
        command = "search rank2";
        inputs["delta"] = search_delta;
        inputs["box_scale"] = box_scale;
        res = rank2_maximum(search_delta, box_scale);
      } else {
        command = "search exact";
        inputs["rank"] = search_rank;
        inputs["delta"] = search_delta;
        inputs["budget"] = budget;
        res = exact_maximum(search_rank, search_delta, budget);
      }
      outcome = json::search_result(res);
      t << "maximum    " << res.maximum << (res.exhaustive ? "" : " (lower bound, budget exhausted)")
        << "\nnodes      " << res.nodes_explored << "\nwitness   ";
      for (const auto& w : res.witness) t << " (" << join(w) << ")";
      t << '\n';
    } else if (bounds_cmd->parsed()) {
      command = "bounds";
      inputs["delta"] = bound_delta;
      inputs["rank"] = bound_rank;
      const auto lp = bound_lpsx(bound_delta, bound_rank);
      const auto mn = bound_main(bound_delta, bound_rank);
      const auto fi = bound_final(bound_delta, bound_rank);
      const auto r2 = rank2_bounds(bound_delta);
      outcome = Json{{"lpsx", json::integer(lp)},
                     {"main", json::integer(mn)},
                     {"final", json::integer(fi)},
                     {"rank2", json::rank2_bounds(r2)}};
      t << "delta^2 C(r+1,2)              " << lp << "\nC(r+1,2) + 80 delta^7 r       " << mn
        << "\nfinal                         " << fi << "\nrank 2: lower " << r2.lower
        << ", upper min(" << r2.three_halves << ", " << r2.prime_plus_one << ") = " << r2.upper
        << (r2.conflicting ? "  [lower > upper]" : "") << '\n';
    } else if (verify_cmd->parsed()) {
      inputs["delta"] = verify_delta;
      const auto opt = ctx.delta_options();
      if (prop1_cmd->parsed()) {
        command = "verify prop1";
        const auto v = verify_spike_bound(verify_delta, opt);
        outcome = json::spike_bound(v);
        verdict_failed = !v.passed;
      } else if (prop2_cmd->parsed()) {
        command = "verify prop2";
        const auto v = verify_stack_bound(verify_delta, opt);
        outcome = json::stack_bound(v);
        verdict_failed = !v.passed;
      } else {
        command = "verify prop3";
        const std::size_t r = verify_rank.value_or(2 * verify_delta + 1);
        inputs["rank"] = r;
        const auto v = verify_extension_bound(verify_delta, r, opt);
        outcome = json::extension_bound(v);
        verdict_failed = !v.passed;
      }
      t << command << ": " << (verdict_failed ? "FAILED" : "passed") << '\n' << outcome.dump(2) << '\n';
    }
    text = t.str();
  } catch (const UsageError& e) {
    return fail(e.what(), 2);
  } catch (const ParseError& e) {
    return fail(std::string("parse error at row ") + std::to_string(e.line()) + ", token " +
                    std::to_string(e.token()) + ": " + e.what(),
                1);
  } catch (const Error& e) {
    return fail(e.what(), 1);
  }

  if (ctx.as_json) {
    Json report{{"schema", 1},
                {"command", command},
                {"inputs", inputs},
                {"status", verdict_failed ? "failed" : "ok"},
                {"outcome", outcome}};
    out << report.dump(2) << '\n';
  } else {
    out << text;
  }
  return verdict_failed ? 1 : 0;
}

} // namespace dmod::cli
