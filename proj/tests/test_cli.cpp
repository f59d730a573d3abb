#include "cli.hpp"

#include <catch_amalgamated.hpp>

#include <sstream>

using namespace dmod;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = cli::dispatch(std::move(args), in, out, err);
  return {code, out.str(), err.str()};
}

cli::Json run_json(std::vector<std::string> args, const std::string& stdin_text = "") {
  args.insert(args.begin(), "--json");
  auto r = run(std::move(args), stdin_text);
  return cli::Json::parse(r.out);
}

} // namespace

TEST_CASE("cli delta", "[cli]") {
  const auto text = emit_matrix(clique_matrix(3));
  auto r = run({"delta", "-"}, text);
  CHECK(r.code == 0);
  CHECK(r.out.find("delta  1") != std::string::npos);

  auto j = run_json({"delta", "-"}, text);
  CHECK(j["schema"] == 1);
  CHECK(j["status"] == "ok");
  CHECK(j["outcome"]["delta"] == 1);
  CHECK(j["inputs"]["file"]["sha256"].get<std::string>().size() == 64);

  auto lim = run_json({"delta", "-", "--limit", "1"}, emit_matrix(u24_matrix()));
  CHECK(lim["outcome"]["delta_modular"] == false);
  CHECK(lim["outcome"]["violation"]["determinant"] == 2);

  CHECK(run({"delta", "-", "--limit", "0"}, text).code == 2);
}

TEST_CASE("cli reports are byte-identical across runs and thread counts", "[cli]") {
  const auto text = emit_matrix(conjecture_matrix(2, 4));
  const auto a = run({"--json", "--threads", "1", "delta", "-"}, text).out;
  const auto b = run({"--json", "--threads", "1", "delta", "-"}, text).out;
  CHECK(a == b);
  auto c = cli::Json::parse(run({"--json", "--threads", "3", "delta", "-"}, text).out);
  CHECK(c["outcome"] == cli::Json::parse(a)["outcome"]);
}

TEST_CASE("cli errors and exit codes", "[cli]") {
  auto parse = run({"delta", "-"}, "2 2\n1 x\n0 1\n");
  CHECK(parse.code == 1);
  CHECK(parse.err.find("row 1, token 2") != std::string::npos);

  auto tip = run({"check", "spike", "-", "--tip", "99"}, emit_matrix(rank3_spike()));
  CHECK(tip.code == 2);

  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"delta"}).code == 2);
  CHECK(run({"delta", "/nonexistent/file"}).code == 1);
  CHECK(run({"--threads", "zero", "delta", "-"}, emit_matrix(u24_matrix())).code == 2);
  CHECK(run({"search", "rank2", "--delta", "40"}).code == 1);
  CHECK(run({"--help"}).code == 0);

  auto j = run_json({"delta", "-"}, "0 0\n");
  CHECK(j["status"] == "error");
  CHECK(j["exit_code"] == 1);
}

TEST_CASE("cli check", "[cli]") {
  auto spike = run({"check", "spike", "-", "--tip", "0"}, emit_matrix(rank3_spike()));
  CHECK(spike.code == 0);
  CHECK(spike.out.find("spike: certified") != std::string::npos);

  auto c = run_json({"check", "spike", "-", "--tip", "0"}, emit_matrix(clique_matrix(3)));
  CHECK(c["outcome"]["kind"] == "spike");
  CHECK(c["outcome"]["verified"] == false);
  CHECK(c["outcome"]["reason"].get<std::string>().find("parallel class") == 0);

  auto stack = run_json({"check", "stack", "-", "--parts", "0-3;4-7", "--m", "2"},
                        emit_matrix(u24_stack(2).first));
  CHECK(stack["outcome"]["verified"] == true);
  CHECK(stack["outcome"]["indices"]["parts"].size() == 2);

  auto vconn = run_json({"check", "vconn", "-", "--s", "2"}, emit_matrix(clique_matrix(4)));
  CHECK(vconn["outcome"]["verified"] == true);

  auto view = run_json({"check", "u24", "-", "--contract", "0", "--restrict", "1,2,3"},
                       emit_matrix(u24_matrix()));
  CHECK(view["outcome"]["verified"] == false);
  CHECK(view["inputs"]["contract"] == cli::Json::array({0}));

  auto crit = run_json({"check", "critical", "-", "--element", "0"}, emit_matrix(clique_matrix(3)));
  CHECK(crit["outcome"]["indices"]["long_lines"] == 2);
  CHECK(crit["outcome"]["verified"] == false);

  CHECK(run({"check", "vconn", "-", "--s", "2", "--contract", "9"}, emit_matrix(u24_matrix())).code == 2);
}

TEST_CASE("cli points, decompose, construct", "[cli]") {
  auto p = run_json({"points", "-"}, emit_matrix(conjecture_matrix(3, 4)));
  CHECK(p["outcome"]["points"] == 16);

  auto d = run_json({"decompose", "--vector", "2,-1,-1", "--minimum"});
  CHECK(d["outcome"]["greedy"]["indices"]["size"] == 2);
  CHECK(d["outcome"]["greedy"]["verified"] == true);
  CHECK(d["outcome"]["minimum_subset"].size() == 2);

  CHECK(run({"construct", "clique", "2"}).out == "2 3\n1 0 1\n0 1 -1\n");
  CHECK(parse_matrix(run({"construct", "direct_sum", "u24", "clique:2"}).out) ==
        direct_sum({u24_matrix(), clique_matrix(2)}));
  CHECK(run({"construct", "spike_tight", "1"}).code == 1);
  CHECK(run({"construct", "clique"}).code == 2);
  CHECK(run({"construct", "bogus"}).code == 2);
}

TEST_CASE("cli search, bounds, verify", "[cli]") {
  auto s = run_json({"search", "rank2", "--delta", "2"});
  CHECK(s["outcome"]["maximum"] == 4);
  CHECK(s["outcome"]["exhaustive"] == true);
  CHECK(s["outcome"]["normalization"]["scheme"] == "rank2-box");

  auto e = run_json({"search", "exact", "--rank", "3", "--delta", "1"});
  CHECK(e["outcome"]["maximum"] == 6);

  auto b = run_json({"bounds", "--delta", "2", "--rank", "10"});
  CHECK(b["outcome"]["final"] == 90295);
  auto b1 = run_json({"bounds", "--delta", "1", "--rank", "10"});
  CHECK(b1["outcome"]["main"] == 855);
  CHECK(b1["outcome"]["rank2"]["conflicting"] == true);

  auto v1 = run_json({"verify", "prop1", "--delta", "2"});
  CHECK(v1["status"] == "ok");
  CHECK(v1["outcome"]["tight"]["certificate"]["kind"] == "spike");
  auto v2 = run_json({"verify", "prop2", "--delta", "4"});
  CHECK(v2["outcome"]["entries"].size() == 3);
  auto v3 = run_json({"verify", "prop3", "--delta", "2"});
  CHECK(v3["inputs"]["rank"] == 5);
  CHECK(v3["outcome"]["passed"] == true);
}
