#include "dmod/dmod.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace dmod;
using Idx = std::vector<std::size_t>;

TEST_CASE("is_spike", "[structures]") {
  SECTION("rank-3 spike") {
    auto c = is_spike(rank3_spike(), 0);
    REQUIRE(c);
    CHECK(c.certificate->rank == 3);
    CHECK(c.certificate->partner_pairs.size() == 3);
  }
  SECTION("tight spike at delta 3") {
    auto c = is_spike(spike_tight(3), 0);
    REQUIRE(c);
    CHECK(c.certificate->rank == 6);
    CHECK(c.certificate->partner_pairs.size() == 6);
  }
  SECTION("clique is not a spike") {
    auto c = is_spike(clique_matrix(3), 0);
    REQUIRE_FALSE(c);
    CHECK(c.reason.rfind("parallel class of size != 2 in S/t", 0) == 0);
  }
  SECTION("non-simple input") {
    auto a = direct_sum({IntMatrix::from_rows({{1, 2}}), clique_matrix(2)});
    auto c = is_spike(a, 2);
    REQUIRE_FALSE(c);
    CHECK(c.reason.rfind("not simple", 0) == 0);
  }
  SECTION("errors") {
    CHECK_THROWS_AS(is_spike(u24_matrix(), 0), DomainError);
    CHECK_THROWS_AS(is_spike(rank3_spike(), 7), DimensionError);
  }
  SECTION("invariant under column permutation and unimodular row operations") {
    std::mt19937_64 rng(4);
    const IntMatrix base = spike_generic(4);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<std::size_t> perm(base.cols());
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      std::shuffle(perm.begin(), perm.end(), rng);
      const auto moved = oracle::random_unimodular(rng, base.rows(), 10) * base.select_columns(perm);
      const std::size_t new_tip = std::find(perm.begin(), perm.end(), 0) - perm.begin();
      REQUIRE(is_spike(moved, new_tip).ok());
      const std::size_t other = (new_tip + 1) % base.cols();
      REQUIRE(is_spike(moved, other).ok() == is_spike(base, perm[other]).ok());
    }
  }
}

TEST_CASE("verify_spike_bound", "[structures]") {
  auto v2 = verify_spike_bound(2);
  CHECK(v2.passed);
  REQUIRE(v2.tight_delta);
  CHECK(v2.tight_delta->delta == 2);
  CHECK(v2.tight_certificate->rank == 4);
  CHECK(v2.excluded_delta->delta >= 3);

  auto v1 = verify_spike_bound(1);
  CHECK(v1.tight_skipped);
  CHECK_FALSE(v1.tight_skip_reason.empty());
  CHECK(v1.passed);

  CHECK_THROWS_AS(verify_spike_bound(5), BudgetExceeded);
}

TEST_CASE("is_stack", "[structures]") {
  for (std::size_t h = 1; h <= 3; ++h) {
    auto [a, parts] = u24_stack(h);
    auto c = is_stack(MinorView(a), parts, 2);
    REQUIRE(c);
    CHECK(c.certificate->parts.size() == h);
    // certificates re-verify from their own data
    std::vector<Idx> again;
    for (const auto& p : c.certificate->parts) again.push_back(p.elements);
    CHECK(is_stack(MinorView(a), again, c.certificate->m).ok());
  }

  auto regular = is_stack(MinorView(clique_matrix(4)), {detail::iota_indices(10)}, 4);
  REQUIRE_FALSE(regular);
  CHECK(regular.reason == "part 1 is regular (no U24 minor)");

  auto [a, parts] = u24_stack(2);
  auto short_parts = is_stack(MinorView(a), {parts[0]}, 2);
  REQUIRE_FALSE(short_parts);
  CHECK(short_parts.reason == "does not span");

  auto rank_cap = is_stack(MinorView(a), {detail::iota_indices(8)}, 3);
  REQUIRE_FALSE(rank_cap);
  CHECK(rank_cap.reason == "part 1 has rank 4 > m = 3");

  // Order matters: contracting the first part leaves the second intact.
  auto mixed = is_stack(MinorView(direct_sum({u24_matrix(), clique_matrix(2)})),
                        {{0, 1, 2, 3}, {4, 5, 6}}, 2);
  REQUIRE_FALSE(mixed);
  CHECK(mixed.reason == "part 2 is regular (no U24 minor)");

  CHECK_THROWS_AS(is_stack(MinorView(a), {{0, 1}, {1, 2}}, 2), DimensionError);
  CHECK_THROWS_AS(is_stack(MinorView(a), parts, 1), DomainError);
}

TEST_CASE("verify_stack_bound", "[structures]") {
  auto v = verify_stack_bound(8);
  CHECK(v.passed);
  CHECK(v.excluded_height == 4);
  REQUIRE(v.entries.size() == 4);
  for (std::size_t h = 1; h <= 4; ++h) CHECK(v.entries[h - 1].delta.delta == Integer(1) << h);
}

TEST_CASE("span_decompose", "[structures]") {
  auto one = span_decompose({1, -1, 0});
  REQUIRE(one.chosen.size() == 1);
  CHECK(one.chosen[0] == CliqueColumn{0, 1});
  CHECK(one.verified);

  auto two = span_decompose({2, -1, -1});
  REQUIRE(two.chosen.size() == 2);
  CHECK(two.chosen[0] == CliqueColumn{0, 1});
  CHECK(two.chosen[1] == CliqueColumn{0, 2});
  CHECK(two.k == 2);

  auto zero = span_decompose({0, 0, 0});
  CHECK(zero.chosen.empty());
  CHECK(zero.verified);

  auto mixed = span_decompose({-1, 0, 2});
  REQUIRE(mixed.chosen.size() == 2);
  CHECK(mixed.chosen[0] == CliqueColumn{0, 2});
  CHECK(mixed.chosen[1] == CliqueColumn{2, std::nullopt});
  CHECK(mixed.verified);

  SECTION("greedy bound and membership on random vectors; oracle never worse") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> d(-3, 3);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t r = 1 + trial % 5;
      IntVector f(r);
      for (auto& x : f) x = d(rng);
      const auto cert = span_decompose(f);
      REQUIRE(cert.verified);
      std::vector<IntVector> cols;
      for (const auto& c : cert.chosen) cols.push_back(c.vector(r));
      auto with_f = cols;
      with_f.push_back(f);
      REQUIRE(oracle::rational_rank(cols) == oracle::rational_rank(with_f));
      const auto a = clique_matrix(r);
      REQUIRE(min_spanning_subset(a, detail::iota_indices(a.cols()), f).size() <=
              cert.chosen.size());
    }
  }
}

TEST_CASE("min_spanning_subset", "[structures]") {
  const auto a5 = extension_tight(2, 5);
  CHECK(min_spanning_subset(a5, detail::iota_indices(15), a5.column(15)).size() == 2);
  const auto c = clique_matrix(3);
  CHECK(min_spanning_subset(c, detail::iota_indices(6), {1, 0, 0}) == Idx{0});
  CHECK(min_spanning_subset(c, detail::iota_indices(6), {3, 0, 0}) == Idx{0});
  CHECK(min_spanning_subset(c, detail::iota_indices(6), {0, 0, 0}).empty());
  CHECK_THROWS_AS(min_spanning_subset(c, {0, 1}, {0, 0, 1}), DomainError);
  CHECK_THROWS_AS(min_spanning_subset(c, {0, 1}, {0, 1}), DimensionError);
}

TEST_CASE("verify_extension_bound", "[structures]") {
  auto v = verify_extension_bound(2, 5);
  CHECK(v.passed);
  CHECK(v.matrix_delta.delta == 2);
  CHECK(v.minimum_subset.size() == 2);

  auto one = verify_extension_bound(1, 4);
  CHECK(one.passed);
  CHECK(one.matrix_delta.delta == 1);
  CHECK(one.minimum_subset.size() == 1);

  CHECK_THROWS_AS(verify_extension_bound(4, 8), BudgetExceeded);
}
