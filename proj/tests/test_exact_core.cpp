#include "dmod/dmod.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace dmod;

TEST_CASE("IntMatrix construction and access", "[exact-core]") {
  auto a = IntMatrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  CHECK(a.rows() == 2);
  CHECK(a.cols() == 3);
  CHECK(a(1, 2) == 6);
  CHECK(a.column(1) == IntVector{2, 5});
  CHECK_THROWS_AS(IntMatrix(0, 3), DimensionError);
  CHECK_THROWS_AS(IntMatrix(2, 2, {1, 2, 3}), DimensionError);
  CHECK_THROWS_AS(a.at(2, 0), DimensionError);
}

TEST_CASE("rank", "[exact-core]") {
  CHECK(rank(IntMatrix::from_rows({{1, 2}, {2, 4}})) == 1);
  CHECK(rank(clique_matrix(3)) == 3);
  CHECK(rank(IntMatrix(3, 4)) == 0);
}

TEST_CASE("determinant", "[exact-core]") {
  CHECK(determinant(IntMatrix::from_rows({{2, 1}, {1, 2}})) == 3);
  CHECK(determinant(IntMatrix::from_rows({{1, 2}, {2, 4}})) == 0);
  CHECK_THROWS_AS(determinant(IntMatrix::from_rows({{1, 2, 3}, {4, 5, 6}})), DimensionError);

  SECTION("agrees with cofactor expansion for n <= 5") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
      const std::size_t n = 1 + trial % 5;
      auto a = oracle::random_matrix(rng, n, n, -9, 9);
      std::vector<std::size_t> idx(n);
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      REQUIRE(determinant(a) == oracle::cofactor_det(oracle::grid(a, idx, idx)));
    }
  }

  SECTION("large entries leave the 64-bit fast path") {
    const Integer big = Integer(1) << 62;
    IntMatrix a(2, 2);
    a.set(0, 0, big);
    a.set(1, 1, big);
    CHECK(determinant(a) == big * big);
    CHECK(rank(a) == 2);
  }

  SECTION("intermediate overflow falls back to big integers") {
    // Entries fit in 64 bits, the determinant does not.
    const long long m = 3'000'000'000LL;
    auto a = IntMatrix::from_rows({{m, 1, 0}, {0, m, 1}, {1, 0, m}});
    CHECK(determinant(a) == Integer(m) * m * m + 1);
  }
}

TEST_CASE("delta_of", "[exact-core]") {
  SECTION("clique_matrix(3) has delta 1") {
    auto d = delta_of(clique_matrix(3));
    CHECK(d.rank == 3);
    CHECK(d.delta == 1);
    CHECK(d.witness_rows == std::vector<std::size_t>{0, 1, 2});
    CHECK(d.witness_cols == std::vector<std::size_t>{0, 1, 2});
  }
  SECTION("u24 has delta 2, witnessed by columns 1 and 3") {
    auto d = delta_of(u24_matrix());
    CHECK(d.delta == 2);
    CHECK(d.witness_cols == std::vector<std::size_t>{0, 3});
  }
  SECTION("rank-deficient input uses rank-sized minors") {
    auto d = delta_of(IntMatrix::from_rows({{1, 2, 3}, {2, 4, 6}}));
    CHECK(d.rank == 1);
    CHECK(d.delta == 6);
  }
  SECTION("rank zero is an error") {
    CHECK_THROWS_AS(delta_of(IntMatrix(2, 3)), DomainError);
  }
  SECTION("witness reproduces the reported determinant") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      auto a = oracle::random_matrix(rng, 3, 6, -3, 3);
      if (rank(a) == 0) continue;
      auto d = delta_of(a);
      REQUIRE(abs(submatrix_determinant(a, d.witness_rows, d.witness_cols)) == d.delta);
    }
  }
  SECTION("thread count and pruning do not change the result") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 200; ++trial) {
      auto a = oracle::random_matrix(rng, 4, 8, -3, 3);
      if (rank(a) == 0) continue;
      auto base = delta_of(a);
      for (unsigned t : {2u, 3u, 5u})
        for (bool h : {false, true}) {
          auto other = delta_of(a, DeltaOptions{t, h});
          REQUIRE(other.delta == base.delta);
          REQUIRE(other.witness_rows == base.witness_rows);
          REQUIRE(other.witness_cols == base.witness_cols);
        }
    }
  }
}

TEST_CASE("is_delta_modular and find_violation", "[exact-core]") {
  CHECK(is_delta_modular(clique_matrix(4), 1));
  CHECK_FALSE(is_delta_modular(u24_matrix(), 1));
  CHECK(is_delta_modular(u24_matrix(), 2));
  CHECK_THROWS_AS(is_delta_modular(u24_matrix(), 0), DomainError);
  auto v = find_violation(u24_matrix(), 1);
  REQUIRE(v);
  CHECK(abs(v->determinant) == 2);
  CHECK(abs(submatrix_determinant(u24_matrix(), v->rows, v->cols)) == 2);
  CHECK_FALSE(find_violation(u24_matrix(), 2));
}

TEST_CASE("canonical_column and parallel classes", "[exact-core]") {
  CHECK(canonical_column({-2, 4, 0}) == IntVector{1, -2, 0});
  CHECK(canonical_column({0, -3, 6}) == IntVector{0, 1, -2});
  CHECK(canonical_column({0, 0}) == IntVector{0, 0});

  auto pc = parallel_classes(clique_matrix(3));
  CHECK(pc.classes.size() == 6);
  CHECK(pc.loops.empty());

  auto b = IntMatrix::from_rows({{1, 0, -2, 0, 3}, {1, 0, -2, 1, 0}});
  auto q = parallel_classes(b);
  REQUIRE(q.classes.size() == 3);
  CHECK(q.classes[0] == std::vector<std::size_t>{0, 2});
  CHECK(q.loops == std::vector<std::size_t>{1});
}

TEST_CASE("count_points", "[exact-core]") {
  for (std::size_t r = 2; r <= 5; ++r) CHECK(count_points(clique_matrix(r)) == r * (r + 1) / 2);
  CHECK(count_points(conjecture_matrix(3, 4)) == 16);
  CHECK(count_points(IntMatrix(3, 3)) == 0);
}

TEST_CASE("row operations can change delta without full row rank", "[exact-core]") {
  auto a = IntMatrix::from_rows({{1}, {1}});
  auto u = IntMatrix::from_rows({{1, 0}, {1, 1}});
  CHECK(delta_of(a).delta == 1);
  CHECK(delta_of(u * a).delta == 2);
}

TEST_CASE("delta invariances", "[exact-core][property]") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + trial % 4, n = m + trial % 4;
    auto a = oracle::random_matrix(rng, m, n, -3, 3);
    const std::size_t r = rank(a);
    if (r == 0) continue;
    const Integer d = delta_of(a).delta;

    // only meaningful with full row rank
    if (r == m) {
      auto u = oracle::random_unimodular(rng, m, 10);
      REQUIRE(delta_of(u * a).delta == d);
    }

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    auto p = a.select_columns(perm);
    for (std::size_t j = 0; j < n; j += 2)
      for (std::size_t i = 0; i < m; ++i) p.set(i, j, -p(i, j));
    REQUIRE(delta_of(p).delta == d);
  }
}

TEST_CASE("delta_of matches the subset oracle", "[exact-core][property]") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + trial % 4, n = 1 + trial % 7;
    auto a = oracle::random_matrix(rng, m, n, -2, 2);
    REQUIRE(rank(a) == oracle::rank_of(a));
    if (rank(a) == 0) continue;
    REQUIRE(delta_of(a).delta == oracle::naive_delta(a));
  }
}

TEST_CASE("minor monotonicity of delta", "[exact-core][property]") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = oracle::random_matrix(rng, 3, 7, -3, 3);
    const std::size_t r = rank(a);
    if (r == 0) continue;
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < 7; ++j)
      if (rng() % 2) keep.push_back(j);
    if (keep.empty() || column_rank(a, keep) != r) continue;
    REQUIRE(delta_of(a.select_columns(keep)).delta <= delta_of(a).delta);
  }
}

TEST_CASE("matrix text format", "[exact-core]") {
  CHECK(parse_matrix("2 2\n1 0\n0 1\n") == IntMatrix::identity(2));
  CHECK(emit_matrix(clique_matrix(2)) == "2 3\n1 0 1\n0 1 -1\n");
  CHECK(parse_matrix("# comment\n\n2 1\n 5\n# inner\n-7\n") == IntMatrix::from_rows({{5}, {-7}}));

  SECTION("errors carry the location") {
    try {
      parse_matrix("2 2\n1 x\n0 1\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
      CHECK(e.token() == 2);
    }
    CHECK_THROWS_AS(parse_matrix(""), ParseError);
    CHECK_THROWS_AS(parse_matrix("2 2\n1 0\n"), ParseError);
    CHECK_THROWS_AS(parse_matrix("2 2\n1 0 3\n0 1\n"), ParseError);
    CHECK_THROWS_AS(parse_matrix("1 2\n1 2\n3 4\n"), ParseError);
    CHECK_THROWS_AS(parse_matrix("0 2\n"), ParseError);
  }

  SECTION("round trip, including big entries") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
      auto a = oracle::random_matrix(rng, 1 + trial % 5, 1 + trial % 6, -50, 50);
      REQUIRE(parse_matrix(emit_matrix(a)) == a);
    }
    IntMatrix big(1, 2);
    big.set(0, 0, Integer("123456789012345678901234567890"));
    big.set(0, 1, Integer("-98765432109876543210"));
    CHECK(parse_matrix(emit_matrix(big)) == big);
  }
}
