#include "dmod/dmod.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

using namespace dmod;

TEST_CASE("clique_matrix", "[constructions]") {
  CHECK(clique_matrix(2) == IntMatrix::from_rows({{1, 0, 1}, {0, 1, -1}}));
  CHECK(clique_matrix(1) == IntMatrix::from_rows({{1}}));
  CHECK(clique_matrix(4).cols() == 10);
  CHECK(count_points(clique_matrix(4)) == 10);
  CHECK(clique_difference_index(4, 0, 1) == 4);
  CHECK(clique_difference_index(4, 2, 3) == 9);
  CHECK(clique_matrix(4).column(clique_difference_index(4, 1, 3)) == IntVector{0, 1, 0, -1});
  CHECK_THROWS_AS(clique_matrix(0), DomainError);
  for (std::size_t r = 1; r <= 5; ++r) CHECK(delta_of(clique_matrix(r)).delta == 1);
}

TEST_CASE("conjecture_matrix", "[constructions]") {
  CHECK(conjecture_matrix(3, 4).cols() == 16);
  CHECK(conjecture_matrix(1, 4) == clique_matrix(4));
  auto a = conjecture_matrix(2, 3);
  CHECK(a.cols() == 8);
  CHECK(delta_of(a).delta == 2);
  CHECK(a.column(6) == IntVector{2, -1, 0});
  CHECK(a.column(7) == IntVector{2, 0, -1});
  CHECK(oracle::naive_delta(a) == 2);
  CHECK_THROWS_AS(conjecture_matrix(2, 1), DomainError);
}

TEST_CASE("spike families", "[constructions]") {
  auto t2 = spike_tight(2);
  CHECK(t2.rows() == 4);
  CHECK(t2.cols() == 9);
  CHECK(delta_of(t2).delta == 2);
  CHECK(oracle::naive_delta(t2) == 2);
  auto t3 = spike_tight(3);
  CHECK(t3.rows() == 6);
  CHECK(t3.cols() == 13);
  CHECK(delta_of(t3).delta == 3);
  CHECK_THROWS_AS(spike_tight(1), DomainError);

  CHECK(spike_generic(3) == rank3_spike());
  CHECK(rank3_spike().column(0) == IntVector{1, 0, 0});
  CHECK(is_spike(spike_generic(5), 0).ok());
  CHECK_FALSE(is_delta_modular(spike_generic(5), 2));
  CHECK_FALSE(is_delta_modular(spike_generic(7), 3));
  CHECK_THROWS_AS(spike_generic(2), DomainError);
}

TEST_CASE("u24, extension and direct sums", "[constructions]") {
  CHECK(delta_of(u24_matrix()).delta == 2);
  CHECK(lines(MinorView(u24_matrix())).size() == 1);

  auto e = extension_tight(2, 5);
  CHECK(e.cols() == 16);
  CHECK(e.column(15) == IntVector{1, 1, -1, -1, 0});
  CHECK(delta_of(e).delta == 2);
  CHECK_THROWS_AS(extension_tight(3, 5), DomainError);

  auto s = direct_sum({u24_matrix(), clique_matrix(2)});
  CHECK(s.rows() == 4);
  CHECK(s.cols() == 7);
  CHECK(s(2, 4) == 1);
  CHECK(s(0, 4) == 0);
  CHECK_THROWS_AS(direct_sum({}), DomainError);
  for (std::size_t h = 1; h <= 3; ++h)
    CHECK(delta_of(u24_stack(h).first).delta == Integer(1) << h);
}

TEST_CASE("ConstructionSpec", "[constructions]") {
  CHECK(build({Family::clique, {3}, {}}) == clique_matrix(3));
  CHECK(build({Family::conjecture, {2, 4}, {}}) == conjecture_matrix(2, 4));
  ConstructionSpec sum{Family::direct_sum, {}, {{Family::u24, {}, {}}, {Family::clique, {2}, {}}}};
  CHECK(build(sum) == direct_sum({u24_matrix(), clique_matrix(2)}));
  CHECK_THROWS_AS(build({Family::clique, {}, {}}), DomainError);
  CHECK_THROWS_AS(build({Family::spike_tight, {1}, {}}), DomainError);
  CHECK_THROWS_AS(build({Family::clique, {-1}, {}}), DomainError);
  CHECK(parse_family("extension_tight") == Family::extension_tight);
  CHECK_THROWS_AS(parse_family("nope"), DomainError);
}

TEST_CASE("generators round-trip through the text format", "[constructions]") {
  std::vector<IntMatrix> all = {clique_matrix(4),       conjecture_matrix(3, 5), spike_tight(3),
                                spike_generic(6),       rank3_spike(),           u24_matrix(),
                                extension_tight(3, 7), u24_stack(3).first};
  for (const auto& a : all) CHECK(parse_matrix(emit_matrix(a)) == a);
}
