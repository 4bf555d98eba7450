#include <doctest.h>

#include <cmath>

#include "maxjsr/oracles.hpp"
#include "maxjsr/spectral.hpp"
#include "support.hpp"

using namespace maxjsr;
using testing::close;

TEST_SUITE("spectral") {

TEST_CASE("cycle mean examples") {
  const auto id = cycle_mean(MaxMatrix::identity(3));
  CHECK(id.mu == 1.0);
  REQUIRE(id.witness_cycle.size() == 1);
  CHECK_FALSE(id.unique_critical);

  const auto s = cycle_mean(testing::paper_aggregate());
  CHECK(close(s.mu, 1.0));
  CHECK(s.witness_cycle == std::vector<std::size_t>{0, 1, 2});
  CHECK(s.unique_critical);
  CHECK(close(std::cbrt(0.5 * (10.0 / 3) * 0.6), 1.0));

  const auto b = cycle_mean(MaxMatrix{{2, 3}, {4, 5}});
  CHECK(b.mu == 5.0);
  CHECK(b.witness_cycle == std::vector<std::size_t>{1});
  CHECK(b.unique_critical);
}

TEST_CASE("acyclic digraph has mu 0") {
  const auto r = cycle_mean(MaxMatrix{{0, 2, 5}, {0, 0, 3}, {0, 0, 0}});
  CHECK(r.mu == 0.0);
  CHECK(r.witness_cycle.empty());
  CHECK(cycle_mean(MaxMatrix::zero(4)).mu == 0.0);
}

TEST_CASE("karp agrees with cycle enumeration") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + t % 6;
    const double density = t % 3 == 0 ? 0.2 : (t % 3 == 1 ? 0.5 : 1.0);
    const MaxMatrix a = oracles::random_matrix(n, density, 0.1, 10.0, rng);
    const auto fast = cycle_mean(a);
    const auto slow = oracles::bf_cycle_mean(a);
    CHECK(close(fast.mu, slow.mu));
    if (fast.mu > 0.0) CHECK(close(cycle_geometric_mean(a, fast.witness_cycle), fast.mu));
    // Unique critical flag agrees with the number of attaining cycles.
    if (fast.mu > 0.0) CHECK(fast.unique_critical == (slow.attaining.size() == 1));
  }
}

TEST_CASE("tied critical cycles are not unique") {
  const MaxMatrix a{{2, 1}, {1, 2}};
  CHECK_FALSE(cycle_mean(a).unique_critical);
  const MaxMatrix b{{0, 2, 0}, {0.5, 0, 1}, {0, 1, 0}};
  CHECK(cycle_mean(b).mu == 1.0);
  CHECK_FALSE(cycle_mean(b).unique_critical);
}

TEST_CASE("irreducibility") {
  CHECK(is_irreducible(MaxMatrix(3, 1.0)));
  CHECK_FALSE(is_irreducible(MaxMatrix{{2, 0}, {1, 1}}));
  CHECK(is_irreducible(testing::paper_aggregate()));
  CHECK(is_irreducible(MaxMatrix(1)));
  CHECK_FALSE(is_irreducible(MaxMatrix::identity(2)));

  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const MaxMatrix a = oracles::random_matrix(1 + t % 7, 0.3, 1, 2, rng);
    CHECK(is_irreducible(a) == oracles::naive_irreducible(a));
  }
}

TEST_CASE("principal eigenpairs") {
  const auto right = principal_eigenpair(MaxMatrix{{0, 0.5}, {2, 0}}, Side::right);
  CHECK(right.lambda == 1.0);
  CHECK(right.vector == MaxVector{0.5, 1.0});

  const auto left = principal_eigenpair(testing::paper_aggregate(), Side::left);
  CHECK(close(left.lambda, 1.0));
  CHECK(close(left.vector[0], 0.6));
  CHECK(close(left.vector[1], 0.3));
  CHECK(close(left.vector[2], 1.0));

  CHECK_THROWS_AS(principal_eigenpair(MaxMatrix::identity(2), Side::right), ReducibleError);
  CHECK_THROWS_AS(principal_eigenpair(MaxMatrix(1), Side::right), DegenerateSpectrumError);
}

TEST_CASE("eigenvectors of random irreducible matrices") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 100; ++t) {
    const MaxMatrix a = oracles::random_matrix(2 + t % 6, 0.7, 0.1, 10, rng);
    if (!is_irreducible(a)) continue;
    for (Side side : {Side::right, Side::left}) {
      const auto e = principal_eigenpair(a, side);
      const MaxVector ax = side == Side::right ? apply(a, e.vector) : left_apply(e.vector, a);
      CHECK(e.vector.strictly_positive());
      CHECK(close(e.vector.max(), 1.0));
      for (std::size_t i = 0; i < a.dim(); ++i) CHECK(close(ax[i], e.lambda * e.vector[i], 1e-10));
    }
  }
}

TEST_CASE("frobenius form") {
  const auto single = frobenius_form(testing::paper_aggregate());
  REQUIRE(single.classes.size() == 1);
  CHECK(close(single.block_mus[0], 1.0));

  const auto f = frobenius_form(MaxMatrix{{2, 0}, {1, 1}});
  REQUIRE(f.classes.size() == 2);
  const std::size_t c1 = f.class_of(0), c2 = f.class_of(1);
  CHECK(f.block_mus[c1] == 2.0);
  CHECK(f.block_mus[c2] == 1.0);
  CHECK(f.access[c2][c1]);
  CHECK_FALSE(f.access[c1][c2]);

  const MaxMatrix blocks{{0, 2, 0, 0}, {1, 0, 0, 0}, {0, 0, 3, 1}, {0, 0, 1, 0}};
  const auto d = frobenius_form(blocks);
  REQUIRE(d.classes.size() == 2);
  CHECK_FALSE(d.access[0][1]);
  CHECK_FALSE(d.access[1][0]);

  // The permuted matrix is block lower triangular.
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const MaxMatrix a = oracles::random_matrix(6, 0.25, 1, 2, rng);
    const auto form = frobenius_form(a);
    const MaxMatrix p = a.principal(form.permutation);
    std::vector<std::size_t> cls;
    for (std::size_t k = 0; k < form.permutation.size(); ++k) cls.push_back(form.class_of(form.permutation[k]));
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j)
        if (p(i, j) > 0.0) CHECK(cls[i] >= cls[j]);
  }
}

TEST_CASE("gradient of mu") {
  const auto g = mu_gradient(MaxMatrix{{2, 3}, {4, 5}});
  CHECK(g == std::vector<double>{0, 0, 0, 1});
  const auto d = mu_gradient(MaxMatrix{{3, 0}, {0, 1}});
  CHECK(d == std::vector<double>{1, 0, 0, 0});
  CHECK_THROWS_AS(mu_gradient(MaxMatrix{{2, 1}, {1, 2}}), NondifferentiableError);
  CHECK_THROWS_AS(mu_gradient(MaxMatrix{{0, 1}, {0, 0}}), DegenerateSpectrumError);

  // Cycle 1->2->3->1 of the paper aggregate: d mu / d a_pq = mu / (3 a_pq).
  const auto s = mu_gradient(testing::paper_aggregate());
  CHECK(close(s[0 * 3 + 1], 1.0 / (3 * 0.5)));
  CHECK(close(s[1 * 3 + 2], 1.0 / (3 * 10.0 / 3)));
  CHECK(close(s[2 * 3 + 0], 1.0 / (3 * 0.6)));
  CHECK(s[0] == 0.0);
}

TEST_CASE("mu is invariant under similarity and scales") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 50; ++t) {
    const MaxMatrix a = oracles::random_matrix(5, 0.6, 0.1, 10, rng);
    const double mu = cycle_mean(a).mu;
    const MaxPermutation p = oracles::random_permutation(5, rng);
    CHECK(close(cycle_mean(perm_conjugate(p, a)).mu, mu, 1e-12));
    CHECK(close(cycle_mean(a.scaled(3.0)).mu, 3 * mu, 1e-12));
    CHECK(close(cycle_mean(max_power(a, 3)).mu, mu * mu * mu, 1e-12));
    CHECK(close(cycle_mean(a.transpose()).mu, mu, 1e-12));
  }
}

}  // TEST_SUITE
