#include <doctest.h>

#include <cmath>
#include <random>

#include "builders.hpp"
#include "oracles.hpp"
#include "polystate/engine.hpp"
#include "polystate/ensemble.hpp"
#include "polystate/errors.hpp"

using namespace polystate;
using oracle::Mat;

TEST_CASE("branch enumeration on the singlet") {
  const double theta = 1.1;
  const auto s = build::epr(theta, 0, 0);
  const auto branches = ensemble::enumerate_branches(s);
  REQUIRE(branches.size() == 4);
  const double s2 = std::pow(std::sin(theta / 2), 2);
  double total = 0;
  for (const auto& b : branches) {
    REQUIRE(b.outcomes.size() == 2);
    const bool same = b.outcomes[0] == b.outcomes[1];
    CHECK(std::abs(b.probability - 0.5 * (same ? s2 : 1 - s2)) < 1e-12);
    total += b.probability;
    REQUIRE(b.final_state);
    CHECK(std::abs(b.final_state->matrix().trace().real() - 1.0) < 1e-12);
  }
  CHECK(std::abs(total - 1.0) < 1e-12);
  // First selective is the most significant digit.
  CHECK(branches[1].outcomes == std::vector<std::size_t>{0, 1});
  CHECK(branches[2].outcomes == std::vector<std::size_t>{1, 0});
}

TEST_CASE("zero-probability branches carry no state") {
  const auto s = build::epr(0.0, 0, 1);
  const auto branches = ensemble::enumerate_branches(s);
  std::size_t empty = 0;
  for (const auto& b : branches) {
    if (b.probability < 1e-12) {
      CHECK_FALSE(b.final_state);
      ++empty;
    }
  }
  CHECK(empty == 2);
}

TEST_CASE("chain order is lab time then subsystem") {
  const auto s = scenario::load_scenario(oracle::fixture("foliation_demo.scn"));
  // B measures at t = 0.5, A at t = 1.
  CHECK(ensemble::chain_order(s, {0, 1}) == std::vector<std::size_t>{1, 0});
  const auto e = build::epr(0.3, 0, 0);
  CHECK(ensemble::chain_order(e, {1, 0}) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("conditional state matches the engine sector") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> tau(-2, 6);
  for (int k = 0; k < 30; ++k) {
    const engine::Engine e(build::random_two_qubit(rng));
    const engine::Taus taus{tau(rng), tau(rng)};
    for (const auto& subset : engine::all_subsets(2)) {
      const auto a = ensemble::conditional_state(e, taus, subset);
      const auto b = e.sector(taus, subset);
      CHECK(oracle::trace_distance_svd(a.matrix(), b.matrix()) < 1e-10);
    }
  }
}

TEST_CASE("sampling is deterministic per seed and follows Born weights") {
  const auto s = build::epr(M_PI / 3, 0, 0);
  const auto a = ensemble::sample_runs(s, 2000, 5);
  const auto b = ensemble::sample_runs(s, 2000, 5);
  const auto c = ensemble::sample_runs(s, 2000, 6);
  CHECK(a.outcomes == b.outcomes);
  CHECK(a.outcomes != c.outcomes);
  CHECK(a.selective.size() == 2);
  std::size_t same = 0;
  for (const auto& row : a.outcomes) same += row[0] == row[1];
  // P(same) = sin^2(pi/6) = 0.25; 2000 runs give sigma ~ 0.0097.
  CHECK(std::abs(same / 2000.0 - 0.25) < 0.05);
  CHECK_THROWS_AS(ensemble::sample_runs(s, 0, 1), Error);
}

TEST_CASE("empirical sectors converge to the polystate") {
  const engine::Engine e(scenario::load_scenario(oracle::fixture("foliation_demo.scn")));
  const auto log = ensemble::sample_runs(e.scenario(), 20000, 11);
  for (const engine::Taus& taus : {engine::Taus{0.5, 0.2}, engine::Taus{1.5, 0.2}, engine::Taus{0.5, 1.0},
                                   engine::Taus{3.0, 3.0}}) {
    const auto cmp = ensemble::compare_to_polystate(log, e, taus);
    CHECK(cmp.sectors.size() == 3);
    CHECK(cmp.max_oracle_distance < 1e-10);
    CHECK(cmp.max_empirical_distance < 0.03);
  }
  // The AB sector at late times only keeps runs matching both recorded outcomes.
  const auto late = ensemble::empirical_sector(log, e, {0, 1}, {3.0, 3.0});
  CHECK(late.retained > 0);
  CHECK(late.retained < log.n);
  const auto early = ensemble::empirical_sector(log, e, {0, 1}, {0.0, 0.0});
  CHECK(early.retained == log.n);
}

TEST_CASE("empty ensembles") {
  // Recorded outcomes that never occur.
  const auto s = build::epr(0.0, 0, 0);
  const engine::Engine e(s);
  const auto log = ensemble::sample_runs(s, 50, 3);
  CHECK_THROWS_AS(ensemble::conditional_state(e, {2.0, 2.0}, {0, 1}), Error);
  CHECK_THROWS_AS(ensemble::empirical_sector(log, e, {0, 1}, {2.0, 2.0}), Error);
  const auto cmp = ensemble::compare_to_polystate(log, e, {0.0, 0.0});
  CHECK(cmp.max_oracle_distance < 1e-12);
  for (const auto& row : cmp.sectors) CHECK(row.retained == 50);
  CHECK_THROWS_AS(ensemble::compare_to_polystate(log, e, {2.0, 2.0}), ImpossibleOutcome);
}
