#include <doctest.h>

#include <cmath>
#include <random>

#include "builders.hpp"
#include "oracles.hpp"
#include "polystate/engine.hpp"
#include "polystate/errors.hpp"
#include "polystate/standard.hpp"

using namespace polystate;
using engine::Engine;
using engine::Subset;
using oracle::Mat;

namespace {

Engine bell_z() { return Engine(scenario::load_scenario(oracle::fixture("bell_sigma_z.scn"))); }

double diff(const linalg::DensityOperator& a, const Mat& b) { return oracle::max_abs_diff(a.matrix(), b); }

}  // namespace

TEST_CASE("Bell sigma_z sectors at the measurement") {
  const auto e = bell_z();
  const engine::Taus taus{1.0, 0.5};
  CHECK(diff(e.sector(taus, {0}), oracle::proj0()) < 1e-12);
  CHECK(diff(e.sector(taus, {1}), oracle::half_identity()) < 1e-12);
  CHECK(diff(e.sector(taus, {0, 1}), oracle::kron2(oracle::proj0(), oracle::proj1())) < 1e-12);
  CHECK_THROWS_AS(e.sector(taus, {1, 0}), Error);
  CHECK_THROWS_AS(e.sector({1.0}, {0}), Error);
}

TEST_CASE("Bell sigma_z full case table") {
  const auto e = bell_z();
  const Mat m01 = oracle::kron2(oracle::proj0(), oracle::proj1());
  struct Row {
    engine::Taus taus;
    Mat a, b, ab;
  };
  const Row rows[] = {
      {{0.5, 0.5}, oracle::half_identity(), oracle::half_identity(), oracle::psi_plus()},
      {{1.5, 0.5}, oracle::proj0(), oracle::half_identity(), m01},
      {{0.5, 3.5}, oracle::half_identity(), oracle::proj1(), m01},
      {{1.5, 3.5}, oracle::proj0(), oracle::proj1(), m01},
  };
  for (const auto& r : rows) {
    const auto p = e.polystate_at(r.taus);
    CHECK(p.sectors.size() == 3);
    CHECK(diff(p.at({0}), r.a) < 1e-12);
    CHECK(diff(p.at({1}), r.b) < 1e-12);
    CHECK(diff(p.at({0, 1}), r.ab) < 1e-12);
  }
  // Boundaries: the measurement event and the future-cone crossing are included.
  CHECK(diff(e.sector({1.0, 3.0}, {1}), oracle::proj1()) < 1e-12);
  CHECK(diff(e.sector({1.0, 2.999}, {1}), oracle::half_identity()) < 1e-12);
}

TEST_CASE("expectations on the polystate") {
  const auto e = bell_z();
  const auto p = e.polystate_at({2.0, 0.5});
  const auto z = linalg::ObservableOp::make(standard::pauli_z());
  CHECK(engine::expect_individual(p, 0, z) == doctest::Approx(1.0));
  CHECK(std::abs(engine::expect_individual(p, 1, z)) < 1e-12);
  CHECK(engine::expect_joint(p, {0, 1}, linalg::ObservableOp::make(oracle::kron2(standard::pauli_z(), standard::pauli_z()))) ==
        doctest::Approx(-1.0));
  CHECK(engine::expect_joint(p, {0, 1}, linalg::ObservableOp::make(Mat::Identity(4, 4))) == doctest::Approx(1.0));
  CHECK(engine::expect_individual(p, 1, linalg::ObservableOp::make(Mat::Identity(2, 2))) == doctest::Approx(1.0));
  CHECK_THROWS_AS(engine::expect_individual(p, 1, linalg::ObservableOp::make(Mat::Identity(4, 4))), Error);
}

TEST_CASE("EPR polystate regimes") {
  const double theta = M_PI / 3;
  const Engine e(build::epr(theta, 0, 0));
  const Mat a = oracle::proj0(), minus_a = oracle::proj1();
  const Mat b = oracle::outer(standard::pauli_n_eigenket(theta, 0, +1).amplitudes());
  const Mat minus_b = oracle::outer(standard::pauli_n_eigenket(theta, 0, -1).amplitudes());

  auto p = e.polystate_at({0.5, 0.5});
  CHECK(diff(p.at({0, 1}), oracle::psi_minus()) < 1e-12);
  p = e.polystate_at({1.5, 0.5});
  CHECK(diff(p.at({0}), a) < 1e-12);
  CHECK(diff(p.at({1}), oracle::half_identity()) < 1e-12);
  CHECK(diff(p.at({0, 1}), oracle::kron2(a, minus_a)) < 1e-12);
  p = e.polystate_at({0.5, 1.5});
  CHECK(diff(p.at({1}), b) < 1e-12);
  CHECK(diff(p.at({0, 1}), oracle::kron2(minus_b, b)) < 1e-12);
  p = e.polystate_at({1.5, 1.5});
  CHECK(diff(p.at({0}), a) < 1e-12);
  CHECK(diff(p.at({1}), b) < 1e-12);
  CHECK(diff(p.at({0, 1}), oracle::kron2(a, b)) < 1e-12);
}

TEST_CASE("EPR probabilities") {
  for (double theta : {0.0, 0.5, 2.0}) {
    const Engine e(build::epr(theta, 0, 1));
    const engine::Taus prior{0.0, 0.0};
    double total = 0.0;
    for (int sa : {+1, -1}) {
      for (int sb : {+1, -1}) {
        const Mat pa = oracle::outer(standard::pauli_n_eigenket(0, 0, sa).amplitudes());
        const Mat pb = oracle::outer(standard::pauli_n_eigenket(theta, 0, sb).amplitudes());
        const std::vector<Mat> projectors{pa, pb};
        const double p = e.prob_joint_outcome(prior, projectors);
        const double s2 = std::sin(theta / 2) * std::sin(theta / 2);
        CHECK(std::abs(p - 0.5 * (sa == sb ? s2 : 1 - s2)) < 1e-12);
        total += p;
      }
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
    CHECK(std::abs(e.marginal_prob({0.0, 5.0}, 0, oracle::proj0()) - 0.5) < 1e-12);
    CHECK(std::abs(e.marginal_prob({-3.0, 0.0}, 1, Mat::Identity(2, 2)) - 1.0) < 1e-12);
    const std::vector<Mat> wrong{oracle::proj0()};
    CHECK_THROWS_AS(e.prob_joint_outcome(prior, wrong), Error);
  }
}

TEST_CASE("conditional probabilities depend on which measurement enters the past union") {
  const double theta = 0.9;
  const double s2 = std::sin(theta / 2) * std::sin(theta / 2);
  for (std::size_t b : {0u, 1u}) {
    const Engine e(build::epr(theta, 0, b));
    for (std::size_t a : {0u, 1u}) {
      const Mat pa = oracle::basis_projector(2, a);
      const double p = e.conditional_prob({0.0, 1.0}, 0, pa);
      CHECK(std::abs(p - (a == b ? s2 : 1 - s2)) < 1e-12);
    }
  }
  for (std::size_t a : {0u, 1u}) {
    const Engine e(build::epr(theta, a, 0));
    for (int sb : {+1, -1}) {
      const Mat pb = oracle::outer(standard::pauli_n_eigenket(theta, 0, sb).amplitudes());
      const bool same = (a == 0) == (sb > 0);
      CHECK(std::abs(e.conditional_prob({1.0, 0.0}, 1, pb) - (same ? s2 : 1 - s2)) < 1e-12);
    }
  }
  const Engine zero(build::epr(0.0, 0, 0));
  CHECK(std::abs(zero.conditional_prob({0.0, 1.0}, 0, oracle::proj1()) - 1.0) < 1e-12);
}

TEST_CASE("observer states, recollections and foliation states") {
  const auto e = bell_z();
  CHECK(diff(e.observer_state(spacetime::Event({1.0, 2.0})), oracle::psi_plus()) < 1e-12);
  CHECK(diff(e.observer_state(spacetime::Event({4.0, 2.0})), oracle::kron2(oracle::proj0(), oracle::proj1())) < 1e-12);
  CHECK(diff(e.observer_state(spacetime::Event({1.0, 0.0})), oracle::kron2(oracle::proj0(), oracle::proj1())) < 1e-12);
  const auto& wa = e.scenario().subsystems[0].worldline;
  CHECK(diff(e.recollection(wa, 1.0), oracle::kron2(oracle::proj0(), oracle::proj1())) < 1e-12);
  CHECK(diff(e.recollection(wa, -100.0), oracle::psi_plus()) < 1e-12);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3, 5);
  for (int k = 0; k < 50; ++k) {
    const auto z = oracle::random_worldline(rng, u(rng), u(rng));
    const double tau = u(rng);
    CHECK(oracle::max_abs_diff(e.recollection(z, tau).matrix(), e.observer_state(z.position(tau)).matrix()) == 0);
  }

  const Engine f(scenario::load_scenario(oracle::fixture("foliation_demo.scn")));
  const spacetime::Foliation sigma({0.0}), xi({-0.6});
  CHECK(diff(f.foliation_state(sigma, 0.7), oracle::kron2(oracle::proj_plus(), oracle::proj_plus())) < 1e-12);
  CHECK(diff(f.foliation_state(xi, 1.5), oracle::kron2(oracle::proj0(), oracle::proj1())) < 1e-12);
  CHECK(diff(f.foliation_state(sigma, 5.0), oracle::kron2(oracle::proj0(), oracle::proj_plus())) < 1e-12);
  CHECK(diff(f.foliation_state(xi, 5.0), oracle::kron2(oracle::proj0(), oracle::proj_plus())) < 1e-12);
}

TEST_CASE("sector cache is shared by proper times selecting the same interventions") {
  const auto e = bell_z();
  e.sector({1.5, 0.5}, {0});
  e.sector({1.7, 0.9}, {0});
  e.sector({2.5, 0.1}, {0});
  CHECK(e.cache_size() == 1);
  e.sector({0.5, 0.5}, {0});
  CHECK(e.cache_size() == 2);
}

TEST_CASE("impossible recorded outcomes abort with the subset named") {
  // |Psi+> has no |00> component: A = +1 then B = +1 in z is impossible.
  const auto s = scenario::parse_scenario(R"({
    "spacetime": {"d": 1},
    "subsystems": [
      {"name": "A", "worldline": {"anchor": [0, 0], "final_v": [0]}},
      {"name": "B", "worldline": {"anchor": [0, 2], "final_v": [0]}}
    ],
    "initial_state": {"named": "bell_psi_plus"},
    "interventions": [
      {"on": "A", "tau": 1, "measure": {"projective_basis": "z", "outcome": 0}},
      {"on": "B", "tau": 1, "measure": {"projective_basis": "z", "outcome": 0}}
    ]
  })");
  const Engine e(s);
  CHECK_NOTHROW(e.sector({2.0, 2.0}, {0}));
  try {
    e.polystate_at({2.0, 2.0});
    FAIL("expected impossible-outcome");
  } catch (const ImpossibleOutcome& ex) {
    CHECK(ex.subset() == "AB");
  }
}

TEST_CASE("subsystem cap") {
  const auto s = scenario::load_scenario(oracle::fixture("three_party.scn"));
  CHECK_THROWS_AS(Engine(s, 2), Error);
  const Engine e(s);
  CHECK(e.polystate_at({0, 0, 0}).sectors.size() == 7);
  CHECK(engine::all_subsets(3).front() == Subset{0});
  CHECK(engine::all_subsets(3).back() == Subset{0, 1, 2});
}

TEST_CASE("unitary-only scenarios: every sector is a partial trace of the joint one") {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 20; ++k) {
    const Mat u = oracle::random_unitary(rng, 2);
    std::ostringstream m;
    m << "[";
    for (int r = 0; r < 2; ++r) {
      m << (r ? "," : "") << "[";
      for (int c = 0; c < 2; ++c) m << (c ? "," : "") << "[" << build::num(u(r, c).real()) << "," << build::num(u(r, c).imag()) << "]";
      m << "]";
    }
    m << "]";
    const auto s = scenario::parse_scenario(R"({
      "spacetime": {"d": 1},
      "subsystems": [
        {"name": "A", "worldline": {"anchor": [0, 0], "final_v": [0.3]}},
        {"name": "B", "worldline": {"anchor": [0, 2], "final_v": [-0.2]}}
      ],
      "initial_state": {"named": "bell_psi_minus"},
      "interventions": [
        {"on": "A", "tau": 0.5, "unitary": )" + m.str() + R"(},
        {"on": "B", "tau": 0.2, "unitary": "hadamard"}
      ]
    })");
    const Engine e(s);
    const auto p = e.polystate_at({1.0, 1.0});
    const auto dims = s.dims();
    for (std::size_t i : {0u, 1u}) {
      CHECK(oracle::max_abs_diff(p.at({i}).matrix(), oracle::ptrace_naive(p.at({0, 1}).matrix(), dims, {i})) < 1e-12);
    }
  }
}

TEST_CASE("sectors stop changing once every intervention is in the past") {
  const Engine e(scenario::load_scenario(oracle::fixture("foliation_demo.scn")));
  const auto late = e.polystate_at({4.0, 4.0});
  for (double ta = 4.0; ta < 9.0; ta += 1.25) {
    for (double tb = 4.0; tb < 9.0; tb += 1.5) {
      const auto p = e.polystate_at({ta, tb});
      for (const auto& [subset, rho] : p.sectors) {
        CHECK(oracle::max_abs_diff(rho.matrix(), late.at(subset).matrix()) == 0);
      }
    }
  }
}
