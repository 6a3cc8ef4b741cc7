#pragma once

// Randomized property checks shared by the unit suite and the acceptance binary.
// Each returns how many cases ran and how many failed.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "builders.hpp"
#include "oracles.hpp"
#include "polystate/engine.hpp"
#include "polystate/ensemble.hpp"
#include "polystate/errors.hpp"
#include "polystate/scenario.hpp"
#include "polystate/spacetime.hpp"

namespace props {

using namespace polystate;

struct Tally {
  std::size_t cases = 0;
  std::size_t failures = 0;
  double worst = 0.0;
  std::string first_failure;

  void record(bool ok, double err, const std::string& what) {
    ++cases;
    worst = std::max(worst, err);
    if (!ok) {
      if (failures == 0) first_failure = what;
      ++failures;
    }
  }
};

inline double dist(const linalg::DensityOperator& a, const linalg::DensityOperator& b) {
  return oracle::max_abs_diff(a.matrix(), b.matrix());
}

// The sector of a single subsystem depends on its own proper time only.
inline Tally singleton_independence(std::uint64_t seed, std::size_t min_cases) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> tau(-3, 8);
  Tally t;
  while (t.cases < min_cases) {
    const engine::Engine e(build::random_two_qubit(rng));
    for (std::size_t i : {0u, 1u}) {
      const double ti = tau(rng);
      engine::Taus a(2), b(2);
      a[i] = b[i] = ti;
      a[1 - i] = tau(rng);
      b[1 - i] = tau(rng);
      try {
        const double err = dist(e.sector(a, {i}), e.sector(b, {i}));
        t.record(err == 0.0, err, "singleton sector changed with the other proper time");
      } catch (const ImpossibleOutcome&) {
        // Both evaluations select the same interventions; an impossible branch is still impossible.
        bool both = false;
        try {
          e.sector(b, {i});
        } catch (const ImpossibleOutcome&) {
          both = true;
        }
        t.record(both, 0.0, "impossible outcome in one evaluation only");
      }
    }
  }
  return t;
}

// A subsystem's local state does not depend on recorded outcomes, or even the
// presence, of selective interventions outside its causal past.
inline Tally no_signalling(std::uint64_t seed, std::size_t min_cases) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> tau(-2, 6);
  Tally t;
  while (t.cases < min_cases) {
    const auto s = build::random_two_qubit(rng);
    const engine::Engine e(s);
    const engine::Taus taus{tau(rng), tau(rng)};
    for (std::size_t i : {0u, 1u}) {
      const auto x = s.subsystems[i].worldline.position(taus[i]);
      linalg::DensityOperator base = linalg::DensityOperator::maximally_mixed(2);
      try {
        base = ensemble::conditional_state(e, taus, {i});
      } catch (const Error&) {
        continue;
      }
      for (std::size_t k = 0; k < s.interventions.size(); ++k) {
        const auto& iv = s.interventions[k];
        if (iv.subsystem == i || !iv.is_selective()) continue;
        if (spacetime::causally_precedes(s.event_of(k), x)) continue;
        std::vector<scenario::Scenario> variants;
        for (std::size_t o = 0; o < iv.selective().kraus.size(); ++o) {
          if (o == iv.selective().chosen) continue;
          auto v = s;
          std::get<scenario::Selective>(v.interventions[k].kind).chosen = o;
          variants.push_back(std::move(v));
        }
        auto removed = s;
        removed.interventions.erase(removed.interventions.begin() + static_cast<std::ptrdiff_t>(k));
        variants.push_back(std::move(removed));
        for (const auto& v : variants) {
          const engine::Engine ev(v);
          try {
            // Independent route: branch oracle of the variant vs engine sector of the original.
            const auto other = ensemble::conditional_state(ev, taus, {i});
            const double err = oracle::trace_distance_svd(other.matrix(), base.matrix());
            const double err2 = dist(ev.sector(taus, {i}), e.sector(taus, {i}));
            t.record(err < 1e-10 && err2 < 1e-12, std::max(err, err2), "local state changed by a remote outcome");
          } catch (const Error&) {
          }
        }
      }
    }
  }
  return t;
}

// Selective interventions at spacelike-separated events give the same state in
// either order, and the engine's late joint sector equals any causal ordering.
inline Tally spacelike_commutation(std::uint64_t seed, std::size_t min_cases) {
  std::mt19937_64 rng(seed);
  Tally t;
  while (t.cases < min_cases) {
    const auto s = build::random_two_qubit(rng);
    std::vector<std::size_t> on_a, on_b;
    for (std::size_t k = 0; k < s.interventions.size(); ++k) (s.interventions[k].subsystem == 0 ? on_a : on_b).push_back(k);
    bool spacelike_pair = false;
    for (auto a : on_a)
      for (auto b : on_b) {
        const auto ea = s.event_of(a), eb = s.event_of(b);
        spacelike_pair |= !spacetime::causally_precedes(ea, eb) && !spacetime::causally_precedes(eb, ea);
      }
    if (!spacelike_pair) continue;

    // Every interleaving that keeps each subsystem's own order.
    std::vector<std::vector<std::size_t>> orders;
    std::vector<std::size_t> mask(on_a.size() + on_b.size(), 1);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(on_a.size()), 0);
    do {
      std::vector<std::size_t> order;
      std::size_t ia = 0, ib = 0;
      for (auto m : mask) order.push_back(m == 0 ? on_a[ia++] : on_b[ib++]);
      orders.push_back(order);
    } while (std::next_permutation(mask.begin(), mask.end()));

    // Manual Kraus application with explicit Kronecker products.
    auto manual = [&](const std::vector<std::size_t>& order) {
      oracle::Mat rho = s.initial_state.matrix();
      for (auto k : order) {
        const auto& iv = s.interventions[k];
        const oracle::Mat& op = iv.applied_operator();
        const oracle::Mat id = oracle::Mat::Identity(2, 2);
        const oracle::Mat full = iv.subsystem == 0 ? oracle::kron2(op, id) : oracle::kron2(id, op);
        rho = full * rho * full.adjoint();
      }
      return oracle::Mat(rho / rho.trace());
    };
    const oracle::Mat ref = manual(orders.front());
    double err = 0;
    for (const auto& o : orders) err = std::max(err, oracle::max_abs_diff(manual(o), ref));
    const engine::Engine e(s);
    try {
      const auto late = e.sector({50.0, 50.0}, {0, 1});
      err = std::max(err, oracle::max_abs_diff(late.matrix(), ref));
    } catch (const ImpossibleOutcome&) {
      continue;
    }
    t.record(err < 1e-12, err, "ordering of spacelike interventions matters");
  }
  return t;
}

inline scenario::Scenario boosted(const scenario::Scenario& s, double rapidity) {
  return scenario::boost_all(s, rapidity, {1.0});
}

// Every sector is unchanged by a global boost at fixed proper times.
inline Tally boost_covariance(std::uint64_t seed, std::size_t min_cases) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> tau(-2, 6);
  const std::vector<double> rapidities{-1.5, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 1.5};
  Tally t;
  while (t.cases < min_cases) {
    const auto s = build::random_two_qubit(rng);
    const engine::Engine e(s);
    const engine::Taus taus{tau(rng), tau(rng)};
    engine::Polystate base;
    try {
      base = e.polystate_at(taus);
    } catch (const ImpossibleOutcome&) {
      continue;
    }
    for (double eta : rapidities) {
      const engine::Engine eb(boosted(s, eta));
      double err = 0;
      bool ok = true;
      try {
        const auto p = eb.polystate_at(taus);
        for (const auto& [subset, rho] : base.sectors) err = std::max(err, dist(rho, p.at(subset)));
        ok = err < 1e-10;
      } catch (const ImpossibleOutcome&) {
        ok = false;
        err = 1.0;
      }
      t.record(ok, err, "sector changed under a boost");
    }
  }
  return t;
}

// serialize(parse(doc)) reparses to a scenario with the same geometry whose
// intervention map agrees on random (region, state) probes.
inline Tally parser_round_trip(std::uint64_t seed, std::size_t min_cases) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> t_of(-2, 8), x_of(-3, 5);
  Tally t;
  while (t.cases < min_cases) {
    const auto a = build::random_two_qubit(rng);
    const auto b = scenario::parse_scenario(scenario::serialize(a));
    bool ok = a.n() == b.n() && a.interventions.size() == b.interventions.size();
    for (std::size_t k = 0; ok && k < a.interventions.size(); ++k) {
      ok = a.interventions[k].tau == b.interventions[k].tau &&
           a.interventions[k].subsystem == b.interventions[k].subsystem &&
           a.event_of(k).coords() == b.event_of(k).coords();
    }
    double err = ok ? oracle::max_abs_diff(a.initial_state.matrix(), b.initial_state.matrix()) : 1.0;
    for (int probe = 0; ok && probe < 4; ++probe) {
      const auto region = spacetime::Region::past_of(spacetime::Event({t_of(rng), x_of(rng)}));
      const oracle::Mat rho = oracle::random_density(rng, 4);
      err = std::max(err, oracle::max_abs_diff(scenario::psi_map(a, region, rho), scenario::psi_map(b, region, rho)));
    }
    t.record(ok && err < 1e-12, err, "round trip changed the scenario");
  }
  return t;
}

}  // namespace props
