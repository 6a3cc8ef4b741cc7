#pragma once

// Programmatic scenarios shared by unit, property and acceptance tests.

#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "polystate/scenario.hpp"

namespace build {

inline std::string num(double x) {
  std::ostringstream o;
  o.precision(17);
  o << x;
  return o.str();
}

// Singlet; A measures sigma_z at (1, 0) and B measures sigma_n(theta, 0) at
// (1, 2). Outcome indices: 0 is +1, 1 is -1.
inline polystate::scenario::Scenario epr(double theta, std::size_t a, std::size_t b) {
  const std::string doc = R"({
    "spacetime": {"d": 1},
    "subsystems": [
      {"name": "A", "worldline": {"anchor": [0, 0], "final_v": [0]}},
      {"name": "B", "worldline": {"anchor": [0, 2], "final_v": [0]}}
    ],
    "initial_state": {"named": "bell_psi_minus"},
    "interventions": [
      {"on": "A", "tau": 1.0, "measure": {"projective_basis": "z", "outcome": )" +
                          std::to_string(a) + R"(}},
      {"on": "B", "tau": 1.0, "measure": {"projective_basis": {"n": [)" + num(theta) +
                          R"(, 0]}, "outcome": )" + std::to_string(b) + R"(}}
    ]
  })";
  return polystate::scenario::parse_scenario(doc);
}

// Two qubits on random inertial worldlines, random initial pure state, one or
// two random projective measurements per qubit at random proper times and
// random recorded outcomes. A generic initial state makes every branch possible.
inline std::string random_two_qubit_doc(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1), vel(-0.7, 0.7), tau(-1.0, 3.0), ang(0, M_PI), phi(0, 2 * M_PI);
  std::normal_distribution<double> g;
  std::ostringstream ket;
  ket << "[";
  double norm = 0;
  double amps[8];
  for (double& a : amps) {
    a = g(rng);
    norm += a * a;
  }
  norm = std::sqrt(norm);
  for (int i = 0; i < 4; ++i) ket << (i ? ", " : "") << "[" << num(amps[2 * i] / norm) << ", " << num(amps[2 * i + 1] / norm) << "]";
  ket << "]";

  std::ostringstream ivs;
  bool first = true;
  for (const char* who : {"A", "B"}) {
    const int count = 1 + static_cast<int>(u(rng) * 2);
    double t0 = tau(rng);
    for (int k = 0; k < count; ++k) {
      ivs << (first ? "" : ",\n") << R"({"on": ")" << who << R"(", "tau": )" << num(t0)
          << R"(, "measure": {"projective_basis": {"n": [)" << num(ang(rng)) << ", " << num(phi(rng))
          << R"(]}, "outcome": )" << (u(rng) < 0.5 ? 0 : 1) << "}}";
      first = false;
      t0 += 0.3 + u(rng);
    }
  }
  return R"({
    "spacetime": {"d": 1},
    "subsystems": [
      {"name": "A", "worldline": {"anchor": [0, 0], "final_v": [)" +
         num(vel(rng)) + R"(]}},
      {"name": "B", "worldline": {"anchor": [0, )" +
         num(1.0 + 2.0 * u(rng)) + R"(], "final_v": [)" + num(vel(rng)) + R"(]}}
    ],
    "initial_state": {"ket": )" +
         ket.str() + R"(},
    "interventions": [)" +
         ivs.str() + "]\n  }";
}

inline polystate::scenario::Scenario random_two_qubit(std::mt19937_64& rng) {
  return polystate::scenario::parse_scenario(random_two_qubit_doc(rng));
}

}  // namespace build
