#pragma once

// Rival single-operator update rules, checked against the two criteria a
// relativistic state assignment should meet: reproducing the Lüders
// statistics and leaving each party's description untouched by outcomes it
// cannot know. Also the charge bookkeeping on foliation leaves.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "polystate/engine.hpp"
#include "polystate/linalg.hpp"
#include "polystate/scenario.hpp"
#include "polystate/spacetime.hpp"

namespace polystate::audit {

using engine::Taus;
using linalg::DensityOperator;

inline constexpr double kCriterionTol = 1e-9;
inline constexpr double kConservationTol = 1e-12;

struct Prescription {
  enum class Kind { PastLightcone, FutureLightcone, Foliation, Polystate };
  Kind kind = Kind::Polystate;
  spacetime::Foliation foliation;  // used by Kind::Foliation only

  static Prescription past_lightcone() { return {Kind::PastLightcone, {}}; }
  static Prescription future_lightcone() { return {Kind::FutureLightcone, {}}; }
  static Prescription along(spacetime::Foliation f) { return {Kind::Foliation, std::move(f)}; }
  static Prescription polystate() { return {Kind::Polystate, {}}; }

  std::string name() const;
};

// Past lightcone, future lightcone, rest-frame foliation, polystate.
std::vector<Prescription> standard_prescriptions(std::size_t spatial_dim);

// Interventions the rule applies for a state assigned at event x.
// PastLightcone: selective ones unless x lies strictly inside their causal
// past. FutureLightcone: those in the causal past of x. Foliation: those on or
// below the leaf through x. Unitaries under the lightcone rules follow the
// causal past.
std::vector<std::size_t> applied_at(const Prescription& p, const scenario::Scenario& s, const spacetime::Event& x);

// A prescription's description of the subsystems at taus.
struct Description {
  DensityOperator joint;
  std::vector<DensityOperator> locals;  // one reduced state per subsystem
  // True when the subsystems saw different update sets and the joint operator
  // is the product of their reduced states.
  bool product_of_locals = false;
};

// Throws BipartiteOnly for the three single-operator rules unless n == 2.
Description describe(const Prescription& p, const engine::Engine& e, const Taus& taus);
DensityOperator single_state(const Prescription& p, const engine::Engine& e, const Taus& taus);

struct CriterionRow {
  Prescription prescription;
  std::optional<std::string> error;  // set instead of values, e.g. "bipartite-only"
  std::vector<double> values;        // per-subsystem expectations, then the joint one
  std::vector<double> residuals;     // |value - target|
  double max_residual = 0.0;
  bool predictive = false;
  bool respects_ignorance = false;
  double ignorance_residual = 0.0;   // largest local-state change across outcome variants
  bool all_pass() const { return !error && predictive && respects_ignorance; }
};

struct CriteriaReport {
  Taus taus;
  std::vector<double> targets;
  bool targets_declared = false;
  std::vector<CriterionRow> rows;
};

// Observables come from the scenario's audit block, or sigma_z on every qubit.
// Targets come from the audit block, or from the branch-enumeration oracle.
CriteriaReport criteria_report(const engine::Engine& e, const Taus& taus,
                               const std::vector<Prescription>& prescriptions);
CriteriaReport criteria_report(const engine::Engine& e, const Taus& taus);

struct LedgerRow {
  double t = 0.0;
  Taus taus;
  double q_joint = 0.0;
  double q_sum = 0.0;
};

struct ChargeLedger {
  Prescription source;
  std::vector<LedgerRow> rows;
  double initial_charge = 0.0;
};

// Evaluates each leaf at the proper times where the worldlines cross it.
// Requires qubits only.
ChargeLedger charge_ledger(const engine::Engine& e, const spacetime::Foliation& f, const std::vector<double>& t_grid,
                           const Prescription& source);

struct ConservationReport {
  std::vector<double> t_grid;
  std::vector<double> taus;
  std::vector<double> charges;
  double initial_charge = 0.0;
  double max_deviation = 0.0;
  bool conserved = false;
};

// Total charge in the recollection along z, sampled where z crosses each leaf.
// Reports violations instead of throwing.
ConservationReport recollection_conservation(const engine::Engine& e, const spacetime::Worldline& z,
                                             const std::vector<double>& t_grid, const spacetime::Foliation& f);

}  // namespace polystate::audit
