#include "polystate/audit.hpp"

#include <algorithm>
#include <cmath>

#include "polystate/ensemble.hpp"
#include "polystate/errors.hpp"
#include "polystate/standard.hpp"

namespace polystate::audit {

using linalg::CMatrix;
using scenario::Scenario;

std::string Prescription::name() const {
  switch (kind) {
    case Kind::PastLightcone: return "past-lightcone";
    case Kind::FutureLightcone: return "future-lightcone";
    case Kind::Foliation: return "foliation";
    case Kind::Polystate: return "polystate";
  }
  return "unknown";
}

std::vector<Prescription> standard_prescriptions(std::size_t spatial_dim) {
  return {Prescription::past_lightcone(), Prescription::future_lightcone(),
          Prescription::along(spacetime::Foliation::rest(spatial_dim)), Prescription::polystate()};
}

std::vector<std::size_t> applied_at(const Prescription& p, const Scenario& s, const spacetime::Event& x) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < s.interventions.size(); ++k) {
    const auto ev = s.event_of(k);
    bool apply = false;
    switch (p.kind) {
      case Prescription::Kind::Foliation:
        apply = p.foliation.leaf_time(ev) <= p.foliation.leaf_time(x) + spacetime::kCausalTol;
        break;
      case Prescription::Kind::PastLightcone:
        apply = s.interventions[k].is_selective() ? !spacetime::strictly_precedes(x, ev)
                                                  : spacetime::causally_precedes(ev, x);
        break;
      case Prescription::Kind::FutureLightcone:
      case Prescription::Kind::Polystate:
        apply = spacetime::causally_precedes(ev, x);
        break;
    }
    if (apply) out.push_back(k);
  }
  return out;
}

Description describe(const Prescription& p, const engine::Engine& e, const Taus& taus) {
  const auto& s = e.scenario();
  const auto n = s.n();
  if (taus.size() != n) throw Error(ErrorKind::InvalidArgument, "describe: one proper time per subsystem required");
  Description out{s.initial_state, {}, false};

  if (p.kind == Prescription::Kind::Polystate) {
    engine::Subset all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    out.joint = e.sector(taus, all);
    for (std::size_t i = 0; i < n; ++i) out.locals.push_back(e.sector(taus, {i}));
    return out;
  }
  if (n != 2) {
    throw Error(ErrorKind::BipartiteOnly, p.name() + " prescription is defined for two subsystems only");
  }

  const auto dims = s.dims();
  std::vector<std::vector<std::size_t>> sets;
  std::vector<DensityOperator> fields;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = s.subsystems[i].worldline.position(taus[i]);
    sets.push_back(applied_at(p, s, x));
    fields.push_back(linalg::normalize(scenario::psi_map(s, sets.back(), s.initial_state.matrix())));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t keep[] = {i};
    out.locals.push_back(linalg::ptrace(fields[i], dims, keep));
  }
  if (std::all_of(sets.begin(), sets.end(), [&](const auto& v) { return v == sets.front(); })) {
    out.joint = fields.front();
    return out;
  }
  std::vector<CMatrix> factors;
  for (const auto& l : out.locals) factors.push_back(l.matrix());
  out.joint = DensityOperator::from_matrix(linalg::kron_all(factors));
  out.product_of_locals = true;
  return out;
}

DensityOperator single_state(const Prescription& p, const engine::Engine& e, const Taus& taus) {
  return describe(p, e, taus).joint;
}

namespace {

std::vector<CMatrix> audit_observables(const Scenario& s) {
  if (s.audit && !s.audit->observables.empty()) {
    if (s.audit->observables.size() != s.n()) {
      throw Error(ErrorKind::DimensionMismatch, "audit: one observable per subsystem required");
    }
    return s.audit->observables;
  }
  for (const auto& sub : s.subsystems) {
    if (sub.dim != 2) throw Error(ErrorKind::InvalidArgument, "audit: default sigma_z observables need qubits");
  }
  return std::vector<CMatrix>(s.n(), standard::pauli_z());
}

std::vector<double> expectations(const std::vector<CMatrix>& obs, const Description& d) {
  std::vector<double> out;
  for (std::size_t i = 0; i < obs.size(); ++i) out.push_back(linalg::expect(d.locals[i], obs[i]));
  out.push_back(linalg::expect(d.joint, linalg::kron_all(obs)));
  return out;
}

// Largest change of any subsystem's local description when another
// subsystem's outcome, outside that subsystem's causal past, is altered or the
// measurement removed.
double ignorance_residual(const Prescription& p, const engine::Engine& e, const Taus& taus, const Description& base) {
  const auto& s = e.scenario();
  double worst = 0.0;
  for (std::size_t i = 0; i < s.n(); ++i) {
    const auto x = s.subsystems[i].worldline.position(taus[i]);
    for (std::size_t k = 0; k < s.interventions.size(); ++k) {
      const auto& iv = s.interventions[k];
      if (iv.subsystem == i || !iv.is_selective()) continue;
      if (spacetime::causally_precedes(s.event_of(k), x)) continue;
      std::vector<Scenario> variants;
      for (std::size_t j = 0; j < iv.selective().kraus.size(); ++j) {
        if (j == iv.selective().chosen) continue;
        Scenario v = s;
        std::get<scenario::Selective>(v.interventions[k].kind).chosen = j;
        variants.push_back(std::move(v));
      }
      Scenario removed = s;
      removed.interventions.erase(removed.interventions.begin() + static_cast<std::ptrdiff_t>(k));
      variants.push_back(std::move(removed));
      for (auto& v : variants) {
        try {
          const engine::Engine ve(std::move(v));
          const auto d = describe(p, ve, taus);
          worst = std::max(worst, linalg::trace_distance(d.locals[i], base.locals[i]));
        } catch (const Error& err) {
          if (err.kind() != ErrorKind::ImpossibleOutcome) throw;
        }
      }
    }
  }
  return worst;
}

}  // namespace

CriteriaReport criteria_report(const engine::Engine& e, const Taus& taus) {
  return criteria_report(e, taus, standard_prescriptions(e.scenario().spatial_dim));
}

CriteriaReport criteria_report(const engine::Engine& e, const Taus& taus,
                               const std::vector<Prescription>& prescriptions) {
  const auto& s = e.scenario();
  const auto obs = audit_observables(s);
  CriteriaReport report;
  report.taus = taus;

  if (s.audit && s.audit->targets) {
    report.targets = *s.audit->targets;
    report.targets_declared = true;
    if (report.targets.size() != s.n() + 1) {
      throw Error(ErrorKind::DimensionMismatch, "audit: targets need one entry per subsystem plus the joint");
    }
  } else {
    for (std::size_t i = 0; i < s.n(); ++i) {
      report.targets.push_back(linalg::expect(ensemble::conditional_state(e, taus, {i}), obs[i]));
    }
    engine::Subset all(s.n());
    for (std::size_t i = 0; i < s.n(); ++i) all[i] = i;
    report.targets.push_back(linalg::expect(ensemble::conditional_state(e, taus, all), linalg::kron_all(obs)));
  }

  for (const auto& p : prescriptions) {
    CriterionRow row;
    row.prescription = p;
    try {
      const auto d = describe(p, e, taus);
      row.values = expectations(obs, d);
      for (std::size_t k = 0; k < row.values.size(); ++k) {
        row.residuals.push_back(std::abs(row.values[k] - report.targets[k]));
      }
      row.max_residual = *std::max_element(row.residuals.begin(), row.residuals.end());
      row.predictive = row.max_residual <= kCriterionTol;
      row.ignorance_residual = ignorance_residual(p, e, taus, d);
      row.respects_ignorance = row.ignorance_residual <= kCriterionTol;
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::BipartiteOnly) throw;
      row.error = to_string(err.kind());
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

namespace {

void require_qubits(const Scenario& s, const char* who) {
  for (const auto& sub : s.subsystems) {
    if (sub.dim != 2) throw Error(ErrorKind::InvalidArgument, std::string(who) + ": every subsystem must be a qubit");
  }
}

}  // namespace

ChargeLedger charge_ledger(const engine::Engine& e, const spacetime::Foliation& f, const std::vector<double>& t_grid,
                           const Prescription& source) {
  const auto& s = e.scenario();
  require_qubits(s, "charge_ledger");
  if (t_grid.empty()) throw Error(ErrorKind::InvalidArgument, "charge_ledger: empty leaf grid");
  const CMatrix q = standard::charge();
  const CMatrix total_q = standard::total_charge(s.n());

  ChargeLedger ledger;
  ledger.source = source;
  ledger.initial_charge = linalg::expect(s.initial_state, total_q);
  for (double t : t_grid) {
    LedgerRow row;
    row.t = t;
    for (const auto& sub : s.subsystems) row.taus.push_back(spacetime::proper_time_at_leaf(sub.worldline, f, t));
    const auto d = describe(source, e, row.taus);
    row.q_joint = linalg::expect(d.joint, total_q);
    for (const auto& local : d.locals) row.q_sum += linalg::expect(local, q);
    ledger.rows.push_back(std::move(row));
  }
  return ledger;
}

ConservationReport recollection_conservation(const engine::Engine& e, const spacetime::Worldline& z,
                                             const std::vector<double>& t_grid, const spacetime::Foliation& f) {
  const auto& s = e.scenario();
  require_qubits(s, "recollection_conservation");
  const CMatrix total_q = standard::total_charge(s.n());
  ConservationReport out;
  out.t_grid = t_grid;
  out.initial_charge = linalg::expect(s.initial_state, total_q);
  for (double t : t_grid) {
    const double tau = spacetime::proper_time_at_leaf(z, f, t);
    const double q = linalg::expect(e.recollection(z, tau), total_q);
    out.taus.push_back(tau);
    out.charges.push_back(q);
    out.max_deviation = std::max(out.max_deviation, std::abs(q - out.initial_charge));
  }
  out.conserved = out.max_deviation <= kConservationTol;
  return out;
}

}  // namespace polystate::audit
