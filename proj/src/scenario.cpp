#include "polystate/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace polystate::scenario {

const CMatrix& Intervention::applied_operator() const {
  if (const auto* u = std::get_if<Unitary>(&kind)) return u->matrix;
  const auto& sel = std::get<Selective>(kind);
  return sel.kraus.at(sel.chosen);
}

Dims Scenario::dims() const {
  Dims d;
  d.reserve(subsystems.size());
  for (const auto& s : subsystems) d.push_back(s.dim);
  return d;
}

std::optional<std::size_t> Scenario::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < subsystems.size(); ++i) {
    if (subsystems[i].name == name) return i;
  }
  return std::nullopt;
}

spacetime::Event Scenario::event_of(std::size_t k) const {
  const auto& iv = interventions.at(k);
  return subsystems.at(iv.subsystem).worldline.position(iv.tau);
}

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : Error(ErrorKind::ValidationError,
            diagnostics.empty() ? std::string("validation failed")
                                : diagnostics.front().code + " at " + diagnostics.front().field +
                                      ": " + diagnostics.front().message),
      diags_(std::move(diagnostics)) {}

std::vector<Diagnostic> validate(const Scenario& s) {
  std::vector<Diagnostic> out;
  auto add = [&](std::string code, std::string field, std::string msg) {
    out.push_back({std::move(code), std::move(field), std::move(msg)});
  };

  if (s.spatial_dim < 1 || s.spatial_dim > 3) {
    add("spatial-dim", "/spacetime/d", "spatial dimension must be 1, 2 or 3");
  }
  if (s.subsystems.empty()) add("no-subsystems", "/subsystems", "at least one subsystem is required");

  std::set<std::string> names;
  for (std::size_t i = 0; i < s.subsystems.size(); ++i) {
    const auto& sub = s.subsystems[i];
    const std::string field = "/subsystems/" + std::to_string(i);
    if (sub.name.empty()) add("empty-name", field + "/name", "subsystem name is empty");
    if (!names.insert(sub.name).second) add("duplicate-name", field + "/name", "duplicate subsystem name '" + sub.name + "'");
    if (sub.dim == 0) add("invalid-dim", field + "/dim", "local dimension must be positive");
    if (sub.worldline.spatial_dim() != s.spatial_dim) {
      add("worldline-dimension", field + "/worldline",
          "anchor has spatial dimension " + std::to_string(sub.worldline.spatial_dim()) +
              ", scenario has " + std::to_string(s.spatial_dim));
    }
    if (auto v = sub.worldline.timelike_violation()) {
      add("non-timelike-worldline", field + "/worldline", *v);
    }
  }

  const auto dims = s.dims();
  const std::size_t total = linalg::product(dims);
  if (!s.subsystems.empty() && total != s.initial_state.dim()) {
    add("dimension-mismatch", "/initial_state",
        "initial state has dimension " + std::to_string(s.initial_state.dim()) +
            ", product of local dimensions is " + std::to_string(total));
  }
  if (total > linalg::max_dim()) {
    add("max-dim-exceeded", "/subsystems",
        "joint dimension " + std::to_string(total) + " exceeds the cap " + std::to_string(linalg::max_dim()));
  }

  std::set<std::pair<std::size_t, double>> seen;
  for (std::size_t k = 0; k < s.interventions.size(); ++k) {
    const auto& iv = s.interventions[k];
    const std::string field = "/interventions/" + std::to_string(k);
    if (iv.subsystem >= s.subsystems.size()) {
      add("unknown-subsystem", field + "/on", "subsystem index out of range");
      continue;
    }
    if (!std::isfinite(iv.tau)) add("non-finite-tau", field + "/tau", "proper time must be finite");
    if (!seen.insert({iv.subsystem, iv.tau}).second) {
      add("duplicate-proper-time", field + "/tau",
          "two interventions on '" + s.subsystems[iv.subsystem].name + "' at tau = " + std::to_string(iv.tau));
    }
    const auto d = static_cast<Eigen::Index>(s.subsystems[iv.subsystem].dim);
    auto dim_ok = [&](const CMatrix& m) { return m.rows() == d && m.cols() == d; };
    if (const auto* u = std::get_if<Unitary>(&iv.kind)) {
      if (!dim_ok(u->matrix)) {
        add("operator-dimension", field + "/unitary", "operator does not match the local dimension");
      } else if (!linalg::is_unitary(u->matrix)) {
        add("not-unitary", field + "/unitary", "matrix is not unitary within 1e-10");
      }
      continue;
    }
    const auto& sel = std::get<Selective>(iv.kind);
    if (sel.kraus.empty()) {
      add("kraus-empty", field + "/measure", "Kraus set is empty");
      continue;
    }
    bool dims_ok = true;
    for (std::size_t j = 0; j < sel.kraus.size(); ++j) {
      if (!dim_ok(sel.kraus[j])) {
        add("operator-dimension", field + "/measure/kraus/" + std::to_string(j),
            "operator does not match the local dimension");
        dims_ok = false;
      }
    }
    if (dims_ok) {
      CMatrix sum = CMatrix::Zero(d, d);
      for (const auto& k_op : sel.kraus) sum += k_op.adjoint() * k_op;
      const double dev = (sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
      if (dev > linalg::kHermitianTol) {
        add("kraus-incomplete", field + "/measure",
            "sum of K^dagger K deviates from the identity by " + std::to_string(dev));
      }
    }
    if (sel.chosen >= sel.kraus.size()) {
      add("outcome-out-of-range", field + "/measure/outcome",
          "outcome " + std::to_string(sel.chosen) + " with " + std::to_string(sel.kraus.size()) + " Kraus operators");
    }
    if (!sel.labels.empty() && sel.labels.size() != sel.kraus.size()) {
      add("label-count", field + "/measure/labels", "label count differs from the Kraus count");
    }
  }
  return out;
}

std::vector<std::size_t> select_interventions(const Scenario& s, const spacetime::Region& r) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < s.interventions.size(); ++k) {
    if (spacetime::region_contains(r, s.event_of(k))) out.push_back(k);
  }
  return out;
}

CMatrix apply_in_order(const Scenario& s, const std::vector<std::size_t>& order, const CMatrix& rho) {
  const auto dims = s.dims();
  if (static_cast<std::size_t>(rho.rows()) != linalg::product(dims) || rho.rows() != rho.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "psi_map: state does not have the joint dimension");
  }
  CMatrix out = rho;
  for (auto k : order) {
    const auto& iv = s.interventions.at(k);
    out = linalg::conj_apply(linalg::lift_local(iv.applied_operator(), iv.subsystem, dims), out);
  }
  return out;
}

CMatrix psi_map(const Scenario& s, const std::vector<std::size_t>& selected, const CMatrix& rho) {
  std::vector<std::size_t> order(selected);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ia = s.interventions[a];
    const auto& ib = s.interventions[b];
    if (ia.subsystem != ib.subsystem) return ia.subsystem < ib.subsystem;
    return ia.tau < ib.tau;
  });
  return apply_in_order(s, order, rho);
}

CMatrix psi_map(const Scenario& s, const spacetime::Region& r, const CMatrix& rho) {
  return psi_map(s, select_interventions(s, r), rho);
}

Scenario boost_all(const Scenario& s, double rapidity, const spacetime::SpatialVector& axis) {
  spacetime::Geometry g;
  for (const auto& sub : s.subsystems) g.worldlines.push_back(sub.worldline);
  for (const auto& f : s.foliations) g.foliations.push_back(f.foliation);
  const auto boosted = spacetime::boost_all(g, rapidity, axis);
  Scenario out = s;
  for (std::size_t i = 0; i < out.subsystems.size(); ++i) out.subsystems[i].worldline = boosted.worldlines[i];
  for (std::size_t i = 0; i < out.foliations.size(); ++i) out.foliations[i].foliation = boosted.foliations[i];
  return out;
}

std::vector<std::size_t> parse_subset(const Scenario& s, std::string_view spec) {
  std::vector<std::size_t> out;
  auto add_name = [&](std::string_view name) {
    auto idx = s.index_of(name);
    if (!idx) throw Error(ErrorKind::InvalidArgument, "unknown subsystem '" + std::string(name) + "'");
    out.push_back(*idx);
  };
  if (spec == "all") {
    for (std::size_t i = 0; i < s.n(); ++i) out.push_back(i);
    return out;
  }
  if (spec.find(',') != std::string_view::npos) {
    std::size_t start = 0;
    while (start <= spec.size()) {
      const auto end = spec.find(',', start);
      const auto piece = spec.substr(start, end == std::string_view::npos ? spec.size() - start : end - start);
      if (!piece.empty()) add_name(piece);
      if (end == std::string_view::npos) break;
      start = end + 1;
    }
  } else if (s.index_of(spec)) {
    add_name(spec);
  } else {
    for (char c : spec) add_name(std::string_view(&c, 1));
  }
  std::sort(out.begin(), out.end());
  if (out.empty() || std::adjacent_find(out.begin(), out.end()) != out.end()) {
    throw Error(ErrorKind::InvalidArgument, "subset must be nonempty without repeats: '" + std::string(spec) + "'");
  }
  return out;
}

std::string subset_name(const Scenario& s, const std::vector<std::size_t>& subset) {
  bool single_chars = true;
  for (auto i : subset) single_chars = single_chars && s.subsystems.at(i).name.size() == 1;
  std::string out;
  for (std::size_t k = 0; k < subset.size(); ++k) {
    if (!single_chars && k > 0) out += ',';
    out += s.subsystems.at(subset[k]).name;
  }
  return out;
}

}  // namespace polystate::scenario
