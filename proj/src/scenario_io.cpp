// JSON scenario files (.scn).

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "polystate/scenario.hpp"
#include "polystate/standard.hpp"

namespace polystate::scenario {

using json = nlohmann::json;
using linalg::Complex;
using linalg::CVector;
using linalg::Ket;

namespace {

[[noreturn]] void schema_error(const std::string& field, const std::string& message) {
  throw ValidationError({{"schema", field.empty() ? "/" : field, message}});
}

const json& member(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(path, std::string("missing key '") + key + "'");
  return *it;
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) schema_error(path + "/" + it.key(), "unknown key '" + it.key() + "'");
  }
}

double as_real(const json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  return j.get<double>();
}

std::size_t as_index(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) schema_error(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

std::vector<double> as_reals(const json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_real(j[i], path + "/" + std::to_string(i)));
  return out;
}

Complex as_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  schema_error(path, "expected a complex number [re, im] or a real number");
}

CMatrix explicit_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  CMatrix m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    const std::string rp = path + "/" + std::to_string(r);
    if (!row.is_array() || row.empty()) schema_error(rp, "expected a non-empty row");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      m.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      schema_error(rp, "ragged matrix rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = as_complex(row[static_cast<std::size_t>(c)], rp + "/" + std::to_string(c));
    }
  }
  return m;
}

Ket ket_spec(const json& j, const std::string& path) {
  try {
    if (j.is_string()) {
      const auto name = j.get<std::string>();
      if (name == "bell_psi_plus") return standard::bell_psi_plus();
      if (name == "bell_psi_minus") return standard::bell_psi_minus();
      if (name == "bell_phi_plus") return standard::bell_phi_plus();
      if (name == "bell_phi_minus") return standard::bell_phi_minus();
      return standard::product_ket(name);
    }
    if (j.is_object() && j.contains("pauli_n")) {
      const auto a = as_reals(j["pauli_n"], path + "/pauli_n");
      const int sign = j.contains("sign") ? static_cast<int>(as_real(j["sign"], path + "/sign")) : 1;
      if (a.size() != 2) schema_error(path + "/pauli_n", "expected [theta, phi]");
      return standard::pauli_n_eigenket(a[0], a[1], sign);
    }
    if (j.is_array()) {
      CVector v(static_cast<Eigen::Index>(j.size()));
      for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = as_complex(j[i], path + "/" + std::to_string(i));
      }
      return Ket::normalized(std::move(v));
    }
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
  schema_error(path, "expected a ket: label string, amplitude array or {\"pauli_n\": [theta, phi]}");
}

CMatrix matrix_spec(const json& j, const std::string& path, std::size_t dim) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "identity") return standard::identity(dim);
    if (dim == 2) {
      if (name == "pauli_x" || name == "sigma_x") return standard::pauli_x();
      if (name == "pauli_y" || name == "sigma_y") return standard::pauli_y();
      if (name == "pauli_z" || name == "sigma_z") return standard::pauli_z();
      if (name == "hadamard") return standard::hadamard();
      if (name == "charge") return standard::charge();
    }
    schema_error(path, "unknown operator name '" + name + "' for dimension " + std::to_string(dim));
  }
  if (j.is_object()) {
    if (j.contains("pauli_n")) {
      const auto a = as_reals(j["pauli_n"], path + "/pauli_n");
      if (a.size() != 2) schema_error(path + "/pauli_n", "expected [theta, phi]");
      return standard::pauli_n(a[0], a[1]);
    }
    if (j.contains("projector")) return ket_spec(j["projector"], path + "/projector").projector();
    if (j.contains("phase")) {
      CMatrix m = standard::identity(dim);
      m(static_cast<Eigen::Index>(dim) - 1, static_cast<Eigen::Index>(dim) - 1) =
          std::polar(1.0, as_real(j["phase"], path + "/phase"));
      return m;
    }
    schema_error(path, "unknown operator constructor");
  }
  return explicit_matrix(j, path);
}

std::vector<CMatrix> projective_basis(const json& j, const std::string& path, std::size_t dim,
                                      std::vector<std::string>& default_labels) {
  std::vector<Ket> kets;
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "computational") {
      for (std::size_t i = 0; i < dim; ++i) {
        CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
        v(static_cast<Eigen::Index>(i)) = 1.0;
        kets.push_back(Ket::make(std::move(v)));
        default_labels.push_back(std::to_string(i));
      }
    } else if (dim == 2 && (name == "z" || name == "x" || name == "y")) {
      const double theta = name == "z" ? 0.0 : std::numbers::pi / 2.0;
      const double phi = name == "y" ? std::numbers::pi / 2.0 : 0.0;
      kets = {standard::pauli_n_eigenket(theta, phi, +1), standard::pauli_n_eigenket(theta, phi, -1)};
      if (name == "z") kets = {standard::ket0(), standard::ket1()};
      if (name == "x") kets = {standard::ket_plus(), standard::ket_minus()};
      default_labels = {"+1", "-1"};
    } else {
      schema_error(path, "unknown basis '" + name + "' for dimension " + std::to_string(dim));
    }
  } else if (j.is_object() && j.contains("n")) {
    const auto a = as_reals(j["n"], path + "/n");
    if (a.size() != 2 || dim != 2) schema_error(path + "/n", "expected [theta, phi] on a qubit");
    kets = {standard::pauli_n_eigenket(a[0], a[1], +1), standard::pauli_n_eigenket(a[0], a[1], -1)};
    default_labels = {"+1", "-1"};
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      kets.push_back(ket_spec(j[i], path + "/" + std::to_string(i)));
      default_labels.push_back(std::to_string(i));
    }
  } else {
    schema_error(path, "expected a basis name, {\"n\": [theta, phi]} or a list of kets");
  }
  std::vector<CMatrix> out;
  for (const auto& k : kets) out.push_back(k.projector());
  return out;
}

spacetime::Worldline worldline_from(const json& j, const std::string& path) {
  reject_unknown_keys(j, {"anchor", "segments", "final_v"}, path);
  std::vector<double> anchor = as_reals(member(j, "anchor", path), path + "/anchor");
  spacetime::Event ev;
  try {
    ev = spacetime::Event(anchor);
  } catch (const Error& e) {
    schema_error(path + "/anchor", e.what());
  }
  std::vector<spacetime::Segment> segs;
  if (j.contains("segments")) {
    const auto& sj = j["segments"];
    if (!sj.is_array()) schema_error(path + "/segments", "expected an array");
    for (std::size_t k = 0; k < sj.size(); ++k) {
      const std::string sp = path + "/segments/" + std::to_string(k);
      reject_unknown_keys(sj[k], {"dtau", "v"}, sp);
      segs.push_back({as_real(member(sj[k], "dtau", sp), sp + "/dtau"), as_reals(member(sj[k], "v", sp), sp + "/v")});
    }
  }
  spacetime::SpatialVector final_v(ev.spatial_dim(), 0.0);
  if (j.contains("final_v")) final_v = as_reals(j["final_v"], path + "/final_v");
  return spacetime::Worldline(std::move(ev), std::move(segs), std::move(final_v));
}

DensityOperator initial_state_from(const json& j, const std::string& path) {
  if (!j.is_object() || j.size() != 1) {
    schema_error(path, "expected exactly one of {\"named\"}, {\"ket\"}, {\"matrix\"}");
  }
  try {
    if (j.contains("named")) {
      if (!j["named"].is_string()) schema_error(path + "/named", "expected a string");
      return DensityOperator::from_ket(ket_spec(j["named"], path + "/named"));
    }
    if (j.contains("ket")) return DensityOperator::from_ket(ket_spec(j["ket"], path + "/ket"));
    if (j.contains("matrix")) return DensityOperator::from_matrix(explicit_matrix(j["matrix"], path + "/matrix"));
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError({{"invalid-initial-state", path, e.what()}});
  }
  schema_error(path, "expected one of {\"named\"}, {\"ket\"}, {\"matrix\"}");
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte);
    std::string msg = e.what();
    // Drop the library's "[json.exception.parse_error.101] " prefix.
    if (auto pos = msg.find("] "); pos != std::string::npos) msg = msg.substr(pos + 2);
    throw ParseError(msg, line, col);
  }
  if (!doc.is_object()) schema_error("/", "top level must be an object");
  reject_unknown_keys(doc, {"spacetime", "subsystems", "initial_state", "interventions", "foliations", "references", "audit", "description"}, "");

  Scenario s;
  const auto& st = member(doc, "spacetime", "");
  reject_unknown_keys(st, {"d"}, "/spacetime");
  s.spatial_dim = as_index(member(st, "d", "/spacetime"), "/spacetime/d");

  const auto& subs = member(doc, "subsystems", "");
  if (!subs.is_array()) schema_error("/subsystems", "expected an array");
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const std::string p = "/subsystems/" + std::to_string(i);
    reject_unknown_keys(subs[i], {"name", "dim", "worldline"}, p);
    Subsystem sub;
    const auto& name = member(subs[i], "name", p);
    if (!name.is_string()) schema_error(p + "/name", "expected a string");
    sub.name = name.get<std::string>();
    sub.dim = subs[i].contains("dim") ? as_index(subs[i]["dim"], p + "/dim") : 2;
    sub.worldline = worldline_from(member(subs[i], "worldline", p), p + "/worldline");
    s.subsystems.push_back(std::move(sub));
  }

  s.initial_state = initial_state_from(member(doc, "initial_state", ""), "/initial_state");

  if (doc.contains("interventions")) {
    const auto& ivs = doc["interventions"];
    if (!ivs.is_array()) schema_error("/interventions", "expected an array");
    for (std::size_t k = 0; k < ivs.size(); ++k) {
      const std::string p = "/interventions/" + std::to_string(k);
      const auto& ij = ivs[k];
      reject_unknown_keys(ij, {"on", "tau", "unitary", "measure"}, p);
      const auto& on = member(ij, "on", p);
      if (!on.is_string()) schema_error(p + "/on", "expected a subsystem name");
      const auto idx = s.index_of(on.get<std::string>());
      if (!idx) schema_error(p + "/on", "unknown subsystem '" + on.get<std::string>() + "'");
      Intervention iv;
      iv.subsystem = *idx;
      iv.tau = as_real(member(ij, "tau", p), p + "/tau");
      const std::size_t dim = s.subsystems[*idx].dim;
      if (ij.contains("unitary") == ij.contains("measure")) {
        schema_error(p, "exactly one of 'unitary' or 'measure' is required");
      }
      if (ij.contains("unitary")) {
        iv.kind = Unitary{matrix_spec(ij["unitary"], p + "/unitary", dim)};
      } else {
        const std::string mp = p + "/measure";
        const auto& mj = ij["measure"];
        reject_unknown_keys(mj, {"kraus", "projective_basis", "outcome", "labels"}, mp);
        Selective sel;
        std::vector<std::string> default_labels;
        if (mj.contains("kraus") == mj.contains("projective_basis")) {
          schema_error(mp, "exactly one of 'kraus' or 'projective_basis' is required");
        }
        if (mj.contains("kraus")) {
          const auto& kj = mj["kraus"];
          if (!kj.is_array()) schema_error(mp + "/kraus", "expected an array");
          for (std::size_t q = 0; q < kj.size(); ++q) {
            sel.kraus.push_back(matrix_spec(kj[q], mp + "/kraus/" + std::to_string(q), dim));
            default_labels.push_back(std::to_string(q));
          }
        } else {
          sel.kraus = projective_basis(mj["projective_basis"], mp + "/projective_basis", dim, default_labels);
        }
        if (mj.contains("labels")) {
          const auto& lj = mj["labels"];
          if (!lj.is_array()) schema_error(mp + "/labels", "expected an array of strings");
          for (std::size_t q = 0; q < lj.size(); ++q) {
            if (!lj[q].is_string()) schema_error(mp + "/labels/" + std::to_string(q), "expected a string");
            sel.labels.push_back(lj[q].get<std::string>());
          }
        } else {
          sel.labels = default_labels;
        }
        const auto& oj = member(mj, "outcome", mp);
        if (oj.is_string()) {
          const auto it = std::find(sel.labels.begin(), sel.labels.end(), oj.get<std::string>());
          if (it == sel.labels.end()) schema_error(mp + "/outcome", "no outcome labelled '" + oj.get<std::string>() + "'");
          sel.chosen = static_cast<std::size_t>(it - sel.labels.begin());
        } else {
          sel.chosen = as_index(oj, mp + "/outcome");
        }
        iv.kind = std::move(sel);
      }
      s.interventions.push_back(std::move(iv));
    }
  }

  if (doc.contains("foliations")) {
    const auto& fj = doc["foliations"];
    if (!fj.is_array()) schema_error("/foliations", "expected an array");
    for (std::size_t k = 0; k < fj.size(); ++k) {
      const std::string p = "/foliations/" + std::to_string(k);
      reject_unknown_keys(fj[k], {"name", "v"}, p);
      const auto& name = member(fj[k], "name", p);
      if (!name.is_string()) schema_error(p + "/name", "expected a string");
      try {
        s.foliations.push_back({name.get<std::string>(), spacetime::Foliation(as_reals(member(fj[k], "v", p), p + "/v"))});
      } catch (const ValidationError&) {
        throw;
      } catch (const Error& e) {
        schema_error(p + "/v", e.what());
      }
    }
  }

  if (doc.contains("references")) {
    const auto& rj = doc["references"];
    if (!rj.is_object()) schema_error("/references", "expected an object of named kets");
    for (auto it = rj.begin(); it != rj.end(); ++it) {
      s.references.push_back({it.key(), ket_spec(it.value(), "/references/" + it.key())});
    }
  }

  if (doc.contains("audit")) {
    const auto& aj = doc["audit"];
    reject_unknown_keys(aj, {"observables", "targets", "taus"}, "/audit");
    AuditDecl decl;
    if (aj.contains("observables")) {
      const auto& oj = aj["observables"];
      if (!oj.is_array() || oj.size() != s.n()) schema_error("/audit/observables", "expected one observable per subsystem");
      for (std::size_t i = 0; i < oj.size(); ++i) {
        decl.observables.push_back(matrix_spec(oj[i], "/audit/observables/" + std::to_string(i), s.subsystems[i].dim));
      }
    }
    if (aj.contains("targets")) decl.targets = as_reals(aj["targets"], "/audit/targets");
    if (aj.contains("taus")) decl.taus = as_reals(aj["taus"], "/audit/taus");
    s.audit = std::move(decl);
  }

  if (auto diags = validate(s); !diags.empty()) throw ValidationError(std::move(diags));
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize(const Scenario& s) {
  json doc;
  doc["spacetime"] = {{"d", s.spatial_dim}};
  json subs = json::array();
  for (const auto& sub : s.subsystems) {
    const auto& w = sub.worldline;
    json segs = json::array();
    for (const auto& seg : w.segments()) segs.push_back({{"dtau", seg.dtau}, {"v", seg.velocity}});
    subs.push_back({{"name", sub.name},
                    {"dim", sub.dim},
                    {"worldline", {{"anchor", w.anchor().coords()}, {"segments", segs}, {"final_v", w.final_velocity()}}}});
  }
  doc["subsystems"] = std::move(subs);
  doc["initial_state"] = {{"matrix", matrix_json(s.initial_state.matrix())}};

  json ivs = json::array();
  for (const auto& iv : s.interventions) {
    json ij = {{"on", s.subsystems.at(iv.subsystem).name}, {"tau", iv.tau}};
    if (const auto* u = std::get_if<Unitary>(&iv.kind)) {
      ij["unitary"] = matrix_json(u->matrix);
    } else {
      const auto& sel = std::get<Selective>(iv.kind);
      json kraus = json::array();
      for (const auto& k : sel.kraus) kraus.push_back(matrix_json(k));
      ij["measure"] = {{"kraus", std::move(kraus)}, {"outcome", sel.chosen}, {"labels", sel.labels}};
    }
    ivs.push_back(std::move(ij));
  }
  doc["interventions"] = std::move(ivs);

  if (!s.foliations.empty()) {
    json fj = json::array();
    for (const auto& f : s.foliations) fj.push_back({{"name", f.name}, {"v", f.foliation.frame_velocity()}});
    doc["foliations"] = std::move(fj);
  }
  if (!s.references.empty()) {
    json rj = json::object();
    for (const auto& r : s.references) {
      json amps = json::array();
      for (Eigen::Index i = 0; i < r.ket.amplitudes().size(); ++i) amps.push_back(complex_json(r.ket.amplitudes()(i)));
      rj[r.name] = std::move(amps);
    }
    doc["references"] = std::move(rj);
  }
  if (s.audit) {
    json aj = json::object();
    if (!s.audit->observables.empty()) {
      json oj = json::array();
      for (const auto& o : s.audit->observables) oj.push_back(matrix_json(o));
      aj["observables"] = std::move(oj);
    }
    if (s.audit->targets) aj["targets"] = *s.audit->targets;
    if (s.audit->taus) aj["taus"] = *s.audit->taus;
    doc["audit"] = std::move(aj);
  }
  return doc.dump(2);
}

CMatrix parse_operator(std::string_view text, std::size_t dim) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) j = std::string(text);
  try {
    return matrix_spec(j, "", dim);
  } catch (const ValidationError& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("operator: ") + e.what());
  }
}

}  // namespace polystate::scenario
