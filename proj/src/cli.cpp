#include "polystate/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "polystate/audit.hpp"
#include "polystate/engine.hpp"
#include "polystate/ensemble.hpp"
#include "polystate/errors.hpp"
#include "polystate/scenario.hpp"
#include "polystate/spacetime.hpp"
#include "polystate/standard.hpp"

namespace polystate::cli {

namespace {

using json = nlohmann::ordered_json;
using engine::Subset;
using engine::Taus;
using linalg::CMatrix;
using scenario::Scenario;

// Raised for bad flags or values; maps to exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json envelope(const char* command) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  return j;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double parse_real(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (text.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
    throw UsageError("invalid number '" + text + "' for " + what);
  }
  return v;
}

// "A=1.0,B=0.5"; every subsystem must appear once.
Taus parse_taus(const Scenario& s, const std::string& spec) {
  Taus taus(s.n(), std::numeric_limits<double>::quiet_NaN());
  for (const auto& item : split(spec, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--tau expects name=value pairs, got '" + item + "'");
    const auto name = item.substr(0, eq);
    const auto idx = s.index_of(name);
    if (!idx) throw UsageError("--tau: unknown subsystem '" + name + "'");
    if (!std::isnan(taus[*idx])) throw UsageError("--tau: subsystem '" + name + "' given twice");
    taus[*idx] = parse_real(item.substr(eq + 1), "--tau " + name);
  }
  for (std::size_t i = 0; i < s.n(); ++i) {
    if (std::isnan(taus[i])) throw UsageError("--tau: missing proper time for '" + s.subsystems[i].name + "'");
  }
  return taus;
}

Taus taus_or_default(const Scenario& s, const std::string& spec) {
  if (!spec.empty()) return parse_taus(s, spec);
  if (s.audit && s.audit->taus) {
    if (s.audit->taus->size() != s.n()) throw UsageError("scenario audit taus need one entry per subsystem");
    return *s.audit->taus;
  }
  throw UsageError("--tau is required (the scenario declares no audit taus)");
}

// "start:stop:count", count >= 1 and start <= stop.
std::vector<double> parse_range(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw UsageError("--t-range expects start:stop:count");
  const double a = parse_real(parts[0], "range start");
  const double b = parse_real(parts[1], "range stop");
  long long count = 0;
  const auto res = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), count);
  if (res.ec != std::errc() || res.ptr != parts[2].data() + parts[2].size()) {
    throw UsageError("invalid range count '" + parts[2] + "'");
  }
  if (count < 1 || b < a || (count > 1 && a == b)) throw UsageError("empty range '" + spec + "'");
  std::vector<double> out;
  if (count == 1) return {a};
  for (long long k = 0; k < count; ++k) out.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1));
  return out;
}

// A scenario foliation name, or "v=0.6" / "v=0.6,0" for a frame velocity.
spacetime::Foliation parse_foliation(const Scenario& s, const std::string& spec) {
  if (spec.rfind("v=", 0) == 0) {
    std::vector<double> v;
    for (const auto& part : split(spec.substr(2), ',')) v.push_back(parse_real(part, "--foliation"));
    if (v.size() != s.spatial_dim) {
      throw UsageError("--foliation velocity needs " + std::to_string(s.spatial_dim) + " components");
    }
    return spacetime::Foliation(std::move(v));
  }
  for (const auto& f : s.foliations) {
    if (f.name == spec) return f.foliation;
  }
  throw UsageError("unknown foliation '" + spec + "'");
}

audit::Prescription parse_source(const std::string& name, const spacetime::Foliation& f) {
  if (name == "polystate") return audit::Prescription::polystate();
  if (name == "future") return audit::Prescription::future_lightcone();
  if (name == "past") return audit::Prescription::past_lightcone();
  if (name == "foliation") return audit::Prescription::along(f);
  throw UsageError("--source must be polystate, future, past or foliation");
}

bool all_qubits(const Scenario& s) {
  return std::all_of(s.subsystems.begin(), s.subsystems.end(), [](const auto& sub) { return sub.dim == 2; });
}

json taus_json(const Scenario& s, const Taus& taus) {
  json j = json::object();
  for (std::size_t i = 0; i < s.n(); ++i) j[s.subsystems[i].name] = taus[i];
  return j;
}

// Observable for a sector: either the full sector dimension, or a local
// operator repeated on every member of the subset.
CMatrix observable_for(const Scenario& s, const Subset& subset, const std::string& spec) {
  std::string text = spec;
  if (std::ifstream in(spec); in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  const auto dims = s.dims();
  std::size_t sector_dim = 1;
  for (auto i : subset) sector_dim *= dims[i];
  try {
    return scenario::parse_operator(text, sector_dim);
  } catch (const Error&) {
    if (subset.size() == 1) throw;
  }
  std::vector<CMatrix> factors;
  for (auto i : subset) factors.push_back(scenario::parse_operator(text, dims[i]));
  return linalg::kron_all(factors);
}

int cmd_eval(const std::string& path, const std::string& tau_spec, const std::string& sector_spec,
             const std::string& observable, std::ostream& out) {
  const auto s = scenario::load_scenario(path);
  const engine::Engine e(s);
  const auto taus = taus_or_default(s, tau_spec);
  std::vector<Subset> subsets;
  if (sector_spec.empty()) {
    subsets = engine::all_subsets(s.n());
  } else {
    try {
      subsets.push_back(scenario::parse_subset(s, sector_spec));
    } catch (const Error& err) {
      throw UsageError(std::string("--sector: ") + err.what());
    }
  }

  json j = envelope("eval");
  j["taus"] = taus_json(s, taus);
  json rows = json::array();
  for (const auto& subset : subsets) {
    const auto rho = e.sector(taus, subset);
    json row;
    row["subset"] = scenario::subset_name(s, subset);
    row["matrix"] = matrix_json(rho.matrix());
    if (!observable.empty()) {
      row["observable"] = observable;
      row["expectation"] = linalg::expect(rho, observable_for(s, subset, observable));
    }
    rows.push_back(std::move(row));
  }
  j["sectors"] = std::move(rows);
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_sweep(const std::string& path, const std::string& foliation_spec, const std::string& range_spec,
              const std::string& source_name, std::ostream& out) {
  const auto s = scenario::load_scenario(path);
  const engine::Engine e(s);
  const auto f = parse_foliation(s, foliation_spec);
  const auto grid = parse_range(range_spec);
  const auto source = parse_source(source_name, f);
  const bool charges = all_qubits(s);
  const auto joint_dim = linalg::product(s.dims());

  std::vector<const scenario::NamedKet*> refs;
  for (const auto& r : s.references) {
    if (r.ket.dim() == joint_dim) refs.push_back(&r);
  }

  std::ostringstream csv;
  csv << "t";
  for (const auto& sub : s.subsystems) csv << ",tau_" << sub.name;
  for (const auto* r : refs) csv << ",fid_" << r->name;
  if (!refs.empty()) csv << ",best_reference";
  if (charges) csv << ",q_joint,q_sum";
  csv << '\n';

  const CMatrix q = standard::charge();
  const CMatrix total_q = standard::total_charge(s.n());
  for (double t : grid) {
    Taus taus;
    for (const auto& sub : s.subsystems) taus.push_back(spacetime::proper_time_at_leaf(sub.worldline, f, t));
    const auto d = audit::describe(source, e, taus);
    csv << fmt(t);
    for (double tau : taus) csv << ',' << fmt(tau);
    double best = -1.0;
    std::string best_name = "none";
    for (const auto* r : refs) {
      const double fid = linalg::fidelity(d.joint, r->ket);
      csv << ',' << fmt(fid);
      if (fid > best) {
        best = fid;
        best_name = r->name;
      }
    }
    if (!refs.empty()) csv << ',' << (best >= 1.0 - 1e-9 ? best_name : std::string("none"));
    if (charges) {
      double q_sum = 0.0;
      for (const auto& local : d.locals) q_sum += linalg::expect(local, q);
      csv << ',' << fmt(linalg::expect(d.joint, total_q)) << ',' << fmt(q_sum);
    }
    csv << '\n';
  }
  out << csv.str();
  return kExitOk;
}

// Frame in which the two evaluation events are simultaneous, when they are
// spacelike separated; the rest frame otherwise.
spacetime::Foliation frame_through(const Scenario& s, const Taus& taus) {
  if (s.n() == 2) {
    const auto x = s.subsystems[0].worldline.position(taus[0]);
    const auto y = s.subsystems[1].worldline.position(taus[1]);
    if (spacetime::interval(x, y) < 0.0) {
      std::vector<double> dx(s.spatial_dim);
      double dx2 = 0.0;
      for (std::size_t i = 0; i < dx.size(); ++i) {
        dx[i] = x[i + 1] - y[i + 1];
        dx2 += dx[i] * dx[i];
      }
      for (auto& c : dx) c *= (x.t() - y.t()) / dx2;
      return spacetime::Foliation(std::move(dx));
    }
  }
  return spacetime::Foliation::rest(s.spatial_dim);
}

json ledger_json(const Scenario& s, const audit::ChargeLedger& ledger) {
  json j;
  j["source"] = ledger.source.name();
  j["initial_charge"] = ledger.initial_charge;
  json rows = json::array();
  for (const auto& r : ledger.rows) {
    rows.push_back({{"t", r.t}, {"taus", taus_json(s, r.taus)}, {"q_joint", r.q_joint}, {"q_sum", r.q_sum}});
  }
  j["rows"] = std::move(rows);
  return j;
}

int cmd_audit(const std::string& path, const std::string& tau_spec, const std::string& foliation_spec,
              const std::string& grid_spec, std::ostream& out, std::ostream& err) {
  const auto s = scenario::load_scenario(path);
  const engine::Engine e(s);
  const auto taus = taus_or_default(s, tau_spec);
  const auto f = foliation_spec.empty() ? frame_through(s, taus) : parse_foliation(s, foliation_spec);
  std::vector<double> grid;
  if (grid_spec.empty()) {
    double center = 0.0;
    for (std::size_t i = 0; i < s.n(); ++i) center += f.leaf_time(s.subsystems[i].worldline.position(taus[i]));
    center /= static_cast<double>(s.n());
    for (int k = -4; k <= 4; ++k) grid.push_back(center + 0.5 * k);
  } else {
    grid = parse_range(grid_spec);
  }

  const auto report = audit::criteria_report(e, taus);
  json j = envelope("audit");
  j["taus"] = taus_json(s, taus);
  j["targets"] = report.targets;
  j["targets_source"] = report.targets_declared ? "scenario" : "branch-oracle";
  bool bipartite_error = false;
  json rows = json::array();
  for (const auto& r : report.rows) {
    json row;
    row["prescription"] = r.prescription.name();
    if (r.error) {
      row["error"] = *r.error;
      bipartite_error = true;
    } else {
      row["values"] = r.values;
      row["residuals"] = r.residuals;
      row["max_residual"] = r.max_residual;
      row["predictive"] = r.predictive;
      row["ignorance_residual"] = r.ignorance_residual;
      row["respects_ignorance"] = r.respects_ignorance;
    }
    row["all_pass"] = r.all_pass();
    rows.push_back(std::move(row));
  }
  j["criteria"] = std::move(rows);

  json ledger_frame;
  ledger_frame["velocity"] = f.frame_velocity();
  j["ledger_foliation"] = std::move(ledger_frame);
  json ledgers = json::array();
  if (all_qubits(s)) {
    for (const auto& p : audit::standard_prescriptions(s.spatial_dim)) {
      try {
        ledgers.push_back(ledger_json(s, audit::charge_ledger(e, f, grid, p)));
      } catch (const Error& ex) {
        if (ex.kind() != ErrorKind::BipartiteOnly) throw;
        ledgers.push_back({{"source", p.name()}, {"error", to_string(ex.kind())}});
      }
    }
  }
  j["charge_ledgers"] = std::move(ledgers);
  out << j.dump(2) << '\n';
  if (bipartite_error) {
    err << "bipartite-only: single-operator prescriptions need exactly two subsystems; polystate rows emitted\n";
    return kExitInput;
  }
  return kExitOk;
}

int cmd_ensemble(const std::string& path, std::size_t n, std::uint64_t seed, const std::string& tau_spec,
                 const std::string& csv_path, std::ostream& out) {
  if (n < 1) throw UsageError("--n must be at least 1");
  const auto s = scenario::load_scenario(path);
  const engine::Engine e(s);
  const auto taus = taus_or_default(s, tau_spec);
  const auto log = ensemble::sample_runs(s, n, seed);
  const auto cmp = ensemble::compare_to_polystate(log, e, taus);
  const auto branches = ensemble::enumerate_branches(s);

  json j = envelope("ensemble");
  j["n"] = n;
  j["seed"] = seed;
  j["taus"] = taus_json(s, taus);
  json sel = json::array();
  for (auto id : log.selective) {
    sel.push_back({{"intervention", id}, {"subsystem", s.subsystems[s.interventions[id].subsystem].name},
                   {"tau", s.interventions[id].tau}});
  }
  j["selective"] = std::move(sel);

  std::map<std::vector<std::size_t>, std::size_t> freq;
  for (const auto& row : log.outcomes) ++freq[row];
  json table = json::array();
  for (const auto& br : branches) {
    const auto it = freq.find(br.outcomes);
    const std::size_t count = it == freq.end() ? 0 : it->second;
    table.push_back({{"outcomes", br.outcomes},
                     {"probability", br.probability},
                     {"count", count},
                     {"frequency", static_cast<double>(count) / static_cast<double>(n)}});
  }
  j["branches"] = std::move(table);

  json sectors = json::array();
  for (const auto& r : cmp.sectors) {
    sectors.push_back({{"subset", scenario::subset_name(s, r.subset)},
                       {"retained", r.retained},
                       {"empirical_distance", r.empirical_distance},
                       {"oracle_distance", r.oracle_distance}});
  }
  j["sectors"] = std::move(sectors);
  j["max_empirical_distance"] = cmp.max_empirical_distance;
  j["max_oracle_distance"] = cmp.max_oracle_distance;

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw UsageError("cannot write '" + csv_path + "'");
    csv << "run";
    for (auto id : log.selective) csv << ",outcome_" << id;
    csv << '\n';
    for (std::size_t r = 0; r < log.outcomes.size(); ++r) {
      csv << r;
      for (auto o : log.outcomes[r]) csv << ',' << o;
      csv << '\n';
    }
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

json point(const spacetime::Event& x) { return json::array({x.t(), x[1]}); }

int cmd_diagram(const std::string& path, const std::vector<std::string>& leaves, std::ostream& out) {
  const auto s = scenario::load_scenario(path);
  if (s.spatial_dim != 1) throw UsageError("diagram supports d = 1 only");

  double t_lo = 0.0, t_hi = 0.0, x_lo = 0.0, x_hi = 0.0;
  auto extend = [&](const spacetime::Event& x) {
    t_lo = std::min(t_lo, x.t());
    t_hi = std::max(t_hi, x.t());
    x_lo = std::min(x_lo, x[1]);
    x_hi = std::max(x_hi, x[1]);
  };
  for (const auto& sub : s.subsystems) extend(sub.worldline.anchor());
  for (std::size_t k = 0; k < s.interventions.size(); ++k) extend(s.event_of(k));
  const double pad = std::max(2.0, 0.5 * (x_hi - x_lo));
  t_lo -= pad;
  t_hi += pad;
  x_lo -= 1.0;
  x_hi += 1.0;

  const auto rest = spacetime::Foliation::rest(1);
  json j = envelope("diagram");
  j["bounds"] = {{"t", {t_lo, t_hi}}, {"x", {x_lo, x_hi}}};

  json lines = json::array();
  for (const auto& sub : s.subsystems) {
    const auto& w = sub.worldline;
    const double a = spacetime::proper_time_at_leaf(w, rest, t_lo);
    const double b = spacetime::proper_time_at_leaf(w, rest, t_hi);
    std::vector<double> taus{a};
    for (const auto& p : w.pieces()) {
      if (p.tau_end > a && p.tau_end < b) taus.push_back(p.tau_end);
    }
    taus.push_back(b);
    json pts = json::array();
    for (double tau : taus) pts.push_back(point(w.position(tau)));
    lines.push_back({{"name", sub.name}, {"points", std::move(pts)}});
  }
  j["worldlines"] = std::move(lines);

  json events = json::array();
  json cones = json::array();
  json crossings = json::array();
  for (std::size_t k = 0; k < s.interventions.size(); ++k) {
    const auto& iv = s.interventions[k];
    const auto ev = s.event_of(k);
    events.push_back({{"intervention", k},
                      {"subsystem", s.subsystems[iv.subsystem].name},
                      {"tau", iv.tau},
                      {"selective", iv.is_selective()},
                      {"point", point(ev)}});
    const double up = t_hi - ev.t();
    const double down = ev.t() - t_lo;
    cones.push_back({{"intervention", k},
                     {"future", {{ev.t() + up, ev[1] - up}, {ev.t(), ev[1]}, {ev.t() + up, ev[1] + up}}},
                     {"past", {{ev.t() - down, ev[1] - down}, {ev.t(), ev[1]}, {ev.t() - down, ev[1] + down}}}});
    for (std::size_t i = 0; i < s.n(); ++i) {
      if (i == iv.subsystem) continue;
      const auto& w = s.subsystems[i].worldline;
      const auto c = spacetime::lightcone_crossings(w, ev);
      crossings.push_back({{"intervention", k},
                           {"subsystem", s.subsystems[i].name},
                           {"tau_minus", c.tau_minus},
                           {"tau_plus", c.tau_plus},
                           {"point_minus", point(w.position(c.tau_minus))},
                           {"point_plus", point(w.position(c.tau_plus))}});
    }
  }
  j["events"] = std::move(events);
  j["lightcones"] = std::move(cones);
  j["crossings"] = std::move(crossings);

  json leaf_lines = json::array();
  for (const auto& spec : leaves) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw UsageError("--leaves expects name:t1,t2,...");
    const auto name = spec.substr(0, colon);
    const auto f = parse_foliation(s, name);
    const double v = f.frame_velocity()[0];
    const double g = spacetime::lorentz_gamma(f.frame_velocity());
    for (const auto& item : split(spec.substr(colon + 1), ',')) {
      const double t = parse_real(item, "--leaves " + name);
      // gamma (t' - v x') = t  =>  t' = t / gamma + v x'
      leaf_lines.push_back({{"foliation", name},
                            {"t", t},
                            {"points", {{t / g + v * x_lo, x_lo}, {t / g + v * x_hi, x_hi}}}});
    }
  }
  j["leaves"] = std::move(leaf_lines);
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_validate(const std::string& path, std::ostream& out) {
  json j = envelope("validate");
  json diags = json::array();
  try {
    scenario::load_scenario(path);
  } catch (const scenario::ValidationError& e) {
    for (const auto& d : e.diagnostics()) diags.push_back({{"code", d.code}, {"field", d.field}, {"message", d.message}});
  } catch (const ParseError& e) {
    diags.push_back({{"code", "parse-error"}, {"line", e.line()}, {"column", e.column()}, {"message", e.what()}});
  }
  j["valid"] = diags.empty();
  j["diagnostics"] = diags;
  out << j.dump(2) << '\n';
  return diags.empty() ? kExitOk : kExitInput;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polystate simulator for qubits on worldlines in flat spacetime", "polystate"};
  app.require_subcommand(1);

  std::string path, tau, sector, observable, foliation, range, source = "polystate", grid, csv;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> leaves;

  auto* eval = app.add_subcommand("eval", "Print polystate sectors at the given proper times");
  eval->add_option("scenario", path, "Scenario file")->required();
  eval->add_option("--tau", tau, "Proper times, e.g. A=1.0,B=0.5");
  eval->add_option("--sector", sector, "Subset such as AB, A,B or all");
  eval->add_option("--observable", observable, "Operator name, JSON operator or file");

  auto* sweep = app.add_subcommand("sweep", "CSV of states along the leaves of a foliation");
  sweep->add_option("scenario", path, "Scenario file")->required();
  sweep->add_option("--foliation", foliation, "Foliation name or v=<velocity>")->required();
  sweep->add_option("--t-range", range, "start:stop:count")->required();
  sweep->add_option("--source", source, "polystate, future, past or foliation");

  auto* aud = app.add_subcommand("audit", "Criteria report and charge ledgers for each prescription");
  aud->add_option("scenario", path, "Scenario file")->required();
  aud->add_option("--tau", tau, "Evaluation proper times");
  aud->add_option("--foliation", foliation, "Ledger foliation (default: frame through the evaluation events)");
  aud->add_option("--grid", grid, "Ledger leaves start:stop:count");

  auto* ens = app.add_subcommand("ensemble", "Monte Carlo runs compared with the polystate");
  ens->add_option("scenario", path, "Scenario file")->required();
  ens->add_option("--n", n, "Number of runs")->required();
  ens->add_option("--seed", seed, "Master seed");
  ens->add_option("--tau", tau, "Evaluation proper times");
  ens->add_option("--csv", csv, "Write per-run outcomes to this file");

  auto* diag = app.add_subcommand("diagram", "Spacetime diagram coordinates (d = 1)");
  diag->add_option("scenario", path, "Scenario file")->required();
  diag->add_option("--leaves", leaves, "Foliation leaves, e.g. Sigma:1.0,0.5")->expected(1, -1);

  auto* val = app.add_subcommand("validate", "Check a scenario file");
  val->add_option("scenario", path, "Scenario file")->required();

  std::vector<std::string> argv_store{"polystate"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*eval) return cmd_eval(path, tau, sector, observable, out);
    if (*sweep) return cmd_sweep(path, foliation, range, source, out);
    if (*aud) return cmd_audit(path, tau, foliation, grid, out, err);
    if (*ens) return cmd_ensemble(path, n, seed, tau, csv, out);
    if (*diag) return cmd_diagram(path, leaves, out);
    if (*val) return cmd_validate(path, out);
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << '\n';
    return kExitInput;
  } catch (const ImpossibleOutcome& e) {
    err << "impossible-outcome: " << e.what() << '\n';
    return kExitImpossible;
  } catch (const ParseError& e) {
    err << path << ":" << e.line() << ":" << e.column() << ": parse-error: " << e.what() << '\n';
    return kExitInput;
  } catch (const scenario::ValidationError& e) {
    for (const auto& d : e.diagnostics()) err << path << ": " << d.code << " at " << d.field << ": " << d.message << '\n';
    return kExitInput;
  } catch (const Error& e) {
    err << to_string(e.kind()) << ": " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace polystate::cli
