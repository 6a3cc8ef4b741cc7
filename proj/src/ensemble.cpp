#include "polystate/ensemble.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>

#include "polystate/errors.hpp"

namespace polystate::ensemble {

using linalg::CMatrix;

namespace {

std::size_t radix_of(const Scenario& s, std::size_t id) { return s.interventions[id].selective().kraus.size(); }

std::size_t checked_branch_count(const Scenario& s, const std::vector<std::size_t>& selective) {
  std::size_t total = 1;
  for (auto id : selective) {
    const auto r = radix_of(s, id);
    if (r != 0 && total > kMaxBranches / r) {
      throw Error(ErrorKind::BranchExplosion,
                  "enumerate_branches: more than " + std::to_string(kMaxBranches) + " branches");
    }
    total *= r;
  }
  return total;
}

// Applies `order` to the initial state; selective steps take the outcome from
// `outcome_of(id)`.
template <class OutcomeOf>
CMatrix run_chain(const Scenario& s, const std::vector<std::size_t>& order, OutcomeOf outcome_of) {
  const auto dims = s.dims();
  CMatrix rho = s.initial_state.matrix();
  for (auto id : order) {
    const auto& iv = s.interventions[id];
    const CMatrix& op = iv.is_selective() ? iv.selective().kraus.at(outcome_of(id)) : iv.applied_operator();
    rho = linalg::conj_apply(linalg::lift_local(op, iv.subsystem, dims), rho);
  }
  return rho;
}

std::vector<std::size_t> all_ids(const Scenario& s) {
  std::vector<std::size_t> ids(s.interventions.size());
  for (std::size_t k = 0; k < ids.size(); ++k) ids[k] = k;
  return ids;
}

}  // namespace

std::vector<std::size_t> chain_order(const Scenario& s, std::vector<std::size_t> ids) {
  std::vector<double> t(s.interventions.size());
  for (auto id : ids) t.at(id) = s.event_of(id).t();
  std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
    const auto& ia = s.interventions[a];
    const auto& ib = s.interventions[b];
    if (ia.subsystem == ib.subsystem) return ia.tau < ib.tau;
    if (t[a] != t[b]) return t[a] < t[b];
    return ia.subsystem < ib.subsystem;
  });
  return ids;
}

std::vector<std::size_t> selective_in(const Scenario& s, const std::vector<std::size_t>& ids) {
  std::vector<std::size_t> out;
  for (auto id : chain_order(s, ids)) {
    if (s.interventions.at(id).is_selective()) out.push_back(id);
  }
  return out;
}

std::vector<Branch> enumerate_branches(const Scenario& s) { return enumerate_branches(s, all_ids(s)); }

std::vector<Branch> enumerate_branches(const Scenario& s, const std::vector<std::size_t>& scope) {
  const auto order = chain_order(s, scope);
  const auto selective = selective_in(s, scope);
  const auto count = checked_branch_count(s, selective);

  std::map<std::size_t, std::size_t> column;
  for (std::size_t c = 0; c < selective.size(); ++c) column[selective[c]] = c;

  std::vector<Branch> out;
  out.reserve(count);
  std::vector<std::size_t> outcomes(selective.size(), 0);
  for (std::size_t b = 0; b < count; ++b) {
    // Mixed radix, first selective intervention most significant.
    std::size_t rest = b;
    for (std::size_t c = selective.size(); c-- > 0;) {
      const auto r = radix_of(s, selective[c]);
      outcomes[c] = rest % r;
      rest /= r;
    }
    const CMatrix rho = run_chain(s, order, [&](std::size_t id) { return outcomes[column.at(id)]; });
    Branch br;
    br.outcomes = outcomes;
    br.probability = std::max(0.0, rho.trace().real());
    if (br.probability >= linalg::kImpossibleTraceTol) br.final_state = linalg::normalize(rho);
    out.push_back(std::move(br));
  }
  return out;
}

std::vector<std::size_t> sector_scope(const engine::Engine& e, const Taus& taus, const Subset& subset) {
  const auto& s = e.scenario();
  const auto inside = e.selected_for(taus, subset);
  std::set<std::size_t> scope(inside.begin(), inside.end());
  for (std::size_t k = 0; k < s.interventions.size(); ++k) {
    if (!std::binary_search(subset.begin(), subset.end(), s.interventions[k].subsystem)) scope.insert(k);
  }
  return {scope.begin(), scope.end()};
}

DensityOperator conditional_state(const engine::Engine& e, const Taus& taus, const Subset& subset) {
  const auto& s = e.scenario();
  const auto dims = s.dims();
  const auto scope = sector_scope(e, taus, subset);
  const auto selective = selective_in(s, scope);
  const auto inside = e.selected_for(taus, subset);

  std::vector<std::pair<std::size_t, std::size_t>> conditions;  // (column, recorded outcome)
  for (std::size_t c = 0; c < selective.size(); ++c) {
    if (std::binary_search(inside.begin(), inside.end(), selective[c])) {
      conditions.emplace_back(c, s.interventions[selective[c]].selective().chosen);
    }
  }

  const auto kept = static_cast<Eigen::Index>(linalg::product(
      [&] {
        std::vector<std::size_t> d;
        for (auto i : subset) d.push_back(dims.at(i));
        return d;
      }()));
  CMatrix acc = CMatrix::Zero(kept, kept);
  double total = 0.0;
  for (const auto& br : enumerate_branches(s, scope)) {
    if (!br.final_state) continue;
    const bool match = std::all_of(conditions.begin(), conditions.end(),
                                   [&](const auto& c) { return br.outcomes[c.first] == c.second; });
    if (!match) continue;
    acc += br.probability * linalg::ptrace(br.final_state->matrix(), dims, subset);
    total += br.probability;
  }
  if (total < linalg::kImpossibleTraceTol) {
    throw Error(ErrorKind::EmptyEnsemble, "conditional_state: recorded outcomes have zero probability for sector " +
                                              scenario::subset_name(s, subset));
  }
  return linalg::normalize(acc);
}

RunLog sample_runs(const Scenario& s, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "sample_runs: N must be at least 1");
  RunLog log;
  log.seed = seed;
  log.n = n;
  log.selective = selective_in(s, all_ids(s));
  const std::size_t k = log.selective.size();
  log.outcomes.assign(n, std::vector<std::size_t>(k, 0));
  if (k == 0) return log;

  std::vector<std::size_t> radix(k);
  for (std::size_t c = 0; c < k; ++c) radix[c] = radix_of(s, log.selective[c]);

  // weight[d][prefix]: probability of the outcome prefix of length d + 1.
  std::vector<std::vector<double>> weight(k);
  {
    const auto branches = enumerate_branches(s);
    weight[k - 1].reserve(branches.size());
    for (const auto& br : branches) weight[k - 1].push_back(br.probability);
  }
  for (std::size_t d = k - 1; d-- > 0;) {
    weight[d].assign(weight[d + 1].size() / radix[d + 1], 0.0);
    for (std::size_t p = 0; p < weight[d + 1].size(); ++p) weight[d][p / radix[d + 1]] += weight[d + 1][p];
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t r = 0; r < n; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(static_cast<std::uint64_t>(r) >> 32)};
    std::mt19937_64 gen(seq);
    std::size_t prefix = 0;
    for (std::size_t d = 0; d < k; ++d) {
      const std::size_t first = prefix * radix[d];
      double total = 0.0;
      for (std::size_t j = 0; j < radix[d]; ++j) total += weight[d][first + j];
      double u = unit(gen) * total;
      std::size_t pick = radix[d];
      for (std::size_t j = 0; j < radix[d]; ++j) {
        const double w = weight[d][first + j];
        if (w <= 0.0) continue;
        pick = j;
        if (u < w) break;
        u -= w;
      }
      log.outcomes[r][d] = pick;
      prefix = first + pick;
    }
  }
  return log;
}

EmpiricalSector empirical_sector(const RunLog& log, const engine::Engine& e, const Subset& subset,
                                 const Taus& taus) {
  const auto& s = e.scenario();
  const auto dims = s.dims();
  const auto scope = sector_scope(e, taus, subset);
  const auto order = chain_order(s, scope);
  const auto inside = e.selected_for(taus, subset);

  std::map<std::size_t, std::size_t> column;
  for (std::size_t c = 0; c < log.selective.size(); ++c) column[log.selective[c]] = c;

  std::vector<std::pair<std::size_t, std::size_t>> conditions;
  std::vector<std::size_t> scope_columns;
  std::map<std::size_t, std::size_t> key_pos;  // intervention id -> position in the outcome key
  for (auto id : order) {
    if (!s.interventions.at(id).is_selective()) continue;
    const auto it = column.find(id);
    if (it == column.end()) throw Error(ErrorKind::InvalidArgument, "empirical_sector: log does not match scenario");
    key_pos[id] = scope_columns.size();
    scope_columns.push_back(it->second);
    if (std::binary_search(inside.begin(), inside.end(), id)) {
      conditions.emplace_back(it->second, s.interventions[id].selective().chosen);
    }
  }

  std::map<std::vector<std::size_t>, std::size_t> counts;
  std::size_t retained = 0;
  for (const auto& row : log.outcomes) {
    const bool match = std::all_of(conditions.begin(), conditions.end(),
                                   [&](const auto& c) { return row.at(c.first) == c.second; });
    if (!match) continue;
    std::vector<std::size_t> key;
    key.reserve(scope_columns.size());
    for (auto c : scope_columns) key.push_back(row[c]);
    ++counts[key];
    ++retained;
  }
  if (retained == 0) {
    throw Error(ErrorKind::EmptyEnsemble,
                "empirical_sector: no run retained for sector " + scenario::subset_name(s, subset));
  }

  CMatrix acc;
  for (const auto& [key, count] : counts) {
    const CMatrix rho = run_chain(s, order, [&](std::size_t id) { return key[key_pos.at(id)]; });
    const CMatrix reduced = linalg::normalize(linalg::ptrace(rho, dims, subset)).matrix();
    const double w = static_cast<double>(count) / static_cast<double>(retained);
    if (acc.size() == 0) acc = CMatrix::Zero(reduced.rows(), reduced.cols());
    acc += w * reduced;
  }
  return {linalg::normalize(acc), retained};
}

Comparison compare_to_polystate(const RunLog& log, const engine::Engine& e, const Taus& taus) {
  Comparison out;
  for (const auto& subset : engine::all_subsets(e.scenario().n())) {
    SectorComparison row;
    row.subset = subset;
    const auto exact = e.sector(taus, subset);
    row.oracle_distance = linalg::trace_distance(conditional_state(e, taus, subset), exact);
    try {
      const auto emp = empirical_sector(log, e, subset, taus);
      row.retained = emp.retained;
      row.empirical_distance = linalg::trace_distance(emp.state, exact);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::EmptyEnsemble) throw;
      // Nothing retained: report the maximal distance rather than abort.
      row.retained = 0;
      row.empirical_distance = 1.0;
    }
    out.max_empirical_distance = std::max(out.max_empirical_distance, row.empirical_distance);
    out.max_oracle_distance = std::max(out.max_oracle_distance, row.oracle_distance);
    out.sectors.push_back(std::move(row));
  }
  return out;
}

}  // namespace polystate::ensemble
