#pragma once

// Outcome statistics behind the polystate: exact enumeration of Lüders
// branches, seeded sampling of runs, and reconstruction of the sub-ensemble a
// subset of parties retains after discarding runs whose recorded outcomes
// they can see.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "polystate/engine.hpp"
#include "polystate/linalg.hpp"
#include "polystate/scenario.hpp"

namespace polystate::ensemble {

using engine::Subset;
using engine::Taus;
using linalg::DensityOperator;
using scenario::Scenario;

inline constexpr std::size_t kMaxBranches = 1'000'000;

struct Branch {
  std::vector<std::size_t> outcomes;  // one per selective intervention in chain order
  double probability = 0.0;
  std::optional<DensityOperator> final_state;  // absent when probability is zero
};

// Chain order for the given interventions: lab time of the event, ties broken
// by subsystem index. Consistent with proper-time order on every worldline.
std::vector<std::size_t> chain_order(const Scenario& s, std::vector<std::size_t> ids);
// Selective interventions among `ids`, in chain order.
std::vector<std::size_t> selective_in(const Scenario& s, const std::vector<std::size_t>& ids);

// Every outcome assignment to the selective interventions. Outcomes are
// enumerated in mixed-radix order with the first selective intervention most
// significant. Throws BranchExplosion beyond kMaxBranches.
std::vector<Branch> enumerate_branches(const Scenario& s);
// Same, restricted to the interventions in `scope`; others are not applied.
std::vector<Branch> enumerate_branches(const Scenario& s, const std::vector<std::size_t>& scope);

// Interventions that matter for sector (subset, taus): those inside the past
// union, plus every intervention on a traced-out subsystem.
std::vector<std::size_t> sector_scope(const engine::Engine& e, const Taus& taus, const Subset& subset);

// Branch-enumeration conditional state: condition on the recorded outcomes
// inside the past union, marginalize the rest, trace out the complement.
// Throws EmptyEnsemble when the condition has probability zero.
DensityOperator conditional_state(const engine::Engine& e, const Taus& taus, const Subset& subset);

struct RunLog {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::vector<std::size_t> selective;                // intervention ids, chain order
  std::vector<std::vector<std::size_t>> outcomes;    // n rows, one entry per selective id
};

// N runs, each sampling outcomes in chain order from the conditional Born
// probabilities. Run r draws from its own generator seeded by (seed, r).
RunLog sample_runs(const Scenario& s, std::size_t n, std::uint64_t seed);

struct EmpiricalSector {
  DensityOperator state;
  std::size_t retained = 0;
};

// Throws EmptyEnsemble when no run matches the recorded outcomes visible to
// the subset.
EmpiricalSector empirical_sector(const RunLog& log, const engine::Engine& e, const Subset& subset,
                                 const Taus& taus);

struct SectorComparison {
  Subset subset;
  std::size_t retained = 0;
  double empirical_distance = 0.0;  // empirical vs engine sector
  double oracle_distance = 0.0;     // branch oracle vs engine sector
};

struct Comparison {
  std::vector<SectorComparison> sectors;
  double max_empirical_distance = 0.0;
  double max_oracle_distance = 0.0;
};

Comparison compare_to_polystate(const RunLog& log, const engine::Engine& e, const Taus& taus);

}  // namespace polystate::ensemble
