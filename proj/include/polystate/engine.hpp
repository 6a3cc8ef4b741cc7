#pragma once

// Polystate evaluation: one density-operator sector per nonempty subset of
// subsystems, each conditioned on the interventions inside the union of the
// subset members' causal pasts.

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "polystate/linalg.hpp"
#include "polystate/scenario.hpp"
#include "polystate/spacetime.hpp"

namespace polystate::engine {

using linalg::CMatrix;
using linalg::DensityOperator;
using linalg::ObservableOp;
using scenario::Scenario;

// Sorted, nonempty, duplicate-free subsystem indices.
using Subset = std::vector<std::size_t>;
// One proper time per subsystem.
using Taus = std::vector<double>;

inline constexpr std::size_t kDefaultMaxSubsystems = 10;

struct Polystate {
  std::size_t n = 0;
  std::map<Subset, DensityOperator> sectors;
  Taus eval_taus;

  const DensityOperator& at(const Subset& subset) const;
};

// All 2^n - 1 nonempty subsets, ordered by size then lexicographically.
std::vector<Subset> all_subsets(std::size_t n);

class Engine {
 public:
  explicit Engine(Scenario s, std::size_t max_subsystems = kDefaultMaxSubsystems);
  ~Engine();
  Engine(Engine&&) noexcept;
  Engine& operator=(Engine&&) noexcept;

  const Scenario& scenario() const { return s_; }

  // Union of the causal pasts of x_i(tau_i), i in subset.
  spacetime::Region past_union(const Taus& taus, const Subset& subset) const;
  std::vector<std::size_t> selected_for(const Taus& taus, const Subset& subset) const;

  // normalize(Tr_{subset^c} Psi_{past union}(initial state)). Cached by
  // (subset, selected interventions). Throws ImpossibleOutcome naming the subset.
  DensityOperator sector(const Taus& taus, const Subset& subset) const;
  Polystate polystate_at(const Taus& taus) const;

  // Born weight of the per-subsystem projectors in the full joint sector.
  double prob_joint_outcome(const Taus& taus, std::span<const CMatrix> projectors) const;
  double marginal_prob(const Taus& taus, std::size_t i, const CMatrix& projector) const;
  // Local projector lifted into the full joint sector evaluated at
  // conditioning_taus, whose past union decides which outcomes condition it.
  double conditional_prob(const Taus& conditioning_taus, std::size_t i, const CMatrix& projector) const;

  DensityOperator observer_state(const spacetime::Event& x) const;
  DensityOperator recollection(const spacetime::Worldline& z, double tau) const;
  DensityOperator foliation_state(const spacetime::Foliation& f, double t) const;

  std::size_t cache_size() const;

 private:
  void check_taus(const Taus& taus) const;
  Subset full_subset() const;

  Scenario s_;
  struct Cache;
  std::unique_ptr<Cache> cache_;
};

double expect_individual(const Polystate& p, std::size_t i, const ObservableOp& obs);
double expect_joint(const Polystate& p, const Subset& subset, const ObservableOp& obs);

}  // namespace polystate::engine
