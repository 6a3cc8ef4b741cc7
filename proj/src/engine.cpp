#include "polystate/engine.hpp"

#include <algorithm>
#include <mutex>
#include <string>

#include "polystate/errors.hpp"

namespace polystate::engine {

struct Engine::Cache {
  std::mutex mu;
  std::map<std::pair<Subset, std::vector<std::size_t>>, DensityOperator> sectors;
};

const DensityOperator& Polystate::at(const Subset& subset) const {
  auto it = sectors.find(subset);
  if (it == sectors.end()) throw Error(ErrorKind::InvalidArgument, "polystate: no such sector");
  return it->second;
}

std::vector<Subset> all_subsets(std::size_t n) {
  std::vector<Subset> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    Subset s;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) s.push_back(i);
    }
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const Subset& a, const Subset& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

Engine::Engine(Scenario s, std::size_t max_subsystems) : s_(std::move(s)), cache_(std::make_unique<Cache>()) {
  if (s_.n() == 0) throw Error(ErrorKind::InvalidArgument, "engine: scenario has no subsystems");
  if (s_.n() > max_subsystems) {
    throw Error(ErrorKind::InvalidArgument, "engine: " + std::to_string(s_.n()) +
                                                " subsystems exceed the sector enumeration cap of " +
                                                std::to_string(max_subsystems));
  }
  if (auto diags = scenario::validate(s_); !diags.empty()) throw scenario::ValidationError(std::move(diags));
}

Engine::~Engine() = default;
Engine::Engine(Engine&&) noexcept = default;
Engine& Engine::operator=(Engine&&) noexcept = default;

void Engine::check_taus(const Taus& taus) const {
  if (taus.size() != s_.n()) {
    throw Error(ErrorKind::InvalidArgument, "engine: expected " + std::to_string(s_.n()) +
                                                " proper times, got " + std::to_string(taus.size()));
  }
}

Subset Engine::full_subset() const {
  Subset all(s_.n());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return all;
}

spacetime::Region Engine::past_union(const Taus& taus, const Subset& subset) const {
  check_taus(taus);
  if (subset.empty()) throw Error(ErrorKind::InvalidArgument, "engine: empty subset");
  std::vector<spacetime::RegionAtom> atoms;
  for (auto i : subset) {
    if (i >= s_.n()) throw Error(ErrorKind::InvalidArgument, "engine: subsystem index out of range");
    atoms.emplace_back(spacetime::PastOfEvent{s_.subsystems[i].worldline.position(taus[i])});
  }
  return spacetime::Region::union_of(std::move(atoms));
}

std::vector<std::size_t> Engine::selected_for(const Taus& taus, const Subset& subset) const {
  return scenario::select_interventions(s_, past_union(taus, subset));
}

DensityOperator Engine::sector(const Taus& taus, const Subset& subset) const {
  if (!std::is_sorted(subset.begin(), subset.end()) ||
      std::adjacent_find(subset.begin(), subset.end()) != subset.end()) {
    throw Error(ErrorKind::InvalidArgument, "engine: subset must be sorted without repeats");
  }
  auto selected = selected_for(taus, subset);
  auto key = std::make_pair(subset, selected);
  {
    std::lock_guard lock(cache_->mu);
    if (auto it = cache_->sectors.find(key); it != cache_->sectors.end()) return it->second;
  }
  const auto dims = s_.dims();
  const CMatrix joint = scenario::psi_map(s_, selected, s_.initial_state.matrix());
  DensityOperator result = [&] {
    try {
      return linalg::normalize(linalg::ptrace(joint, dims, subset));
    } catch (const ImpossibleOutcome& e) {
      throw ImpossibleOutcome(std::string("sector ") + scenario::subset_name(s_, subset) +
                                  ": recorded outcomes have zero probability",
                              scenario::subset_name(s_, subset));
    }
  }();
  std::lock_guard lock(cache_->mu);
  cache_->sectors.emplace(std::move(key), result);
  return result;
}

Polystate Engine::polystate_at(const Taus& taus) const {
  check_taus(taus);
  Polystate p;
  p.n = s_.n();
  p.eval_taus = taus;
  for (auto& subset : all_subsets(s_.n())) {
    auto rho = sector(taus, subset);
    p.sectors.emplace(std::move(subset), std::move(rho));
  }
  return p;
}

double Engine::prob_joint_outcome(const Taus& taus, std::span<const CMatrix> projectors) const {
  if (projectors.size() != s_.n()) {
    throw Error(ErrorKind::DimensionMismatch, "prob_joint_outcome: one projector per subsystem required");
  }
  const auto joint = sector(taus, full_subset());
  return linalg::expect(joint, linalg::kron_all(projectors));
}

double Engine::marginal_prob(const Taus& taus, std::size_t i, const CMatrix& projector) const {
  return linalg::expect(sector(taus, Subset{i}), projector);
}

double Engine::conditional_prob(const Taus& conditioning_taus, std::size_t i, const CMatrix& projector) const {
  const auto joint = sector(conditioning_taus, full_subset());
  return linalg::expect(joint, linalg::lift_local(projector, i, s_.dims()));
}

DensityOperator Engine::observer_state(const spacetime::Event& x) const {
  return linalg::normalize(scenario::psi_map(s_, spacetime::Region::past_of(x), s_.initial_state.matrix()));
}

DensityOperator Engine::recollection(const spacetime::Worldline& z, double tau) const {
  return observer_state(z.position(tau));
}

DensityOperator Engine::foliation_state(const spacetime::Foliation& f, double t) const {
  return linalg::normalize(
      scenario::psi_map(s_, spacetime::Region::past_of_leaf(f, t), s_.initial_state.matrix()));
}

std::size_t Engine::cache_size() const {
  std::lock_guard lock(cache_->mu);
  return cache_->sectors.size();
}

double expect_individual(const Polystate& p, std::size_t i, const ObservableOp& obs) {
  return linalg::expect(p.at(Subset{i}), obs);
}

double expect_joint(const Polystate& p, const Subset& subset, const ObservableOp& obs) {
  return linalg::expect(p.at(subset), obs);
}

}  // namespace polystate::engine
