#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "polystate/errors.hpp"
#include "polystate/linalg.hpp"
#include "polystate/spacetime.hpp"

namespace polystate::scenario {

using linalg::CMatrix;
using linalg::DensityOperator;
using linalg::Dims;

struct Unitary {
  CMatrix matrix;
};

// One branch of a Kraus instrument, recorded as the outcome that occurred.
struct Selective {
  std::vector<CMatrix> kraus;
  std::size_t chosen = 0;
  std::vector<std::string> labels;
};

// A local operation pinned to one subsystem at one proper time.
struct Intervention {
  std::size_t subsystem = 0;
  double tau = 0.0;
  std::variant<Unitary, Selective> kind;

  bool is_selective() const { return std::holds_alternative<Selective>(kind); }
  const Selective& selective() const { return std::get<Selective>(kind); }
  // The operator conjugating the state: the unitary or the chosen Kraus branch.
  const CMatrix& applied_operator() const;
};

struct Subsystem {
  std::string name;
  std::size_t dim = 2;
  spacetime::Worldline worldline;
};

// Optional audit declarations carried by a scenario file.
struct AuditDecl {
  std::vector<CMatrix> observables;  // one local observable per subsystem
  std::optional<std::vector<double>> targets;  // per-subsystem marginals, then the joint
  std::optional<std::vector<double>> taus;
};

struct NamedFoliation {
  std::string name;
  spacetime::Foliation foliation;
};

struct NamedKet {
  std::string name;
  linalg::Ket ket;
};

struct Scenario {
  std::size_t spatial_dim = 1;
  std::vector<Subsystem> subsystems;
  DensityOperator initial_state = DensityOperator::maximally_mixed(1);
  std::vector<Intervention> interventions;

  // Presentation metadata, not used by the state engine.
  std::vector<NamedFoliation> foliations;
  std::vector<NamedKet> references;
  std::optional<AuditDecl> audit;

  std::size_t n() const { return subsystems.size(); }
  Dims dims() const;
  std::optional<std::size_t> index_of(std::string_view name) const;
  // Spacetime location of intervention k.
  spacetime::Event event_of(std::size_t k) const;
};

struct Diagnostic {
  std::string code;     // e.g. "kraus-incomplete"
  std::string field;    // JSON-pointer-like path
  std::string message;
};

// Empty iff every structural invariant holds.
std::vector<Diagnostic> validate(const Scenario& s);

// Thrown by the parser when validation fails; carries every diagnostic.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

// Parses the JSON scenario format. Throws ParseError (with line/column) on
// malformed text and ValidationError on structurally invalid content.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);
// Canonical JSON with explicit matrices; parse_scenario(serialize(s)) is equivalent to s.
std::string serialize(const Scenario& s);

// Operator from a name ("pauli_z") or any operator form of the scenario format,
// given as JSON text. Throws InvalidArgument on anything else.
CMatrix parse_operator(std::string_view text, std::size_t dim);

// Indices of interventions whose events lie in r, ascending.
std::vector<std::size_t> select_interventions(const Scenario& s, const spacetime::Region& r);

// Applies the selected interventions: per subsystem in proper-time order, each
// lifted to the joint space. Unnormalized.
CMatrix psi_map(const Scenario& s, const std::vector<std::size_t>& selected, const CMatrix& rho);
CMatrix psi_map(const Scenario& s, const spacetime::Region& r, const CMatrix& rho);

// Applies interventions exactly in the given order (no sorting).
CMatrix apply_in_order(const Scenario& s, const std::vector<std::size_t>& order, const CMatrix& rho);

// Same scenario with every worldline and foliation moved by one boost.
Scenario boost_all(const Scenario& s, double rapidity, const spacetime::SpatialVector& axis);

// Resolves "A,B", "AB" (single-character names) or "all" to sorted indices.
std::vector<std::size_t> parse_subset(const Scenario& s, std::string_view spec);
std::string subset_name(const Scenario& s, const std::vector<std::size_t>& subset);

}  // namespace polystate::scenario
