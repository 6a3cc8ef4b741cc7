#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "oracles.hpp"
#include "polystate/errors.hpp"
#include "polystate/scenario.hpp"
#include "polystate/standard.hpp"

using namespace polystate;
using namespace polystate::scenario;
using spacetime::Event;
using spacetime::Region;

namespace {

const char* kMinimal = R"({
  "spacetime": {"d": 1},
  "subsystems": [
    {"name": "A", "worldline": {"anchor": [0, 0], "final_v": [0]}},
    {"name": "B", "worldline": {"anchor": [0, 2], "final_v": [0]}}
  ],
  "initial_state": {"named": "bell_psi_plus"},
  "interventions": [%IV%]
})";

std::string with_interventions(const std::string& iv) {
  std::string doc = kMinimal;
  doc.replace(doc.find("%IV%"), 4, iv);
  return doc;
}

std::vector<std::string> codes_of(const std::string& doc) {
  try {
    parse_scenario(doc);
  } catch (const ValidationError& e) {
    std::vector<std::string> out;
    for (const auto& d : e.diagnostics()) out.push_back(d.code);
    return out;
  }
  return {};
}

bool has(const std::vector<std::string>& v, const std::string& code) {
  return std::find(v.begin(), v.end(), code) != v.end();
}

}  // namespace

TEST_CASE("bundled Bell fixture parses to the expected map") {
  const auto s = load_scenario(oracle::fixture("bell_sigma_z.scn"));
  REQUIRE(s.n() == 2);
  CHECK(s.dims() == Dims{2, 2});
  REQUIRE(s.interventions.size() == 1);
  CHECK(s.interventions[0].is_selective());
  CHECK(s.event_of(0).t() == doctest::Approx(1.0));
  CHECK(oracle::max_abs_diff(s.initial_state.matrix(), oracle::psi_plus()) < 1e-15);

  const auto& rho = s.initial_state.matrix();
  CHECK(oracle::max_abs_diff(psi_map(s, Region::past_of(Event({0.5, 0})), rho), rho) == 0);
  CHECK(oracle::max_abs_diff(psi_map(s, Region::past_of(Event({1.0, 0})), rho), 0.5 * oracle::basis_projector(4, 1)) < 1e-15);
  CHECK(s.audit);
  CHECK(s.audit->taus == std::vector<double>{2.0, 0.5});
}

TEST_CASE("EPR fixture: both measurements inside the region") {
  const auto s = load_scenario(oracle::fixture("epr_test.scn"));
  CHECK(validate(s).empty());
  const double theta = M_PI / 3;
  const auto a = oracle::vec({1, 0});
  const auto b = standard::pauli_n_eigenket(theta, 0, +1).amplitudes();
  const oracle::Vec ab = oracle::kron2(a, b);
  const oracle::Mat p = oracle::outer(ab);
  const oracle::Mat expected = p * oracle::psi_minus() * p;
  const auto region = Region::union_of({spacetime::PastOfEvent{Event({1, 0})}, spacetime::PastOfEvent{Event({1, 2})}});
  CHECK(oracle::max_abs_diff(psi_map(s, region, s.initial_state.matrix()), expected) < 1e-15);
}

TEST_CASE("empty intervention block gives the identity map") {
  const auto s = parse_scenario(with_interventions(""));
  CHECK(s.interventions.empty());
  CHECK(oracle::max_abs_diff(psi_map(s, Region::everything(), s.initial_state.matrix()), s.initial_state.matrix()) == 0);
}

TEST_CASE("validation diagnostics") {
  CHECK(has(codes_of(with_interventions(
                R"({"on": "A", "tau": 1, "measure": {"kraus": [[[1,0],[0,0]], [[0,0],[0,0.9989995]]], "outcome": 0}})")),
            "kraus-incomplete"));
  CHECK(has(codes_of(with_interventions(
                R"({"on": "A", "tau": 1, "unitary": "pauli_x"}, {"on": "A", "tau": 1, "unitary": "pauli_z"})")),
            "duplicate-proper-time"));
  CHECK(has(codes_of(with_interventions(R"({"on": "A", "tau": 1, "unitary": [[1, 0], [0, 2]]})")), "not-unitary"));
  CHECK(has(codes_of(with_interventions(R"({"on": "A", "tau": 1, "measure": {"projective_basis": "z", "outcome": 5}})")),
            "outcome-out-of-range"));
  std::string superluminal = with_interventions("");
  superluminal.replace(superluminal.find("\"final_v\": [0]"), 14, "\"final_v\": [1.0]");
  CHECK(has(codes_of(superluminal), "non-timelike-worldline"));
  std::string dup = with_interventions("");
  dup.replace(dup.find("\"name\": \"B\""), 11, "\"name\": \"A\"");
  CHECK(has(codes_of(dup), "duplicate-name"));
  std::string wrong_dim = with_interventions("");
  wrong_dim.replace(wrong_dim.find("\"name\": \"B\","), 12, "\"name\": \"B\", \"dim\": 3,");
  CHECK(has(codes_of(wrong_dim), "dimension-mismatch"));
  CHECK(has(codes_of(with_interventions(R"({"on": "C", "tau": 1, "unitary": "identity"})")), "schema"));
  CHECK(has(codes_of(with_interventions(R"({"on": "A", "tau": 1, "unitary": "identity", "extra": 1})")), "schema"));
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_scenario("{\n  \"spacetime\": {\"d\": 1},\n  \"subsystems\": [,]\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 18);
  }
}

TEST_CASE("psi_map orders each subsystem's interventions by proper time") {
  // X then Z on A: Z X |0> = -|1>, while X Z |0> = |1>. Projectors hide the
  // sign, so check the order through a non-commuting pair with a phase.
  const auto s = parse_scenario(with_interventions(
      R"({"on": "A", "tau": 2, "unitary": "hadamard"}, {"on": "A", "tau": 1, "unitary": {"phase": 1.0}})"));
  const oracle::Mat h = standard::hadamard();
  oracle::Mat ph = oracle::Mat::Identity(2, 2);
  ph(1, 1) = std::polar(1.0, 1.0);
  const oracle::Mat u = oracle::kron2(h * ph, oracle::Mat::Identity(2, 2));
  const oracle::Mat expected = u * oracle::psi_plus() * u.adjoint();
  CHECK(oracle::max_abs_diff(psi_map(s, Region::everything(), s.initial_state.matrix()), expected) < 1e-14);
}

TEST_CASE("subset parsing and naming") {
  const auto s = load_scenario(oracle::fixture("bell_sigma_z.scn"));
  CHECK(parse_subset(s, "AB") == std::vector<std::size_t>{0, 1});
  CHECK(parse_subset(s, "B,A") == std::vector<std::size_t>{0, 1});
  CHECK(parse_subset(s, "all") == std::vector<std::size_t>{0, 1});
  CHECK(parse_subset(s, "B") == std::vector<std::size_t>{1});
  CHECK_THROWS_AS(parse_subset(s, "AA"), Error);
  CHECK_THROWS_AS(parse_subset(s, "C"), Error);
  CHECK(subset_name(s, {0, 1}) == "AB");
}

TEST_CASE("serialize round trip preserves the map") {
  for (const char* name : {"bell_sigma_z.scn", "bell_sigma_x.scn", "epr_test.scn", "foliation_demo.scn"}) {
    const auto s = load_scenario(oracle::fixture(name));
    const auto t = parse_scenario(serialize(s));
    CHECK(t.n() == s.n());
    CHECK(t.interventions.size() == s.interventions.size());
    CHECK(t.foliations.size() == s.foliations.size());
    for (double time : {0.0, 0.75, 1.0, 3.0}) {
      const auto r = Region::past_of_leaf(spacetime::Foliation::rest(1), time);
      CHECK(oracle::max_abs_diff(psi_map(s, r, s.initial_state.matrix()), psi_map(t, r, t.initial_state.matrix())) < 1e-12);
    }
  }
}

TEST_CASE("operator text parsing") {
  CHECK(oracle::max_abs_diff(parse_operator("pauli_z", 2), standard::pauli_z()) == 0);
  CHECK(oracle::max_abs_diff(parse_operator(R"({"pauli_n": [0, 0]})", 2), standard::pauli_z()) < 1e-15);
  CHECK(oracle::max_abs_diff(parse_operator("[[1, 0], [0, -1]]", 2), standard::pauli_z()) == 0);
  CHECK_THROWS_AS(parse_operator("nonsense", 2), Error);
}

TEST_CASE("boosting a scenario moves worldlines and foliations") {
  const auto s = load_scenario(oracle::fixture("foliation_demo.scn"));
  const auto b = boost_all(s, 0.5, {1.0});
  const spacetime::Boost boost(0.5, {1.0});
  const auto x = boost.apply(s.event_of(0));
  CHECK(std::abs(b.event_of(0).t() - x.t()) < 1e-12);
  CHECK(std::abs(b.event_of(0)[1] - x[1]) < 1e-12);
}
