#pragma once

// Causal geometry of flat (1+d)-dimensional Minkowski spacetime, c = 1,
// signature (+, -, ..., -). Coordinate 0 is time.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace polystate::spacetime {

// Absolute slack on causal predicates, so that events produced by the same
// arithmetic on both sides of a null boundary compare as intended.
inline constexpr double kCausalTol = 1e-12;
inline constexpr double kMaxRapidity = 20.0;

using SpatialVector = std::vector<double>;

class Event {
 public:
  Event() = default;
  // Throws InvalidArgument on non-finite entries or d outside [1, 3].
  explicit Event(std::vector<double> coords);

  std::size_t spatial_dim() const { return coords_.size() - 1; }
  double t() const { return coords_[0]; }
  double operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<double>& coords() const { return coords_; }

 private:
  std::vector<double> coords_{0.0, 0.0};
};

double norm(const SpatialVector& v);
double lorentz_gamma(const SpatialVector& v);

// Minkowski interval (dt^2 - |dx|^2) between two events.
double interval(const Event& x, const Event& y);

// x is in the closed causal past of y: y - x is future-directed and causal.
// Reflexive; the null boundary is included.
bool causally_precedes(const Event& x, const Event& y);

// x is strictly inside the causal past of y (timelike, not on the cone).
bool strictly_precedes(const Event& x, const Event& y);

struct Segment {
  double dtau;             // proper-time duration, > 0
  SpatialVector velocity;  // |v| < 1
};

// Piecewise-inertial timelike curve with proper time 0 at the anchor. Before
// the anchor it continues inertially with the first segment's velocity (or
// final_velocity without segments); after the last segment with final_velocity.
class Worldline {
 public:
  Worldline() = default;
  // No validation here; see timelike_violation().
  Worldline(Event anchor, std::vector<Segment> segments, SpatialVector final_velocity);

  static Worldline stationary(Event anchor);

  const Event& anchor() const { return anchor_; }
  const std::vector<Segment>& segments() const { return segments_; }
  const SpatialVector& final_velocity() const { return final_velocity_; }
  std::size_t spatial_dim() const { return anchor_.spatial_dim(); }

  // Empty when every velocity is subluminal, every duration positive and
  // every velocity has the anchor's spatial dimension.
  std::optional<std::string> timelike_violation() const;

  Event position(double tau) const;

  // One inertial piece: position(tau) = start + u * (tau - tau_start) for
  // tau in [tau_start, tau_end], u the unit 4-velocity.
  struct Piece {
    double tau_start;
    double tau_end;
    std::vector<double> start;
    std::vector<double> u;
  };
  const std::vector<Piece>& pieces() const { return pieces_; }

 private:
  void build_pieces();

  Event anchor_;
  std::vector<Segment> segments_;
  SpatialVector final_velocity_{0.0};
  std::vector<Piece> pieces_;
};

struct Crossings {
  double tau_minus;  // worldline meets the past lightcone of the apex
  double tau_plus;   // worldline meets the future lightcone of the apex
};

// Per-piece quadratic solve, bisection fallback near zero discriminant.
Crossings lightcone_crossings(const Worldline& w, const Event& apex);

// Family of spacelike hyperplanes t' = const in the inertial frame moving with
// frame_velocity.
class Foliation {
 public:
  Foliation() = default;
  // Throws InvalidArgument if |v| >= 1.
  explicit Foliation(SpatialVector frame_velocity);
  static Foliation rest(std::size_t spatial_dim);

  const SpatialVector& frame_velocity() const { return v_; }
  // Leaf parameter of the leaf through x.
  double leaf_time(const Event& x) const;

 private:
  SpatialVector v_{0.0};
};

double proper_time_at_leaf(const Worldline& w, const Foliation& f, double t);

struct PastOfEvent {
  Event apex;
};

struct PastOfLeaf {
  Foliation foliation;
  double t;
};

using RegionAtom = std::variant<PastOfEvent, PastOfLeaf>;

// Union of causal pasts of events and leaves, or one of the two trivial regions.
class Region {
 public:
  enum class Kind { Atoms, Everything, Nothing };

  static Region everything();
  static Region nothing();
  static Region past_of(Event apex);
  static Region past_of_leaf(Foliation f, double t);
  // Throws InvalidArgument on an empty list.
  static Region union_of(std::vector<RegionAtom> atoms);

  Kind kind() const { return kind_; }
  const std::vector<RegionAtom>& atoms() const { return atoms_; }

 private:
  Kind kind_ = Kind::Nothing;
  std::vector<RegionAtom> atoms_;
};

bool region_contains(const Region& r, const Event& x);

// Lorentz boost with the given rapidity along a spatial unit axis.
class Boost {
 public:
  // Throws InvalidArgument if |rapidity| >= kMaxRapidity or the axis is zero.
  Boost(double rapidity, SpatialVector axis);

  Event apply(const Event& x) const;
  Worldline apply(const Worldline& w) const;
  Foliation apply(const Foliation& f) const;
  std::vector<double> apply_vector(const std::vector<double>& four) const;

 private:
  double ch_;
  double sh_;
  SpatialVector axis_;
};

struct Geometry {
  std::vector<Worldline> worldlines;
  std::vector<Event> events;
  std::vector<Foliation> foliations;
};

Geometry boost_all(const Geometry& g, double rapidity, const SpatialVector& axis);

}  // namespace polystate::spacetime
