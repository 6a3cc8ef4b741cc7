#include "polystate/spacetime.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "polystate/errors.hpp"

namespace polystate::spacetime {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDiscriminantTol = 1e-12;
constexpr double kPieceSlack = 1e-12;

double minkowski(const std::vector<double>& a, const std::vector<double>& b) {
  double s = a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) s -= a[i] * b[i];
  return s;
}

std::vector<double> four_velocity(const SpatialVector& v) {
  const double g = lorentz_gamma(v);
  std::vector<double> u(v.size() + 1);
  u[0] = g;
  for (std::size_t i = 0; i < v.size(); ++i) u[i + 1] = g * v[i];
  return u;
}

SpatialVector three_velocity(const std::vector<double>& u) {
  SpatialVector v(u.size() - 1);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = u[i + 1] / u[0];
  return v;
}

void require_same_dim(const Event& x, const Event& y) {
  if (x.spatial_dim() != y.spatial_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "events of different spacetime dimension");
  }
}

// Root of a strictly monotone function. Expands a bracket around `guess`,
// then bisects to `tol`.
double bisect_monotone(const std::function<double(double)>& f, double guess, double tol) {
  double lo = guess - 1.0, hi = guess + 1.0;
  const bool increasing = f(hi) > f(lo);
  auto below = [&](double x) { return increasing ? f(x) < 0.0 : f(x) > 0.0; };
  double step = 1.0;
  while (!below(lo)) {
    step *= 2.0;
    lo = guess - step;
    if (step > 1e300) break;
  }
  step = 1.0;
  while (below(hi)) {
    step *= 2.0;
    hi = guess + step;
    if (step > 1e300) break;
  }
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (below(mid)) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Event::Event(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2 || coords_.size() > 4) {
    throw Error(ErrorKind::InvalidArgument,
                "event: spatial dimension must be 1, 2 or 3 (got " +
                    std::to_string(static_cast<long>(coords_.size()) - 1) + ")");
  }
  for (double c : coords_) {
    if (!std::isfinite(c)) throw Error(ErrorKind::InvalidArgument, "event: non-finite coordinate");
  }
}

double norm(const SpatialVector& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

double lorentz_gamma(const SpatialVector& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return 1.0 / std::sqrt(1.0 - s);
}

double interval(const Event& x, const Event& y) {
  require_same_dim(x, y);
  std::vector<double> d(x.coords().size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = y[i] - x[i];
  return minkowski(d, d);
}

namespace {

// (dt, |dx|) from x to y.
std::pair<double, double> separation(const Event& x, const Event& y) {
  require_same_dim(x, y);
  double s = 0.0;
  for (std::size_t i = 1; i < x.coords().size(); ++i) {
    const double d = y[i] - x[i];
    s += d * d;
  }
  return {y.t() - x.t(), std::sqrt(s)};
}

}  // namespace

bool causally_precedes(const Event& x, const Event& y) {
  const auto [dt, dx] = separation(x, y);
  return dt >= -kCausalTol && dt - dx >= -kCausalTol;
}

bool strictly_precedes(const Event& x, const Event& y) {
  const auto [dt, dx] = separation(x, y);
  return dt - dx > kCausalTol;
}

Worldline::Worldline(Event anchor, std::vector<Segment> segments, SpatialVector final_velocity)
    : anchor_(std::move(anchor)),
      segments_(std::move(segments)),
      final_velocity_(std::move(final_velocity)) {
  if (!timelike_violation()) build_pieces();
}

Worldline Worldline::stationary(Event anchor) {
  const auto d = anchor.spatial_dim();
  return Worldline(std::move(anchor), {}, SpatialVector(d, 0.0));
}

std::optional<std::string> Worldline::timelike_violation() const {
  const auto d = anchor_.spatial_dim();
  auto check_v = [&](const SpatialVector& v, const std::string& where) -> std::optional<std::string> {
    if (v.size() != d) {
      return where + ": velocity has " + std::to_string(v.size()) + " components, expected " +
             std::to_string(d);
    }
    for (double c : v) {
      if (!std::isfinite(c)) return where + ": non-finite velocity";
    }
    if (norm(v) >= 1.0) return where + ": speed " + std::to_string(norm(v)) + " is not below 1";
    return std::nullopt;
  };
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const std::string where = "segment " + std::to_string(k);
    if (!(segments_[k].dtau > 0.0) || !std::isfinite(segments_[k].dtau)) {
      return where + ": duration must be positive";
    }
    if (auto e = check_v(segments_[k].velocity, where)) return e;
  }
  return check_v(final_velocity_, "final velocity");
}

void Worldline::build_pieces() {
  pieces_.clear();
  const SpatialVector& first_v = segments_.empty() ? final_velocity_ : segments_.front().velocity;
  pieces_.push_back({-kInf, 0.0, anchor_.coords(), four_velocity(first_v)});
  std::vector<double> start = anchor_.coords();
  double tau = 0.0;
  for (const auto& seg : segments_) {
    auto u = four_velocity(seg.velocity);
    pieces_.push_back({tau, tau + seg.dtau, start, u});
    for (std::size_t i = 0; i < start.size(); ++i) start[i] += u[i] * seg.dtau;
    tau += seg.dtau;
  }
  pieces_.push_back({tau, kInf, start, four_velocity(final_velocity_)});
}

Event Worldline::position(double tau) const {
  if (pieces_.empty()) {
    throw Error(ErrorKind::InvalidArgument,
                "worldline: position on a non-timelike worldline (" +
                    timelike_violation().value_or("invalid") + ")");
  }
  // The piece ending at 0 extends backwards from the anchor.
  const Piece* piece = &pieces_.front();
  if (tau >= 0.0) {
    for (std::size_t k = 1; k < pieces_.size(); ++k) {
      piece = &pieces_[k];
      if (tau <= pieces_[k].tau_end) break;
    }
  }
  const double ref = piece->tau_start == -kInf ? 0.0 : piece->tau_start;
  std::vector<double> x(piece->start.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = piece->start[i] + piece->u[i] * (tau - ref);
  return Event(std::move(x));
}

Crossings lightcone_crossings(const Worldline& w, const Event& apex) {
  if (w.spatial_dim() != apex.spatial_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "lightcone_crossings: dimension mismatch");
  }
  const auto& pieces = w.pieces();
  if (pieces.empty()) throw Error(ErrorKind::InvalidArgument, "lightcone_crossings: worldline is not timelike");

  // Signed null interval along the curve, both strictly monotone in tau.
  auto past_gap = [&](double tau) {
    const auto [dt, dx] = separation(w.position(tau), apex);
    return dt - dx;
  };
  auto future_gap = [&](double tau) {
    const auto [dt, dx] = separation(apex, w.position(tau));
    return dt - dx;
  };

  auto solve = [&](int sign) {
    for (const auto& p : pieces) {
      const double ref = p.tau_start == -kInf ? 0.0 : p.tau_start;
      std::vector<double> a(apex.coords().size());
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = apex[i] - p.start[i];
      const double au = minkowski(a, p.u);
      const double disc = au * au - minkowski(a, a);
      if (disc < kDiscriminantTol) {
        return sign < 0 ? bisect_monotone(past_gap, ref + au, 1e-13)
                        : bisect_monotone(future_gap, ref + au, 1e-13);
      }
      const double s = au + sign * std::sqrt(disc);
      const double tau = ref + s;
      if (tau >= p.tau_start - kPieceSlack && tau <= p.tau_end + kPieceSlack) return tau;
    }
    // Unreachable for a timelike inextendible curve; keep a numeric answer.
    return sign < 0 ? bisect_monotone(past_gap, 0.0, 1e-13) : bisect_monotone(future_gap, 0.0, 1e-13);
  };

  Crossings c{solve(-1), solve(+1)};
  if (c.tau_minus > c.tau_plus) c.tau_minus = c.tau_plus;
  return c;
}

Foliation::Foliation(SpatialVector frame_velocity) : v_(std::move(frame_velocity)) {
  if (v_.empty() || v_.size() > 3) throw Error(ErrorKind::InvalidArgument, "foliation: bad frame dimension");
  if (!(norm(v_) < 1.0)) throw Error(ErrorKind::InvalidArgument, "foliation: frame speed must be below 1");
}

Foliation Foliation::rest(std::size_t spatial_dim) { return Foliation(SpatialVector(spatial_dim, 0.0)); }

double Foliation::leaf_time(const Event& x) const {
  if (x.spatial_dim() != v_.size()) throw Error(ErrorKind::DimensionMismatch, "foliation: dimension mismatch");
  double vx = 0.0;
  for (std::size_t i = 0; i < v_.size(); ++i) vx += v_[i] * x[i + 1];
  return lorentz_gamma(v_) * (x.t() - vx);
}

double proper_time_at_leaf(const Worldline& w, const Foliation& f, double t) {
  const auto& pieces = w.pieces();
  if (pieces.empty()) throw Error(ErrorKind::InvalidArgument, "proper_time_at_leaf: worldline is not timelike");
  const auto& v = f.frame_velocity();
  if (v.size() != w.spatial_dim()) throw Error(ErrorKind::DimensionMismatch, "proper_time_at_leaf: dimension mismatch");
  const double g = lorentz_gamma(v);
  auto leaf_of = [&](const std::vector<double>& x4) {
    double vx = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) vx += v[i] * x4[i + 1];
    return g * (x4[0] - vx);
  };
  for (const auto& p : pieces) {
    const double ref = p.tau_start == -kInf ? 0.0 : p.tau_start;
    const double slope = leaf_of(p.u);  // > 0: leaves are spacelike, u timelike
    const double tau = ref + (t - leaf_of(p.start)) / slope;
    if (tau <= p.tau_end + kPieceSlack && tau >= p.tau_start - kPieceSlack) return tau;
  }
  return bisect_monotone([&](double tau) { return f.leaf_time(w.position(tau)) - t; }, 0.0, 1e-13);
}

Region Region::everything() {
  Region r;
  r.kind_ = Kind::Everything;
  return r;
}

Region Region::nothing() { return Region{}; }

Region Region::past_of(Event apex) { return union_of({PastOfEvent{std::move(apex)}}); }

Region Region::past_of_leaf(Foliation f, double t) { return union_of({PastOfLeaf{std::move(f), t}}); }

Region Region::union_of(std::vector<RegionAtom> atoms) {
  if (atoms.empty()) throw Error(ErrorKind::InvalidArgument, "region: empty atom list");
  Region r;
  r.kind_ = Kind::Atoms;
  r.atoms_ = std::move(atoms);
  return r;
}

bool region_contains(const Region& r, const Event& x) {
  switch (r.kind()) {
    case Region::Kind::Everything: return true;
    case Region::Kind::Nothing: return false;
    case Region::Kind::Atoms: break;
  }
  for (const auto& atom : r.atoms()) {
    const bool inside = std::visit(
        [&](const auto& a) -> bool {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, PastOfEvent>) {
            return causally_precedes(x, a.apex);
          } else {
            return a.foliation.leaf_time(x) <= a.t + kCausalTol;
          }
        },
        atom);
    if (inside) return true;
  }
  return false;
}

Boost::Boost(double rapidity, SpatialVector axis) : axis_(std::move(axis)) {
  if (!(std::abs(rapidity) < kMaxRapidity)) {
    throw Error(ErrorKind::InvalidArgument, "boost: |rapidity| must be below 20");
  }
  const double n = norm(axis_);
  if (!(n > 0.0)) throw Error(ErrorKind::InvalidArgument, "boost: zero axis");
  for (double& c : axis_) c /= n;
  ch_ = std::cosh(rapidity);
  sh_ = std::sinh(rapidity);
}

std::vector<double> Boost::apply_vector(const std::vector<double>& four) const {
  if (four.size() != axis_.size() + 1) throw Error(ErrorKind::DimensionMismatch, "boost: dimension mismatch");
  double par = 0.0;
  for (std::size_t i = 0; i < axis_.size(); ++i) par += axis_[i] * four[i + 1];
  std::vector<double> out(four);
  out[0] = ch_ * four[0] - sh_ * par;
  const double new_par = -sh_ * four[0] + ch_ * par;
  for (std::size_t i = 0; i < axis_.size(); ++i) out[i + 1] += (new_par - par) * axis_[i];
  return out;
}

Event Boost::apply(const Event& x) const { return Event(apply_vector(x.coords())); }

Worldline Boost::apply(const Worldline& w) const {
  auto boost_v = [&](const SpatialVector& v) { return three_velocity(apply_vector(four_velocity(v))); };
  std::vector<Segment> segs;
  segs.reserve(w.segments().size());
  for (const auto& s : w.segments()) segs.push_back({s.dtau, boost_v(s.velocity)});
  return Worldline(apply(w.anchor()), std::move(segs), boost_v(w.final_velocity()));
}

Foliation Boost::apply(const Foliation& f) const {
  return Foliation(three_velocity(apply_vector(four_velocity(f.frame_velocity()))));
}

Geometry boost_all(const Geometry& g, double rapidity, const SpatialVector& axis) {
  const Boost b(rapidity, axis);
  Geometry out;
  for (const auto& w : g.worldlines) out.worldlines.push_back(b.apply(w));
  for (const auto& e : g.events) out.events.push_back(b.apply(e));
  for (const auto& f : g.foliations) out.foliations.push_back(b.apply(f));
  return out;
}

}  // namespace polystate::spacetime
