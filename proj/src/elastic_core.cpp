#include "phaseless/elastic_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phaseless/specfun.hpp"

namespace phaseless {

std::string_view mode_name(Mode m) { return m == Mode::P ? "p" : "s"; }

WaveParameters WaveParameters::make(double omega, double lambda, double mu) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (!(lambda + 2.0 * mu > 0.0)) throw std::invalid_argument("lambda + 2 mu must be positive");
  WaveParameters p;
  p.omega = omega;
  p.lambda = lambda;
  p.mu = mu;
  p.kp = omega / std::sqrt(lambda + 2.0 * mu);
  p.ks = omega / std::sqrt(mu);
  return p;
}

Direction Direction::from_angle(double theta) { return Direction(Vec2(std::cos(theta), std::sin(theta))); }

Direction Direction::from_vector(const Vec2& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("direction from zero vector");
  return Direction(v / n);
}

double Direction::angle() const { return std::atan2(v_.y(), v_.x()); }

std::vector<Direction> equispaced_directions(std::size_t n) {
  std::vector<Direction> out;
  out.reserve(n);
  for (std::size_t l = 0; l < n; ++l) {
    out.push_back(Direction::from_angle(2.0 * kPi * static_cast<double>(l) / static_cast<double>(n)));
  }
  return out;
}

PolarizationSet PolarizationSet::standard() {
  return {{Direction::from_angle(kPi / 4.0), Direction::from_angle(11.0 * kPi / 12.0),
           Direction::from_angle(19.0 * kPi / 12.0)}};
}

StrengthSet StrengthSet::standard() { return {{Complex(0.5, 0.0), Complex(-0.5, 0.0), Complex(0.0, 0.5)}}; }

void StrengthSet::validate() const {
  const Complex a = -tau[0];
  const Complex b = -tau[1];
  const Complex c = -tau[2];
  const double scale = std::max({std::norm(a - b), std::norm(b - c), std::norm(a - c)});
  if (!(scale > 0.0)) throw std::invalid_argument("strengths coincide");
  const double twice_area = std::abs(std::imag(std::conj(b - a) * (c - a)));
  if (twice_area <= 2e-10 * scale) throw std::invalid_argument("strength anchors are collinear");
}

CVec2 plane_wave(Mode mode, const Direction& d, const WaveParameters& params, const Vec2& x) {
  const double k = params.wavenumber(mode);
  const Complex phase = std::exp(kI * (k * d.dot(x)));
  const Vec2 pol = mode == Mode::P ? d.vec() : d.perp();
  return pol.cast<Complex>() * phase;
}

CMat2 green_tensor(const WaveParameters& params, const Vec2& x, const Vec2& y) {
  const Vec2 diff = x - y;
  const double r = diff.norm();
  if (r < kCoincidenceRadius) throw std::domain_error("green_tensor: coincident points");
  const Vec2 rhat = diff / r;
  const Eigen::Matrix2d rr = rhat * rhat.transpose();
  const Eigen::Matrix2d tangential = Eigen::Matrix2d::Identity() - rr;

  // Hessian of H0(k r): -k^2 (H0 - H1/(k r)) rr^T - (k H1 / r)(I - rr^T).
  auto hessian = [&](double k, const specfun::HankelPair& h, Complex& radial, Complex& tang) {
    radial = -k * k * (h.h0 - h.h1 / (k * r));
    tang = -k * h.h1 / r;
  };
  const specfun::HankelPair hs = specfun::hankel01(params.ks * r);
  const specfun::HankelPair hp = specfun::hankel01(params.kp * r);
  Complex rad_s, tan_s, rad_p, tan_p;
  hessian(params.ks, hs, rad_s, tan_s);
  hessian(params.kp, hp, rad_p, tan_p);

  const Complex c_id = kI / (4.0 * params.mu) * hs.h0;
  const Complex c_hess = kI / (4.0 * params.omega * params.omega);
  const Complex radial = c_hess * (rad_s - rad_p);
  const Complex tang = c_hess * (tan_s - tan_p);
  CMat2 phi = radial * rr.cast<Complex>() + tang * tangential.cast<Complex>();
  phi(0, 0) += c_id;
  phi(1, 1) += c_id;
  return phi;
}

Complex green_far_field(Mode mode, const Direction& xhat, const Vec2& y, const Vec2& q,
                        const WaveParameters& params) {
  const double k = params.wavenumber(mode);
  const double pol = mode == Mode::P ? q.dot(xhat.vec()) : q.dot(xhat.perp());
  return std::exp(-kI * (k * xhat.dot(y))) * pol;
}

namespace {
double arc_projection(const Direction& xhat, Mode mode, const Direction& q) {
  return mode == Mode::P ? q.dot(xhat.vec()) : q.dot(xhat.perp());
}
// Directions exactly on an arc end point project to 1/2 up to rounding.
constexpr double kArcSlack = 1e-12;
}  // namespace

int arc_select_index(const Direction& xhat, Mode mode, const PolarizationSet& set) {
  for (std::size_t i = 0; i < set.q.size(); ++i) {
    if (arc_projection(xhat, mode, set.q[i]) >= 0.5 - kArcSlack) return static_cast<int>(i);
  }
  return -1;
}

const Direction& arc_select(const Direction& xhat, Mode mode, const PolarizationSet& set) {
  const int i = arc_select_index(xhat, mode, set);
  if (i < 0) throw std::logic_error("arc_select: polarization set does not cover direction");
  return set.q[static_cast<std::size_t>(i)];
}

std::vector<int> arc_members(const Direction& xhat, Mode mode, const PolarizationSet& set) {
  std::vector<int> out;
  for (std::size_t i = 0; i < set.q.size(); ++i) {
    if (arc_projection(xhat, mode, set.q[i]) >= 0.5 - kArcSlack) out.push_back(static_cast<int>(i));
  }
  return out;
}

Interval strip_hull(std::span<const Vec2> points, const Direction& xhat) {
  if (points.empty()) throw std::invalid_argument("strip_hull: empty shape");
  Interval iv{INFINITY, -INFINITY};
  for (const Vec2& p : points) {
    const double s = xhat.dot(p);
    iv.lo = std::min(iv.lo, s);
    iv.hi = std::max(iv.hi, s);
  }
  return iv;
}

}  // namespace phaseless
