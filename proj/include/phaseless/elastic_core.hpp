#pragma once

#include <Eigen/Core>
#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace phaseless {

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using CVec2 = Eigen::Vector2cd;
using CMat2 = Eigen::Matrix2cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

enum class Mode { P, S };

std::string_view mode_name(Mode m);

// Circular frequency and Lame constants; wavenumbers are derived.
struct WaveParameters {
  double omega = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double kp = 0.0;
  double ks = 0.0;

  // Throws std::invalid_argument unless omega > 0, mu > 0, lambda + 2 mu > 0.
  static WaveParameters make(double omega, double lambda, double mu);

  double wavenumber(Mode m) const { return m == Mode::P ? kp : ks; }
  double shear_wavelength() const { return 2.0 * kPi / ks; }
};

// Unit vector in the plane. perp() rotates anticlockwise by pi/2.
class Direction {
 public:
  Direction() : v_(1.0, 0.0) {}
  static Direction from_angle(double theta);
  // Normalizes; throws std::invalid_argument for a zero vector.
  static Direction from_vector(const Vec2& v);

  const Vec2& vec() const { return v_; }
  Vec2 perp() const { return {-v_.y(), v_.x()}; }
  double angle() const;
  double dot(const Vec2& w) const { return v_.dot(w); }
  Direction operator-() const { return Direction(-v_); }

 private:
  explicit Direction(Vec2 v) : v_(std::move(v)) {}
  Vec2 v_;
};

// theta_l = 2 pi l / n for l = 0..n-1.
std::vector<Direction> equispaced_directions(std::size_t n);

// The three polarizations q1, q2, q3; by default at angles pi/4, 11pi/12,
// 19pi/12 so that every direction lies in some arc {q . x >= 1/2} and in
// some arc {q . x_perp >= 1/2}.
struct PolarizationSet {
  std::vector<Direction> q;

  static PolarizationSet standard();
};

// Three complex strengths whose negatives serve as trilateration anchors.
struct StrengthSet {
  std::array<Complex, 3> tau;

  static StrengthSet standard();  // 0.5, -0.5, 0.5i
  // Throws std::invalid_argument when -tau_j are repeated or collinear.
  void validate() const;
};

// u_in = d e^{i kp x.d} for P, d_perp e^{i ks x.d} for S.
CVec2 plane_wave(Mode mode, const Direction& d, const WaveParameters& params, const Vec2& x);

// Green's tensor of the Navier equation. Throws std::domain_error when
// |x - y| < kCoincidenceRadius.
inline constexpr double kCoincidenceRadius = 1e-12;
CMat2 green_tensor(const WaveParameters& params, const Vec2& x, const Vec2& y);

// Far field of Phi(., y) q: e^{-i k x.y} (q . x) for P, e^{-i k x.y} (q . x_perp) for S.
Complex green_far_field(Mode mode, const Direction& xhat, const Vec2& y, const Vec2& q,
                        const WaveParameters& params);

// Index of the first q in `set` with q . xhat >= 1/2 (P) or
// q . xhat_perp >= 1/2 (S). Returns -1 when no entry qualifies.
int arc_select_index(const Direction& xhat, Mode mode, const PolarizationSet& set);
// As above but throws std::logic_error when coverage fails.
const Direction& arc_select(const Direction& xhat, Mode mode, const PolarizationSet& set);
// Every index qualifying for the arc condition, in order.
std::vector<int> arc_members(const Direction& xhat, Mode mode, const PolarizationSet& set);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double v) const { return v >= lo && v <= hi; }
};

// Projection extent [inf z.xhat, sup z.xhat] over a point cloud (polygon
// vertices or boundary samples). Throws std::invalid_argument when empty.
Interval strip_hull(std::span<const Vec2> points, const Direction& xhat);

}  // namespace phaseless
