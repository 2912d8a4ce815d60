#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "navier_oracle.hpp"
#include "phaseless/elastic_core.hpp"

using namespace phaseless;

namespace {
const WaveParameters kParams = WaveParameters::make(2.0 * kPi, 1.0, 1.0);
}

TEST_CASE("wave parameters") {
  CHECK(kParams.kp == doctest::Approx(2.0 * kPi / std::sqrt(3.0)));
  CHECK(kParams.ks == doctest::Approx(2.0 * kPi));
  CHECK_THROWS_AS(WaveParameters::make(0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(WaveParameters::make(1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(WaveParameters::make(1.0, -3.0, 1.0), std::invalid_argument);
}

TEST_CASE("plane waves") {
  const Direction d = Direction::from_angle(0.0);
  const CVec2 p = plane_wave(Mode::P, d, kParams, Vec2::Zero());
  const CVec2 s = plane_wave(Mode::S, d, kParams, Vec2::Zero());
  CHECK(std::abs(p(0) - 1.0) == 0.0);
  CHECK(std::abs(p(1)) == 0.0);
  CHECK(std::abs(s(0)) == 0.0);
  CHECK(std::abs(s(1) - 1.0) == 0.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    const Vec2 x(u(rng), u(rng));
    const Direction dir = Direction::from_angle(u(rng));
    for (Mode m : {Mode::P, Mode::S}) {
      CHECK(plane_wave(m, dir, kParams, x).norm() == doctest::Approx(1.0).epsilon(1e-14));
      const auto field = [&](const Vec2& y) { return plane_wave(m, dir, kParams, y); };
      const CVec2 r = testing::navier_residual(field, kParams, x, 1e-4);
      CHECK(r.norm() <= 1e-4 * kParams.omega * kParams.omega);
    }
  }
}

TEST_CASE("Green's tensor symmetry and Navier residual") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const Vec2 x(u(rng), u(rng));
    const Vec2 y(u(rng), u(rng));
    const CMat2 g = green_tensor(kParams, x, y);
    CHECK((g - g.transpose()).norm() <= 1e-15 * g.norm());
    CHECK((g - green_tensor(kParams, y, x)).norm() <= 1e-14 * g.norm());
  }
  const Vec2 y(0.2, -0.1);
  for (double angle = 0.1; angle < 2.0 * kPi; angle += 0.7) {
    const Vec2 x = y + Vec2(std::cos(angle), std::sin(angle));
    for (int col = 0; col < 2; ++col) {
      const auto field = [&](const Vec2& z) -> CVec2 { return green_tensor(kParams, z, y).col(col); };
      const CVec2 r = testing::navier_residual(field, kParams, x, 1e-4);
      CHECK(r.norm() <= 1e-4 * kParams.omega * kParams.omega * field(x).norm());
    }
  }
  CHECK_THROWS_AS(green_tensor(kParams, y, y), std::domain_error);
}

TEST_CASE("far field of the Green's tensor") {
  const Direction xhat = Direction::from_angle(0.3);
  const Vec2 q = Direction::from_angle(0.3 + kPi / 2.0).vec();
  CHECK(std::abs(green_far_field(Mode::P, xhat, Vec2(1.0, 2.0), q, kParams)) < 1e-15);
  CHECK(std::abs(green_far_field(Mode::P, xhat, Vec2::Zero(), xhat.vec(), kParams) - 1.0) < 1e-15);
  CHECK(std::abs(green_far_field(Mode::S, xhat, Vec2::Zero(), q, kParams) - 1.0) < 1e-15);
}

TEST_CASE("Green's tensor matches its far-field asymptotics") {
  const WaveParameters prm = WaveParameters::make(2.0 * kPi, 1.0, 1.0);
  const Vec2 y(0.4, -0.7);
  const Vec2 q = Direction::from_angle(1.1).vec();
  const double r = 1000.0 * prm.shear_wavelength();
  for (double angle : {0.0, 0.9, 2.5, 4.0}) {
    const Direction xhat = Direction::from_angle(angle);
    const Vec2 x = r * xhat.vec();
    const CVec2 exact = green_tensor(prm, x, y) * q;
    CVec2 approx = CVec2::Zero();
    for (Mode m : {Mode::P, Mode::S}) {
      const double k = prm.wavenumber(m);
      const Complex gamma = (k * k / (prm.omega * prm.omega)) * std::exp(kI * (kPi / 4.0)) / std::sqrt(8.0 * kPi * k);
      const Vec2 dir = m == Mode::P ? xhat.vec() : xhat.perp();
      approx += gamma * std::exp(kI * (k * r)) / std::sqrt(r) * green_far_field(m, xhat, y, q, prm) * dir.cast<Complex>();
    }
    CHECK((exact - approx).norm() <= 0.01 * exact.norm());
  }
}

TEST_CASE("arc selection covers every direction") {
  const PolarizationSet set = PolarizationSet::standard();
  CHECK(&arc_select(Direction::from_angle(kPi / 4.0), Mode::P, set) == &set.q[0]);
  for (int i = 0; i < 10000; ++i) {
    const Direction xhat = Direction::from_angle(2.0 * kPi * (i + 0.5) / 10000.0);
    for (Mode m : {Mode::P, Mode::S}) {
      const int idx = arc_select_index(xhat, m, set);
      REQUIRE(idx >= 0);
      const Vec2 v = m == Mode::P ? xhat.vec() : xhat.perp();
      CHECK(set.q[static_cast<std::size_t>(idx)].dot(v) >= 0.5 - 1e-12);
    }
  }
  const Direction d = Direction::from_angle(kPi / 4.0 + kPi / 2.0);
  CHECK(!arc_members(d, Mode::S, set).empty());
  const PolarizationSet single{{Direction::from_angle(0.0)}};
  CHECK(arc_select_index(Direction::from_angle(kPi), Mode::P, single) == -1);
  CHECK_THROWS_AS(arc_select(Direction::from_angle(kPi), Mode::P, single), std::logic_error);
}

TEST_CASE("strength sets") {
  CHECK_NOTHROW(StrengthSet::standard().validate());
  CHECK_THROWS_AS((StrengthSet{{Complex(1.0), Complex(2.0), Complex(3.0)}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((StrengthSet{{Complex(1.0), Complex(1.0), Complex(0.0, 1.0)}}.validate()), std::invalid_argument);
}

TEST_CASE("strip hull") {
  const std::vector<Vec2> rect = {{1.0, 1.0}, {2.0, 1.0}, {2.0, 1.6}, {1.0, 1.6}};
  const Interval up = strip_hull(rect, Direction::from_angle(kPi / 2.0));
  CHECK(up.lo == doctest::Approx(1.0));
  CHECK(up.hi == doctest::Approx(1.6));
  const std::vector<Vec2> tri = {{-2.0, 0.0}, {1.0, 0.0}, {-0.5, 1.5 * std::sqrt(3.0)}};
  const Interval right = strip_hull(tri, Direction::from_angle(0.0));
  CHECK(right.lo == doctest::Approx(-2.0));
  CHECK(right.hi == doctest::Approx(1.0));
  std::vector<Vec2> disk;
  for (int i = 0; i < 720; ++i) disk.emplace_back(std::cos(i * kPi / 360.0), std::sin(i * kPi / 360.0));
  const Interval any = strip_hull(disk, Direction::from_angle(0.37));
  CHECK(any.lo == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(any.hi == doctest::Approx(1.0).epsilon(1e-4));
  CHECK_THROWS_AS(strip_hull(std::vector<Vec2>{}, Direction()), std::invalid_argument);
}

TEST_CASE("equispaced directions") {
  const auto dirs = equispaced_directions(8);
  REQUIRE(dirs.size() == 8);
  CHECK(dirs[2].vec().x() == doctest::Approx(0.0));
  CHECK(dirs[2].vec().y() == doctest::Approx(1.0));
  CHECK_THROWS_AS(Direction::from_vector(Vec2::Zero()), std::invalid_argument);
}
