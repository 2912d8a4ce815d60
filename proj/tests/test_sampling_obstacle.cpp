#include <doctest.h>

#include <cmath>

#include "phaseless/sampling_obstacle.hpp"

using namespace phaseless;

namespace {

const WaveParameters kParams = WaveParameters::make(2.0 * kPi, 1.0, 1.0);

// Shear-shear far field of a small rigid scatterer at y, to leading order.
Eigen::MatrixXcd point_scatterer(const Vec2& y, std::size_t n) {
  const auto d = equispaced_directions(n);
  Eigen::MatrixXcd u(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < n; ++l) {
      u(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) =
          d[j].dot(d[l].vec()) * std::exp(-kI * (kParams.ks * (d[j].vec() - d[l].vec()).dot(y)));
    }
  }
  return u;
}

const ObstacleSolver& disk_solver() {
  static const ObstacleSolver s = ObstacleSolver::build(ObstacleScene{{Boundary::circle({0.5, 0.2}, 0.3)}, kParams});
  return s;
}

}  // namespace

TEST_CASE("sampling grids") {
  const SamplingGrid g = SamplingGrid::make(-1.0, 1.0, 0.0, 0.5, 0.25);
  CHECK(g.nx() == 9);
  CHECK(g.ny() == 3);
  CHECK(g.point(0, 0).x() == doctest::Approx(-1.0));
  CHECK(g.point(8, 2).y() == doctest::Approx(0.5));
  CHECK(g.point(10).x() == doctest::Approx(-0.75));
  const SamplingGrid c = SamplingGrid::centered({12.0, 12.0}, 1.0, 0.1);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vec2 mirror = Vec2(24.0, 24.0) - c.point(i);
    CHECK((c.point(c.size() - 1 - i) - mirror).norm() == 0.0);
  }
  CHECK_THROWS_AS(SamplingGrid::make(0, 1, 0, 1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SamplingGrid::make(1, 0, 0, 1), std::invalid_argument);
}

TEST_CASE("indicator fields") {
  const SamplingGrid g = SamplingGrid::make(0.0, 1.0, 0.0, 1.0, 0.1);
  const IndicatorField f = sample(g, "bump", [](const Vec2& p) { return -(p - Vec2(0.3, 0.7)).squaredNorm(); });
  CHECK((g.point(f.argmax()) - Vec2(0.3, 0.7)).norm() < 1e-12);
  const auto top = f.top_fraction(0.02);
  CHECK(top.size() == 3);
  CHECK(top.front() == f.argmax());
}

TEST_CASE("zero data gives zero indicators") {
  const PhasedObstacleIndicators ind(Eigen::MatrixXcd::Zero(16, 16), kParams.ks, PolarizationSet::standard());
  CHECK(ind.I2({0.3, 0.1}) == 0.0);
  CHECK(ind.I3({0.3, 0.1}, 2) == 0.0);
}

TEST_CASE("a point scatterer is located") {
  const Vec2 y(0.6, -0.4);
  const PhasedObstacleIndicators ind(point_scatterer(y, 64), kParams.ks, PolarizationSet::standard());
  const SamplingGrid g = SamplingGrid::make(-2.0, 2.0, -2.0, 2.0, 0.05);
  const IndicatorField i2 = sample(g, "I2", [&](const Vec2& p) { return ind.I2(p); });
  CHECK((g.point(i2.argmax()) - y).norm() < 1e-9);
  const IndicatorField i3 = sample(g, "I3", [&](const Vec2& p) { return ind.I3(p, 0); });
  CHECK((g.point(i3.argmax()) - y).norm() < 1e-9);
  // The sums decay away from the scatterer.
  CHECK(std::abs(ind.G(y + Vec2(3.0, 0.0), 0, 0)) < 0.3 * std::abs(ind.G(y, 0, 0)));
  CHECK(std::abs(ind.A(y + Vec2(0.0, 3.0), 1)) < 0.1 * std::abs(ind.A(y, 1)));
}

TEST_CASE("phased indicators ignore a global phase") {
  const Eigen::MatrixXcd u = plane_far_fields(disk_solver(), 32).at(Mode::S, Mode::S);
  const Complex phase = std::exp(kI * (kPi / 7.0));
  const PhasedObstacleIndicators a(u, kParams.ks, PolarizationSet::standard());
  const PhasedObstacleIndicators b(u * phase, kParams.ks, PolarizationSet::standard(), Combine::Sum);
  for (const Vec2& p : {Vec2(0.1, 0.2), Vec2(-1.0, 0.7)}) {
    CHECK(a.I2(p) == doctest::Approx(b.I2(p)).epsilon(1e-12));
    CHECK(a.I3(p, 5) == doctest::Approx(b.I3(p, 5)).epsilon(1e-12));
  }
}

TEST_CASE("max combination bounds the sum") {
  const Eigen::MatrixXcd u = plane_far_fields(disk_solver(), 32).at(Mode::S, Mode::S);
  const PhasedObstacleIndicators sum(u, kParams.ks, PolarizationSet::standard(), Combine::Sum);
  const PhasedObstacleIndicators max(u, kParams.ks, PolarizationSet::standard(), Combine::Max);
  const Vec2 p(0.4, 0.4);
  CHECK(max.I2(p) <= sum.I2(p));
  CHECK(3.0 * max.I2(p) >= sum.I2(p));
}

TEST_CASE("trapezoidal sums converge on refinement") {
  const PhasedObstacleIndicators coarse(plane_far_fields(disk_solver(), 64).at(Mode::S, Mode::S), kParams.ks,
                                        PolarizationSet::standard());
  const PhasedObstacleIndicators fine(plane_far_fields(disk_solver(), 128).at(Mode::S, Mode::S), kParams.ks,
                                      PolarizationSet::standard());
  for (const Vec2& p : {Vec2(0.5, 0.2), Vec2(1.5, -0.5), Vec2(-1.0, 1.0)}) {
    CHECK(std::fabs(coarse.I2(p) - fine.I2(p)) <= 1e-6 * fine.I2(p));
  }
}

TEST_CASE("cosine data identity") {
  const ObstacleSolver& solver = disk_solver();
  const std::size_t n = 16;
  const Vec2 z(4.0, 4.0);
  const Complex tau(0.5, 0.0);
  const auto q = PolarizationSet::standard();
  const FarFieldMatrix u = plane_far_fields(solver, n);
  const PhaselessDataset ds = synthesize_obstacle_dataset(solver, u.at(Mode::S, Mode::S), z, q, {0.0, tau});
  const PhaselessObstacleIndicators ind(ds, tau);
  const auto dirs = equispaced_directions(n);
  double worst = 0.0, scale = 0.0;
  for (std::size_t qi = 0; qi < 3; ++qi) {
    const PointSourceFarField v = point_source_far_field(solver, z, q.q[qi], tau, n);
    for (std::size_t j = 0; j < n; ++j) {
      const Complex src = v.s(static_cast<Eigen::Index>(j)) + tau * green_far_field(Mode::S, dirs[j], z, q.q[qi].vec(), kParams);
      for (std::size_t l = 0; l < n; ++l) {
        const Complex uu = u.at(Mode::S, Mode::S)(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l));
        const double expected = 2.0 * std::real(uu * std::conj(src)) + std::norm(src) -
                                std::norm(tau * q.q[qi].dot(dirs[j].perp()));
        worst = std::max(worst, std::fabs(ind.F(j, l, qi) - expected));
        scale = std::max(scale, std::fabs(expected));
      }
    }
  }
  CHECK(worst <= 1e-10 * scale);
}

TEST_CASE("no scatterer or no source gives no signal") {
  const auto q = PolarizationSet::standard();
  const ObstacleSolver empty = ObstacleSolver::build(ObstacleScene{{}, kParams});
  const PhaselessDataset a = synthesize_obstacle_dataset(empty, Vec2(4.0, 4.0), q, {0.0, 0.5}, 16);
  const PhaselessObstacleIndicators ia(a, 0.5);
  CHECK(std::fabs(ia.Iz0(Vec2(0.3, 0.3))) < 1e-20);
  const PhaselessDataset b = synthesize_obstacle_dataset(disk_solver(), Vec2(4.0, 4.0), q, {0.0}, 16);
  const PhaselessObstacleIndicators ib(b, 0.0);
  CHECK(ib.Iz0(Vec2(0.3, 0.3)) == 0.0);
  CHECK(ib.Iz0_tilde(Vec2(0.3, 0.3)) == 0.0);
  CHECK_THROWS_AS(PhaselessObstacleIndicators(b, 0.5), std::out_of_range);
}

TEST_CASE("cosine indicators are point symmetric about z0") {
  const Vec2 z0(4.0, 4.0);
  const PhaselessDataset ds = apply_noise(
      synthesize_obstacle_dataset(disk_solver(), z0, PolarizationSet::standard(), {0.0, 0.5}, 32),
      {NoiseKind::Relative, 0.1, 1});
  const PhaselessObstacleIndicators ind(ds, 0.5);
  CHECK(ind.z0() == z0);
  const SamplingGrid g = SamplingGrid::centered(z0, 1.0, 0.1);
  double worst = 0.0, worst_l = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec2 p = g.point(i);
    const Vec2 m = g.point(g.size() - 1 - i);
    const double a = ind.Iz0(p), b = ind.Iz0(m);
    worst = std::max(worst, std::fabs(a - b) / std::max(a, b));
    const double c = ind.Iz0(p, 3), d = ind.Iz0(m, 3);
    worst_l = std::max(worst_l, std::fabs(c - d) / std::max(c, d));
  }
  CHECK(worst <= 1e-12);
  CHECK(worst_l <= 1e-12);
}

TEST_CASE("the summed tilde indicator matches its single-direction terms") {
  const PhaselessDataset ds =
      synthesize_obstacle_dataset(disk_solver(), Vec2(4.0, 4.0), PolarizationSet::standard(), {0.0, 0.5}, 16);
  const PhaselessObstacleIndicators ind(ds, 0.5);
  const Vec2 p(0.2, -0.3);
  double sum = 0.0, sum_plain = 0.0;
  for (std::size_t l = 0; l < 16; ++l) {
    sum += ind.Iz0_tilde(p, l);
    sum_plain += ind.Iz0(p, l);
  }
  CHECK(ind.Iz0_tilde(p) == doctest::Approx(sum * 2.0 * kPi / 16.0).epsilon(1e-12));
  CHECK(ind.Iz0(p) == doctest::Approx(sum_plain * 2.0 * kPi / 16.0).epsilon(1e-12));
}
