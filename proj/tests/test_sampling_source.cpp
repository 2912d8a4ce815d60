#include <doctest.h>

#include <cmath>

#include "phaseless/sampling_obstacle.hpp"
#include "phaseless/sampling_source.hpp"

using namespace phaseless;

namespace {

Eigen::MatrixXcd forward(const SourceField& f, const std::vector<Direction>& theta, const FrequencyGrid& grid) {
  Eigen::MatrixXcd u(static_cast<Eigen::Index>(theta.size()), static_cast<Eigen::Index>(grid.n));
  for (std::size_t t = 0; t < theta.size(); ++t) {
    for (std::size_t j = 0; j < grid.n; ++j) {
      u(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) =
          source_far_field(f, Mode::S, theta[t], WaveParameters::make(grid.node(j), 1.0, 1.0));
    }
  }
  return u;
}

const std::vector<Direction> kUp{Direction::from_angle(kPi / 2.0)};

}  // namespace

TEST_CASE("H is constant along the observation ridge") {
  const FrequencyGrid grid;
  const PhasedSourceIndicators ind(forward(SourceField::rectangle(), kUp, grid), kUp, grid, 1.0);
  const Vec2 p(0.3, 1.2);
  for (double alpha : {-2.0, 0.5, 3.0}) {
    CHECK(std::abs(ind.H(p + alpha * kUp[0].perp(), 0) - ind.H(p, 0)) <= 1e-12 * std::abs(ind.H(p, 0)));
  }
}

TEST_CASE("zero data and argument checks") {
  const FrequencyGrid grid = FrequencyGrid::make(4, 4.0);
  const PhasedSourceIndicators ind(Eigen::MatrixXcd::Zero(1, 4), kUp, grid, 1.0);
  CHECK(ind.ITheta_S({0.0, 1.0}) == 0.0);
  CHECK_THROWS_AS(PhasedSourceIndicators(Eigen::MatrixXcd::Zero(2, 4), kUp, grid, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PhasedSourceIndicators(Eigen::MatrixXcd::Zero(1, 4), kUp, grid, 0.0), std::invalid_argument);
}

TEST_CASE("missing rows are ignored") {
  const FrequencyGrid grid = FrequencyGrid::make(6, 6.0);
  const std::vector<Direction> theta{Direction::from_angle(kPi / 2.0), Direction::from_angle(0.0)};
  const Eigen::MatrixXcd u = forward(SourceField::rectangle(), theta, grid);
  const PhasedSourceIndicators both(u, theta, grid, 1.0);
  const PhasedSourceIndicators one(u, theta, grid, 1.0, {false, true});
  const Vec2 p(1.5, 1.3);
  CHECK(one.ITheta_S(p) == doctest::Approx(std::abs(both.H(p, 0))));
}

TEST_CASE("the phased strip indicator peaks inside the strip") {
  const FrequencyGrid grid;
  const PhasedSourceIndicators ind(forward(SourceField::rectangle(), kUp, grid), kUp, grid, 1.0);
  const SamplingGrid g = SamplingGrid::make(1.5, 1.5, -1.0, 4.0, 0.01);
  const IndicatorField f = sample(g, "ITheta_S", [&](const Vec2& p) { return ind.ITheta_S(p); });
  const double y = g.point(f.argmax()).y();
  CHECK(y >= 1.0);
  CHECK(y <= 1.6);
}

TEST_CASE("phaseless source indicator") {
  const SourceField f = SourceField::rectangle();
  const std::vector<Direction> theta{Direction::from_angle(kPi / 2.0), Direction::from_angle(0.4)};
  const FrequencyGrid grid;
  const Vec2 z0(12.0, 12.0);
  const Complex tau(0.5, 0.0);
  const auto q = PolarizationSet::standard();
  const PhaselessDataset ds = synthesize_source_dataset(f, theta, grid, 1.0, 1.0, z0, q, {0.0, tau});
  const PhaselessSourceIndicators ind(ds, tau);
  CHECK(ind.z0() == z0);
  CHECK(ind.skipped().empty());

  SUBCASE("K is twice the real cross term") {
    double worst = 0.0, scale = 0.0;
    for (std::size_t t = 0; t < theta.size(); ++t) {
      for (int qi : arc_members(theta[t], Mode::S, q)) {
        for (std::size_t j = 0; j < grid.n; ++j) {
          const WaveParameters prm = ds.frequency_params(j);
          const Complex u = source_far_field(f, Mode::S, theta[t], prm);
          const Complex phi = tau * green_far_field(Mode::S, theta[t], z0, q.q[static_cast<std::size_t>(qi)].vec(), prm);
          const double expected = 2.0 * std::real(u * std::conj(phi));
          worst = std::max(worst, std::fabs(ind.K(t, j, static_cast<std::size_t>(qi)) - expected));
          scale = std::max(scale, std::fabs(expected));
        }
      }
    }
    CHECK(worst <= 1e-10 * scale);
  }

  SUBCASE("point symmetry about z0") {
    const SamplingGrid g = SamplingGrid::centered(z0, 1.0, 0.05);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double a = ind.ITheta_z0S(g.point(i));
      const double b = ind.ITheta_z0S(g.point(g.size() - 1 - i));
      worst = std::max(worst, std::fabs(a - b) / std::max(a, b));
    }
    CHECK(worst <= 1e-12);
  }

  SUBCASE("a global sign flip of the source leaves the indicator unchanged") {
    SourceField g = f;
    for (auto& c : g.pieces) {
      for (auto& term : c.f1.terms) term.c = -term.c;
      for (auto& term : c.f2.terms) term.c = -term.c;
    }
    const PhaselessSourceIndicators flipped(synthesize_source_dataset(g, theta, grid, 1.0, 1.0, z0, q, {0.0, tau}), tau);
    const Vec2 p(1.5, 1.3);
    CHECK(flipped.ITheta_z0S(p) == doctest::Approx(ind.ITheta_z0S(p)).epsilon(1e-10));
  }
}

TEST_CASE("directions without an admissible polarization are skipped") {
  PolarizationSet one{{Direction::from_angle(kPi / 4.0)}};
  const std::vector<Direction> theta{Direction::from_angle(-kPi / 4.0), Direction::from_angle(kPi)};
  const PhaselessDataset ds = synthesize_source_dataset(SourceField::rectangle(), theta, FrequencyGrid::make(4, 4.0), 1.0,
                                                        1.0, Vec2(6.0, 6.0), one, {0.0, 0.5});
  const PhaselessSourceIndicators ind(ds, 0.5);
  REQUIRE(ind.skipped().size() == 1);
  CHECK(ind.skipped()[0] == 1);
  CHECK_THROWS_AS(ind.K(1, 0, 0), std::out_of_range);
}

TEST_CASE("zero source gives no signal") {
  const PhaselessDataset ds =
      synthesize_source_dataset(SourceField::constant({0, 1, 0, 1}, Vec2::Zero()), kUp, FrequencyGrid::make(4, 4.0), 1.0,
                                1.0, Vec2(6.0, 6.0), PolarizationSet::standard(), {0.0, 0.5});
  CHECK(PhaselessSourceIndicators(ds, 0.5).ITheta_z0S({0.5, 0.5}) < 1e-12);
}
