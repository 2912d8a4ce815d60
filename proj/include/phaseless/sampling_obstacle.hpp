#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "phaseless/elastic_core.hpp"
#include "phaseless/phaseless_data.hpp"

namespace phaseless {

// Points x_min + i h, y_min + j h covering [x_min, x_max] x [y_min, y_max].
struct SamplingGrid {
  double x_min = -4.0;
  double x_max = 4.0;
  double y_min = -4.0;
  double y_max = 4.0;
  double spacing = 0.05;

  // Throws std::invalid_argument for spacing <= 0 or an empty box.
  static SamplingGrid make(double x_min, double x_max, double y_min, double y_max, double spacing = 0.05);
  // Square window whose points are symmetric about `center`.
  static SamplingGrid centered(const Vec2& center, double half_width, double spacing = 0.05);

  std::size_t nx() const;
  std::size_t ny() const;
  std::size_t size() const { return nx() * ny(); }
  Vec2 point(std::size_t ix, std::size_t iy) const;
  Vec2 point(std::size_t index) const { return point(index % nx(), index / nx()); }
};

// Row-major values (x fastest) on a grid.
struct IndicatorField {
  SamplingGrid grid;
  std::vector<double> values;
  std::string name;
  std::vector<std::pair<std::string, std::string>> parameters;

  double at(std::size_t ix, std::size_t iy) const { return values[iy * grid.nx() + ix]; }
  std::size_t argmax() const;
  // Indices of the largest ceil(fraction * size) values.
  std::vector<std::size_t> top_fraction(double fraction) const;
};

// Parallel map of f over the grid points.
IndicatorField sample(const SamplingGrid& grid, std::string name, const std::function<double(const Vec2&)>& f);

enum class Combine { Sum, Max };

// Indicators driven by a phased shear-shear far-field matrix u(j, l) on the
// equispaced n x n grid (rows: observation, columns: incidence).
class PhasedObstacleIndicators {
 public:
  PhasedObstacleIndicators(Eigen::MatrixXcd u_ss, double ks, PolarizationSet q, Combine combine = Combine::Sum);

  // sum_j u(x_j, d_l) e^{i ks x_j.p} (q . x_j_perp) 2pi/n
  Complex G(const Vec2& p, std::size_t l, std::size_t q_index) const;
  // sum_l G(p, d_l, q) e^{-i ks d_l.p} (q . d_l_perp) 2pi/n
  Complex A(const Vec2& p, std::size_t q_index) const;
  double I2(const Vec2& p) const;
  double I3(const Vec2& p, std::size_t l) const;

 private:
  Eigen::MatrixXcd u_;
  double ks_;
  PolarizationSet q_;
  Combine combine_;
  std::vector<Direction> dirs_;
};

// Cosine-type indicators from phaseless data with strengths {0, tau1}.
class PhaselessObstacleIndicators {
 public:
  // Throws std::out_of_range when a (0, q) or (tau1, q) slice is missing.
  PhaselessObstacleIndicators(const PhaselessDataset& ds, Complex tau1);

  // |w(tau1)|^2 - |u|^2 - |tau1 q . x_j_perp|^2
  double F(std::size_t j, std::size_t l, std::size_t q_index) const;
  // sum_q |sum_j F cos(ks x_j.(p - z0)) 2pi/n|^2
  double Iz0(const Vec2& p, std::size_t l) const;
  double Iz0(const Vec2& p) const;
  // Cosine argument ks x_j.(p - z0) - ks p.d_l.
  double Iz0_tilde(const Vec2& p, std::size_t l) const;
  double Iz0_tilde(const Vec2& p) const;

  const Vec2& z0() const { return z0_; }

 private:
  std::vector<Eigen::MatrixXd> F_;  // per q, rows j, columns l
  std::vector<Direction> obs_;
  std::vector<Direction> inc_;
  double ks_;
  Vec2 z0_;
  double weight_;
};

}  // namespace phaseless
