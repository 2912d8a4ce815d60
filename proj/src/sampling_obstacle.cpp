#include "phaseless/sampling_obstacle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "phaseless/parallel.hpp"

namespace phaseless {

SamplingGrid SamplingGrid::make(double x_min, double x_max, double y_min, double y_max, double spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  if (!(x_max >= x_min) || !(y_max >= y_min)) throw std::invalid_argument("grid bounds are empty");
  return {x_min, x_max, y_min, y_max, spacing};
}

SamplingGrid SamplingGrid::centered(const Vec2& center, double half_width, double spacing) {
  if (!(spacing > 0.0) || !(half_width >= 0.0)) throw std::invalid_argument("invalid centered grid");
  const double half = std::floor(half_width / spacing + 1e-9) * spacing;
  return {center.x() - half, center.x() + half, center.y() - half, center.y() + half, spacing};
}

std::size_t SamplingGrid::nx() const {
  return static_cast<std::size_t>(std::floor((x_max - x_min) / spacing + 1e-9)) + 1;
}

std::size_t SamplingGrid::ny() const {
  return static_cast<std::size_t>(std::floor((y_max - y_min) / spacing + 1e-9)) + 1;
}

Vec2 SamplingGrid::point(std::size_t ix, std::size_t iy) const {
  // Offsets from the window center keep symmetric windows exactly symmetric.
  const double cx = 0.5 * (x_min + x_max);
  const double cy = 0.5 * (y_min + y_max);
  const double ox = (static_cast<double>(ix) - 0.5 * static_cast<double>(nx() - 1)) * spacing;
  const double oy = (static_cast<double>(iy) - 0.5 * static_cast<double>(ny() - 1)) * spacing;
  return {cx + ox, cy + oy};
}

std::size_t IndicatorField::argmax() const {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

std::vector<std::size_t> IndicatorField::top_fraction(double fraction) const {
  const auto k = std::min(values.size(),
                          std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fraction * values.size()))));
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) { return values[a] > values[b] || (values[a] == values[b] && a < b); });
  idx.resize(k);
  return idx;
}

IndicatorField sample(const SamplingGrid& grid, std::string name, const std::function<double(const Vec2&)>& f) {
  IndicatorField out{grid, std::vector<double>(grid.size()), std::move(name), {}};
  parallel_for(grid.size(), 64, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out.values[i] = f(grid.point(i));
  });
  return out;
}

PhasedObstacleIndicators::PhasedObstacleIndicators(Eigen::MatrixXcd u_ss, double ks, PolarizationSet q,
                                                   Combine combine)
    : u_(std::move(u_ss)), ks_(ks), q_(std::move(q)), combine_(combine) {
  if (u_.rows() != u_.cols() || u_.rows() == 0) throw std::invalid_argument("far-field matrix must be square");
  dirs_ = equispaced_directions(static_cast<std::size_t>(u_.rows()));
}

Complex PhasedObstacleIndicators::G(const Vec2& p, std::size_t l, std::size_t q_index) const {
  const std::size_t n = dirs_.size();
  const Direction& q = q_.q.at(q_index);
  Complex s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    s += u_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) * std::exp(kI * (ks_ * dirs_[j].dot(p))) *
         q.dot(dirs_[j].perp());
  }
  return s * (2.0 * kPi / static_cast<double>(n));
}

Complex PhasedObstacleIndicators::A(const Vec2& p, std::size_t q_index) const {
  const std::size_t n = dirs_.size();
  const Direction& q = q_.q.at(q_index);
  const double w = 2.0 * kPi / static_cast<double>(n);
  Eigen::RowVectorXcd e(static_cast<Eigen::Index>(n));
  Eigen::VectorXcd f(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const double a = q.dot(dirs_[j].perp()) * w;
    const Complex ph = std::exp(kI * (ks_ * dirs_[j].dot(p)));
    e(static_cast<Eigen::Index>(j)) = ph * a;
    f(static_cast<Eigen::Index>(j)) = std::conj(ph) * a;
  }
  return (e * u_ * f)(0, 0);
}

double PhasedObstacleIndicators::I2(const Vec2& p) const {
  const std::size_t n = dirs_.size();
  const double w = 2.0 * kPi / static_cast<double>(n);
  // q . x_perp is linear in q, so two products serve every polarization.
  Eigen::Matrix<Complex, 2, Eigen::Dynamic> e(2, static_cast<Eigen::Index>(n));
  Eigen::Matrix<Complex, Eigen::Dynamic, 2> f(static_cast<Eigen::Index>(n), 2);
  for (std::size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const Vec2 perp = dirs_[j].perp();
    const Complex ph = std::exp(kI * (ks_ * dirs_[j].dot(p))) * w;
    e(0, jj) = ph * perp.x();
    e(1, jj) = ph * perp.y();
    f(jj, 0) = std::conj(ph) * perp.x();
    f(jj, 1) = std::conj(ph) * perp.y();
  }
  const Eigen::Matrix2cd core = e * u_ * f;
  double acc = 0.0;
  for (const Direction& q : q_.q) {
    const Vec2& v = q.vec();
    const Complex a = v.x() * v.x() * core(0, 0) + v.x() * v.y() * (core(0, 1) + core(1, 0)) + v.y() * v.y() * core(1, 1);
    acc = combine_ == Combine::Sum ? acc + std::abs(a) : std::max(acc, std::abs(a));
  }
  return acc;
}

double PhasedObstacleIndicators::I3(const Vec2& p, std::size_t l) const {
  double acc = 0.0;
  for (std::size_t qi = 0; qi < q_.q.size(); ++qi) {
    const double g = std::abs(G(p, l, qi));
    acc = combine_ == Combine::Sum ? acc + g : std::max(acc, g);
  }
  return acc;
}

PhaselessObstacleIndicators::PhaselessObstacleIndicators(const PhaselessDataset& ds, Complex tau1)
    : obs_(ds.observation), inc_(ds.incidence), ks_(ds.params.ks), z0_(ds.z) {
  if (ds.kind != DatasetKind::Obstacle) throw std::invalid_argument("obstacle indicators need an obstacle dataset");
  weight_ = 2.0 * kPi / static_cast<double>(obs_.size());
  for (std::size_t qi = 0; qi < ds.polarizations.q.size(); ++qi) {
    const Eigen::MatrixXd& w = ds.slice(tau1, qi).modulus;
    const Eigen::MatrixXd& u = ds.slice(0.0, qi).modulus;
    Eigen::MatrixXd f = w.array().square() - u.array().square();
    for (std::size_t j = 0; j < obs_.size(); ++j) {
      const double t = std::norm(tau1 * ds.polarizations.q[qi].dot(obs_[j].perp()));
      f.row(static_cast<Eigen::Index>(j)).array() -= t;
    }
    F_.push_back(std::move(f));
  }
}

double PhaselessObstacleIndicators::F(std::size_t j, std::size_t l, std::size_t q_index) const {
  return F_.at(q_index)(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l));
}

double PhaselessObstacleIndicators::Iz0(const Vec2& p, std::size_t l) const {
  const Vec2 r = p - z0_;
  Eigen::VectorXd c(static_cast<Eigen::Index>(obs_.size()));
  for (std::size_t j = 0; j < obs_.size(); ++j) c(static_cast<Eigen::Index>(j)) = std::cos(ks_ * obs_[j].dot(r));
  double acc = 0.0;
  for (const auto& f : F_) {
    const double v = f.col(static_cast<Eigen::Index>(l)).dot(c) * weight_;
    acc += v * v;
  }
  return acc;
}

double PhaselessObstacleIndicators::Iz0(const Vec2& p) const {
  const Vec2 r = p - z0_;
  Eigen::VectorXd c(static_cast<Eigen::Index>(obs_.size()));
  for (std::size_t j = 0; j < obs_.size(); ++j) c(static_cast<Eigen::Index>(j)) = std::cos(ks_ * obs_[j].dot(r));
  double acc = 0.0;
  for (const auto& f : F_) {
    const Eigen::VectorXd v = (f.transpose() * c) * weight_;
    acc += v.squaredNorm();
  }
  return acc * (2.0 * kPi / static_cast<double>(inc_.size()));
}

double PhaselessObstacleIndicators::Iz0_tilde(const Vec2& p, std::size_t l) const {
  const Vec2 r = p - z0_;
  const double b = ks_ * inc_.at(l).dot(p);
  Eigen::VectorXd c(static_cast<Eigen::Index>(obs_.size()));
  for (std::size_t j = 0; j < obs_.size(); ++j) c(static_cast<Eigen::Index>(j)) = std::cos(ks_ * obs_[j].dot(r) - b);
  double acc = 0.0;
  for (const auto& f : F_) {
    const double v = f.col(static_cast<Eigen::Index>(l)).dot(c) * weight_;
    acc += v * v;
  }
  return acc;
}

double PhaselessObstacleIndicators::Iz0_tilde(const Vec2& p) const {
  const Vec2 r = p - z0_;
  const auto n = static_cast<Eigen::Index>(obs_.size());
  const auto m = static_cast<Eigen::Index>(inc_.size());
  Eigen::VectorXd ca(n), sa(n), cb(m), sb(m);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double a = ks_ * obs_[static_cast<std::size_t>(j)].dot(r);
    ca(j) = std::cos(a);
    sa(j) = std::sin(a);
  }
  for (Eigen::Index l = 0; l < m; ++l) {
    const double b = ks_ * inc_[static_cast<std::size_t>(l)].dot(p);
    cb(l) = std::cos(b);
    sb(l) = std::sin(b);
  }
  double acc = 0.0;
  for (const auto& f : F_) {
    // cos(a - b) = cos a cos b + sin a sin b
    const Eigen::VectorXd v = ((f.transpose() * ca).cwiseProduct(cb) + (f.transpose() * sa).cwiseProduct(sb)) * weight_;
    acc += v.squaredNorm();
  }
  return acc * (2.0 * kPi / static_cast<double>(m));
}

}  // namespace phaseless
