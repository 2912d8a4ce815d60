#include "phaseless/sampling_source.hpp"

#include <cmath>
#include <stdexcept>

namespace phaseless {

PhasedSourceIndicators::PhasedSourceIndicators(Eigen::MatrixXcd u, std::vector<Direction> theta, FrequencyGrid grid,
                                               double mu, std::vector<bool> missing)
    : u_(std::move(u)), theta_(std::move(theta)), grid_(grid), missing_(std::move(missing)) {
  if (static_cast<std::size_t>(u_.rows()) != theta_.size() || static_cast<std::size_t>(u_.cols()) != grid_.n) {
    throw std::invalid_argument("far-field matrix does not match the directions and frequency grid");
  }
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  if (missing_.empty()) missing_.assign(theta_.size(), false);
  for (std::size_t j = 0; j < grid_.n; ++j) ks_.push_back(grid_.node(j) / std::sqrt(mu));
}

Complex PhasedSourceIndicators::H(const Vec2& p, std::size_t t) const {
  const double x = theta_.at(t).dot(p);
  Complex s = 0.0;
  for (std::size_t j = 0; j < grid_.n; ++j) {
    s += u_(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) * std::exp(kI * (ks_[j] * x));
  }
  return s * grid_.step();
}

double PhasedSourceIndicators::ITheta_S(const Vec2& p) const {
  double acc = 0.0;
  for (std::size_t t = 0; t < theta_.size(); ++t) {
    if (!missing_[t]) acc += std::abs(H(p, t));
  }
  return acc;
}

PhaselessSourceIndicators::PhaselessSourceIndicators(const PhaselessDataset& ds, Complex tau1)
    : theta_(ds.observation), z0_(ds.z) {
  if (ds.kind != DatasetKind::Source) throw std::invalid_argument("source indicators need a source dataset");
  const std::size_t nf = ds.frequencies.n;
  for (std::size_t j = 0; j < nf; ++j) ks_.push_back(ds.frequency_params(j).ks);
  const std::size_t nq = ds.polarizations.q.size();
  K_.assign(nq, std::vector<Eigen::VectorXd>(theta_.size()));
  for (std::size_t t = 0; t < theta_.size(); ++t) {
    bool any = false;
    for (int qi : arc_members(theta_[t], Mode::S, ds.polarizations)) {
      const auto q = static_cast<std::size_t>(qi);
      if (!ds.has_slice(tau1, q) || !ds.has_slice(0.0, q)) continue;
      const auto tt = static_cast<Eigen::Index>(t);
      const double a = std::norm(tau1 * ds.polarizations.q[q].dot(theta_[t].perp()));
      Eigen::VectorXd k = (ds.slice(tau1, q).modulus.row(tt).array().square() -
                           ds.slice(0.0, q).modulus.row(tt).array().square() - a)
                              .transpose();
      K_[q][t] = k;
      terms_.push_back({t, k * ds.frequencies.step()});
      any = true;
    }
    if (!any) skipped_.push_back(t);
  }
}

double PhaselessSourceIndicators::K(std::size_t t, std::size_t j, std::size_t q_index) const {
  const Eigen::VectorXd& k = K_.at(q_index).at(t);
  if (k.size() == 0) throw std::out_of_range("no admissible data for this direction and polarization");
  return k(static_cast<Eigen::Index>(j));
}

double PhaselessSourceIndicators::ITheta_z0S(const Vec2& p) const {
  const Vec2 r = p - z0_;
  double acc = 0.0;
  for (const Term& term : terms_) {
    const double x = theta_[term.t].dot(r);
    double s = 0.0;
    for (Eigen::Index j = 0; j < term.k.size(); ++j) s += term.k(j) * std::cos(ks_[static_cast<std::size_t>(j)] * x);
    acc += std::fabs(s);
  }
  return acc;
}

}  // namespace phaseless
