#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "phaseless/elastic_core.hpp"
#include "phaseless/forward_source.hpp"
#include "phaseless/phaseless_data.hpp"

namespace phaseless {

// Indicators from phased shear far fields u(theta_t, k_j) (rows: directions,
// columns: frequency nodes). Rows flagged missing are ignored.
class PhasedSourceIndicators {
 public:
  PhasedSourceIndicators(Eigen::MatrixXcd u, std::vector<Direction> theta, FrequencyGrid grid, double mu,
                         std::vector<bool> missing = {});

  // sum_j u(xhat_t, k_j) e^{i ks_j xhat_t.p} dk
  Complex H(const Vec2& p, std::size_t t) const;
  // sum_t |H(p, xhat_t)|
  double ITheta_S(const Vec2& p) const;

 private:
  Eigen::MatrixXcd u_;
  std::vector<Direction> theta_;
  FrequencyGrid grid_;
  std::vector<double> ks_;
  std::vector<bool> missing_;
};

// Cosine-type indicator from phaseless source data with strengths {0, tau1}.
class PhaselessSourceIndicators {
 public:
  PhaselessSourceIndicators(const PhaselessDataset& ds, Complex tau1);

  // |u_{F+z}|^2 - |u_F|^2 - |tau1 q . xhat_perp|^2
  double K(std::size_t t, std::size_t j, std::size_t q_index) const;
  // sum over xhat in theta and admissible q of |sum_j K cos(ks_j xhat.(p - z0)) dk|
  double ITheta_z0S(const Vec2& p) const;

  const Vec2& z0() const { return z0_; }
  // Directions without an admissible polarization, by index.
  const std::vector<std::size_t>& skipped() const { return skipped_; }

 private:
  struct Term {
    std::size_t t;
    Eigen::VectorXd k;  // over frequency nodes, already weighted by dk
  };
  std::vector<Term> terms_;
  std::vector<Direction> theta_;
  std::vector<double> ks_;
  std::vector<std::vector<Eigen::VectorXd>> K_;  // [q][t] over frequencies
  std::vector<std::size_t> skipped_;
  Vec2 z0_;
};

}  // namespace phaseless
