#include "phaseless/forward_obstacle.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phaseless/parallel.hpp"

namespace phaseless {
namespace {

constexpr std::size_t kPolygonResolution = 2048;
constexpr std::size_t kFourierSamples = 256;
constexpr std::size_t kColumnGrain = 8;

std::shared_ptr<const std::vector<Vec2>> make_polygon(const Boundary::Curve& point) {
  auto poly = std::make_shared<std::vector<Vec2>>();
  poly->reserve(kPolygonResolution);
  for (std::size_t i = 0; i < kPolygonResolution; ++i) {
    poly->push_back(point(2.0 * kPi * static_cast<double>(i) / kPolygonResolution));
  }
  return poly;
}

// Coefficients c_n, n = -K..K, of Z(t) = x1(t) + i x2(t) = sum c_n e^{int},
// from the trapezoidal DFT of kFourierSamples samples.
std::shared_ptr<const std::vector<Complex>> make_fourier(const Boundary::Curve& point) {
  const std::size_t m = kFourierSamples;
  const auto k_max = static_cast<int>(m / 2 - 1);
  std::vector<Complex> z(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 x = point(2.0 * kPi * static_cast<double>(i) / m);
    z[i] = Complex(x.x(), x.y());
  }
  auto coeffs = std::make_shared<std::vector<Complex>>(2 * k_max + 1);
  for (int n = -k_max; n <= k_max; ++n) {
    Complex sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      sum += z[i] * std::exp(-kI * (2.0 * kPi * n * static_cast<double>(i) / m));
    }
    (*coeffs)[static_cast<std::size_t>(n + k_max)] = sum / static_cast<double>(m);
  }
  return coeffs;
}

}  // namespace

Boundary::Boundary(std::string tag, Curve point, Curve tangent, Vec2 interior)
    : tag_(std::move(tag)),
      point_(std::move(point)),
      tangent_(std::move(tangent)),
      interior_(std::move(interior)),
      polygon_(make_polygon(point_)),
      fourier_(make_fourier(point_)) {
  if (!contains(interior_)) throw std::invalid_argument("boundary interior point is not inside the curve");
}

Boundary Boundary::circle(const Vec2& center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("circle radius must be positive");
  return Boundary(
      "circle", [center, radius](double t) { return Vec2(center + radius * Vec2(std::cos(t), std::sin(t))); },
      [radius](double t) { return Vec2(radius * Vec2(-std::sin(t), std::cos(t))); }, center);
}

Boundary Boundary::kite(const Vec2& shift) {
  return Boundary(
      "kite",
      [shift](double t) {
        return Vec2(std::cos(t) + 0.65 * std::cos(2.0 * t) - 0.65 + shift.x(), 1.5 * std::sin(t) + shift.y());
      },
      [](double t) { return Vec2(-std::sin(t) - 1.3 * std::sin(2.0 * t), 1.5 * std::cos(t)); }, shift);
}

Boundary Boundary::shifted(const Vec2& h) const {
  Curve p = point_;
  return Boundary(tag_, [p, h](double t) { return Vec2(p(t) + h); }, tangent_, interior_ + h);
}

Vec2 Boundary::outward_normal(double t) const {
  const Vec2 tau = tangent_(t);
  return Vec2(tau.y(), -tau.x()).normalized();
}

std::vector<Vec2> Boundary::samples(std::size_t m) const {
  std::vector<Vec2> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back(point_(2.0 * kPi * static_cast<double>(i) / m));
  return out;
}

std::vector<Vec2> Boundary::complex_offset(std::size_t m, double delta) const {
  const auto& c = *fourier_;
  const auto k_max = static_cast<int>(c.size() / 2);
  // Drop coefficients at rounding level: amplified by e^{|n| delta} they
  // would only inject noise.
  double c_max = 0.0;
  for (const Complex& v : c) c_max = std::max(c_max, std::abs(v));
  std::vector<Vec2> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double t = 2.0 * kPi * static_cast<double>(i) / m;
    Complex z = 0.0;
    for (int n = -k_max; n <= k_max; ++n) {
      const Complex cn = c[static_cast<std::size_t>(n + k_max)];
      if (std::abs(cn) <= 1e-14 * c_max) continue;
      z += cn * std::exp(-n * delta) * std::exp(kI * (n * t));
    }
    out.emplace_back(z.real(), z.imag());
  }
  return out;
}

double Boundary::perimeter() const {
  // Periodic trapezoid: spectrally accurate for smooth curves.
  constexpr std::size_t n = 512;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += tangent_(2.0 * kPi * static_cast<double>(i) / n).norm();
  return sum * 2.0 * kPi / n;
}

bool Boundary::contains(const Vec2& x) const {
  const auto& poly = *polygon_;
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y() > x.y()) != (b.y() > x.y())) {
      const double xc = a.x() + (x.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (x.x() < xc) inside = !inside;
    }
  }
  return inside;
}

double Boundary::distance(const Vec2& x) const {
  const auto& poly = *polygon_;
  std::size_t best = 0;
  double best_d = INFINITY;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const double d = (poly[i] - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  // Golden-section refinement of |x(t) - x| around the closest sample.
  const double dt = 2.0 * kPi / static_cast<double>(poly.size());
  double a = dt * (static_cast<double>(best) - 1.0);
  double b = dt * (static_cast<double>(best) + 1.0);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  auto f = [&](double t) { return (point_(t) - x).squaredNorm(); };
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 60; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return std::sqrt(std::min({best_d, fc, fd}));
}

void ObstacleScene::validate() const {
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    for (std::size_t j = i + 1; j < boundaries.size(); ++j) {
      const auto si = boundaries[i].samples(512);
      const auto sj = boundaries[j].samples(512);
      for (const Vec2& x : si) {
        if (boundaries[j].contains(x) || boundaries[j].distance(x) < 1e-9) {
          throw std::invalid_argument("obstacle boundaries overlap");
        }
      }
      for (const Vec2& x : sj) {
        if (boundaries[i].contains(x)) throw std::invalid_argument("obstacle boundaries overlap");
      }
    }
  }
}

bool ObstacleScene::inside_any(const Vec2& x) const {
  return std::any_of(boundaries.begin(), boundaries.end(), [&](const Boundary& b) { return b.contains(x); });
}

double ObstacleScene::distance(const Vec2& x) const {
  double d = INFINITY;
  for (const Boundary& b : boundaries) d = std::min(d, b.distance(x));
  return d;
}

ObstacleSolver ObstacleSolver::build(const ObstacleScene& scene, const SolverOptions& options) {
  scene.validate();
  if (options.placement == SourcePlacement::Scaled && !(options.source_scale > 0.0 && options.source_scale < 1.0)) {
    throw std::invalid_argument("source_scale must lie in (0, 1)");
  }
  if (options.placement == SourcePlacement::ComplexOffset && !(options.source_offset > 0.0)) {
    throw std::invalid_argument("source_offset must be positive");
  }
  ObstacleSolver s;
  s.scene_ = scene;
  s.options_ = options;
  const double wavelength = scene.params.shear_wavelength();
  for (const Boundary& b : scene.boundaries) {
    auto m = static_cast<std::size_t>(std::ceil(options.points_per_wavelength * b.perimeter() / wavelength));
    m = std::max(m, options.min_collocation);
    m += m % 2;
    const std::size_t ns = m / 2;
    for (const Vec2& x : b.samples(m)) s.collocation_.push_back(x);
    std::vector<Vec2> src;
    if (options.placement == SourcePlacement::ComplexOffset) {
      src = b.complex_offset(ns, options.source_offset);
    } else {
      for (const Vec2& x : b.samples(ns)) src.push_back(b.interior() + options.source_scale * (x - b.interior()));
    }
    for (const Vec2& y : src) {
      if (!b.contains(y)) throw std::invalid_argument("source contour leaves the obstacle; reduce the offset");
      s.sources_.push_back(y);
    }
    s.collocation_per_boundary_.push_back(m);
  }
  auto& diag = s.diagnostics_;
  diag.collocation_points = s.collocation_.size();
  diag.source_points = s.sources_.size();
  if (s.sources_.empty()) return s;

  const std::size_t rows = 2 * s.collocation_.size();
  const std::size_t cols = 2 * s.sources_.size();
  Eigen::MatrixXcd a(rows, cols);
  parallel_for(s.collocation_.size(), 16, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t k = 0; k < s.sources_.size(); ++k) {
        a.block<2, 2>(2 * i, 2 * k) = green_tensor(scene.params, s.collocation_[i], s.sources_[k]);
      }
    }
  });

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  diag.singular_values = static_cast<std::size_t>(sv.size());
  diag.largest_singular_value = sv.size() > 0 ? sv(0) : 0.0;
  std::size_t kept = 0;
  while (kept < static_cast<std::size_t>(sv.size()) && sv(static_cast<Eigen::Index>(kept)) > options.svd_cutoff * sv(0)) {
    ++kept;
  }
  diag.discarded = diag.singular_values - kept;
  diag.smallest_kept_singular_value = kept > 0 ? sv(static_cast<Eigen::Index>(kept - 1)) : 0.0;
  diag.conditioning_warning = 2 * diag.discarded > diag.singular_values;

  const auto k = static_cast<Eigen::Index>(kept);
  const Eigen::VectorXd inv = sv.head(k).cwiseInverse();
  s.pseudo_inverse_ = svd.matrixV().leftCols(k) * inv.asDiagonal() * svd.matrixU().leftCols(k).adjoint();

  const Direction d = Direction::from_angle(0.0);
  const Eigen::MatrixXcd coeffs = s.solve(s.plane_wave_data(Mode::P, std::span(&d, 1)));
  diag.boundary_residual = s.boundary_residual(
      coeffs.col(0), [&](const Vec2& x) { return plane_wave(Mode::P, d, scene.params, x); },
      options.residual_refinement);
  diag.degraded = !(diag.boundary_residual <= options.residual_tolerance);
  return s;
}

Eigen::MatrixXcd ObstacleSolver::solve(const Eigen::MatrixXcd& boundary_values) const {
  if (static_cast<std::size_t>(boundary_values.rows()) != 2 * collocation_.size()) {
    throw std::invalid_argument("boundary data size does not match the collocation grid");
  }
  if (empty()) return Eigen::MatrixXcd(0, boundary_values.cols());
  Eigen::MatrixXcd out(pseudo_inverse_.rows(), boundary_values.cols());
  parallel_for(static_cast<std::size_t>(boundary_values.cols()), kColumnGrain, [&](std::size_t b, std::size_t e) {
    const auto n = static_cast<Eigen::Index>(e - b);
    out.middleCols(static_cast<Eigen::Index>(b), n) =
        pseudo_inverse_ * boundary_values.middleCols(static_cast<Eigen::Index>(b), n);
  });
  return out;
}

Eigen::MatrixXcd ObstacleSolver::plane_wave_data(Mode mode, std::span<const Direction> incidence) const {
  Eigen::MatrixXcd data(2 * collocation_.size(), static_cast<Eigen::Index>(incidence.size()));
  for (std::size_t l = 0; l < incidence.size(); ++l) {
    for (std::size_t i = 0; i < collocation_.size(); ++i) {
      data.block<2, 1>(2 * i, l) = -plane_wave(mode, incidence[l], params(), collocation_[i]);
    }
  }
  return data;
}

Eigen::VectorXcd ObstacleSolver::point_source_data(const Vec2& z, const Vec2& q, Complex tau) const {
  Eigen::VectorXcd data(2 * collocation_.size());
  const CVec2 qc = q.cast<Complex>();
  for (std::size_t i = 0; i < collocation_.size(); ++i) {
    data.segment<2>(2 * i) = -tau * (green_tensor(params(), collocation_[i], z) * qc);
  }
  return data;
}

Eigen::MatrixXcd ObstacleSolver::far_field_operator(Mode n, std::span<const Direction> observation) const {
  const double k = params().wavenumber(n);
  Eigen::MatrixXcd op(static_cast<Eigen::Index>(observation.size()), 2 * sources_.size());
  for (std::size_t j = 0; j < observation.size(); ++j) {
    const Direction& xh = observation[j];
    const Vec2 pol = n == Mode::P ? xh.vec() : xh.perp();
    for (std::size_t s = 0; s < sources_.size(); ++s) {
      const Complex ph = std::exp(-kI * (k * xh.dot(sources_[s])));
      op(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(2 * s)) = ph * pol.x();
      op(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(2 * s + 1)) = ph * pol.y();
    }
  }
  return op;
}

ScatteredField ObstacleSolver::field(const Eigen::VectorXcd& coefficients) const {
  return ScatteredField(params(), sources_, coefficients);
}

double ObstacleSolver::boundary_residual(const Eigen::VectorXcd& coefficients,
                                         const std::function<CVec2(const Vec2&)>& incident,
                                         std::size_t refinement) const {
  const ScatteredField f = field(coefficients);
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t b = 0; b < scene_.boundaries.size(); ++b) {
    for (const Vec2& x : scene_.boundaries[b].samples(refinement * collocation_per_boundary_[b] + 1)) {
      const CVec2 uin = incident(x);
      err = std::max(err, (f.displacement(x) + uin).norm());
      ref = std::max(ref, uin.norm());
    }
  }
  return ref > 0.0 ? err / ref : err;
}

ScatteredField::ScatteredField(WaveParameters params, std::vector<Vec2> sources, Eigen::VectorXcd coefficients)
    : params_(params), sources_(std::move(sources)), coefficients_(std::move(coefficients)) {
  if (static_cast<std::size_t>(coefficients_.size()) != 2 * sources_.size()) {
    throw std::invalid_argument("coefficient count does not match source count");
  }
}

CVec2 ScatteredField::displacement(const Vec2& x) const {
  CVec2 u = CVec2::Zero();
  for (std::size_t k = 0; k < sources_.size(); ++k) {
    u += green_tensor(params_, x, sources_[k]) * coefficients_.segment<2>(2 * k);
  }
  return u;
}

Complex ScatteredField::far_field(Mode n, const Direction& xhat) const {
  Complex sum = 0.0;
  for (std::size_t k = 0; k < sources_.size(); ++k) {
    const Vec2 c_re(coefficients_(2 * k).real(), coefficients_(2 * k + 1).real());
    const Vec2 c_im(coefficients_(2 * k).imag(), coefficients_(2 * k + 1).imag());
    sum += green_far_field(n, xhat, sources_[k], c_re, params_) +
           kI * green_far_field(n, xhat, sources_[k], c_im, params_);
  }
  return sum;
}

CVec2 ScatteredField::traction(const Vec2& x, const Vec2& normal, double h) const {
  const Vec2 e1(h, 0.0);
  const Vec2 e2(0.0, h);
  const CVec2 d1 = (displacement(x + e1) - displacement(x - e1)) / (2.0 * h);
  const CVec2 d2 = (displacement(x + e2) - displacement(x - e2)) / (2.0 * h);
  const Complex div = d1(0) + d2(1);
  const Complex curl = d1(1) - d2(0);  // div-perp: d1 u2 - d2 u1
  const CVec2 nu = normal.cast<Complex>();
  const CVec2 nu_perp = Vec2(-normal.y(), normal.x()).cast<Complex>();
  const CVec2 directional = normal.x() * d1 + normal.y() * d2;
  return 2.0 * params_.mu * directional + params_.lambda * div * nu - params_.mu * curl * nu_perp;
}

FarFieldMatrix::FarFieldMatrix(std::size_t n) : n_(n) {
  for (auto& m : data_) m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

std::string FarFieldMatrix::pair_name(Mode incident, Mode far) {
  return std::string(mode_name(incident)) + std::string(mode_name(far));
}

FarFieldMatrix plane_far_fields(const ObstacleSolver& solver, std::size_t n) {
  FarFieldMatrix out(n);
  if (solver.empty()) return out;
  const auto dirs = equispaced_directions(n);
  const Eigen::MatrixXcd ep = solver.far_field_operator(Mode::P, dirs);
  const Eigen::MatrixXcd es = solver.far_field_operator(Mode::S, dirs);
  for (Mode m : {Mode::P, Mode::S}) {
    const Eigen::MatrixXcd coeffs = solver.solve(solver.plane_wave_data(m, dirs));
    Eigen::MatrixXcd& up = out.at(m, Mode::P);
    Eigen::MatrixXcd& us = out.at(m, Mode::S);
    parallel_for(n, kColumnGrain, [&](std::size_t b, std::size_t e) {
      const auto cols = static_cast<Eigen::Index>(e - b);
      const auto first = static_cast<Eigen::Index>(b);
      up.middleCols(first, cols) = ep * coeffs.middleCols(first, cols);
      us.middleCols(first, cols) = es * coeffs.middleCols(first, cols);
    });
  }
  return out;
}

namespace {
PointSourceFarField point_source_impl(const ObstacleSolver& solver, const Vec2& z, const Direction& q,
                                      Complex tau, std::size_t n) {
  PointSourceFarField out{Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n)),
                          Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n))};
  if (solver.empty()) return out;
  const auto dirs = equispaced_directions(n);
  const Eigen::MatrixXcd coeffs = solver.solve(solver.point_source_data(z, q.vec(), tau));
  out.p = solver.far_field_operator(Mode::P, dirs) * coeffs;
  out.s = solver.far_field_operator(Mode::S, dirs) * coeffs;
  return out;
}
}  // namespace

PointSourceFarField point_source_far_field(const ObstacleSolver& solver, const Vec2& z, const Direction& q,
                                           Complex tau, std::size_t n) {
  const ObstacleScene& scene = solver.scene();
  if (scene.inside_any(z) || (!scene.boundaries.empty() && scene.distance(z) < 1e-9)) {
    throw std::invalid_argument("point source lies inside an obstacle");
  }
  return point_source_impl(solver, z, q, tau, n);
}

PointSourceFarField interior_source_far_field(const ObstacleSolver& solver, const Vec2& z, const Direction& q,
                                              Complex tau, std::size_t n) {
  return point_source_impl(solver, z, q, tau, n);
}

CompositeFarField composite_far_field(const FarFieldMatrix& u, const PointSourceFarField& v, const Vec2& z,
                                      const Direction& q, Complex tau, const WaveParameters& params) {
  const std::size_t n = u.size();
  if (static_cast<std::size_t>(v.p.size()) != n || static_cast<std::size_t>(v.s.size()) != n) {
    throw std::invalid_argument("composite_far_field: point-source far field has wrong length");
  }
  const auto dirs = equispaced_directions(n);
  Eigen::VectorXcd src_p(static_cast<Eigen::Index>(n));
  Eigen::VectorXcd src_s(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    src_p(static_cast<Eigen::Index>(j)) = v.p(static_cast<Eigen::Index>(j)) + tau * green_far_field(Mode::P, dirs[j], z, q.vec(), params);
    src_s(static_cast<Eigen::Index>(j)) = v.s(static_cast<Eigen::Index>(j)) + tau * green_far_field(Mode::S, dirs[j], z, q.vec(), params);
  }
  CompositeFarField w;
  for (Mode m : {Mode::P, Mode::S}) {
    const std::size_t i = m == Mode::P ? 0 : 1;
    w.p[i] = u.at(m, Mode::P).colwise() + src_p;
    w.s[i] = u.at(m, Mode::S).colwise() + src_s;
  }
  return w;
}

EnergyFlux energy_flux(const ObstacleScene& scene, const ScatteredField& field, double r, std::size_t nq) {
  for (const Boundary& b : scene.boundaries) {
    for (const Vec2& x : b.samples(256)) {
      if (!(x.norm() < r)) throw std::invalid_argument("energy_flux: circle does not enclose the obstacles");
    }
  }
  if (nq == 0) throw std::invalid_argument("energy_flux: empty quadrature");
  const WaveParameters& prm = field.params();
  const double h = 1e-4 * prm.shear_wavelength();
  const auto dirs = equispaced_directions(nq);
  std::vector<double> flux_terms(nq);
  std::vector<double> far_terms(nq);
  std::vector<double> scaled_terms(nq);
  const double scale_p = prm.kp / (2.0 * kPi * prm.omega);
  const double scale_s = prm.ks / (2.0 * kPi * prm.omega);
  parallel_for(nq, 8, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const Vec2 x = r * dirs[i].vec();
      const CVec2 u = field.displacement(x);
      const CVec2 t = field.traction(x, dirs[i].vec(), h);
      flux_terms[i] = std::imag(u(0) * std::conj(t(0)) + u(1) * std::conj(t(1)));
      const double ap = std::norm(field.far_field(Mode::P, dirs[i]));
      const double as = std::norm(field.far_field(Mode::S, dirs[i]));
      far_terms[i] = prm.kp * ap + prm.ks * as;
      scaled_terms[i] = prm.kp * scale_p * ap + prm.ks * scale_s * as;
    }
  });
  EnergyFlux out;
  const double w_circle = 2.0 * kPi * r / static_cast<double>(nq);
  const double w_sphere = 2.0 * kPi / static_cast<double>(nq);
  for (std::size_t i = 0; i < nq; ++i) {
    out.flux += flux_terms[i];
    out.far_field_integral += far_terms[i];
    out.flux_normalized_integral += scaled_terms[i];
  }
  out.flux *= -4.0 * prm.omega * w_circle;
  out.far_field_integral *= w_sphere;
  out.flux_normalized_integral *= w_sphere;
  return out;
}

}  // namespace phaseless
