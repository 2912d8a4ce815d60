#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "phaseless/elastic_core.hpp"

namespace phaseless {

// Closed counterclockwise parametric curve x(t), t in [0, 2 pi).
class Boundary {
 public:
  using Curve = std::function<Vec2(double)>;

  Boundary(std::string tag, Curve point, Curve tangent, Vec2 interior);

  // (a,b) + radius (cos t, sin t).
  static Boundary circle(const Vec2& center, double radius);
  // (cos t + 0.65 cos 2t - 0.65, 1.5 sin t) + shift.
  static Boundary kite(const Vec2& shift = Vec2::Zero());

  Boundary shifted(const Vec2& h) const;

  Vec2 point(double t) const { return point_(t); }
  Vec2 tangent(double t) const { return tangent_(t); }
  Vec2 outward_normal(double t) const;
  // x(t_i) for t_i = 2 pi i / m.
  std::vector<Vec2> samples(std::size_t m) const;
  // Z(t_i + i delta) for the analytic extension Z(t) = x1(t) + i x2(t) of the
  // parameterization (a trigonometric interpolant of the curve); delta > 0
  // moves the points inside along the curve's own analytic structure.
  std::vector<Vec2> complex_offset(std::size_t m, double delta) const;
  double perimeter() const;
  const Vec2& interior() const { return interior_; }
  const std::string& tag() const { return tag_; }

  bool contains(const Vec2& x) const;
  // Distance from x to the curve, resolved to ~1e-6 of the curve size.
  double distance(const Vec2& x) const;

 private:
  std::string tag_;
  Curve point_;
  Curve tangent_;
  Vec2 interior_;
  std::shared_ptr<const std::vector<Vec2>> polygon_;
  std::shared_ptr<const std::vector<Complex>> fourier_;  // coefficients n = -K..K
};

struct ObstacleScene {
  std::vector<Boundary> boundaries;
  WaveParameters params;

  // Throws std::invalid_argument for touching or nested boundaries.
  void validate() const;
  bool inside_any(const Vec2& x) const;
  double distance(const Vec2& x) const;
};

enum class SourcePlacement {
  ComplexOffset,  // y_k = Z(t_k + i delta)
  Scaled,         // y_k = interior + scale (x(t_k) - interior)
};

struct SolverOptions {
  SourcePlacement placement = SourcePlacement::ComplexOffset;
  double source_offset = 0.2;         // delta for ComplexOffset
  double source_scale = 0.7;          // scale for Scaled
  double points_per_wavelength = 32;  // collocation density along the arclength
  std::size_t min_collocation = 192;  // per boundary
  double svd_cutoff = 1e-12;          // relative singular value cutoff
  double residual_tolerance = 1e-4;   // solve flagged degraded above this
  std::size_t residual_refinement = 4;
};

struct SolverDiagnostics {
  std::size_t collocation_points = 0;
  std::size_t source_points = 0;
  std::size_t singular_values = 0;
  std::size_t discarded = 0;
  double largest_singular_value = 0.0;
  double smallest_kept_singular_value = 0.0;
  bool conditioning_warning = false;  // more than half of the spectrum discarded
  double boundary_residual = 0.0;     // plane p-wave, d = (1,0), on the refined check grid
  bool degraded = false;
};

class ScatteredField;

// Fundamental-solution collocation for the exterior Dirichlet problem:
// u_sc(x) = sum_k Phi(x, y_k) c_k with y_k on contours inside each boundary,
// fitted on the boundary in the truncated-SVD least-squares sense. Immutable
// once built.
class ObstacleSolver {
 public:
  static ObstacleSolver build(const ObstacleScene& scene, const SolverOptions& options = {});

  const ObstacleScene& scene() const { return scene_; }
  const WaveParameters& params() const { return scene_.params; }
  const SolverDiagnostics& diagnostics() const { return diagnostics_; }
  const std::vector<Vec2>& sources() const { return sources_; }
  const std::vector<Vec2>& collocation() const { return collocation_; }
  bool empty() const { return sources_.empty(); }

  // Coefficients for stacked boundary values (2 rows per collocation point,
  // one column per right-hand side). The boundary condition is u_sc = data.
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& boundary_values) const;

  // -u_in at the collocation points for each incidence direction.
  Eigen::MatrixXcd plane_wave_data(Mode mode, std::span<const Direction> incidence) const;
  // -tau Phi(x, z) q at the collocation points.
  Eigen::VectorXcd point_source_data(const Vec2& z, const Vec2& q, Complex tau) const;

  // Rows: observation directions; columns: coefficient entries. Applied to
  // coefficients it yields the far field of mode n in the Phi-infinity convention.
  Eigen::MatrixXcd far_field_operator(Mode n, std::span<const Direction> observation) const;

  ScatteredField field(const Eigen::VectorXcd& coefficients) const;

  // max |u_sc + u_in| / max |u_in| over a boundary grid `refinement` times finer
  // than the collocation grid.
  double boundary_residual(const Eigen::VectorXcd& coefficients,
                           const std::function<CVec2(const Vec2&)>& incident,
                           std::size_t refinement) const;

 private:
  ObstacleScene scene_;
  SolverOptions options_;
  std::vector<Vec2> sources_;
  std::vector<Vec2> collocation_;
  std::vector<std::size_t> collocation_per_boundary_;
  Eigen::MatrixXcd pseudo_inverse_;
  SolverDiagnostics diagnostics_;
};

class ScatteredField {
 public:
  ScatteredField(WaveParameters params, std::vector<Vec2> sources, Eigen::VectorXcd coefficients);

  CVec2 displacement(const Vec2& x) const;
  Complex far_field(Mode n, const Direction& xhat) const;
  // sigma(u) nu from central differences of the displacement with step h.
  CVec2 traction(const Vec2& x, const Vec2& normal, double h) const;

  const WaveParameters& params() const { return params_; }
  const Eigen::VectorXcd& coefficients() const { return coefficients_; }

 private:
  WaveParameters params_;
  std::vector<Vec2> sources_;
  Eigen::VectorXcd coefficients_;
};

// u_inf_{mn}(xhat_j, d_l) for incident mode m and far-field mode n on the grid
// theta = 2 pi l / n.
class FarFieldMatrix {
 public:
  FarFieldMatrix() = default;
  explicit FarFieldMatrix(std::size_t n);

  std::size_t size() const { return n_; }
  Eigen::MatrixXcd& at(Mode incident, Mode far) { return data_[index(incident, far)]; }
  const Eigen::MatrixXcd& at(Mode incident, Mode far) const { return data_[index(incident, far)]; }
  static std::string pair_name(Mode incident, Mode far);

 private:
  static std::size_t index(Mode m, Mode n) { return (m == Mode::P ? 0 : 2) + (n == Mode::P ? 0 : 1); }
  std::size_t n_ = 0;
  std::array<Eigen::MatrixXcd, 4> data_;
};

FarFieldMatrix plane_far_fields(const ObstacleSolver& solver, std::size_t n);

// Far fields of the wave scattered by the obstacles for incident tau Phi(., z) q.
struct PointSourceFarField {
  Eigen::VectorXcd p;
  Eigen::VectorXcd s;
};

// Throws std::invalid_argument when z lies inside or on a boundary.
PointSourceFarField point_source_far_field(const ObstacleSolver& solver, const Vec2& z, const Direction& q,
                                           Complex tau, std::size_t n);
// Validation entry point: z is expected inside an obstacle, where the exact
// scattered far field is -tau Phi_inf(., z, q).
PointSourceFarField interior_source_far_field(const ObstacleSolver& solver, const Vec2& z, const Direction& q,
                                              Complex tau, std::size_t n);

// w_inf for the scene plus the point source:
// w_{mn} = u_{mn} + v_n + tau Phi_inf_n(., z, q).
struct CompositeFarField {
  std::array<Eigen::MatrixXcd, 2> p;  // indexed by incident mode (P, S)
  std::array<Eigen::MatrixXcd, 2> s;
  const Eigen::MatrixXcd& at(Mode incident, Mode far) const {
    const std::size_t i = incident == Mode::P ? 0 : 1;
    return far == Mode::P ? p[i] : s[i];
  }
};

CompositeFarField composite_far_field(const FarFieldMatrix& u, const PointSourceFarField& v, const Vec2& z,
                                      const Direction& q, Complex tau, const WaveParameters& params);

struct EnergyFlux {
  double flux = 0.0;               // -4 omega Im int u . conj(T u) ds over |x| = r
  double far_field_integral = 0.0;  // kp int |u_p|^2 + ks int |u_s|^2, Phi-infinity convention
  double flux_normalized_integral = 0.0;  // same with far fields scaled by sqrt(k / (2 pi omega))
};

// Throws std::invalid_argument when the circle does not enclose every boundary.
EnergyFlux energy_flux(const ObstacleScene& scene, const ScatteredField& field, double r, std::size_t nq);

}  // namespace phaseless
