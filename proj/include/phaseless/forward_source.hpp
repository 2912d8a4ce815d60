#pragma once

#include <string>
#include <variant>
#include <vector>

#include "phaseless/elastic_core.hpp"

namespace phaseless {

// Sum of c * y1^px * y2^py.
struct Polynomial2 {
  struct Term {
    int px = 0;
    int py = 0;
    double c = 0.0;
  };
  std::vector<Term> terms;

  static Polynomial2 constant(double c) { return {{{0, 0, c}}}; }
  double operator()(const Vec2& y) const;
  bool is_zero() const;
};

struct Rectangle {
  double x0, x1, y0, y1;
};
struct Triangle {
  Vec2 a, b, c;
};
using Piece = std::variant<Rectangle, Triangle>;

std::vector<Vec2> piece_vertices(const Piece& piece);

// Vector density (f1, f2) on a union of non-overlapping convex pieces.
struct SourceField {
  struct Component {
    Piece shape;
    Polynomial2 f1;
    Polynomial2 f2;
  };
  std::string tag;
  std::vector<Component> pieces;

  Vec2 density(const Vec2& y) const;  // zero off the support
  std::vector<Vec2> support_vertices() const;
  bool is_zero() const;
  // F_h(y) = F(y + h): the support moves by -h.
  SourceField translated(const Vec2& h) const;

  // (y1^2 + y2^2 + 5, y1^2 - y2^2 + 5) on the given support.
  static SourceField quadratic_density(std::string tag, std::vector<Piece> support);
  static SourceField rectangle();  // (1,2) x (1,1.6)
  static SourceField l_shape();    // (0,2)^2 \ (1/16,2)^2
  static SourceField triangle();   // (-2,0), (1,0), (-1/2, 3 sqrt(3) / 2)
  static SourceField counterexample_f1();
  static SourceField counterexample_f2();
  static SourceField constant(const Rectangle& r, const Vec2& value);
};

// k_j = (j - 0.5) dk, dk = k_max / n, j = 1..n.
struct FrequencyGrid {
  std::size_t n = 20;
  double k_max = 20.0;

  static FrequencyGrid make(std::size_t n, double k_max);
  double step() const { return k_max / static_cast<double>(n); }
  double node(std::size_t j) const { return (static_cast<double>(j) + 0.5) * step(); }  // 0-based j
  std::vector<double> nodes() const;
};

struct QuadratureOptions {
  int order = 16;                     // Gauss-Legendre nodes per panel and dimension
  double nodes_per_wavelength = 10.0;  // below 6 the oscillation is unresolved
};

// u_inf_{F,s} = int e^{-i ks xhat.y} xhat_perp . F(y) dy (S), kp and xhat . F for P.
// Throws std::invalid_argument for omega <= 0 or an unresolved quadrature.
Complex source_far_field(const SourceField& f, Mode mode, const Direction& xhat, const WaveParameters& params,
                         const QuadratureOptions& quad = {});

// Adds tau Phi_inf(xhat, z, q) to the source far field.
Complex combined_source_far_field(const SourceField& f, Mode mode, const Direction& xhat,
                                  const WaveParameters& params, const Vec2& z, const Direction& q, Complex tau,
                                  const QuadratureOptions& quad = {});

// int over {y : y . xhat + alpha = 0} of xhat . F(y) ds.
double line_integral_profile(const SourceField& f, const Direction& xhat, double alpha);

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

}  // namespace phaseless
