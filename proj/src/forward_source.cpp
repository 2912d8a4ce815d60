#include "phaseless/forward_source.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace phaseless {
namespace {

GaussRule compute_gauss(int order) {
  GaussRule r;
  r.nodes.resize(static_cast<std::size_t>(order));
  r.weights.resize(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    r.nodes[static_cast<std::size_t>(i)] = x;
    r.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

double ipow(double b, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// p(y + h) expanded back into monomials.
Polynomial2 shift_polynomial(const Polynomial2& p, const Vec2& h) {
  std::map<std::pair<int, int>, double> acc;
  for (const auto& t : p.terms) {
    for (int i = 0; i <= t.px; ++i) {
      for (int j = 0; j <= t.py; ++j) {
        acc[{i, j}] += t.c * binomial(t.px, i) * ipow(h.x(), t.px - i) * binomial(t.py, j) * ipow(h.y(), t.py - j);
      }
    }
  }
  Polynomial2 out;
  for (const auto& [k, c] : acc) out.terms.push_back({k.first, k.second, c});
  return out;
}

// Counterclockwise vertex list.
std::vector<Vec2> ccw_vertices(const Piece& piece) {
  std::vector<Vec2> v = piece_vertices(piece);
  double area2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % v.size()];
    area2 += a.x() * b.y() - b.x() * a.y();
  }
  if (area2 < 0.0) std::reverse(v.begin(), v.end());
  return v;
}

bool piece_contains(const Piece& piece, const Vec2& y) {
  const auto v = ccw_vertices(piece);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 e = v[(i + 1) % v.size()] - v[i];
    const Vec2 w = y - v[i];
    if (e.x() * w.y() - e.y() * w.x() < 0.0) return false;
  }
  return true;
}

std::size_t panel_count(double extent, double wavelength, const QuadratureOptions& q) {
  const double nodes = q.nodes_per_wavelength * extent / wavelength;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(nodes / q.order)));
}

// Integrates g(y) = e^{-i k xhat.y} pol . F(y) over one piece.
Complex integrate_piece(const SourceField::Component& c, const Vec2& xhat, const Vec2& pol, double k,
                        const QuadratureOptions& q) {
  const GaussRule& g = gauss_legendre(q.order);
  const double wavelength = 2.0 * kPi / k;
  auto integrand = [&](const Vec2& y) {
    const double amp = pol.x() * c.f1(y) + pol.y() * c.f2(y);
    return amp * std::exp(-kI * (k * xhat.dot(y)));
  };
  Complex sum = 0.0;
  if (const auto* r = std::get_if<Rectangle>(&c.shape)) {
    const std::size_t px = panel_count(r->x1 - r->x0, wavelength, q);
    const std::size_t py = panel_count(r->y1 - r->y0, wavelength, q);
    const double hx = (r->x1 - r->x0) / static_cast<double>(px);
    const double hy = (r->y1 - r->y0) / static_cast<double>(py);
    for (std::size_t a = 0; a < px; ++a) {
      for (std::size_t b = 0; b < py; ++b) {
        const double cx = r->x0 + (a + 0.5) * hx;
        const double cy = r->y0 + (b + 0.5) * hy;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
          for (std::size_t j = 0; j < g.nodes.size(); ++j) {
            const Vec2 y(cx + 0.5 * hx * g.nodes[i], cy + 0.5 * hy * g.nodes[j]);
            sum += g.weights[i] * g.weights[j] * integrand(y);
          }
        }
        // Area factor per panel applied below.
      }
    }
    return sum * (0.25 * hx * hy);
  }
  const auto& t = std::get<Triangle>(c.shape);
  // Collapsed-square map y = a + u (b - a) + u v (c - b), Jacobian u |det|.
  const Vec2 e1 = t.b - t.a;
  const Vec2 e2 = t.c - t.b;
  const double det = std::fabs(e1.x() * e2.y() - e1.y() * e2.x());
  const double extent = std::max({e1.norm(), e2.norm(), (t.c - t.a).norm()});
  const std::size_t pn = panel_count(extent, wavelength, q);
  const double h = 1.0 / static_cast<double>(pn);
  for (std::size_t a = 0; a < pn; ++a) {
    for (std::size_t b = 0; b < pn; ++b) {
      const double cu = (a + 0.5) * h;
      const double cv = (b + 0.5) * h;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const double u = cu + 0.5 * h * g.nodes[i];
        for (std::size_t j = 0; j < g.nodes.size(); ++j) {
          const double v = cv + 0.5 * h * g.nodes[j];
          const Vec2 y = t.a + u * e1 + u * v * e2;
          sum += g.weights[i] * g.weights[j] * u * integrand(y);
        }
      }
    }
  }
  return sum * (0.25 * h * h * det);
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss(order)).first;
  return it->second;
}

double Polynomial2::operator()(const Vec2& y) const {
  double s = 0.0;
  for (const auto& t : terms) s += t.c * ipow(y.x(), t.px) * ipow(y.y(), t.py);
  return s;
}

bool Polynomial2::is_zero() const {
  return std::all_of(terms.begin(), terms.end(), [](const Term& t) { return t.c == 0.0; });
}

std::vector<Vec2> piece_vertices(const Piece& piece) {
  if (const auto* r = std::get_if<Rectangle>(&piece)) {
    return {{r->x0, r->y0}, {r->x1, r->y0}, {r->x1, r->y1}, {r->x0, r->y1}};
  }
  const auto& t = std::get<Triangle>(piece);
  return {t.a, t.b, t.c};
}

Vec2 SourceField::density(const Vec2& y) const {
  for (const auto& c : pieces) {
    if (piece_contains(c.shape, y)) return {c.f1(y), c.f2(y)};
  }
  return Vec2::Zero();
}

std::vector<Vec2> SourceField::support_vertices() const {
  std::vector<Vec2> out;
  for (const auto& c : pieces) {
    for (const Vec2& v : piece_vertices(c.shape)) out.push_back(v);
  }
  return out;
}

bool SourceField::is_zero() const {
  return std::all_of(pieces.begin(), pieces.end(),
                     [](const Component& c) { return c.f1.is_zero() && c.f2.is_zero(); });
}

SourceField SourceField::translated(const Vec2& h) const {
  SourceField out;
  out.tag = tag + "+shift";
  for (const auto& c : pieces) {
    Component moved;
    if (const auto* r = std::get_if<Rectangle>(&c.shape)) {
      moved.shape = Rectangle{r->x0 - h.x(), r->x1 - h.x(), r->y0 - h.y(), r->y1 - h.y()};
    } else {
      const auto& t = std::get<Triangle>(c.shape);
      moved.shape = Triangle{t.a - h, t.b - h, t.c - h};
    }
    moved.f1 = shift_polynomial(c.f1, h);
    moved.f2 = shift_polynomial(c.f2, h);
    out.pieces.push_back(std::move(moved));
  }
  return out;
}

SourceField SourceField::quadratic_density(std::string tag, std::vector<Piece> support) {
  const Polynomial2 f1{{{2, 0, 1.0}, {0, 2, 1.0}, {0, 0, 5.0}}};
  const Polynomial2 f2{{{2, 0, 1.0}, {0, 2, -1.0}, {0, 0, 5.0}}};
  SourceField f;
  f.tag = std::move(tag);
  for (auto& p : support) f.pieces.push_back({std::move(p), f1, f2});
  return f;
}

SourceField SourceField::rectangle() { return quadratic_density("rectangle", {Rectangle{1.0, 2.0, 1.0, 1.6}}); }

SourceField SourceField::l_shape() {
  const double w = 1.0 / 16.0;
  return quadratic_density("l-shape", {Rectangle{0.0, w, 0.0, 2.0}, Rectangle{w, 2.0, 0.0, w}});
}

SourceField SourceField::triangle() {
  return quadratic_density("triangle", {Triangle{{-2.0, 0.0}, {1.0, 0.0}, {-0.5, 1.5 * std::sqrt(3.0)}}});
}

SourceField SourceField::counterexample_f1() {
  SourceField f;
  f.tag = "f1";
  f.pieces.push_back({Rectangle{-1.0, 1.0, 1.0, 2.0}, Polynomial2::constant(1.0), {}});
  f.pieces.push_back({Rectangle{-1.0, 1.0, -1.0, 1.0}, Polynomial2{{{1, 0, 1.0}}}, {}});
  f.pieces.push_back({Rectangle{-1.0, 1.0, -2.0, -1.0}, Polynomial2::constant(1.0), {}});
  return f;
}

SourceField SourceField::counterexample_f2() {
  SourceField f;
  f.tag = "f2";
  f.pieces.push_back({Rectangle{-1.0, 1.0, 1.0, 2.0}, Polynomial2::constant(1.0), {}});
  f.pieces.push_back({Rectangle{-1.0, 1.0, -2.0, -1.0}, Polynomial2::constant(1.0), {}});
  return f;
}

SourceField SourceField::constant(const Rectangle& r, const Vec2& value) {
  SourceField f;
  f.tag = "constant";
  f.pieces.push_back({r, Polynomial2::constant(value.x()), Polynomial2::constant(value.y())});
  return f;
}

FrequencyGrid FrequencyGrid::make(std::size_t n, double k_max) {
  if (n == 0 || !(k_max > 0.0)) throw std::invalid_argument("frequency grid needs n > 0 and k_max > 0");
  return {n, k_max};
}

std::vector<double> FrequencyGrid::nodes() const {
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = node(j);
  return out;
}

Complex source_far_field(const SourceField& f, Mode mode, const Direction& xhat, const WaveParameters& params,
                         const QuadratureOptions& quad) {
  if (!(params.omega > 0.0)) throw std::invalid_argument("source_far_field: omega must be positive");
  if (quad.nodes_per_wavelength < 6.0) {
    throw std::invalid_argument("source_far_field: fewer than 6 nodes per wavelength leaves the oscillation unresolved");
  }
  const double k = params.wavenumber(mode);
  const Vec2 pol = mode == Mode::P ? xhat.vec() : xhat.perp();
  Complex sum = 0.0;
  for (const auto& c : f.pieces) sum += integrate_piece(c, xhat.vec(), pol, k, quad);
  return sum;
}

Complex combined_source_far_field(const SourceField& f, Mode mode, const Direction& xhat,
                                  const WaveParameters& params, const Vec2& z, const Direction& q, Complex tau,
                                  const QuadratureOptions& quad) {
  return source_far_field(f, mode, xhat, params, quad) + tau * green_far_field(mode, xhat, z, q.vec(), params);
}

double line_integral_profile(const SourceField& f, const Direction& xhat, double alpha) {
  const Vec2 base = -alpha * xhat.vec();
  const Vec2 dir = xhat.perp();
  const GaussRule& g = gauss_legendre(16);
  double total = 0.0;
  for (const auto& c : f.pieces) {
    const auto v = ccw_vertices(c.shape);
    double lo = -INFINITY;
    double hi = INFINITY;
    bool empty = false;
    for (std::size_t i = 0; i < v.size() && !empty; ++i) {
      const Vec2 e = v[(i + 1) % v.size()] - v[i];
      const Vec2 n(e.y(), -e.x());  // outward for a counterclockwise polygon
      const double a = n.dot(dir);
      const double b = n.dot(base - v[i]);
      // a s + b <= 0
      if (std::fabs(a) < 1e-15) {
        if (b > 0.0) empty = true;
      } else if (a > 0.0) {
        hi = std::min(hi, -b / a);
      } else {
        lo = std::max(lo, -b / a);
      }
    }
    if (empty || !(hi > lo)) continue;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double s = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const Vec2 y = base + (mid + half * g.nodes[i]) * dir;
      s += g.weights[i] * (xhat.vec().x() * c.f1(y) + xhat.vec().y() * c.f2(y));
    }
    total += s * half;
  }
  return total;
}

}  // namespace phaseless
