#include "phaseless/grid_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace phaseless {
namespace {

std::ofstream open(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void write_metadata(const std::string& path, const Metadata& meta) {
  auto out = open(path);
  for (const auto& [k, v] : meta) out << k << " = " << v << '\n';
}

void write_far_field_matrix(const std::string& path, const FarFieldMatrix& u) {
  auto out = open(path);
  out << "mode,obs_index,inc_index,re,im\n";
  for (Mode m : {Mode::P, Mode::S}) {
    for (Mode n : {Mode::P, Mode::S}) {
      const Eigen::MatrixXcd& a = u.at(m, n);
      const std::string name = FarFieldMatrix::pair_name(m, n);
      for (Eigen::Index j = 0; j < a.rows(); ++j) {
        for (Eigen::Index l = 0; l < a.cols(); ++l) {
          out << name << ',' << j << ',' << l << ',' << format_double(a(j, l).real()) << ','
              << format_double(a(j, l).imag()) << '\n';
        }
      }
    }
  }
}

void write_far_field_pair(const std::string& path, const std::string& mode, const Eigen::MatrixXcd& u) {
  auto out = open(path);
  out << "mode,obs_index,inc_index,re,im\n";
  for (Eigen::Index j = 0; j < u.rows(); ++j) {
    for (Eigen::Index l = 0; l < u.cols(); ++l) {
      out << mode << ',' << j << ',' << l << ',' << format_double(u(j, l).real()) << ','
          << format_double(u(j, l).imag()) << '\n';
    }
  }
}

void write_multi_frequency(const std::string& path, const std::string& mode, const Eigen::MatrixXcd& u) {
  auto out = open(path);
  out << "mode,obs_index,freq_index,re,im\n";
  for (Eigen::Index j = 0; j < u.rows(); ++j) {
    for (Eigen::Index k = 0; k < u.cols(); ++k) {
      out << mode << ',' << j << ',' << k << ',' << format_double(u(j, k).real()) << ','
          << format_double(u(j, k).imag()) << '\n';
    }
  }
}

void write_indicator_csv(const std::string& path, const IndicatorField& field) {
  auto out = open(path);
  out << "x,y,value\n";
  const std::size_t nx = field.grid.nx();
  const std::size_t ny = field.grid.ny();
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const Vec2 p = field.grid.point(ix, iy);
      out << format_double(p.x()) << ',' << format_double(p.y()) << ',' << format_double(field.at(ix, iy)) << '\n';
    }
  }
}

void write_indicator_pgm(const std::string& path, const IndicatorField& field) {
  auto out = open(path);
  const std::size_t nx = field.grid.nx();
  const std::size_t ny = field.grid.ny();
  const auto [lo_it, hi_it] = std::minmax_element(field.values.begin(), field.values.end());
  const double lo = field.values.empty() ? 0.0 : *lo_it;
  const double hi = field.values.empty() ? 0.0 : *hi_it;
  out << "P2\n" << nx << ' ' << ny << "\n255\n";
  for (std::size_t r = 0; r < ny; ++r) {
    const std::size_t iy = ny - 1 - r;
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double v = hi > lo ? (field.at(ix, iy) - lo) / (hi - lo) : 0.0;
      out << static_cast<int>(std::lround(255.0 * v)) << (ix + 1 == nx ? '\n' : ' ');
    }
  }
}

}  // namespace phaseless
