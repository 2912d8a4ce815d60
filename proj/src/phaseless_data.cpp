#include "phaseless/phaseless_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "phaseless/parallel.hpp"

namespace phaseless {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string tau_label(Complex tau) {
  std::string s = fmt(tau.real()) + "_" + fmt(tau.imag());
  for (char& c : s) {
    if (c == '-') c = 'm';
    if (c == '.') c = 'p';
  }
  return s;
}

}  // namespace

void NoiseSpec::validate() const {
  if (!(level >= 0.0) || !std::isfinite(level)) throw std::invalid_argument("noise level must be finite and >= 0");
}

double uniform_draw(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t x = splitmix64(splitmix64(seed) ^ index);
  const double u = (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

const PhaselessSlice& PhaselessDataset::slice(Complex tau, std::size_t q_index) const {
  for (const auto& s : slices) {
    if (s.tau == tau && s.q_index == q_index) return s;
  }
  throw std::out_of_range("dataset has no slice for tau = " + format_complex(tau) + ", q index " +
                          std::to_string(q_index));
}

bool PhaselessDataset::has_slice(Complex tau, std::size_t q_index) const {
  for (const auto& s : slices) {
    if (s.tau == tau && s.q_index == q_index) return true;
  }
  return false;
}

WaveParameters PhaselessDataset::frequency_params(std::size_t j) const {
  return WaveParameters::make(frequencies.node(j), params.lambda, params.mu);
}

PhaselessDataset synthesize_obstacle_dataset(const ObstacleSolver& solver, const Vec2& z,
                                             const PolarizationSet& q, const std::vector<Complex>& taus,
                                             std::size_t n) {
  if (n == 0) throw std::invalid_argument("synthesize_obstacle_dataset: n must be positive");
  if (solver.empty()) {
    return synthesize_obstacle_dataset(
        solver, Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)), z, q, taus);
  }
  return synthesize_obstacle_dataset(solver, plane_far_fields(solver, n).at(Mode::S, Mode::S), z, q, taus);
}

PhaselessDataset synthesize_obstacle_dataset(const ObstacleSolver& solver, const Eigen::MatrixXcd& uss,
                                             const Vec2& z, const PolarizationSet& q,
                                             const std::vector<Complex>& taus) {
  const auto n = static_cast<std::size_t>(uss.rows());
  if (n == 0 || uss.cols() != uss.rows()) throw std::invalid_argument("synthesize_obstacle_dataset: bad far-field matrix");
  PhaselessDataset ds;
  ds.kind = DatasetKind::Obstacle;
  ds.params = solver.params();
  ds.z = z;
  ds.taus = taus;
  ds.polarizations = q;
  ds.observation = equispaced_directions(n);
  ds.incidence = ds.observation;
  ds.provenance = "obstacles:";
  for (const Boundary& b : solver.scene().boundaries) ds.provenance += " " + b.tag();
  if (solver.scene().boundaries.empty()) ds.provenance += " none";

  for (std::size_t qi = 0; qi < q.q.size(); ++qi) {
    const PointSourceFarField v = point_source_far_field(solver, z, q.q[qi], 1.0, n);
    for (Complex tau : taus) {
      PhaselessSlice s{tau, qi, Eigen::MatrixXd(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))};
      for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        const Complex src = tau * (v.s(jj) + green_far_field(Mode::S, ds.observation[j], z, q.q[qi].vec(), ds.params));
        for (Eigen::Index l = 0; l < static_cast<Eigen::Index>(n); ++l) s.modulus(jj, l) = std::abs(uss(jj, l) + src);
      }
      ds.slices.push_back(std::move(s));
    }
  }
  return ds;
}

PhaselessDataset synthesize_source_dataset(const SourceField& f, const std::vector<Direction>& theta,
                                           const FrequencyGrid& grid, double lambda, double mu, const Vec2& z,
                                           const PolarizationSet& q, const std::vector<Complex>& taus,
                                           const QuadratureOptions& quad) {
  if (theta.empty()) throw std::invalid_argument("synthesize_source_dataset: no observation directions");
  PhaselessDataset ds;
  ds.kind = DatasetKind::Source;
  ds.params = WaveParameters::make(grid.node(grid.n - 1), lambda, mu);
  ds.z = z;
  ds.taus = taus;
  ds.polarizations = q;
  ds.observation = theta;
  ds.frequencies = grid;
  ds.provenance = "source: " + f.tag;

  const std::size_t nt = theta.size();
  const std::size_t nf = grid.n;
  Eigen::MatrixXcd u(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(nf));
  parallel_for(nt * nf, 1, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const std::size_t t = i / nf;
      const std::size_t j = i % nf;
      u(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) =
          source_far_field(f, Mode::S, theta[t], ds.frequency_params(j), quad);
    }
  });
  for (std::size_t qi = 0; qi < q.q.size(); ++qi) {
    for (Complex tau : taus) {
      PhaselessSlice s{tau, qi, Eigen::MatrixXd(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(nf))};
      for (std::size_t t = 0; t < nt; ++t) {
        for (std::size_t j = 0; j < nf; ++j) {
          const Complex src = tau * green_far_field(Mode::S, theta[t], z, q.q[qi].vec(), ds.frequency_params(j));
          const auto tt = static_cast<Eigen::Index>(t);
          const auto jj = static_cast<Eigen::Index>(j);
          s.modulus(tt, jj) = std::abs(u(tt, jj) + src);
        }
      }
      ds.slices.push_back(std::move(s));
    }
  }
  return ds;
}

PhaselessDataset apply_noise(const PhaselessDataset& ds, const NoiseSpec& spec) {
  spec.validate();
  PhaselessDataset out = ds;
  out.noise = spec;
  std::uint64_t offset = 0;
  for (auto& s : out.slices) {
    const auto rows = s.modulus.rows();
    const auto cols = s.modulus.cols();
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        const double e = uniform_draw(spec.seed, offset + static_cast<std::uint64_t>(r * cols + c));
        double& m = s.modulus(r, c);
        m = spec.kind == NoiseKind::Relative ? m * (1.0 + spec.level * e) : std::max(0.0, m + spec.level * e);
      }
    }
    offset += static_cast<std::uint64_t>(rows * cols);
  }
  return out;
}

std::string format_complex(Complex c) { return fmt(c.real()) + (c.imag() < 0 ? "" : "+") + fmt(c.imag()) + "i"; }

std::vector<std::string> write_dataset(const PhaselessDataset& ds, const std::string& dir, const std::string& stem) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  for (const auto& s : ds.slices) {
    const std::string name = stem + "_tau_" + tau_label(s.tau) + "_q" + std::to_string(s.q_index + 1) + ".csv";
    std::ofstream out(std::filesystem::path(dir) / name);
    if (!out) throw std::runtime_error("cannot write " + name);
    out << "obs_index,second_index,value\n";
    for (Eigen::Index r = 0; r < s.modulus.rows(); ++r) {
      for (Eigen::Index c = 0; c < s.modulus.cols(); ++c) out << r << ',' << c << ',' << fmt(s.modulus(r, c)) << '\n';
    }
    files.push_back(name);
  }
  std::ostringstream meta;
  meta << "kind = " << (ds.kind == DatasetKind::Obstacle ? "obstacle" : "source") << '\n';
  meta << "provenance = " << ds.provenance << '\n';
  meta << "lambda = " << fmt(ds.params.lambda) << '\n';
  meta << "mu = " << fmt(ds.params.mu) << '\n';
  if (ds.kind == DatasetKind::Obstacle) {
    meta << "omega = " << fmt(ds.params.omega) << '\n';
    meta << "n = " << ds.observation.size() << '\n';
  } else {
    meta << "frequency_count = " << ds.frequencies.n << '\n';
    meta << "frequency_max = " << fmt(ds.frequencies.k_max) << '\n';
    meta << "theta =";
    for (const auto& d : ds.observation) meta << ' ' << fmt(d.angle());
    meta << '\n';
  }
  meta << "z = " << fmt(ds.z.x()) << ' ' << fmt(ds.z.y()) << '\n';
  meta << "tau =";
  for (Complex t : ds.taus) meta << ' ' << format_complex(t);
  meta << '\n';
  meta << "q_angles =";
  for (const auto& q : ds.polarizations.q) meta << ' ' << fmt(q.angle());
  meta << '\n';
  if (ds.noise) {
    meta << "noise_kind = " << (ds.noise->kind == NoiseKind::Relative ? "relative" : "absolute") << '\n';
    meta << "noise_level = " << fmt(ds.noise->level) << '\n';
    meta << "noise_seed = " << ds.noise->seed << '\n';
    meta << "noise_generator = " << kNoiseGenerator << '\n';
  } else {
    meta << "noise_kind = none\n";
  }
  for (const auto& f : files) meta << "file = " << f << '\n';
  const std::string meta_name = stem + ".meta";
  std::ofstream m(std::filesystem::path(dir) / meta_name);
  if (!m) throw std::runtime_error("cannot write " + meta_name);
  m << meta.str();
  files.push_back(meta_name);
  return files;
}

}  // namespace phaseless
