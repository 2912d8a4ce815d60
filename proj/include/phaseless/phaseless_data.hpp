#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phaseless/elastic_core.hpp"
#include "phaseless/forward_obstacle.hpp"
#include "phaseless/forward_source.hpp"

namespace phaseless {

enum class NoiseKind { Relative, Absolute };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::Relative;
  double level = 0.0;
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument for level < 0
};

// Uniform(-1, 1) draw addressed by (seed, index). SplitMix64 finalizer over
// the seed-mixed counter; the upper 53 bits map to (0, 1).
double uniform_draw(std::uint64_t seed, std::uint64_t index);
inline constexpr const char* kNoiseGenerator = "splitmix64-counter";

enum class DatasetKind { Obstacle, Source };

// Moduli for one (tau, q) pair. Rows index observation directions; columns
// index incidence directions (obstacle) or frequency nodes (source).
struct PhaselessSlice {
  Complex tau;
  std::size_t q_index = 0;
  Eigen::MatrixXd modulus;
};

struct PhaselessDataset {
  DatasetKind kind = DatasetKind::Obstacle;
  WaveParameters params;  // omega is ignored for source data
  Vec2 z = Vec2::Zero();
  std::vector<Complex> taus;
  PolarizationSet polarizations;
  std::vector<Direction> observation;
  std::vector<Direction> incidence;  // obstacle data
  FrequencyGrid frequencies;          // source data
  std::optional<NoiseSpec> noise;
  std::string provenance;
  std::vector<PhaselessSlice> slices;

  std::size_t second_size() const { return kind == DatasetKind::Obstacle ? incidence.size() : frequencies.n; }
  // Throws std::out_of_range when the slice is absent.
  const PhaselessSlice& slice(Complex tau, std::size_t q_index) const;
  bool has_slice(Complex tau, std::size_t q_index) const;
  // Wave parameters at frequency node j for source data.
  WaveParameters frequency_params(std::size_t j) const;
};

// |w_ss(x_j, d_l)| over the n x n equispaced grid for every (tau, q). A zero
// tau yields |u_ss|. The solver's scene supplies the obstacles.
PhaselessDataset synthesize_obstacle_dataset(const ObstacleSolver& solver, const Vec2& z,
                                             const PolarizationSet& q, const std::vector<Complex>& taus,
                                             std::size_t n);
// Same, reusing precomputed shear-shear far fields u_ss(x_j, d_l).
PhaselessDataset synthesize_obstacle_dataset(const ObstacleSolver& solver, const Eigen::MatrixXcd& u_ss,
                                             const Vec2& z, const PolarizationSet& q,
                                             const std::vector<Complex>& taus);

// |u_{F,s} + tau Phi_inf_s(., z, q)| over (theta, k_j) for every (tau, q).
PhaselessDataset synthesize_source_dataset(const SourceField& f, const std::vector<Direction>& theta,
                                           const FrequencyGrid& grid, double lambda, double mu, const Vec2& z,
                                           const PolarizationSet& q, const std::vector<Complex>& taus,
                                           const QuadratureOptions& quad = {});

// Entry e of slice s draws index s * rows * cols + row * cols + col.
PhaselessDataset apply_noise(const PhaselessDataset& ds, const NoiseSpec& spec);

// One CSV per slice (obs_index,second_index,value) plus `<stem>.meta`.
// Returns the written file names relative to `dir`.
std::vector<std::string> write_dataset(const PhaselessDataset& ds, const std::string& dir, const std::string& stem);

std::string format_complex(Complex c);

}  // namespace phaseless
