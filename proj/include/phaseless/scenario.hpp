#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "phaseless/grid_io.hpp"
#include "phaseless/phaseless_data.hpp"
#include "phaseless/sampling_obstacle.hpp"

namespace phaseless {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class Experiment { ObstacleSampling, ObstacleRetrieval, SourceSampling, SourceRetrieval, SourceCounterexample };
enum class Tier { Ci, Paper };

struct Scenario {
  std::string name;
  std::string description;
  Experiment experiment = Experiment::ObstacleSampling;
  Tier tier = Tier::Ci;

  std::string obstacle = "kite";  // kite | two-disks | disk | none
  std::string source = "rectangle";  // rectangle | l-shape | triangle
  double lambda = 1.0;
  double mu = 1.0;
  std::optional<double> omega;     // tier default when unset
  std::optional<std::size_t> n;    // tier default when unset
  std::size_t frequency_count = 20;
  double frequency_max = 20.0;

  std::vector<Vec2> z0;
  Complex tau = 1.0;
  std::vector<double> theta;  // observation angles (radians) for source runs
  NoiseSpec noise;

  std::vector<std::string> indicators;
  double direction = 0.0;  // incidence angle (radians) for the single-direction indicators
  Combine combine = Combine::Sum;
  bool retrieved = true;   // I2, I3 and ITheta_S run on retrieved rather than phased data
  double overlay_angle = 0.0;  // direction for the real-part comparison CSV

  SamplingGrid grid;
  std::string output_dir;

  double effective_omega() const;
  std::size_t effective_n() const;
  // Throws ConfigError (line 0) for inconsistent settings.
  void validate() const;
};

// Flat `key = value` text with `[section]` headers and `#` comments.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

struct PresetInfo {
  std::string name;
  std::string description;
  std::string config;
};
const std::vector<PresetInfo>& presets();
const PresetInfo* find_preset(const std::string& name);

struct RunResult {
  std::vector<std::string> files;  // relative to the output directory
  std::vector<std::string> warnings;
  bool degraded = false;
  Metadata manifest;
};

// Writes the artifact bundle (datasets, indicator grids, retrieved fields)
// and `manifest.txt` listing every file.
RunResult run_scenario(const Scenario& s);

std::string experiment_name(Experiment e);
Complex parse_complex(const std::string& text);

}  // namespace phaseless
