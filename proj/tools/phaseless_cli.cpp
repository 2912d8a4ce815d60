#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "phaseless/parallel.hpp"
#include "phaseless/scenario.hpp"

namespace {

// A config argument names a file, or a preset when no such file exists.
phaseless::Scenario resolve(const std::string& arg) {
  if (!std::filesystem::exists(arg)) {
    if (const auto* p = phaseless::find_preset(arg)) return phaseless::parse_scenario(p->config);
  }
  return phaseless::load_scenario(arg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phaseless elastic scattering experiments"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> noise;
  std::string tier;
  std::size_t workers = 0;
  auto* run = app.add_subcommand("run", "Run a scenario config or preset");
  run->add_option("config", config, "Config file or preset name")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Noise seed");
  run->add_option("--noise", noise, "Noise level");
  run->add_option("--tier", tier, "ci or paper")->check(CLI::IsMember({"ci", "paper"}));
  run->add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");

  auto* list = app.add_subcommand("presets", "List the built-in presets");
  std::string show;
  list->add_option("--show", show, "Print the config of one preset");

  std::string check;
  auto* validate = app.add_subcommand("validate", "Parse and check a config without running it");
  validate->add_option("config", check, "Config file or preset name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      if (!show.empty()) {
        const auto* p = phaseless::find_preset(show);
        if (!p) {
          std::cerr << "unknown preset " << show << '\n';
          return 1;
        }
        std::cout << p->config;
        return 0;
      }
      for (const auto& p : phaseless::presets()) std::cout << p.name << "  " << p.description << '\n';
      return 0;
    }
    if (*validate) {
      resolve(check);
      std::cout << "ok\n";
      return 0;
    }
    phaseless::Scenario s = resolve(config);
    if (seed) s.noise.seed = *seed;
    if (noise) s.noise.level = *noise;
    if (tier == "paper") s.tier = phaseless::Tier::Paper;
    if (tier == "ci") s.tier = phaseless::Tier::Ci;
    if (!out_dir.empty()) {
      s.output_dir = out_dir;
    } else if (s.output_dir.empty()) {
      const char* root = std::getenv("PHASELESS_OUTPUT_ROOT");
      s.output_dir = (std::filesystem::path(root ? root : "out") / s.name).string();
    }
    s.validate();
    phaseless::set_worker_count(workers);
    const auto result = phaseless::run_scenario(s);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "wrote " << result.files.size() + 1 << " files to " << s.output_dir << '\n';
    return result.degraded ? 2 : 0;
  } catch (const phaseless::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
