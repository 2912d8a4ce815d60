#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "phaseless/parallel.hpp"
#include "phaseless/scenario.hpp"

using namespace phaseless;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string without_timing(const std::string& manifest) {
  std::istringstream in(manifest);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("wall_time_seconds", 0) != 0) out += line + '\n';
  }
  return out;
}

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const std::string kSmall =
    "[scenario]\nname = small\nexperiment = obstacle-sampling\n[scene]\nobstacle = disk\n[wave]\nomega = 2pi\nn = 16\n"
    "[data]\nz0 = 4 4\nnoise = 0.1\nseed = 3\n[indicator]\nnames = Iz0, I2\n"
    "[grid]\nx_min = -1\nx_max = 1\ny_min = -1\ny_max = 1\nspacing = 0.1\n";

}  // namespace

TEST_CASE("parsing") {
  const Scenario s = parse_scenario(kSmall);
  CHECK(s.name == "small");
  CHECK(s.obstacle == "disk");
  CHECK(*s.omega == doctest::Approx(2.0 * kPi));
  CHECK(s.effective_n() == 16);
  REQUIRE(s.z0.size() == 1);
  CHECK(s.z0[0] == Vec2(4.0, 4.0));
  CHECK(s.noise.level == 0.1);
  CHECK(s.noise.seed == 3);
  CHECK(s.indicators == std::vector<std::string>{"Iz0", "I2"});
  CHECK(s.grid.spacing == 0.1);

  const Scenario src = parse_scenario(
      "[scenario]\nname = s\nexperiment = source-sampling\n[data]\nz0 = 3 31/32\ntheta = halfcircle20\n"
      "tau = 0.5i\n[indicator]\nnames = ITheta_z0S\n");
  CHECK(src.z0[0].y() == doctest::Approx(31.0 / 32.0));
  REQUIRE(src.theta.size() == 20);
  CHECK(src.theta.front() == doctest::Approx(-kPi / 2.0 + kPi / 20.0));
  CHECK(src.theta.back() == doctest::Approx(kPi / 2.0));
  CHECK(src.tau == Complex(0.0, 0.5));
}

TEST_CASE("tier defaults") {
  Scenario s = parse_scenario("[scenario]\nname = t\ntier = paper\n[data]\nz0 = 4 4\n");
  CHECK(s.effective_omega() == doctest::Approx(8.0 * kPi));
  CHECK(s.effective_n() == 512);
  s.tier = Tier::Ci;
  CHECK(s.effective_omega() == doctest::Approx(2.0 * kPi));
  CHECK(s.effective_n() == 128);
}

TEST_CASE("errors carry line numbers") {
  CHECK(error_of("[scenario]\nname = x\nbogus = 1\n") == "line 3: unknown key 'bogus' in [scenario]");
  CHECK(error_of("[scenario]\nname = x\nname = y\n") == "line 3: duplicate key 'name'");
  CHECK(error_of("[wave]\nomega =\n") == "line 2: empty value for 'omega'");
  CHECK(error_of("# comment\n[nowhere]\n") == "line 2: unknown section [nowhere]");
  CHECK(error_of("name = x\n") == "line 1: key 'name' appears before any section");
  CHECK(error_of("[wave]\nomega = fast\n").rfind("line 2:", 0) == 0);
  CHECK(error_of("[data]\nz0 = 1 2 3\n").rfind("line 2:", 0) == 0);
  CHECK(error_of("[data]\nnoise_kind = loud\n").rfind("line 2:", 0) == 0);
  CHECK_THROWS_AS(parse_scenario("[scenario]\nname = x\n[indicator]\nnames = ITheta_S\n[data]\nz0 = 1 1\n").validate(),
                  ConfigError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("presets") {
  CHECK(presets().size() >= 10);
  for (const auto& p : presets()) {
    CAPTURE(p.name);
    const Scenario s = parse_scenario(p.config);
    CHECK(s.name == p.name);
    CHECK_NOTHROW(s.validate());
  }
  CHECK(find_preset("obstacle-big-kite") != nullptr);
  CHECK(find_preset("nope") == nullptr);
}

TEST_CASE("runs are deterministic across repeats and worker counts") {
  const auto root = std::filesystem::temp_directory_path() / "phaseless_scenario_test";
  std::filesystem::remove_all(root);
  std::vector<std::vector<std::string>> contents;
  std::vector<std::string> names;
  for (std::size_t workers : {1, 8, 8}) {
    set_worker_count(workers);
    Scenario s = parse_scenario(kSmall);
    s.output_dir = (root / ("w" + std::to_string(workers) + "_" + std::to_string(contents.size()))).string();
    const RunResult r = run_scenario(s);
    CHECK_FALSE(r.degraded);
    std::vector<std::string> c;
    for (const auto& f : r.files) {
      CHECK(std::filesystem::exists(std::filesystem::path(s.output_dir) / f));
      c.push_back(slurp(std::filesystem::path(s.output_dir) / f));
    }
    const std::string manifest = slurp(std::filesystem::path(s.output_dir) / "manifest.txt");
    for (const auto& f : r.files) CHECK(manifest.find("file = " + f + "\n") != std::string::npos);
    c.push_back(without_timing(manifest));
    names = r.files;
    contents.push_back(std::move(c));
  }
  set_worker_count(0);
  CHECK(contents[0] == contents[1]);
  CHECK(contents[1] == contents[2]);
  CHECK(std::find(names.begin(), names.end(), "Iz0_z1.pgm") != names.end());
  std::filesystem::remove_all(root);
}

TEST_CASE("source runs") {
  const auto dir = std::filesystem::temp_directory_path() / "phaseless_scenario_source";
  std::filesystem::remove_all(dir);
  Scenario s = parse_scenario(find_preset("source-retrieval-relative")->config);
  s.output_dir = dir.string();
  const RunResult r = run_scenario(s);
  CHECK(std::find(r.files.begin(), r.files.end(), "retrieved_z1.csv") != r.files.end());
  bool has_error = false;
  for (const auto& [k, v] : r.manifest) has_error |= k == "retrieval_relative_l2_z1";
  CHECK(has_error);
  std::filesystem::remove_all(dir);
}
