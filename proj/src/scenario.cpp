#include "phaseless/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "phaseless/forward_obstacle.hpp"
#include "phaseless/forward_source.hpp"
#include "phaseless/phase_retrieval.hpp"
#include "phaseless/sampling_source.hpp"

namespace phaseless {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& v, std::size_t line) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(line, "expected a number, got '" + v + "'");
  }
}

// Accepts "a/b" as well as plain numbers.
double parse_scalar(const std::string& v, std::size_t line) {
  const auto slash = v.find('/');
  if (slash == std::string::npos) return parse_double(v, line);
  const double den = parse_double(trim(v.substr(slash + 1)), line);
  if (den == 0.0) throw ConfigError(line, "division by zero in '" + v + "'");
  return parse_double(trim(v.substr(0, slash)), line) / den;
}

std::size_t parse_count(const std::string& v, std::size_t line) {
  const double d = parse_double(v, line);
  if (d < 1.0 || d != std::floor(d)) throw ConfigError(line, "expected a positive integer, got '" + v + "'");
  return static_cast<std::size_t>(d);
}

std::vector<Vec2> parse_points(const std::string& v, std::size_t line) {
  std::vector<Vec2> out;
  for (const std::string& item : split(v, ';')) {
    std::istringstream is(item);
    std::string a, b, extra;
    if (!(is >> a >> b) || (is >> extra)) throw ConfigError(line, "expected 'x y' pairs separated by ';'");
    out.emplace_back(parse_scalar(a, line), parse_scalar(b, line));
  }
  if (out.empty()) throw ConfigError(line, "empty point list");
  return out;
}

std::vector<double> half_circle_directions() {
  std::vector<double> out;
  for (int j = 1; j <= 20; ++j) out.push_back(-kPi / 2.0 + j * kPi / 20.0);
  return out;
}

double degrees(double d) { return d * kPi / 180.0; }

const std::set<std::string> kIndicators = {"Iz0", "Iz0_d", "Iz0_tilde", "Iz0_tilde_d", "I2", "I3",
                                           "ITheta_z0S", "ITheta_S"};

bool is_obstacle(Experiment e) { return e == Experiment::ObstacleSampling || e == Experiment::ObstacleRetrieval; }

ObstacleScene build_scene(const Scenario& s) {
  ObstacleScene scene;
  scene.params = WaveParameters::make(s.effective_omega(), s.lambda, s.mu);
  if (s.obstacle == "kite") {
    scene.boundaries.push_back(Boundary::kite());
  } else if (s.obstacle == "two-disks") {
    scene.boundaries.push_back(Boundary::circle({3.0, 3.0}, 0.1));
    scene.boundaries.push_back(Boundary::circle({1.0, 1.0}, 0.1));
  } else if (s.obstacle == "disk") {
    scene.boundaries.push_back(Boundary::circle({0.0, 0.0}, 0.5));
  }
  scene.validate();
  return scene;
}

SourceField build_source(const std::string& name) {
  if (name == "rectangle") return SourceField::rectangle();
  if (name == "l-shape") return SourceField::l_shape();
  if (name == "triangle") return SourceField::triangle();
  if (name == "f1") return SourceField::counterexample_f1();
  return SourceField::counterexample_f2();
}

std::string point_label(const Vec2& z) { return format_double(z.x()) + " " + format_double(z.y()); }

class Bundle {
 public:
  explicit Bundle(std::string dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }
  std::string path(const std::string& name) {
    files_.push_back(name);
    return (std::filesystem::path(dir_) / name).string();
  }
  void add(const std::vector<std::string>& names) { files_.insert(files_.end(), names.begin(), names.end()); }
  const std::string& dir() const { return dir_; }
  const std::vector<std::string>& files() const { return files_; }

 private:
  std::string dir_;
  std::vector<std::string> files_;
};

void write_indicator(Bundle& b, const IndicatorField& f, const std::string& stem, const Metadata& extra) {
  write_indicator_csv(b.path(stem + ".csv"), f);
  write_indicator_pgm(b.path(stem + ".pgm"), f);
  Metadata meta = {{"indicator", f.name},
                   {"x_min", format_double(f.grid.x_min)},
                   {"x_max", format_double(f.grid.x_max)},
                   {"y_min", format_double(f.grid.y_min)},
                   {"y_max", format_double(f.grid.y_max)},
                   {"spacing", format_double(f.grid.spacing)},
                   {"nx", std::to_string(f.grid.nx())},
                   {"ny", std::to_string(f.grid.ny())}};
  meta.insert(meta.end(), f.parameters.begin(), f.parameters.end());
  meta.insert(meta.end(), extra.begin(), extra.end());
  const Vec2 peak = f.grid.point(f.argmax());
  meta.push_back({"argmax", point_label(peak)});
  write_metadata(b.path(stem + ".meta"), meta);
}

std::size_t direction_index(double angle, std::size_t n, std::vector<std::string>& warnings) {
  const double step = 2.0 * kPi / static_cast<double>(n);
  const double r = angle / step;
  const long idx = std::lround(r);
  if (std::fabs(r - static_cast<double>(idx)) > 1e-9) {
    warnings.push_back("direction " + format_double(angle) + " rad is off the incidence grid; using the nearest node");
  }
  return static_cast<std::size_t>(((idx % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n));
}

double relative_l2(const Eigen::MatrixXcd& approx, const Eigen::MatrixXcd& exact, const std::vector<bool>& missing) {
  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index j = 0; j < exact.rows(); ++j) {
    if (!missing.empty() && missing[static_cast<std::size_t>(j)]) continue;
    num += (approx.row(j) - exact.row(j)).squaredNorm();
    den += exact.row(j).squaredNorm();
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

bool needs_retrieval(const Scenario& s) {
  if (s.experiment == Experiment::ObstacleRetrieval || s.experiment == Experiment::SourceRetrieval) return true;
  if (!s.retrieved) return false;
  return std::any_of(s.indicators.begin(), s.indicators.end(),
                     [](const std::string& n) { return n == "I2" || n == "I3" || n == "ITheta_S"; });
}

std::vector<Complex> dataset_strengths(const Scenario& s) {
  std::vector<Complex> taus;
  const bool cosine = std::any_of(s.indicators.begin(), s.indicators.end(), [](const std::string& n) {
    return n.rfind("Iz0", 0) == 0 || n == "ITheta_z0S";
  });
  if (cosine) {
    taus.push_back(0.0);
    taus.push_back(s.tau);
  }
  if (needs_retrieval(s)) {
    for (Complex t : StrengthSet::standard().tau) {
      if (std::find(taus.begin(), taus.end(), t) == taus.end()) taus.push_back(t);
    }
  }
  return taus;
}

void run_obstacle(const Scenario& s, Bundle& b, RunResult& res) {
  const ObstacleScene scene = build_scene(s);
  const std::size_t n = s.effective_n();
  const ObstacleSolver solver = ObstacleSolver::build(scene);
  const SolverDiagnostics& d = solver.diagnostics();
  res.manifest.push_back({"solver_collocation_points", std::to_string(d.collocation_points)});
  res.manifest.push_back({"solver_source_points", std::to_string(d.source_points)});
  res.manifest.push_back({"solver_discarded_singular_values", std::to_string(d.discarded)});
  res.manifest.push_back({"solver_boundary_residual", format_double(d.boundary_residual)});
  if (d.conditioning_warning) res.warnings.push_back("more than half of the singular spectrum was discarded");
  if (d.degraded) {
    res.degraded = true;
    res.warnings.push_back("boundary residual " + format_double(d.boundary_residual) + " exceeds tolerance");
  }

  const FarFieldMatrix u = plane_far_fields(solver, n);
  write_far_field_matrix(b.path("far_field.csv"), u);
  write_metadata(b.path("far_field.meta"), {{"omega", format_double(scene.params.omega)},
                                            {"lambda", format_double(s.lambda)},
                                            {"mu", format_double(s.mu)},
                                            {"n", std::to_string(n)},
                                            {"obstacle", s.obstacle},
                                            {"retrieved", "false"}});
  const Eigen::MatrixXcd& uss = u.at(Mode::S, Mode::S);
  const std::size_t l = direction_index(s.direction, n, res.warnings);
  const std::size_t overlay = direction_index(s.overlay_angle, n, res.warnings);
  const auto taus = dataset_strengths(s);

  for (std::size_t k = 0; k < s.z0.size(); ++k) {
    const std::string tag = "z" + std::to_string(k + 1);
    const Vec2& z = s.z0[k];
    PhaselessDataset ds = synthesize_obstacle_dataset(solver, uss, z, PolarizationSet::standard(), taus);
    NoiseSpec noise = s.noise;
    noise.seed = s.noise.seed + k;
    ds = apply_noise(ds, noise);
    b.add(write_dataset(ds, b.dir(), "data_" + tag));
    res.manifest.push_back({tag, point_label(z)});

    std::optional<RetrievedFarField> rf;
    if (needs_retrieval(s)) {
      rf = retrieve_obstacle_far_field(ds, StrengthSet::standard());
      write_far_field_pair(b.path("retrieved_" + tag + ".csv"), "ss", rf->values);
      write_metadata(b.path("retrieved_" + tag + ".meta"),
                     {{"retrieved", "true"}, {"z", point_label(z)}, {"clamped", std::to_string(rf->clamped)},
                      {"inconsistent", std::to_string(rf->inconsistent)}});
      const double err = relative_l2(rf->values, uss, rf->missing);
      res.manifest.push_back({"retrieval_relative_l2_" + tag, format_double(err)});
      auto out = std::ofstream(b.path("overlay_" + tag + ".csv"));
      out << "obs_index,angle,true_re,retrieved_re,true_im,retrieved_im\n";
      const auto dirs = equispaced_directions(n);
      const auto ll = static_cast<Eigen::Index>(overlay);
      for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        out << j << ',' << format_double(dirs[j].angle()) << ',' << format_double(uss(jj, ll).real()) << ','
            << format_double(rf->values(jj, ll).real()) << ',' << format_double(uss(jj, ll).imag()) << ','
            << format_double(rf->values(jj, ll).imag()) << '\n';
      }
    }

    std::optional<PhaselessObstacleIndicators> cosine;
    std::optional<PhasedObstacleIndicators> phased;
    for (const std::string& name : s.indicators) {
      std::function<double(const Vec2&)> fn;
      if (name.rfind("Iz0", 0) == 0) {
        if (!cosine) cosine.emplace(ds, s.tau);
        const auto& ind = *cosine;
        if (name == "Iz0") fn = [&](const Vec2& p) { return ind.Iz0(p); };
        if (name == "Iz0_d") fn = [&, l](const Vec2& p) { return ind.Iz0(p, l); };
        if (name == "Iz0_tilde") fn = [&](const Vec2& p) { return ind.Iz0_tilde(p); };
        if (name == "Iz0_tilde_d") fn = [&, l](const Vec2& p) { return ind.Iz0_tilde(p, l); };
      } else if (name == "I2" || name == "I3") {
        if (!phased) phased.emplace(rf ? rf->values : uss, scene.params.ks, PolarizationSet::standard(), s.combine);
        const auto& ind = *phased;
        if (name == "I2") fn = [&](const Vec2& p) { return ind.I2(p); };
        if (name == "I3") fn = [&, l](const Vec2& p) { return ind.I3(p, l); };
      } else {
        throw ConfigError(0, "indicator " + name + " does not apply to obstacle runs");
      }
      IndicatorField f = sample(s.grid, name, fn);
      f.parameters = {{"z0", point_label(z)}, {"tau", format_complex(s.tau)},
                      {"combine", s.combine == Combine::Sum ? "sum" : "max"},
                      {"data", name[0] == 'I' && name[1] != 'z' ? (rf ? "retrieved" : "phased") : "phaseless"}};
      if (name.ends_with("_d") || name == "I3") f.parameters.push_back({"direction_index", std::to_string(l)});
      write_indicator(b, f, name + "_" + tag, {});
    }
  }
}

void run_source(const Scenario& s, Bundle& b, RunResult& res) {
  const SourceField f = build_source(s.source);
  const FrequencyGrid grid = FrequencyGrid::make(s.frequency_count, s.frequency_max);
  std::vector<Direction> theta;
  for (double a : s.theta) theta.push_back(Direction::from_angle(a));

  Eigen::MatrixXcd exact(static_cast<Eigen::Index>(theta.size()), static_cast<Eigen::Index>(grid.n));
  for (std::size_t t = 0; t < theta.size(); ++t) {
    for (std::size_t j = 0; j < grid.n; ++j) {
      exact(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) =
          source_far_field(f, Mode::S, theta[t], WaveParameters::make(grid.node(j), s.lambda, s.mu));
    }
  }
  write_multi_frequency(b.path("far_field.csv"), "s", exact);
  {
    std::string angles;
    for (double a : s.theta) angles += (angles.empty() ? "" : " ") + format_double(a);
    write_metadata(b.path("far_field.meta"), {{"source", s.source},
                                              {"theta", angles},
                                              {"frequency_count", std::to_string(grid.n)},
                                              {"frequency_max", format_double(grid.k_max)},
                                              {"lambda", format_double(s.lambda)},
                                              {"mu", format_double(s.mu)},
                                              {"retrieved", "false"}});
  }
  const auto taus = dataset_strengths(s);

  for (std::size_t k = 0; k < s.z0.size(); ++k) {
    const std::string tag = "z" + std::to_string(k + 1);
    const Vec2& z = s.z0[k];
    PhaselessDataset ds =
        synthesize_source_dataset(f, theta, grid, s.lambda, s.mu, z, PolarizationSet::standard(), taus);
    NoiseSpec noise = s.noise;
    noise.seed = s.noise.seed + k;
    ds = apply_noise(ds, noise);
    b.add(write_dataset(ds, b.dir(), "data_" + tag));
    res.manifest.push_back({tag, point_label(z)});

    std::optional<RetrievedFarField> rf;
    if (needs_retrieval(s)) {
      rf = retrieve_source_far_field(ds, StrengthSet::standard());
      write_multi_frequency(b.path("retrieved_" + tag + ".csv"), "s", rf->values);
      std::size_t missing = static_cast<std::size_t>(std::count(rf->missing.begin(), rf->missing.end(), true));
      write_metadata(b.path("retrieved_" + tag + ".meta"),
                     {{"retrieved", "true"}, {"z", point_label(z)}, {"missing_directions", std::to_string(missing)},
                      {"clamped", std::to_string(rf->clamped)},
                      {"inconsistent", std::to_string(rf->inconsistent)}});
      res.manifest.push_back({"retrieval_relative_l2_" + tag, format_double(relative_l2(rf->values, exact, rf->missing))});
      // Comparison at the observation direction closest to overlay_angle.
      std::size_t t = 0;
      for (std::size_t i = 0; i < theta.size(); ++i) {
        if (std::fabs(s.theta[i] - s.overlay_angle) < std::fabs(s.theta[t] - s.overlay_angle)) t = i;
      }
      auto out = std::ofstream(b.path("overlay_" + tag + ".csv"));
      out << "freq_index,k,true_re,retrieved_re,true_im,retrieved_im\n";
      const auto tt = static_cast<Eigen::Index>(t);
      for (std::size_t j = 0; j < grid.n; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        out << j << ',' << format_double(grid.node(j)) << ',' << format_double(exact(tt, jj).real()) << ','
            << format_double(rf->values(tt, jj).real()) << ',' << format_double(exact(tt, jj).imag()) << ','
            << format_double(rf->values(tt, jj).imag()) << '\n';
      }
    }

    for (const std::string& name : s.indicators) {
      IndicatorField field;
      if (name == "ITheta_z0S") {
        const PhaselessSourceIndicators ind(ds, s.tau);
        for (std::size_t t : ind.skipped()) {
          res.warnings.push_back("direction " + format_double(s.theta[t]) + " has no admissible polarization");
        }
        field = sample(s.grid, name, [&](const Vec2& p) { return ind.ITheta_z0S(p); });
      } else if (name == "ITheta_S") {
        const PhasedSourceIndicators ind(rf ? rf->values : exact, theta, grid, s.mu,
                                         rf ? rf->missing : std::vector<bool>{});
        field = sample(s.grid, name, [&](const Vec2& p) { return ind.ITheta_S(p); });
      } else {
        throw ConfigError(0, "indicator " + name + " does not apply to source runs");
      }
      field.parameters = {{"z0", point_label(z)}, {"tau", format_complex(s.tau)},
                          {"data", name == "ITheta_S" ? (rf ? "retrieved" : "phased") : "phaseless"}};
      write_indicator(b, field, name + "_" + tag, {});
    }
  }
}

void run_counterexample(const Scenario& s, Bundle& b, RunResult& res) {
  const SourceField f1 = SourceField::counterexample_f1();
  const SourceField f2 = SourceField::counterexample_f2();
  const FrequencyGrid grid = FrequencyGrid::make(s.frequency_count, s.frequency_max);
  auto out = std::ofstream(b.path("counterexample.csv"));
  out << "direction,freq_index,k,f1_re,f1_im,f2_re,f2_im\n";
  for (const auto& [label, angle] : {std::pair<std::string, double>{"x", 0.0}, {"y", kPi / 2.0}}) {
    const Direction xhat = Direction::from_angle(angle);
    double worst = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j) {
      const WaveParameters prm = WaveParameters::make(grid.node(j), s.lambda, s.mu);
      const Complex a = source_far_field(f1, Mode::S, xhat, prm);
      const Complex c = source_far_field(f2, Mode::S, xhat, prm);
      worst = std::max(worst, std::abs(a - c));
      out << label << ',' << j << ',' << format_double(grid.node(j)) << ',' << format_double(a.real()) << ','
          << format_double(a.imag()) << ',' << format_double(c.real()) << ',' << format_double(c.imag()) << '\n';
    }
    res.manifest.push_back({"max_difference_" + label, format_double(worst)});
  }
}

}  // namespace

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::ObstacleSampling: return "obstacle-sampling";
    case Experiment::ObstacleRetrieval: return "obstacle-retrieval";
    case Experiment::SourceSampling: return "source-sampling";
    case Experiment::SourceRetrieval: return "source-retrieval";
    case Experiment::SourceCounterexample: return "source-counterexample";
  }
  return "";
}

Complex parse_complex(const std::string& text) {
  std::string t;
  for (char c : text) {
    if (c != ' ' && c != '\t') t += c;
  }
  if (t.empty()) throw std::invalid_argument("empty complex number");
  if (t.back() != 'i') return {std::stod(t), 0.0};
  t.pop_back();
  // Split at the last sign that is not an exponent sign or the leading sign.
  std::size_t split_at = std::string::npos;
  for (std::size_t i = t.size(); i-- > 1;) {
    if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
      split_at = i;
      break;
    }
  }
  auto imag_part = [](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  };
  if (split_at == std::string::npos) return {0.0, imag_part(t)};
  std::size_t pos = 0;
  const std::string re = t.substr(0, split_at);
  const double r = std::stod(re, &pos);
  if (pos != re.size()) throw std::invalid_argument(text);
  return {r, imag_part(t.substr(split_at))};
}

double Scenario::effective_omega() const {
  if (omega) return *omega;
  return tier == Tier::Paper ? 8.0 * kPi : 2.0 * kPi;
}

std::size_t Scenario::effective_n() const {
  if (n) return *n;
  return tier == Tier::Paper ? 512 : 128;
}

void Scenario::validate() const {
  if (name.empty()) throw ConfigError(0, "scenario name is missing");
  if (!(mu > 0.0) || !(lambda + 2.0 * mu > 0.0)) throw ConfigError(0, "Lame constants need mu > 0, lambda + 2 mu > 0");
  if (!(effective_omega() > 0.0)) throw ConfigError(0, "omega must be positive");
  noise.validate();
  if (is_obstacle(experiment)) {
    static const std::set<std::string> ok = {"kite", "two-disks", "disk", "none"};
    if (!ok.count(obstacle)) throw ConfigError(0, "unknown obstacle preset '" + obstacle + "'");
  } else if (experiment != Experiment::SourceCounterexample) {
    static const std::set<std::string> ok = {"rectangle", "l-shape", "triangle", "f1", "f2"};
    if (!ok.count(source)) throw ConfigError(0, "unknown source preset '" + source + "'");
    if (theta.empty()) throw ConfigError(0, "source runs need observation directions");
  }
  if (experiment != Experiment::SourceCounterexample && z0.empty()) throw ConfigError(0, "z0 is missing");
  for (const auto& n : indicators) {
    if (!kIndicators.count(n)) throw ConfigError(0, "unknown indicator '" + n + "'");
    const bool source_ind = n.rfind("ITheta", 0) == 0;
    if (source_ind == is_obstacle(experiment)) {
      throw ConfigError(0, "indicator '" + n + "' does not match experiment " + experiment_name(experiment));
    }
  }
  if (!(grid.spacing > 0.0) || grid.x_max < grid.x_min || grid.y_max < grid.y_min) {
    throw ConfigError(0, "sampling grid is empty or has nonpositive spacing");
  }
  if (frequency_count == 0 || !(frequency_max > 0.0)) throw ConfigError(0, "invalid frequency grid");
}

Scenario parse_scenario(const std::string& text) {
  Scenario s;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t line = 0;
  std::set<std::string> seen;
  std::map<std::string, std::function<void(const std::string&)>> handlers;
  auto on = [&](const std::string& key, std::function<void(const std::string&)> h) { handlers[key] = std::move(h); };

  on("scenario.name", [&](const std::string& v) { s.name = v; });
  on("scenario.description", [&](const std::string& v) { s.description = v; });
  on("scenario.experiment", [&](const std::string& v) {
    static const std::map<std::string, Experiment> m = {{"obstacle-sampling", Experiment::ObstacleSampling},
                                                        {"obstacle-retrieval", Experiment::ObstacleRetrieval},
                                                        {"source-sampling", Experiment::SourceSampling},
                                                        {"source-retrieval", Experiment::SourceRetrieval},
                                                        {"source-counterexample", Experiment::SourceCounterexample}};
    const auto it = m.find(v);
    if (it == m.end()) throw ConfigError(line, "unknown experiment '" + v + "'");
    s.experiment = it->second;
  });
  on("scenario.tier", [&](const std::string& v) {
    if (v == "ci") s.tier = Tier::Ci;
    else if (v == "paper") s.tier = Tier::Paper;
    else throw ConfigError(line, "tier must be ci or paper");
  });
  on("scene.obstacle", [&](const std::string& v) { s.obstacle = v; });
  on("scene.source", [&](const std::string& v) { s.source = v; });
  on("wave.lambda", [&](const std::string& v) { s.lambda = parse_double(v, line); });
  on("wave.mu", [&](const std::string& v) { s.mu = parse_double(v, line); });
  on("wave.omega", [&](const std::string& v) {
    // "2pi" style multiples are common in these configs.
    if (v.size() > 2 && v.ends_with("pi")) s.omega = parse_scalar(trim(v.substr(0, v.size() - 2)), line) * kPi;
    else s.omega = parse_double(v, line);
  });
  on("wave.n", [&](const std::string& v) { s.n = parse_count(v, line); });
  on("wave.frequency_count", [&](const std::string& v) { s.frequency_count = parse_count(v, line); });
  on("wave.frequency_max", [&](const std::string& v) { s.frequency_max = parse_double(v, line); });
  on("data.z0", [&](const std::string& v) { s.z0 = parse_points(v, line); });
  on("data.tau", [&](const std::string& v) {
    try {
      s.tau = parse_complex(v);
    } catch (const std::exception&) {
      throw ConfigError(line, "expected a complex number, got '" + v + "'");
    }
  });
  on("data.theta", [&](const std::string& v) {
    s.theta.clear();
    if (v == "halfcircle20") {
      s.theta = half_circle_directions();
      return;
    }
    for (const auto& a : split(v, ',')) s.theta.push_back(degrees(parse_scalar(a, line)));
    if (s.theta.empty()) throw ConfigError(line, "empty direction list");
  });
  on("data.noise", [&](const std::string& v) {
    s.noise.level = parse_double(v, line);
    if (s.noise.level < 0.0) throw ConfigError(line, "noise level must be nonnegative");
  });
  on("data.noise_kind", [&](const std::string& v) {
    if (v == "relative") s.noise.kind = NoiseKind::Relative;
    else if (v == "absolute") s.noise.kind = NoiseKind::Absolute;
    else throw ConfigError(line, "noise_kind must be relative or absolute");
  });
  on("data.seed", [&](const std::string& v) {
    try {
      std::size_t pos = 0;
      s.noise.seed = std::stoull(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
    } catch (const std::exception&) {
      throw ConfigError(line, "seed must be a nonnegative integer");
    }
  });
  on("indicator.names", [&](const std::string& v) {
    s.indicators = split(v, ',');
    for (const auto& n : s.indicators) {
      if (!kIndicators.count(n)) throw ConfigError(line, "unknown indicator '" + n + "'");
    }
  });
  on("indicator.direction", [&](const std::string& v) { s.direction = degrees(parse_scalar(v, line)); });
  on("indicator.overlay_direction", [&](const std::string& v) { s.overlay_angle = degrees(parse_scalar(v, line)); });
  on("indicator.combine", [&](const std::string& v) {
    if (v == "sum") s.combine = Combine::Sum;
    else if (v == "max") s.combine = Combine::Max;
    else throw ConfigError(line, "combine must be sum or max");
  });
  on("indicator.data", [&](const std::string& v) {
    if (v == "retrieved") s.retrieved = true;
    else if (v == "phased") s.retrieved = false;
    else throw ConfigError(line, "data must be retrieved or phased");
  });
  on("grid.x_min", [&](const std::string& v) { s.grid.x_min = parse_scalar(v, line); });
  on("grid.x_max", [&](const std::string& v) { s.grid.x_max = parse_scalar(v, line); });
  on("grid.y_min", [&](const std::string& v) { s.grid.y_min = parse_scalar(v, line); });
  on("grid.y_max", [&](const std::string& v) { s.grid.y_max = parse_scalar(v, line); });
  on("grid.spacing", [&](const std::string& v) {
    s.grid.spacing = parse_double(v, line);
    if (!(s.grid.spacing > 0.0)) throw ConfigError(line, "spacing must be positive");
  });
  on("output.dir", [&](const std::string& v) { s.output_dir = v; });

  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string l = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (l.empty()) continue;
    if (l.front() == '[') {
      if (l.back() != ']') throw ConfigError(line, "unterminated section header");
      section = trim(l.substr(1, l.size() - 2));
      static const std::set<std::string> sections = {"scenario", "scene", "wave", "data", "indicator", "grid", "output"};
      if (!sections.count(section)) throw ConfigError(line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = l.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
    const std::string key = trim(l.substr(0, eq));
    const std::string value = trim(l.substr(eq + 1));
    if (section.empty()) throw ConfigError(line, "key '" + key + "' appears before any section");
    const std::string full = section + "." + key;
    const auto h = handlers.find(full);
    if (h == handlers.end()) throw ConfigError(line, "unknown key '" + key + "' in [" + section + "]");
    if (!seen.insert(full).second) throw ConfigError(line, "duplicate key '" + key + "'");
    if (value.empty()) throw ConfigError(line, "empty value for '" + key + "'");
    h->second(value);
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

const std::vector<PresetInfo>& presets() {
  static const std::vector<PresetInfo> list = {
      {"obstacle-big-kite", "kite, I_z0(p) for three source points, 10% noise",
       "[scenario]\nname = obstacle-big-kite\nexperiment = obstacle-sampling\n[scene]\nobstacle = kite\n"
       "[data]\nz0 = 2 4; 4 4; 12 12\ntau = 1\nnoise = 0.1\nseed = 1\n[indicator]\nnames = Iz0\n"
       "[grid]\nx_min = -4\nx_max = 10\ny_min = -4\ny_max = 10\n"},
      {"obstacle-small-disks", "two small disks, I_z0(p,d) with d = (1,0), 10% noise",
       "[scenario]\nname = obstacle-small-disks\nexperiment = obstacle-sampling\n[scene]\nobstacle = two-disks\n"
       "[data]\nz0 = 2 4; 4 4; 12 12\ntau = 1\nnoise = 0.1\nseed = 1\n[indicator]\nnames = Iz0_d\ndirection = 0\n"
       "[grid]\nx_min = -1\nx_max = 5\ny_min = -1\ny_max = 5\n"},
      {"phase-retrieval-demo", "kite, noiseless far-field phase retrieval at d = (1,0)",
       "[scenario]\nname = phase-retrieval-demo\nexperiment = obstacle-retrieval\n[scene]\nobstacle = kite\n"
       "[data]\nz0 = 2 4; 4 4; 12 12\nnoise = 0\n[indicator]\noverlay_direction = 0\n"},
      {"phase-retrieval-relative", "kite, phase retrieval with 30% relative noise",
       "[scenario]\nname = phase-retrieval-relative\nexperiment = obstacle-retrieval\n[scene]\nobstacle = kite\n"
       "[data]\nz0 = 12 12\nnoise = 0.3\nnoise_kind = relative\nseed = 1\n[indicator]\noverlay_direction = 0\n"},
      {"phase-retrieval-absolute", "kite, phase retrieval with absolute noise 0.3",
       "[scenario]\nname = phase-retrieval-absolute\nexperiment = obstacle-retrieval\n[scene]\nobstacle = kite\n"
       "[data]\nz0 = 12 12\nnoise = 0.3\nnoise_kind = absolute\nseed = 1\n[indicator]\noverlay_direction = 0\n"},
      {"obstacle-retrieved-kite", "kite, I2 on retrieved data with z0 = (2,4)",
       "[scenario]\nname = obstacle-retrieved-kite\nexperiment = obstacle-sampling\n[scene]\nobstacle = kite\n"
       "[data]\nz0 = 2 4\nnoise = 0.1\nseed = 1\n[indicator]\nnames = I2\ndata = retrieved\n"
       "[grid]\nx_min = -3\nx_max = 3\ny_min = -3\ny_max = 3\n"},
      {"obstacle-retrieved-disks", "two small disks, I3 on retrieved data with d = (1,0)",
       "[scenario]\nname = obstacle-retrieved-disks\nexperiment = obstacle-sampling\n[scene]\nobstacle = two-disks\n"
       "[data]\nz0 = 2 4\nnoise = 0.1\nseed = 1\n[indicator]\nnames = I3\ndirection = 0\ndata = retrieved\n"
       "[grid]\nx_min = -1\nx_max = 5\ny_min = -1\ny_max = 5\n"},
      {"obstacle-tilde-kite", "kite, modified cosine indicator without the false domain",
       "[scenario]\nname = obstacle-tilde-kite\nexperiment = obstacle-sampling\n[scene]\nobstacle = kite\n"
       "[data]\nz0 = 2 4\ntau = 1\nnoise = 0.1\nseed = 1\n[indicator]\nnames = Iz0_tilde\n"
       "[grid]\nx_min = -4\nx_max = 8\ny_min = -4\ny_max = 10\n"},
      {"source-single-direction", "rectangle source, one observation direction (0,1)",
       "[scenario]\nname = source-single-direction\nexperiment = source-sampling\n[scene]\nsource = rectangle\n"
       "[data]\nz0 = 4 1.3; 4 4; 12 12\ntheta = 90\ntau = 1\nnoise = 0.1\nseed = 1\n[indicator]\nnames = ITheta_z0S\n"
       "[grid]\nx_min = -1\nx_max = 4\ny_min = -1\ny_max = 4\n"},
      {"source-two-directions", "rectangle source, observation directions (1,0) and (0,1)",
       "[scenario]\nname = source-two-directions\nexperiment = source-sampling\n[scene]\nsource = rectangle\n"
       "[data]\nz0 = 4 1.3; 4 4; 12 12\ntheta = 0, 90\ntau = 1\nnoise = 0.1\nseed = 1\n[indicator]\nnames = ITheta_z0S\n"
       "[grid]\nx_min = -1\nx_max = 4\ny_min = -1\ny_max = 4\n"},
      {"source-multi-rectangle", "rectangle source, 20 observation directions",
       "[scenario]\nname = source-multi-rectangle\nexperiment = source-sampling\n[scene]\nsource = rectangle\n"
       "[data]\nz0 = 4 1.3; 4 4; 12 12\ntheta = halfcircle20\ntau = 1\nnoise = 0.1\nseed = 1\n[indicator]\n"
       "names = ITheta_z0S\n[grid]\nx_min = -1\nx_max = 4\ny_min = -1\ny_max = 4\n"},
      {"source-multi-L", "L-shaped source, 20 observation directions",
       "[scenario]\nname = source-multi-L\nexperiment = source-sampling\n[scene]\nsource = l-shape\n"
       "[data]\nz0 = 3 31/32; 3 3; 12 12\ntheta = halfcircle20\ntau = 1\nnoise = 0.1\nseed = 1\n[indicator]\n"
       "names = ITheta_z0S\n[grid]\nx_min = -1\nx_max = 4\ny_min = -1\ny_max = 4\n"},
      {"source-retrieval-relative", "rectangle source, phase retrieval with 10% relative noise at (0,1)",
       "[scenario]\nname = source-retrieval-relative\nexperiment = source-retrieval\n[scene]\nsource = rectangle\n"
       "[data]\nz0 = 4 4\ntheta = halfcircle20\nnoise = 0.1\nnoise_kind = relative\nseed = 1\n[indicator]\n"
       "overlay_direction = 90\n"},
      {"source-retrieval-absolute", "rectangle source, phase retrieval with absolute noise 0.1 at (0,1)",
       "[scenario]\nname = source-retrieval-absolute\nexperiment = source-retrieval\n[scene]\nsource = rectangle\n"
       "[data]\nz0 = 4 4\ntheta = halfcircle20\nnoise = 0.1\nnoise_kind = absolute\nseed = 1\n[indicator]\n"
       "overlay_direction = 90\n"},
      {"source-extended-L", "L-shaped source, I_S on retrieved data with z0 = (4,4)",
       "[scenario]\nname = source-extended-L\nexperiment = source-sampling\n[scene]\nsource = l-shape\n"
       "[data]\nz0 = 4 4\ntheta = halfcircle20\nnoise = 0.1\nseed = 1\n[indicator]\nnames = ITheta_S\ndata = retrieved\n"
       "[grid]\nx_min = -1\nx_max = 3\ny_min = -1\ny_max = 3\n"},
      {"source-extended-triangle", "triangle source, I_S on retrieved data with z0 = (4,4)",
       "[scenario]\nname = source-extended-triangle\nexperiment = source-sampling\n[scene]\nsource = triangle\n"
       "[data]\nz0 = 4 4\ntheta = halfcircle20\nnoise = 0.1\nseed = 1\n[indicator]\nnames = ITheta_S\ndata = retrieved\n"
       "[grid]\nx_min = -3\nx_max = 2\ny_min = -1\ny_max = 3.5\n"},
      {"source-counterexample", "far fields of the two counterexample densities on 20 frequencies",
       "[scenario]\nname = source-counterexample\nexperiment = source-counterexample\n"},
  };
  return list;
}

const PresetInfo* find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

RunResult run_scenario(const Scenario& s) {
  s.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::string dir = s.output_dir.empty() ? "out/" + s.name : s.output_dir;
  Bundle bundle(dir);
  RunResult res;
  res.manifest = {{"name", s.name},
                  {"experiment", experiment_name(s.experiment)},
                  {"tier", s.tier == Tier::Paper ? "paper" : "ci"},
                  {"lambda", format_double(s.lambda)},
                  {"mu", format_double(s.mu)},
                  {"noise_kind", s.noise.kind == NoiseKind::Relative ? "relative" : "absolute"},
                  {"noise_level", format_double(s.noise.level)},
                  {"seed", std::to_string(s.noise.seed)},
                  {"noise_generator", kNoiseGenerator}};
  if (is_obstacle(s.experiment)) {
    res.manifest.push_back({"omega", format_double(s.effective_omega())});
    res.manifest.push_back({"n", std::to_string(s.effective_n())});
    res.manifest.push_back({"obstacle", s.obstacle});
    if (s.tier == Tier::Paper) {
      res.warnings.push_back("paper tier: dense solves on N = 512 grids are slow");
    }
  } else {
    res.manifest.push_back({"source", s.source});
    res.manifest.push_back({"frequency_count", std::to_string(s.frequency_count)});
    res.manifest.push_back({"frequency_max", format_double(s.frequency_max)});
  }
  switch (s.experiment) {
    case Experiment::ObstacleSampling:
    case Experiment::ObstacleRetrieval: run_obstacle(s, bundle, res); break;
    case Experiment::SourceSampling:
    case Experiment::SourceRetrieval: run_source(s, bundle, res); break;
    case Experiment::SourceCounterexample: run_counterexample(s, bundle, res); break;
  }
  res.files = bundle.files();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.manifest.push_back({"wall_time_seconds", format_double(std::round(seconds * 1000.0) / 1000.0)});
  res.manifest.push_back({"degraded", res.degraded ? "true" : "false"});
  for (const auto& w : res.warnings) res.manifest.push_back({"warning", w});
  for (const auto& f : res.files) res.manifest.push_back({"file", f});
  write_metadata((std::filesystem::path(dir) / "manifest.txt").string(), res.manifest);
  return res;
}

}  // namespace phaseless
