#include "mmw/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "mmw/error.hpp"
#include "mmw/rng.hpp"

namespace mmw {
namespace {

using Json = nlohmann::json;

std::string sanitize(std::string text) {
  for (char& c : text)
    if (c == ',' || c == '\n' || c == '\r' || c == '"' || c == ';') c = ' ';
  return text;
}

std::string format_number(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

SweepRow evaluate_point(const SweepSpec& spec, std::size_t index, unsigned mc_jobs) {
  const auto start = std::chrono::steady_clock::now();
  SweepRow row;
  row.axis = spec.axis;
  row.value = spec.grid[index];
  std::optional<Scenario> scenario;
  BeamErrorModel beam;
  try {
    const ScenarioSpec s = spec.fixed.with(spec.axis, row.value);
    scenario = s.build();
    beam = s.beam_error();
    const Modulation& m = scenario->modulation;
    double unclamped = 0;
    if (beam.sigma_be > 0) {
      unclamped = m.neighbor_count * apep_with_beam_error(m.min_distance, *scenario, beam,
                                                          spec.analytic);
    } else {
      unclamped = asep(*scenario, spec.analytic).unclamped;
    }
    if (unclamped > 1.0) row.flags.push_back("asep_clamped");
    row.asep_analytic = std::min(unclamped, 1.0);
  } catch (const std::exception& e) {
    row.flags.push_back("error: " + sanitize(e.what()));
  }
  if (spec.trials > 0 && scenario) {
    try {
      McConfig mc;
      mc.trials = spec.trials;
      std::uint64_t mix = spec.seed + index;
      mc.seed = splitmix64(mix);
      mc.jobs = mc_jobs;
      row.mc = estimate_asep(mc, *scenario, beam);
    } catch (const std::exception& e) {
      row.flags.push_back("mc_error: " + sanitize(e.what()));
    }
  }
  if (row.asep_analytic && row.mc) {
    // Empirical standard error, or the one implied by the analytic value
    // when no error was observed.
    double se = row.mc->std_error;
    if (se == 0.0) {
      const int k = scenario->modulation.neighbor_count;
      const double p = std::clamp(*row.asep_analytic / k, 0.0, 1.0);
      se = k * std::sqrt(p * (1.0 - p) / static_cast<double>(row.mc->trials));
      row.flags.push_back("null_stderr");
    }
    const double diff = *row.asep_analytic - row.mc->mean;
    row.z_score = se > 0 ? diff / se : (diff == 0 ? 0.0 : std::copysign(INFINITY, diff));
  }
  row.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

double get_number(const Json& v, const std::string& key) {
  if (!v.is_number()) throw ParameterError("config key '" + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t get_count(const Json& v, const std::string& key) {
  const double x = get_number(v, key);
  if (x < 0 || x != std::floor(x))
    throw ParameterError("config key '" + key + "' must be a nonnegative integer");
  return static_cast<std::uint64_t>(x);
}

std::string get_string(const Json& v, const std::string& key) {
  if (!v.is_string()) throw ParameterError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

SweepSpec curve(const std::string& name, std::vector<double> grid, ScenarioSpec fixed) {
  SweepSpec s;
  s.name = name;
  s.axis = SweepAxis::snr_db;
  s.grid = std::move(grid);
  s.fixed = std::move(fixed);
  return s;
}

}  // namespace

const char* axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::snr_db: return "snr_db";
    case SweepAxis::lambda_bs: return "lambda_bs";
    case SweepAxis::main_gain_db: return "main_gain_db";
    case SweepAxis::modulation_order: return "modulation_order";
    case SweepAxis::sigma_be: return "sigma_be";
  }
  return "unknown";
}

SweepAxis parse_axis(const std::string& name) {
  for (SweepAxis a : {SweepAxis::snr_db, SweepAxis::lambda_bs, SweepAxis::main_gain_db,
                      SweepAxis::modulation_order, SweepAxis::sigma_be})
    if (name == axis_name(a)) return a;
  throw ParameterError("unknown sweep axis '" + name +
                       "' (expected snr_db, lambda_bs, main_gain_db, modulation_order or "
                       "sigma_be)");
}

ScenarioSpec ScenarioSpec::with(SweepAxis axis, double value) const {
  ScenarioSpec s = *this;
  switch (axis) {
    case SweepAxis::snr_db: s.snr_db = value; break;
    case SweepAxis::lambda_bs: s.lambda_bs = value; break;
    case SweepAxis::main_gain_db: s.main_gain_db = value; break;
    case SweepAxis::modulation_order:
      if (value != std::floor(value)) throw ParameterError("modulation order must be an integer");
      s.modulation_order = static_cast<int>(value);
      break;
    case SweepAxis::sigma_be: s.sigma_be_deg = value; break;
  }
  return s;
}

Scenario ScenarioSpec::build() const {
  const NetworkParams network{lambda_bs, ball_radius, alpha_los, alpha_nlos};
  const Modulation modulation = Modulation::psk(modulation_order);
  const double snr = db_to_linear(snr_db);
  Scenario scenario;
  if (mode == "mmwave") {
    scenario = Scenario::mmwave(network,
                                AntennaPattern::from_db(main_gain_db, side_gain_db, beamwidth_deg),
                                snr, noise_level, modulation);
  } else if (mode == "omni") {
    scenario = Scenario::omnidirectional(network, snr, noise_level, modulation);
  } else {
    throw ParameterError("unknown mode '" + mode + "' (expected mmwave or omni)");
  }
  scenario.interference = interference;
  return scenario;
}

BeamErrorModel ScenarioSpec::beam_error() const { return BeamErrorModel::from_degrees(sigma_be_deg); }

void SweepSpec::validate() const {
  if (grid.empty()) throw ParameterError("sweep grid is empty");
  for (double v : grid) fixed.with(axis, v).build();
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t n = spec.grid.size();
  const unsigned jobs = spec.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                       : spec.jobs;
  const unsigned point_workers = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  // Spare workers go to the Monte Carlo inside each point.
  const unsigned mc_jobs = std::max(1u, jobs / std::max(1u, point_workers));
  std::vector<SweepRow> rows(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) rows[i] = evaluate_point(spec, i, mc_jobs);
  };
  if (point_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < point_workers; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

ValidationReport validate_sweep(const SweepSpec& spec, double z_threshold) {
  if (spec.trials == 0) throw ParameterError("validation needs a positive trial count");
  ValidationReport report;
  report.threshold = z_threshold;
  report.rows = run_sweep(spec);
  for (const auto& r : report.rows) {
    if (!r.z_score || std::abs(*r.z_score) > z_threshold) report.passed = false;
    for (const auto& f : r.flags)
      if (f.rfind("error", 0) == 0 || f.rfind("mc_error", 0) == 0) report.passed = false;
  }
  return report;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool deterministic) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    std::string flags;
    for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
    out << axis_name(r.axis) << ',' << format_number(r.value, 10) << ','
        << (r.asep_analytic ? format_number(*r.asep_analytic, 12) : "") << ','
        << (r.mc ? format_number(r.mc->mean, 12) : "") << ','
        << (r.mc ? format_number(r.mc->std_error, 6) : "") << ','
        << (r.z_score ? format_number(*r.z_score, 4) : "") << ',' << flags << ','
        << format_number(deterministic ? 0.0 : r.seconds, 4) << '\n';
  }
}

std::string format_csv(const std::vector<SweepRow>& rows, bool deterministic) {
  std::ostringstream s;
  write_csv(s, rows, deterministic);
  return s.str();
}

std::vector<SweepSpec> preset(const std::string& name) {
  const std::vector<double> snr_grid{0, 5, 10, 15, 20, 25, 30};
  ScenarioSpec base;  // alpha_L 2.1, alpha_N 4, M 10 dB, m -10 dB, 15 deg, BPSK
  std::vector<SweepSpec> curves;
  if (name == "fig1") {
    for (double lambda : {1e-5, 1e-4}) {
      ScenarioSpec s = base;
      s.lambda_bs = lambda;
      curves.push_back(curve("fig1_mmwave_lambda_" + format_number(lambda, 3), snr_grid, s));
      s.mode = "omni";
      curves.push_back(curve("fig1_omni_lambda_" + format_number(lambda, 3), snr_grid, s));
    }
  } else if (name == "fig2") {
    for (double gain : {20.0, 10.0})
      for (double lambda : {1e-5, 1e-4}) {
        ScenarioSpec s = base;
        s.main_gain_db = gain;
        s.lambda_bs = lambda;
        curves.push_back(curve("fig2_M" + format_number(gain, 3) + "dB_lambda_" +
                                   format_number(lambda, 3),
                               snr_grid, s));
      }
  } else if (name == "fig3") {
    for (int order : {2, 4, 8}) {
      ScenarioSpec s = base;
      s.main_gain_db = 20;
      s.lambda_bs = 1e-4;
      s.modulation_order = order;
      curves.push_back(curve("fig3_order_" + std::to_string(order), snr_grid, s));
    }
  } else if (name == "fig4") {
    for (double sigma : {0.0, 2.0, 5.0, 8.0}) {
      ScenarioSpec s = base;
      s.main_gain_db = 20;
      s.lambda_bs = 1e-5;
      s.sigma_be_deg = sigma;
      curves.push_back(curve("fig4_sigma_" + format_number(sigma, 3) + "deg", snr_grid, s));
    }
  } else {
    throw ParameterError("unknown preset '" + name + "' (expected fig1, fig2, fig3 or fig4)");
  }
  return curves;
}

SweepSpec sweep_from_json(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParameterError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParameterError("config must be a JSON object");
  SweepSpec spec;
  ScenarioSpec& s = spec.fixed;
  for (const auto& [key, v] : doc.items()) {
    if (key == "name") spec.name = get_string(v, key);
    else if (key == "axis") spec.axis = parse_axis(get_string(v, key));
    else if (key == "grid") {
      if (!v.is_array()) throw ParameterError("config key 'grid' must be an array");
      spec.grid.clear();
      for (const auto& x : v) spec.grid.push_back(get_number(x, key));
    }
    else if (key == "output") spec.output = get_string(v, key);
    else if (key == "trials") spec.trials = get_count(v, key);
    else if (key == "seed") spec.seed = get_count(v, key);
    else if (key == "jobs") spec.jobs = static_cast<unsigned>(get_count(v, key));
    else if (key == "deterministic") {
      if (!v.is_boolean()) throw ParameterError("config key 'deterministic' must be a boolean");
      spec.deterministic = v.get<bool>();
    }
    else if (key == "lambda_bs") s.lambda_bs = get_number(v, key);
    else if (key == "ball_radius") s.ball_radius = get_number(v, key);
    else if (key == "alpha_los") s.alpha_los = get_number(v, key);
    else if (key == "alpha_nlos") s.alpha_nlos = get_number(v, key);
    else if (key == "main_gain_db") s.main_gain_db = get_number(v, key);
    else if (key == "side_gain_db") s.side_gain_db = get_number(v, key);
    else if (key == "beamwidth_deg") s.beamwidth_deg = get_number(v, key);
    else if (key == "snr_db") s.snr_db = get_number(v, key);
    else if (key == "noise_level") s.noise_level = get_number(v, key);
    else if (key == "modulation_order") {
      const double order = get_number(v, key);
      if (order != std::floor(order)) throw ParameterError("modulation_order must be an integer");
      s.modulation_order = static_cast<int>(order);
    }
    else if (key == "sigma_be_deg") s.sigma_be_deg = get_number(v, key);
    else if (key == "mode") s.mode = get_string(v, key);
    else if (key == "interference") {
      if (!v.is_boolean()) throw ParameterError("config key 'interference' must be a boolean");
      s.interference = v.get<bool>();
    }
    else throw ParameterError("unknown config key '" + key + "'");
  }
  return spec;
}

SweepSpec load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return sweep_from_json(buf.str());
}

}  // namespace mmw
