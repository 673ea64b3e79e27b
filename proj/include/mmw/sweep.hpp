#pragma once

// Parameter sweeps over one axis with optional Monte Carlo validation, the
// figure presets, the flat JSON configuration, and CSV output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mmw/errorprob.hpp"
#include "mmw/mc_oracle.hpp"

namespace mmw {

enum class SweepAxis { snr_db, lambda_bs, main_gain_db, modulation_order, sigma_be };

const char* axis_name(SweepAxis axis);
SweepAxis parse_axis(const std::string& name);

/// Scenario in boundary units: dB for gains and SNR, degrees for angles.
struct ScenarioSpec {
  double lambda_bs = 1e-4;
  double ball_radius = 141;
  double alpha_los = 2.1;
  double alpha_nlos = 4.0;
  double main_gain_db = 10;
  double side_gain_db = -10;
  double beamwidth_deg = 15;
  double snr_db = 10;
  double noise_level = 1e-6;
  int modulation_order = 2;
  double sigma_be_deg = 0;
  std::string mode = "mmwave";  // mmwave | omni
  bool interference = true;     // false: noise-only link, serving distance still random

  /// Copy with the axis set to value.
  ScenarioSpec with(SweepAxis axis, double value) const;
  Scenario build() const;
  BeamErrorModel beam_error() const;
};

struct SweepSpec {
  std::string name = "sweep";
  SweepAxis axis = SweepAxis::snr_db;
  std::vector<double> grid;
  ScenarioSpec fixed;
  std::string output;            // CSV path; empty = stdout
  std::uint64_t trials = 0;      // Monte Carlo trials per point; 0 = analytic only
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  bool deterministic = false;    // write seconds = 0 so output is byte-stable
  ErrorProbConfig analytic;

  void validate() const;
};

struct SweepRow {
  SweepAxis axis = SweepAxis::snr_db;
  double value = 0;
  std::optional<double> asep_analytic;
  std::optional<McEstimate> mc;
  std::optional<double> z_score;
  std::vector<std::string> flags;
  double seconds = 0;
};

/// Evaluates every grid point on a pool of spec.jobs workers. Rows come back
/// in grid order; numeric failures become flagged rows instead of aborting.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

struct ValidationReport {
  std::vector<SweepRow> rows;
  bool passed = true;       // every point has |z| <= threshold and no errors
  double threshold = 3.0;
};

/// run_sweep with Monte Carlo enabled (spec.trials must be positive).
ValidationReport validate_sweep(const SweepSpec& spec, double z_threshold = 3.0);

inline constexpr const char* kCsvHeader =
    "axis,value,asep_analytic,asep_mc,mc_stderr,z_score,flags,seconds";

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool deterministic);
std::string format_csv(const std::vector<SweepRow>& rows, bool deterministic);

/// Curves of a figure preset (fig1 .. fig4); each has its own name.
std::vector<SweepSpec> preset(const std::string& name);

/// Reads a flat JSON object of scenario and sweep keys. Unknown keys are
/// rejected.
SweepSpec sweep_from_json(const std::string& text);
SweepSpec load_sweep_config(const std::string& path);

}  // namespace mmw
