// Command-line front end: analytic ASEP sweeps, Monte Carlo validation and
// the figure presets. Every flag can also be set through an MMW_ASEP_*
// environment variable; explicit flags win.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mmw/error.hpp"
#include "mmw/kernels.hpp"
#include "mmw/sweep.hpp"

namespace {

struct RunOptions {
  std::string config;
  std::string out;
  std::uint64_t seed = 1;
  std::uint64_t trials = 0;
  unsigned jobs = 1;
  bool deterministic = false;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* trials_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;
  CLI::Option* out_opt = nullptr;
};

void add_run_flags(CLI::App* cmd, RunOptions& o, bool with_config) {
  if (with_config)
    cmd->add_option("--config", o.config, "Flat JSON sweep configuration")
        ->envname("MMW_ASEP_CONFIG")
        ->required()
        ->check(CLI::ExistingFile);
  o.out_opt = cmd->add_option("--out", o.out, "Output path (CSV file, or directory for presets)")
                  ->envname("MMW_ASEP_OUT");
  o.seed_opt = cmd->add_option("--seed", o.seed, "Monte Carlo seed")->envname("MMW_ASEP_SEED");
  o.trials_opt = cmd->add_option("--trials", o.trials, "Monte Carlo trials per grid point")
                     ->envname("MMW_ASEP_TRIALS");
  o.jobs_opt = cmd->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)")
                   ->envname("MMW_ASEP_JOBS");
  cmd->add_flag("--deterministic", o.deterministic, "Write 0 in the seconds column")
      ->envname("MMW_ASEP_DETERMINISTIC");
}

void apply_overrides(mmw::SweepSpec& spec, const RunOptions& o) {
  if (o.out_opt->count()) spec.output = o.out;
  if (o.seed_opt->count()) spec.seed = o.seed;
  if (o.trials_opt->count()) spec.trials = o.trials;
  if (o.jobs_opt->count()) spec.jobs = o.jobs;
  if (o.deterministic) spec.deterministic = true;
}

void emit(const mmw::SweepSpec& spec, const std::vector<mmw::SweepRow>& rows) {
  if (spec.output.empty() || spec.output == "-") {
    mmw::write_csv(std::cout, rows, spec.deterministic);
    return;
  }
  std::ofstream file(spec.output);
  if (!file) throw mmw::ParameterError("cannot write '" + spec.output + "'");
  mmw::write_csv(file, rows, spec.deterministic);
}

void print_report(const std::string& name, const mmw::ValidationReport& report) {
  std::fprintf(stderr, "%s: %-9s %-10s %-12s %-12s %-10s %s\n", name.c_str(), "axis", "value",
               "analytic", "mc", "z", "status");
  for (const auto& r : report.rows) {
    const bool ok = r.z_score && std::abs(*r.z_score) <= report.threshold;
    std::fprintf(stderr, "%s: %-9s %-10g %-12.5g %-12.5g %-10.3f %s\n", name.c_str(),
                 mmw::axis_name(r.axis), r.value, r.asep_analytic.value_or(NAN),
                 r.mc ? r.mc->mean : NAN, r.z_score.value_or(NAN), ok ? "ok" : "FAIL");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Average symbol error probability of downlink mmWave networks"};
  app.require_subcommand(1);

  RunOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Analytic sweep (Monte Carlo too when --trials > 0)");
  add_run_flags(sweep, sweep_opts, true);

  RunOptions validate_opts;
  validate_opts.trials = 200000;
  auto* validate = app.add_subcommand("validate", "Analytic vs Monte Carlo; exit 1 if any |z| > 3");
  add_run_flags(validate, validate_opts, true);

  RunOptions preset_opts;
  std::string preset_name;
  auto* preset = app.add_subcommand("preset", "Run the curves of a figure preset");
  preset->add_option("name", preset_name, "fig1 | fig2 | fig3 | fig4")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4"}));
  add_run_flags(preset, preset_opts, false);

  CLI11_PARSE(app, argc, argv);

  try {
    std::fprintf(stderr, "kernels: %s\n", mmw::kernels::active_kernels().name);
    if (*sweep) {
      mmw::SweepSpec spec = mmw::load_sweep_config(sweep_opts.config);
      apply_overrides(spec, sweep_opts);
      emit(spec, mmw::run_sweep(spec));
      return 0;
    }
    if (*validate) {
      mmw::SweepSpec spec = mmw::load_sweep_config(validate_opts.config);
      apply_overrides(spec, validate_opts);
      if (spec.trials == 0) spec.trials = validate_opts.trials;
      const mmw::ValidationReport report = mmw::validate_sweep(spec);
      print_report(spec.name, report);
      emit(spec, report.rows);
      std::fprintf(stderr, "%s\n", report.passed ? "validation passed" : "validation FAILED");
      return report.passed ? 0 : 1;
    }
    if (*preset) {
      const std::filesystem::path dir = preset_opts.out.empty() ? "." : preset_opts.out;
      std::filesystem::create_directories(dir);
      for (mmw::SweepSpec spec : mmw::preset(preset_name)) {
        apply_overrides(spec, preset_opts);
        spec.output = (dir / (spec.name + ".csv")).string();
        emit(spec, mmw::run_sweep(spec));
        std::fprintf(stderr, "wrote %s\n", spec.output.c_str());
      }
      return 0;
    }
  } catch (const mmw::ParameterError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
