// Command-line front end: canned figure presets, parameter sweeps, and the
// validation suite, all emitting deterministic CSV.

#include <CLI11.hpp>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "qspring/backaction.hpp"
#include "qspring/csv.hpp"
#include "qspring/dynamics.hpp"
#include "qspring/model.hpp"
#include "qspring/oracle.hpp"
#include "qspring/validation.hpp"

namespace {

using namespace qspring;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct RunConfig {
  double mu = 0.1;
  double nbar = 4.0;
  double omega = 1.0;
  double tau_max = 20.0;
  int points = 2000;
  double scaling = kTwoPi;
  int basis_size = oracle::kDefaultBasisSize;
  double eps = kDefaultTruncationEps;
  std::string mode = "partial-trace";
  std::string observable = "P0";
  std::string out = "figure.csv";
};

BackactionMode parse_mode(const std::string& mode) {
  if (mode == "partial-trace") return BackactionMode::kPartialTrace;
  if (mode == "conditional") return BackactionMode::kConditional;
  throw CLI::ValidationError("--mode must be partial-trace or conditional");
}

// presets reproducing the built-in figures
void apply_figure_defaults(int id, RunConfig& cfg) {
  switch (id) {
    case 1: cfg = RunConfig{}; cfg.observable = "P0"; break;
    case 2:
      cfg = RunConfig{};
      cfg.mu = 0.3; cfg.nbar = 25.0; cfg.tau_max = 30.0;
      cfg.observable = "P0";
      break;
    case 3: cfg = RunConfig{}; cfg.observable = "Vx"; break;
    case 4:
      cfg = RunConfig{};
      cfg.mu = 0.3; cfg.nbar = 25.0; cfg.tau_max = 30.0;
      cfg.observable = "Vx";
      break;
    case 5:
      cfg = RunConfig{};
      cfg.mu = 0.3; cfg.nbar = 25.0; cfg.tau_max = 1.0;
      cfg.scaling = 16.0 * std::numbers::pi;
      cfg.observable = "ImA";
      break;
    default:
      throw CLI::ValidationError("--figure must be in 1..5");
  }
}

RealSeries evaluate_observable(const RunConfig& cfg) {
  const SpringParams params(cfg.mu, cfg.omega);
  const TimeGrid grid = TimeGrid::uniform(cfg.tau_max, cfg.points, cfg.scaling);
  if (cfg.observable == "Pcl") {
    return sample_survival_classical(params, cfg.nbar, grid);
  }
  if (cfg.observable == "VxCl") {
    return sample_variance_x_classical(params, cfg.nbar, grid);
  }
  const SourceState source(std::sqrt(cfg.nbar), cfg.eps);
  if (cfg.observable == "P0") return sample_survival(params, source, grid);
  if (cfg.observable == "Vx") return sample_variance_x(params, source, grid);
  if (cfg.observable == "Vp") return sample_variance_p(params, source, grid);
  if (cfg.observable == "ImA") {
    const ComplexSeries d =
        sample_mean_displacement(params, source, grid, parse_mode(cfg.mode));
    std::vector<double> imag(d.values.size());
    for (std::size_t i = 0; i < d.values.size(); ++i) {
      imag[i] = d.values[i].imag();
    }
    return RealSeries{d.grid, std::move(imag), "ImA"};
  }
  throw CLI::ValidationError(
      "--observable must be one of P0, Vx, Vp, ImA, Pcl, VxCl");
}

Metadata base_metadata(const RunConfig& cfg) {
  Metadata meta;
  meta.emplace_back("observable", cfg.observable);
  meta.emplace_back("mu", format_double(cfg.mu));
  meta.emplace_back("nbar", format_double(cfg.nbar));
  meta.emplace_back("omega", format_double(cfg.omega));
  meta.emplace_back("tau_max", format_double(cfg.tau_max));
  meta.emplace_back("points", std::to_string(cfg.points));
  meta.emplace_back("scaling", format_double(cfg.scaling));
  meta.emplace_back("eps", format_double(cfg.eps));
  meta.emplace_back("mode", cfg.mode);
  return meta;
}

void write_plot_script(const std::string& script_path, const RunConfig& cfg) {
  std::string py;
  py += "#!/usr/bin/env python3\n";
  py += "import csv\n";
  py += "import matplotlib.pyplot as plt\n\n";
  py += "taus, values = [], []\n";
  py += "with open(\"" + cfg.out + "\") as f:\n";
  py += "    rows = csv.reader(line for line in f if not line.startswith(\"#\"))\n";
  py += "    next(rows)\n";
  py += "    for tau, value in rows:\n";
  py += "        taus.append(float(tau))\n";
  py += "        values.append(float(value))\n\n";
  py += "plt.plot(taus, values, lw=0.8)\n";
  py += "plt.xlabel(\"tau\")\n";
  py += "plt.ylabel(\"" + cfg.observable + "\")\n";
  py += "plt.title(\"mu=" + format_double(cfg.mu) + ", nbar=" +
        format_double(cfg.nbar) + "\")\n";
  py += "plt.show()\n";
  atomic_write(script_path, py);
}

int cmd_figure(int id, RunConfig cfg, const std::vector<bool>& overridden,
               const std::string& plot_script) {
  RunConfig defaults;
  apply_figure_defaults(id, defaults);
  // apply explicit overrides on top of the preset
  const RunConfig user = cfg;
  cfg = defaults;
  if (overridden[0]) cfg.mu = user.mu;
  if (overridden[1]) cfg.nbar = user.nbar;
  if (overridden[2]) cfg.omega = user.omega;
  if (overridden[3]) cfg.tau_max = user.tau_max;
  if (overridden[4]) cfg.points = user.points;
  if (overridden[5]) cfg.scaling = user.scaling;
  if (overridden[6]) cfg.eps = user.eps;
  if (overridden[7]) cfg.mode = user.mode;
  cfg.out = user.out;

  const RealSeries series = evaluate_observable(cfg);
  Metadata meta;
  meta.emplace_back("generator", "qspring figure");
  meta.emplace_back("figure", std::to_string(id));
  for (auto& kv : base_metadata(cfg)) meta.push_back(std::move(kv));
  if (cfg.observable == "Vx") {
    meta.emplace_back(
        "classical_vx_min",
        format_double(variance_x_classical_min(
            SpringParams(cfg.mu, cfg.omega), cfg.nbar)));
  }
  atomic_write(cfg.out, series_csv(series, meta));
  std::printf("wrote %s (%d rows)\n", cfg.out.c_str(), series.grid.size());
  if (!plot_script.empty()) {
    write_plot_script(plot_script, cfg);
    std::printf("wrote %s\n", plot_script.c_str());
  }
  return 0;
}

int cmd_sweep(const RunConfig& cfg, const std::vector<double>& mus,
              const std::vector<double>& nbars) {
  std::vector<SweepRow> rows;
  for (double mu : mus) {
    for (double nbar : nbars) {
      RunConfig cell = cfg;
      cell.mu = mu;
      cell.nbar = nbar;
      const RealSeries series = evaluate_observable(cell);
      for (int i = 0; i < series.grid.size(); ++i) {
        rows.push_back(SweepRow{mu, nbar, series.grid.tau(i), series.values[i]});
      }
    }
  }
  Metadata meta;
  meta.emplace_back("generator", "qspring sweep");
  meta.emplace_back("observable", cfg.observable);
  meta.emplace_back("omega", format_double(cfg.omega));
  meta.emplace_back("tau_max", format_double(cfg.tau_max));
  meta.emplace_back("points", std::to_string(cfg.points));
  meta.emplace_back("scaling", format_double(cfg.scaling));
  meta.emplace_back("eps", format_double(cfg.eps));
  meta.emplace_back("mode", cfg.mode);
  atomic_write(cfg.out, sweep_csv(rows, meta));
  std::printf("wrote %s (%zu rows)\n", cfg.out.c_str(), rows.size());
  return 0;
}

int cmd_validate(const std::string& level, int basis_override) {
  validation::Config cfg = level == "quick" ? validation::quick_config()
                                            : validation::full_config();
  if (basis_override > 0) {
    cfg.oracle_basis = basis_override;
    cfg.doubled_basis = 2 * basis_override;
  }
  const auto results = validation::run_acceptance(cfg);
  int failures = 0;
  for (const auto& criterion : results) {
    for (const auto& check : criterion.checks) {
      std::printf("  [%s] %2d.%s: measured %.3e vs %s %.3e%s%s\n",
                  check.pass ? "ok" : "FAIL", criterion.id, check.name.c_str(),
                  check.measured, check.is_floor ? "floor" : "tolerance",
                  check.tolerance, check.note.empty() ? "" : " -- ",
                  check.note.c_str());
    }
    std::printf("[%s] criterion %d: %s (%.2fs)\n",
                criterion.pass() ? "PASS" : "FAIL", criterion.id,
                criterion.name.c_str(), criterion.seconds);
    if (!criterion.pass()) ++failures;
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(results.size()) - failures, results.size());
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "quantum optical spring: survival probability, quadrature squeezing "
      "and source back-action for an oscillator whose squared frequency "
      "tracks the photon number of a quantized mode"};
  app.require_subcommand(1);
  app.footer(
      "Environment: QSPRING_THREADS overrides the worker thread count.");

  RunConfig cfg;
  int figure_id = 1;
  std::vector<double> mus, nbars;
  std::string level = "quick";
  int basis_override = 0;
  std::string plot_script;

  auto add_common = [&](CLI::App* cmd, bool with_source) {
    auto* mu = cmd->add_option("--mu", cfg.mu, "modulation strength (>= 0)");
    auto* nbar =
        cmd->add_option("--nbar", cfg.nbar, "mean photon number |alpha|^2");
    auto* omega = cmd->add_option("--omega", cfg.omega, "base frequency");
    auto* tau = cmd->add_option("--tau-max", cfg.tau_max, "last tau sample");
    auto* points = cmd->add_option("--points", cfg.points, "grid size");
    auto* scaling =
        cmd->add_option("--scaling", cfg.scaling, "omega t = scaling * tau");
    auto* eps =
        cmd->add_option("--eps", cfg.eps, "source truncation tolerance");
    auto* mode = cmd->add_option("--mode", cfg.mode,
                                 "back-action mode: partial-trace|conditional");
    mode->check(CLI::IsMember({"partial-trace", "conditional"}));
    cmd->add_option("--out", cfg.out, "output CSV path");
    (void)with_source;
    return std::vector<CLI::Option*>{mu, nbar, omega, tau,
                                     points, scaling, eps, mode};
  };

  auto* fig = app.add_subcommand("figure", "write one of the built-in curves");
  fig->add_option("--figure,figure", figure_id, "preset id in 1..5")
      ->required();
  auto fig_opts = add_common(fig, true);
  fig->add_option("--plot-script", plot_script,
                  "also write a matplotlib script for the CSV");

  auto* sweep = app.add_subcommand("sweep", "long-format parameter sweep");
  sweep->add_option("--observable", cfg.observable,
                    "P0|Vx|Vp|ImA|Pcl|VxCl")
      ->required();
  sweep->add_option("--mu", mus, "modulation strengths")
      ->required()
      ->delimiter(',');
  sweep->add_option("--nbar", nbars, "mean photon numbers")
      ->required()
      ->delimiter(',');
  sweep->add_option("--omega", cfg.omega, "base frequency");
  sweep->add_option("--tau-max", cfg.tau_max, "last tau sample");
  sweep->add_option("--points", cfg.points, "grid size");
  sweep->add_option("--scaling", cfg.scaling, "omega t = scaling * tau");
  sweep->add_option("--eps", cfg.eps, "source truncation tolerance");
  sweep->add_option("--mode", cfg.mode, "back-action mode")
      ->check(CLI::IsMember({"partial-trace", "conditional"}));
  sweep->add_option("--out", cfg.out, "output CSV path");

  auto* validate =
      app.add_subcommand("validate", "run the cross-validation suite");
  validate->add_option("--level", level, "quick|full")
      ->check(CLI::IsMember({"quick", "full"}));
  validate->add_option("--basis-size", basis_override,
                       "override the reference basis size");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(fig)) {
      std::vector<bool> overridden;
      overridden.reserve(fig_opts.size());
      for (const CLI::Option* opt : fig_opts) {
        overridden.push_back(opt->count() > 0);
      }
      return cmd_figure(figure_id, cfg, overridden, plot_script);
    }
    if (app.got_subcommand(sweep)) return cmd_sweep(cfg, mus, nbars);
    if (app.got_subcommand(validate)) return cmd_validate(level, basis_override);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
