#include "qspring/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "qspring/backaction.hpp"
#include "qspring/csv.hpp"
#include "qspring/dynamics.hpp"
#include "qspring/model.hpp"
#include "qspring/oracle.hpp"
#include "qspring/parallel.hpp"

namespace qspring::validation {

namespace {

using Complex = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

CheckResult err_check(std::string name, double measured, double tolerance,
                      std::string note = "") {
  return CheckResult{std::move(name), measured,        tolerance,
                     false,           measured <= tolerance, std::move(note)};
}

// pass when measured >= floor (margins, structural signatures)
CheckResult floor_check(std::string name, double measured, double floor,
                        std::string note = "") {
  return CheckResult{std::move(name), measured,        floor,
                     true,            measured >= floor, std::move(note)};
}

// short parameter tags: %g keeps 0.3 as "0.3"
std::string compact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

struct ParamSet {
  SpringParams params;
  SourceState source;
  double tau_max;  // survival/variance window at scaling 2 pi
  std::string tag;
};

struct Setups {
  ParamSet weak;    // mu = 0.1, nbar = 4
  ParamSet strong;  // mu = 0.3, nbar = 25
  std::vector<oracle::BlockHamiltonian> weak_blocks;
  std::vector<oracle::BlockHamiltonian> strong_blocks;
};

Setups make_setups(const Config& cfg) {
  Setups s{
      ParamSet{SpringParams(0.1), SourceState(2.0, cfg.source_eps), 20.0,
               "mu=0.1,nbar=4"},
      ParamSet{SpringParams(0.3), SourceState(5.0, cfg.source_eps), 30.0,
               "mu=0.3,nbar=25"},
      {},
      {}};
  s.weak_blocks = oracle::build_blocks(s.weak.params, s.weak.source.p_max(),
                                       cfg.oracle_basis);
  s.strong_blocks = oracle::build_blocks(
      s.strong.params, s.strong.source.p_max(), cfg.oracle_basis);
  return s;
}

Complex displacement_from_density(const HermitianMatrix& rho) {
  Complex d = 0.0;
  for (int n = 1; n < rho.dim(); ++n) {
    d += std::sqrt(static_cast<double>(n)) * rho(n, n - 1);
  }
  return d;
}

double max_entry_diff(const HermitianMatrix& a, const HermitianMatrix& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

template <typename F>
CriterionResult timed_criterion(int id, std::string name, F&& body) {
  CriterionResult result;
  result.id = id;
  result.name = std::move(name);
  const auto start = std::chrono::steady_clock::now();
  body(result.checks);
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

template <typename F>
double golden_minimum(F&& f, double a, double b) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 200 && (b - a) > 1e-15; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return f(0.5 * (a + b));
}

// ---- criterion 1: t = 0 anchors ------------------------------------------

CriterionResult criterion_anchors(const Config& cfg) {
  return timed_criterion(1, "t=0 anchors", [&](std::vector<CheckResult>& out) {
    const double tol = 1e-12;
    for (const auto& [mu, nbar] : {std::pair{0.1, 4.0}, std::pair{0.3, 25.0}}) {
      const SpringParams params(mu);
      const SourceState source(std::sqrt(nbar), cfg.anchor_eps);
      const std::string tag =
          " (mu=" + compact(mu) + ",nbar=" + compact(nbar) + ")";
      out.push_back(err_check(
          "P0(0)=1" + tag,
          std::abs(survival_probability(params, source, 0.0) - 1.0), tol));
      out.push_back(err_check("Vx(0)=1" + tag,
                              std::abs(variance_x(params, source, 0.0) - 1.0),
                              tol));
      out.push_back(err_check("Vp(0)=1" + tag,
                              std::abs(variance_p(params, source, 0.0) - 1.0),
                              tol));
      out.push_back(err_check(
          "d(0)=alpha" + tag,
          std::abs(mean_displacement(params, source, 0.0) - source.alpha()),
          tol));
    }
    double worst_x = 0.0;
    const SpringParams strong(0.3);
    for (int n : cfg.x_lattice_indices) {
      for (int l : cfg.x_lattice_indices) {
        worst_x = std::max(
            worst_x, std::abs(x_matrix_element(strong, n, l, 0.0) - 1.0));
      }
    }
    out.push_back(err_check("X_{n,l}(0)=1 over lattice", worst_x, tol));
  });
}

// ---- criterion 2: unmodulated limit ---------------------------------------

CriterionResult criterion_unmodulated(const Config& cfg) {
  return timed_criterion(2, "unmodulated limit (mu=0)",
                         [&](std::vector<CheckResult>& out) {
    const double tol = 1e-12;
    const SpringParams params(0.0);
    const SourceState source(2.0, cfg.anchor_eps);
    const TimeGrid grid =
        TimeGrid::uniform(20.0, cfg.closed_curve_points, kTwoPi);
    double p0_err = 0.0, vx_err = 0.0, vp_err = 0.0, d_err = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
      const double t = grid.time_at(i, params.omega);
      p0_err = std::max(p0_err,
                        std::abs(survival_probability(params, source, t) - 1.0));
      vx_err = std::max(vx_err, std::abs(variance_x(params, source, t) - 1.0));
      vp_err = std::max(vp_err, std::abs(variance_p(params, source, t) - 1.0));
      d_err = std::max(
          d_err, std::abs(mean_displacement(params, source, t) - source.alpha()));
    }
    out.push_back(err_check("P0 == 1 on grid", p0_err, tol));
    out.push_back(err_check("Vx == 1 on grid", vx_err, tol));
    out.push_back(err_check("Vp == 1 on grid", vp_err, tol));
    out.push_back(err_check("d == alpha on grid", d_err, tol));

    const HermitianMatrix rho0 = source_density(params, source, 0.0);
    double rho_err = 0.0;
    for (int k = 1; k <= 8; ++k) {
      const double t = grid.time_at(k * (grid.size() - 1) / 8, params.omega);
      rho_err = std::max(rho_err,
                         max_entry_diff(source_density(params, source, t), rho0));
    }
    out.push_back(err_check("rho_source constant", rho_err, tol));
  });
}

// ---- criterion 3: closed form vs spectral sum -----------------------------

CriterionResult criterion_spectral(const Config& cfg) {
  return timed_criterion(3, "survival amplitude vs spectral sum",
                         [&](std::vector<CheckResult>& out) {
    double worst = 0.0;
    for (double mu : {0.1, 0.3}) {
      const SpringParams params(mu);
      for (int p : {0, 1, 4, 25, 60}) {
        const FrequencyBranch branch = frequency_branch(params, p);
        for (int i = 0; i < cfg.spectral_time_points; ++i) {
          const double t = 20.0 * i / (cfg.spectral_time_points - 1);
          const Complex closed = survival_amplitude(branch, t);
          const Complex spectral = oracle::survival_amplitude_spectral(
              branch, t, cfg.spectral_max_level);
          worst = std::max(worst, std::abs(closed - spectral));
        }
      }
    }
    out.push_back(err_check("A_p closed vs truncated spectral sum", worst,
                            1e-10, "mu in {0.1,0.3}, p in {0,1,4,25,60}"));
  });
}

// ---- criterion 4: overlap completeness and quadrature ----------------------

CriterionResult criterion_overlaps(const Config& cfg) {
  return timed_criterion(4, "overlap completeness and quadrature",
                         [&](std::vector<CheckResult>& out) {
    double worst_sum = 0.0, worst_quad = 0.0;
    for (double mu : {0.1, 0.3}) {
      const SpringParams params(mu);
      for (int p : {0, 1, 4, 25, 60}) {
        const FrequencyBranch branch = frequency_branch(params, p);
        double sum = 0.0, comp = 0.0;
        for (int m = 0; m <= cfg.completeness_terms; ++m) {
          const double ov = overlap_ground(branch, 2 * m);
          const double y = ov * ov - comp;
          const double t = sum + y;
          comp = (t - sum) - y;
          sum = t;
        }
        worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
        for (int l = 0; l <= cfg.quadrature_max_level; ++l) {
          const double quad = oracle::overlap_quadrature(branch, l);
          worst_quad =
              std::max(worst_quad, std::abs(overlap_ground(branch, l) - quad));
        }
      }
    }
    out.push_back(err_check("sum_m overlap(2m)^2 == 1 at M=200", worst_sum,
                            1e-10));
    out.push_back(
        err_check("closed-form overlap vs quadrature", worst_quad, 1e-10));
  });
}

// ---- criterion 5: oracle equivalence ---------------------------------------

struct WindowErrors {
  double p0 = 0.0, vx = 0.0, vp = 0.0, rho = 0.0, imd = 0.0, leakage = 0.0;
};

WindowErrors window_errors(const ParamSet& set,
                           const std::vector<oracle::BlockHamiltonian>& blocks,
                           double tau_max, double scaling, int points) {
  const TimeGrid grid = TimeGrid::uniform(tau_max, points, scaling);
  const oracle::JointState init =
      oracle::initial_state(set.source, blocks.front().basis_size);
  std::vector<WindowErrors> per_point(grid.size());
  parallel_for(static_cast<std::size_t>(grid.size()), [&](std::size_t i) {
    const double t = grid.time_at(static_cast<int>(i), set.params.omega);
    const oracle::JointState state = oracle::evolve(init, blocks, t);
    WindowErrors& e = per_point[i];
    e.leakage = state.max_top_decile_leakage;

    e.p0 = std::abs(oracle::ground_probability(state) -
                    survival_probability(set.params, set.source, t));
    const oracle::Moments m = oracle::moments(state, set.params.omega);
    const double vx_oracle =
        (m.xx - m.x * m.x) * 2.0 * set.params.omega;
    const double vp_oracle =
        (m.pp - m.p * m.p) * 2.0 / set.params.omega;
    e.vx = std::abs(vx_oracle - variance_x(set.params, set.source, t));
    e.vp = std::abs(vp_oracle - variance_p(set.params, set.source, t));

    const HermitianMatrix rho_oracle = oracle::reduced_source(state);
    const HermitianMatrix rho_closed =
        source_density(set.params, set.source, t);
    e.rho = max_entry_diff(rho_oracle, rho_closed);
    e.imd = std::abs(displacement_from_density(rho_oracle).imag() -
                     mean_displacement(set.params, set.source, t).imag());
  });
  WindowErrors worst;
  for (const auto& e : per_point) {
    worst.p0 = std::max(worst.p0, e.p0);
    worst.vx = std::max(worst.vx, e.vx);
    worst.vp = std::max(worst.vp, e.vp);
    worst.rho = std::max(worst.rho, e.rho);
    worst.imd = std::max(worst.imd, e.imd);
    worst.leakage = std::max(worst.leakage, e.leakage);
  }
  return worst;
}

CriterionResult criterion_oracle_equivalence(const Config& cfg,
                                             const Setups& setups) {
  return timed_criterion(5, "closed forms vs truncated-basis brute force",
                         [&](std::vector<CheckResult>& out) {
    const double tol = 1e-8;
    struct Job {
      const ParamSet* set;
      const std::vector<oracle::BlockHamiltonian>* blocks;
      double tau_max, scaling;
      std::string tag;
    };
    const std::vector<Job> jobs = {
        {&setups.weak, &setups.weak_blocks, setups.weak.tau_max, kTwoPi,
         setups.weak.tag + " survival window"},
        {&setups.strong, &setups.strong_blocks, setups.strong.tau_max, kTwoPi,
         setups.strong.tag + " survival window"},
        {&setups.strong, &setups.strong_blocks, 1.0, 16.0 * std::numbers::pi,
         setups.strong.tag + " back-action window"},
    };
    for (const Job& job : jobs) {
      const WindowErrors e = window_errors(*job.set, *job.blocks, job.tau_max,
                                           job.scaling,
                                           cfg.oracle_curve_points);
      out.push_back(err_check("P0 vs oracle, " + job.tag, e.p0, tol));
      out.push_back(err_check("Vx vs oracle, " + job.tag, e.vx, tol));
      out.push_back(err_check("Vp vs oracle, " + job.tag, e.vp, tol));
      out.push_back(err_check("rho_source vs oracle, " + job.tag, e.rho, tol));
      out.push_back(err_check("Im<a> vs oracle, " + job.tag, e.imd, tol));
      out.push_back(err_check("basis leakage, " + job.tag, e.leakage,
                              oracle::kLeakageThreshold));
    }

    // X kernel over the index/time lattice, against pairwise block evolution
    double worst_x = 0.0;
    for (double omega_t : cfg.x_lattice_omega_t) {
      const double t = omega_t / setups.strong.params.omega;
      std::vector<Eigen::VectorXcd> evolved;
      evolved.reserve(cfg.x_lattice_indices.size());
      for (int n : cfg.x_lattice_indices) {
        evolved.push_back(
            oracle::evolved_ground(setups.strong_blocks[n], t));
      }
      for (std::size_t a = 0; a < cfg.x_lattice_indices.size(); ++a) {
        for (std::size_t b = 0; b < cfg.x_lattice_indices.size(); ++b) {
          const Complex closed =
              x_matrix_element(setups.strong.params, cfg.x_lattice_indices[a],
                               cfg.x_lattice_indices[b], t);
          worst_x =
              std::max(worst_x, std::abs(evolved[a].dot(evolved[b]) - closed));
        }
      }
    }
    out.push_back(err_check("X_{n,l} vs oracle over lattice", worst_x, tol));
  });
}

// ---- criterion 6: squeezing and uncertainty bounds -------------------------

CriterionResult criterion_squeezing(const Config& cfg, const Setups& setups) {
  return timed_criterion(6, "squeezing and uncertainty bounds",
                         [&](std::vector<CheckResult>& out) {
    double worst_above_one = 0.0;
    double worst_uncertainty = 0.0;
    for (const ParamSet* set : {&setups.weak, &setups.strong}) {
      for (const auto& [tau_max, scaling] :
           {std::pair{set->tau_max, kTwoPi},
            std::pair{1.0, 16.0 * std::numbers::pi}}) {
        const TimeGrid grid =
            TimeGrid::uniform(tau_max, cfg.closed_curve_points, scaling);
        for (int i = 0; i < grid.size(); ++i) {
          const double t = grid.time_at(i, set->params.omega);
          const double vx = variance_x(set->params, set->source, t);
          const double vp = variance_p(set->params, set->source, t);
          worst_above_one = std::max(worst_above_one, vx - 1.0);
          worst_uncertainty = std::max(worst_uncertainty, 1.0 - vx * vp);
        }
      }
    }
    out.push_back(err_check("Vx <= 1 everywhere (excess)", worst_above_one,
                            1e-12));
    out.push_back(err_check("Vx*Vp >= 1 everywhere (deficit)",
                            worst_uncertainty, 1e-12));
  });
}

// ---- criterion 7: classical bound and periodicity --------------------------

CriterionResult criterion_classical(const Config& cfg, const Setups& setups) {
  return timed_criterion(7, "classical modulation bound",
                         [&](std::vector<CheckResult>& out) {
    struct Expected {
      const ParamSet* set;
      double exact_min;
    };
    for (const auto& [set, exact_min] :
         {Expected{&setups.weak, 5.0 / 7.0},
          Expected{&setups.strong, 2.0 / 17.0}}) {
      const double nbar = set->source.nbar();
      const SpringParams& params = set->params;
      out.push_back(err_check(
          "Vx classical floor value, " + set->tag,
          std::abs(variance_x_classical_min(params, nbar) - exact_min),
          1e-12));

      // grid scan plus golden refinement around the best sample
      const TimeGrid grid =
          TimeGrid::uniform(set->tau_max, cfg.closed_curve_points, kTwoPi);
      int best = 0;
      double best_value = variance_x_classical(params, nbar, 0.0);
      for (int i = 1; i < grid.size(); ++i) {
        const double v =
            variance_x_classical(params, nbar, grid.time_at(i, params.omega));
        if (v < best_value) {
          best_value = v;
          best = i;
        }
      }
      const double lo = grid.time_at(std::max(0, best - 1), params.omega);
      const double hi =
          grid.time_at(std::min(grid.size() - 1, best + 1), params.omega);
      const double refined = golden_minimum(
          [&](double t) { return variance_x_classical(params, nbar, t); }, lo,
          hi);
      out.push_back(err_check(
          "min Vx classical over grid vs floor, " + set->tag,
          std::abs(refined - variance_x_classical_min(params, nbar)), 1e-10));

      const double omega_a = params.omega * std::sqrt(1.0 + params.mu * nbar);
      const double period = std::numbers::pi / omega_a;
      double worst = 0.0;
      for (int i = 0; i < 400; ++i) {
        const double t = set->tau_max * kTwoPi * i / 400.0 / params.omega;
        worst = std::max(worst,
                         std::abs(survival_classical(params, nbar, t + period) -
                                  survival_classical(params, nbar, t)));
      }
      out.push_back(err_check("P_cl periodicity pi/omega_alpha, " + set->tag,
                              worst, 1e-12));
    }
  });
}

// ---- criterion 8: revival structure -----------------------------------------

CriterionResult criterion_revival(const Config& cfg, const Setups& setups) {
  return timed_criterion(8, "collapse/revival structure",
                         [&](std::vector<CheckResult>& out) {
    {
      const ParamSet& set = setups.weak;
      const TimeGrid grid =
          TimeGrid::uniform(set.tau_max, cfg.closed_curve_points, kTwoPi);
      const RealSeries p0 = sample_survival(set.params, set.source, grid);
      const double t_rev =
          std::sqrt(1.0 + set.params.mu * set.source.nbar()) / set.params.mu;
      double revival_peak = 0.0, collapse_max = 0.0;
      for (int i = 0; i < grid.size(); ++i) {
        const double tau = grid.tau(i);
        if (tau >= t_rev - 1.0 && tau <= t_rev + 1.0) {
          revival_peak = std::max(revival_peak, p0.values[i]);
        }
        if (tau >= 4.0 && tau <= 8.0) {
          collapse_max = std::max(collapse_max, p0.values[i]);
        }
      }
      const double margin = revival_peak - collapse_max;
      out.push_back(floor_check(
          "revival peak exceeds collapse max, " + set.tag, margin, 0.0,
          "peak " + format_double(revival_peak) + " vs collapse " +
              format_double(collapse_max)));
      out.push_back(floor_check(
          "revival margin >= 0.1, " + set.tag, margin, 0.1,
          "P0 stays within [0.98, 1] here: the Poisson-weighted branch dips "
          "bound the attainable margin near 0.017"));
    }
    {
      const ParamSet& set = setups.strong;
      const TimeGrid grid = TimeGrid::uniform(set.tau_max, 3000, kTwoPi);
      const RealSeries p0 = sample_survival(set.params, set.source, grid);
      const double t_rev =
          std::sqrt(1.0 + set.params.mu * set.source.nbar()) / set.params.mu;

      std::vector<double> plateau_samples;
      for (int i = 0; i < grid.size(); ++i) {
        if (grid.tau(i) >= 1.5 && grid.tau(i) <= 3.5) {
          plateau_samples.push_back(p0.values[i]);
        }
      }
      std::nth_element(plateau_samples.begin(),
                       plateau_samples.begin() + plateau_samples.size() / 2,
                       plateau_samples.end());
      const double plateau = plateau_samples[plateau_samples.size() / 2];

      double half_max = 0.0;
      std::vector<double> revival_window;
      for (int i = 0; i < grid.size(); ++i) {
        const double tau = grid.tau(i);
        if (std::abs(tau - 0.5 * t_rev) <= 0.5) {
          half_max = std::max(half_max, p0.values[i]);
        }
        if (std::abs(tau - t_rev) <= 1.6) {
          revival_window.push_back(p0.values[i]);
        }
      }
      out.push_back(floor_check(
          "fractional revival at t_rev/2 above plateau, " + set.tag,
          half_max - plateau, 0.01,
          "plateau " + format_double(plateau)));
      out.push_back(floor_check(
          "multi-peak main revival, " + set.tag,
          static_cast<double>(
              count_peaks_above(revival_window, plateau + 0.05)),
          3.0));
    }
  });
}

// ---- criterion 9: back-action structure -------------------------------------

CriterionResult criterion_backaction(const Config& cfg, const Setups& setups) {
  return timed_criterion(9, "back-action build-up and aperiodicity",
                         [&](std::vector<CheckResult>& out) {
    const ParamSet& set = setups.strong;
    const TimeGrid grid = TimeGrid::uniform(1.0, cfg.closed_curve_points,
                                            16.0 * std::numbers::pi);
    const ComplexSeries d =
        sample_mean_displacement(set.params, set.source, grid);
    std::vector<double> imd(d.values.size());
    double max_abs_imd = 0.0;
    for (std::size_t i = 0; i < d.values.size(); ++i) {
      imd[i] = d.values[i].imag();
      max_abs_imd = std::max(max_abs_imd, std::abs(imd[i]));
    }
    out.push_back(err_check("Im<a>(0) == 0", std::abs(imd[0]), 1e-12));
    out.push_back(floor_check("Im<a> becomes nonzero", max_abs_imd, 1e-3));
    out.push_back(floor_check("no period fits (folded residual)",
                              folded_period_residual_min(imd), 1e-3));

    double diag_err = 0.0;
    for (int k = 0; k <= 24; ++k) {
      const double t = grid.time_at(k * (grid.size() - 1) / 24,
                                    set.params.omega);
      const HermitianMatrix rho = source_density(set.params, set.source, t);
      for (int n = 0; n < rho.dim(); ++n) {
        diag_err = std::max(diag_err, std::abs(rho(n, n).real() -
                                               std::norm(set.source.amplitude(n))));
        diag_err = std::max(diag_err, std::abs(rho(n, n).imag()));
      }
    }
    out.push_back(err_check("diagonal rho_{n,n} frozen at |c_n|^2 (closed)",
                            diag_err, 1e-10));

    double diag_err_oracle = 0.0;
    const oracle::JointState init =
        oracle::initial_state(set.source, cfg.oracle_basis);
    for (double tau : {0.5, 1.0}) {
      const double t = 16.0 * std::numbers::pi * tau / set.params.omega;
      const oracle::JointState state =
          oracle::evolve(init, setups.strong_blocks, t);
      const HermitianMatrix rho = oracle::reduced_source(state);
      for (int n = 0; n < rho.dim(); ++n) {
        diag_err_oracle =
            std::max(diag_err_oracle,
                     std::abs(rho(n, n).real() -
                              std::norm(set.source.amplitude(n))));
      }
    }
    out.push_back(err_check("diagonal rho_{n,n} frozen at |c_n|^2 (oracle)",
                            diag_err_oracle, 1e-10));
  });
}

// ---- criterion 10: oracle self-consistency ----------------------------------

// Evolved joint states at several times with blocks built at the given basis
// size and discarded immediately, so the doubled basis never holds every
// eigendecomposition at once.
std::vector<oracle::JointState> streamed_states(const ParamSet& set,
                                                int basis_size,
                                                const std::vector<double>& times) {
  std::vector<oracle::JointState> states(times.size());
  for (auto& st : states) {
    st.basis_size = basis_size;
    st.blocks.resize(set.source.p_max() + 1);
  }
  parallel_for(static_cast<std::size_t>(set.source.p_max()) + 1,
               [&](std::size_t p) {
    const oracle::BlockHamiltonian block =
        oracle::build_block(set.params, static_cast<int>(p), basis_size);
    for (std::size_t i = 0; i < times.size(); ++i) {
      states[i].blocks[p] =
          set.source.amplitude(static_cast<int>(p)) *
          oracle::evolved_ground(block, times[i]);
    }
  });
  return states;
}

struct Snapshot {
  double p0, vx, vp;
  Eigen::MatrixXcd rho;
  Complex d;
};

Snapshot snapshot_of(const oracle::JointState& state, const ParamSet& set) {
  Snapshot s;
  s.p0 = oracle::ground_probability(state);
  const oracle::Moments m = oracle::moments(state, set.params.omega);
  s.vx = (m.xx - m.x * m.x) * 2.0 * set.params.omega;
  s.vp = (m.pp - m.p * m.p) * 2.0 / set.params.omega;
  const HermitianMatrix rho = oracle::reduced_source(state);
  s.rho = rho.matrix();
  s.d = displacement_from_density(rho);
  return s;
}

CriterionResult criterion_oracle_self(const Config& cfg, const Setups& setups) {
  return timed_criterion(10, "oracle self-consistency",
                         [&](std::vector<CheckResult>& out) {
    double worst_rel = 0.0;
    for (const auto* blocks : {&setups.weak_blocks, &setups.strong_blocks}) {
      const SpringParams& params = blocks == &setups.weak_blocks
                                       ? setups.weak.params
                                       : setups.strong.params;
      for (const auto& block : *blocks) {
        const FrequencyBranch branch = frequency_branch(params, block.p);
        for (int n = 0; n < cfg.spectrum_levels; ++n) {
          const double exact = branch.omega_p * (n + 0.5);
          worst_rel = std::max(
              worst_rel, std::abs(block.eigenvalues(n) - exact) / exact);
        }
      }
    }
    out.push_back(err_check(
        "block spectrum vs omega_p (n + 1/2)", worst_rel, 1e-9,
        "lowest " + std::to_string(cfg.spectrum_levels) + " of every block"));

    if (cfg.doubled_basis > 0) {
      double worst = 0.0;
      for (const ParamSet* set : {&setups.weak, &setups.strong}) {
        std::vector<double> times;
        for (double f : {0.25, 0.5, 0.75}) {
          times.push_back(f * set->tau_max * kTwoPi / set->params.omega);
        }
        if (set == &setups.strong) {
          times.push_back(16.0 * std::numbers::pi * 0.5 / set->params.omega);
          times.push_back(16.0 * std::numbers::pi * 1.0 / set->params.omega);
        }
        const auto base = streamed_states(*set, cfg.oracle_basis, times);
        const auto doubled = streamed_states(*set, cfg.doubled_basis, times);
        for (std::size_t i = 0; i < times.size(); ++i) {
          const Snapshot a = snapshot_of(base[i], *set);
          const Snapshot b = snapshot_of(doubled[i], *set);
          worst = std::max({worst, std::abs(a.p0 - b.p0),
                            std::abs(a.vx - b.vx), std::abs(a.vp - b.vp),
                            (a.rho - b.rho).cwiseAbs().maxCoeff(),
                            std::abs(a.d - b.d)});
        }
      }
      out.push_back(err_check(
          "basis doubling shift of observables", worst, 1e-9,
          std::to_string(cfg.oracle_basis) + " -> " +
              std::to_string(cfg.doubled_basis)));
    }

    const ParamSet& set = setups.strong;
    const double purity0 =
        oracle::purity(source_density(set.params, set.source, 0.0));
    out.push_back(err_check("purity(rho_source) == 1 at t=0",
                            std::abs(purity0 - 1.0), 1e-10));
    const double purity_later = oracle::purity(
        source_density(set.params, set.source, 2.0 / set.params.omega));
    out.push_back(floor_check("purity drop for t > 0", 1.0 - purity_later,
                              1e-3,
                              "purity " + format_double(purity_later)));
  });
}

}  // namespace

bool CriterionResult::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

const CheckResult* CriterionResult::worst() const {
  if (checks.empty()) return nullptr;
  // closeness to the bound; floor checks invert the ratio
  const auto badness = [](const CheckResult& c) {
    if (c.is_floor) {
      return c.measured > 0.0 ? c.tolerance / c.measured
                              : std::numeric_limits<double>::infinity();
    }
    return c.tolerance > 0.0 ? c.measured / c.tolerance : c.measured;
  };
  const CheckResult* worst = &checks.front();
  for (const auto& c : checks) {
    if (!c.pass && worst->pass) {
      worst = &c;
      continue;
    }
    if (c.pass == worst->pass && badness(c) > badness(*worst)) worst = &c;
  }
  return worst;
}

Config full_config() { return Config{}; }

Config quick_config() {
  Config cfg;
  cfg.oracle_basis = 200;
  cfg.doubled_basis = 400;
  cfg.oracle_curve_points = 48;
  cfg.closed_curve_points = 800;
  cfg.spectral_time_points = 20;
  cfg.quadrature_max_level = 40;
  cfg.x_lattice_indices = {0, 1, 25, 60};
  cfg.spectrum_levels = 15;
  cfg.x_lattice_omega_t = {0.5, 2.0, 10.0};
  return cfg;
}

std::vector<CriterionResult> run_acceptance(const Config& config) {
  const Setups setups = make_setups(config);
  std::vector<CriterionResult> results;
  results.push_back(criterion_anchors(config));
  results.push_back(criterion_unmodulated(config));
  results.push_back(criterion_spectral(config));
  results.push_back(criterion_overlaps(config));
  results.push_back(criterion_oracle_equivalence(config, setups));
  results.push_back(criterion_squeezing(config, setups));
  results.push_back(criterion_classical(config, setups));
  results.push_back(criterion_revival(config, setups));
  results.push_back(criterion_backaction(config, setups));
  results.push_back(criterion_oracle_self(config, setups));
  return results;
}

double folded_period_residual_min(const std::vector<double>& values) {
  const int n = static_cast<int>(values.size());
  if (n < 8) {
    throw std::invalid_argument("folded_period_residual_min: too few samples");
  }
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / n;
  double variance = 0.0;
  for (double v : values) variance += (v - mean) * (v - mean);
  variance /= n;
  if (variance == 0.0) return 0.0;  // constant signal: any period fits

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> bin_sum;
  std::vector<int> bin_count;
  for (int k = 2; k <= n / 2; ++k) {
    bin_sum.assign(k, 0.0);
    bin_count.assign(k, 0);
    for (int i = 0; i < n; ++i) {
      bin_sum[i % k] += values[i];
      ++bin_count[i % k];
    }
    double residual_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double fit = bin_sum[i % k] / bin_count[i % k];
      residual_sq += (values[i] - fit) * (values[i] - fit);
    }
    best = std::min(best, std::sqrt(residual_sq / n / variance));
  }
  return best;
}

int count_peaks_above(const std::vector<double>& values, double threshold) {
  int peaks = 0;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] > values[i - 1] && values[i] > values[i + 1] &&
        values[i] >= threshold) {
      ++peaks;
    }
  }
  return peaks;
}

}  // namespace qspring::validation
