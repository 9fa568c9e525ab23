#ifndef QSPRING_VALIDATION_HPP
#define QSPRING_VALIDATION_HPP

#include <string>
#include <vector>

// Cross-validation of every closed form against the brute-force reference,
// plus the structural checks (collapse/revival ordering, fractional
// revivals, squeezing bounds, back-action aperiodicity). The same suite
// backs the `validate` CLI command and the acceptance test binary.

namespace qspring::validation {

struct CheckResult {
  std::string name;
  double measured;   // worst observed error, or the margin for floor checks
  double tolerance;  // acceptance bound the measurement is held to
  bool is_floor;     // pass requires measured >= tolerance instead of <=
  bool pass;
  std::string note;
};

struct CriterionResult {
  int id;
  std::string name;
  std::vector<CheckResult> checks;
  double seconds = 0.0;

  bool pass() const;
  const CheckResult* worst() const;  // failing check if any, else largest
                                     // measured/tolerance ratio
};

struct Config {
  int oracle_basis = 400;
  int doubled_basis = 800;        // 0 disables the basis-doubling check
  int oracle_curve_points = 160;  // oracle-equivalence samples per window
  int closed_curve_points = 2000; // closed-form-only grids
  double source_eps = 1e-12;      // default weight-table truncation
  double anchor_eps = 1e-15;      // tighter truncation for the 1e-12 anchors
  int spectral_time_points = 50;
  int spectral_max_level = 400;
  int quadrature_max_level = 80;
  int completeness_terms = 200;
  int spectrum_levels = 50;  // eigenvalues checked per block
  std::vector<int> x_lattice_indices = {0, 1, 5, 24, 25, 60};
  std::vector<double> x_lattice_omega_t = {0.5, 2.0, 10.0, 50.0};
};

Config full_config();
Config quick_config();

// Runs the ten acceptance criteria in order.
std::vector<CriterionResult> run_acceptance(const Config& config);

// Least-squares period scan: fold the samples at every candidate period
// (2..n/2 samples), fit the best periodic signal per fold, and return the
// smallest normalized RMS residual. A genuinely periodic input sampled
// commensurately gives ~0; an aperiodic one stays O(1).
double folded_period_residual_min(const std::vector<double>& values);

// strict interior local maxima with value >= threshold
int count_peaks_above(const std::vector<double>& values, double threshold);

}  // namespace qspring::validation

#endif  // QSPRING_VALIDATION_HPP
