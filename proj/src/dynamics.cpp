#include "qspring/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "qspring/parallel.hpp"

namespace qspring {

namespace {

void require_nonnegative_time(double t) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("time must be >= 0");
  }
}

// |A|^2 as a function of the branch constants; also serves the classical
// limit where the branch is evaluated at a non-integer mean photon number.
double survival_sq(double eta, double beta_sq, double omega_p, double t) {
  const double c = (beta_sq - 1.0) * (beta_sq - 1.0);
  const double s = std::sin(omega_p * t);
  const double denom = (1.0 - c) * (1.0 - c) + 4.0 * c * s * s;
  return beta_sq * beta_sq / std::sqrt(eta * denom);
}

}  // namespace

std::complex<double> survival_amplitude(const FrequencyBranch& branch,
                                        double t) {
  require_nonnegative_time(t);
  const double excess = branch.beta_sq - 1.0;
  const std::complex<double> radicand =
      1.0 - (excess * excess) *
                std::exp(std::complex<double>(0.0, -2.0 * branch.omega_p * t));
  if (!(radicand.real() > 0.0)) {
    throw std::logic_error("survival_amplitude: radicand left the right half plane");
  }
  return branch.beta_sq /
         (std::pow(branch.eta, 0.25) * std::sqrt(radicand));
}

double survival_probability_branch(const FrequencyBranch& branch, double t) {
  require_nonnegative_time(t);
  return survival_sq(branch.eta, branch.beta_sq, branch.omega_p, t);
}

double survival_probability(const SpringParams& params,
                            const SourceState& source, double t) {
  require_nonnegative_time(t);
  double p0 = 0.0;
  for (int p = 0; p <= source.p_max(); ++p) {
    const FrequencyBranch b = frequency_branch(params, p);
    p0 += source.weight(p) * survival_sq(b.eta, b.beta_sq, b.omega_p, t);
  }
  return p0;
}

double survival_classical(const SpringParams& params, double nbar, double t) {
  require_nonnegative_time(t);
  if (!(nbar >= 0.0)) {
    throw std::invalid_argument("survival_classical: nbar must be >= 0");
  }
  const double eta = 1.0 + params.mu * nbar;
  const double root = std::sqrt(eta);
  const double beta_sq = 2.0 * root / (1.0 + root);
  return survival_sq(eta, beta_sq, params.omega * root, t);
}

double variance_x(const SpringParams& params, const SourceState& source,
                  double t) {
  require_nonnegative_time(t);
  double vx = 1.0;
  for (int n = 0; n <= source.p_max(); ++n) {
    const double mu_n = params.mu * n;
    const double s = std::sin(params.omega * t * std::sqrt(1.0 + mu_n));
    vx -= source.weight(n) * s * s * mu_n / (1.0 + mu_n);
  }
  return vx;
}

double variance_p(const SpringParams& params, const SourceState& source,
                  double t) {
  require_nonnegative_time(t);
  double vp = 1.0;
  for (int n = 0; n <= source.p_max(); ++n) {
    const double mu_n = params.mu * n;
    const double s = std::sin(params.omega * t * std::sqrt(1.0 + mu_n));
    vp += source.weight(n) * s * s * mu_n;
  }
  return vp;
}

double variance_x_classical(const SpringParams& params, double nbar,
                            double t) {
  require_nonnegative_time(t);
  const double mu_nbar = params.mu * nbar;
  const double s = std::sin(params.omega * t * std::sqrt(1.0 + mu_nbar));
  return 1.0 - s * s * mu_nbar / (1.0 + mu_nbar);
}

double variance_x_classical_min(const SpringParams& params, double nbar) {
  const double mu_nbar = params.mu * nbar;
  return 1.0 - mu_nbar / (1.0 + mu_nbar);
}

RealSeries sample_survival(const SpringParams& params,
                           const SourceState& source, const TimeGrid& grid) {
  return sample_real(grid, params, "P0", [&](double t) {
    return survival_probability(params, source, t);
  });
}

RealSeries sample_survival_classical(const SpringParams& params, double nbar,
                                     const TimeGrid& grid) {
  return sample_real(grid, params, "Pcl", [&](double t) {
    return survival_classical(params, nbar, t);
  });
}

RealSeries sample_variance_x(const SpringParams& params,
                             const SourceState& source, const TimeGrid& grid) {
  return sample_real(grid, params, "Vx",
                     [&](double t) { return variance_x(params, source, t); });
}

RealSeries sample_variance_p(const SpringParams& params,
                             const SourceState& source, const TimeGrid& grid) {
  return sample_real(grid, params, "Vp",
                     [&](double t) { return variance_p(params, source, t); });
}

RealSeries sample_variance_x_classical(const SpringParams& params, double nbar,
                                       const TimeGrid& grid) {
  return sample_real(grid, params, "VxCl", [&](double t) {
    return variance_x_classical(params, nbar, t);
  });
}

ComplexSeries sample_survival_amplitude(const FrequencyBranch& branch,
                                        const SpringParams& params,
                                        const TimeGrid& grid) {
  return sample_complex(grid, params, "A_p", [&](double t) {
    return survival_amplitude(branch, t);
  });
}

}  // namespace qspring
