#include "qspring/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qspring {

SpringParams::SpringParams(double mu_, double omega_) : mu(mu_), omega(omega_) {
  if (!(mu >= 0.0)) {
    throw std::invalid_argument("SpringParams: mu must be >= 0, got " +
                                std::to_string(mu_));
  }
  if (!(omega > 0.0)) {
    throw std::invalid_argument("SpringParams: omega must be > 0, got " +
                                std::to_string(omega_));
  }
}

FrequencyBranch frequency_branch(const SpringParams& params, int p) {
  if (p < 0) {
    throw std::invalid_argument("frequency_branch: p must be >= 0");
  }
  const double eta = 1.0 + params.mu * static_cast<double>(p);
  const double root = std::sqrt(eta);
  return FrequencyBranch{p, eta, params.omega * root, 2.0 * root / (1.0 + root)};
}

double overlap_ground(const FrequencyBranch& branch, int l) {
  if (l < 0) {
    throw std::invalid_argument("overlap_ground: l must be >= 0");
  }
  if (l % 2 != 0) return 0.0;  // odd integrand
  const double excess = branch.beta_sq - 1.0;  // in [0, 1)
  const int m = l / 2;
  if (excess == 0.0) return m == 0 ? 1.0 : 0.0;  // identical wavefunctions
  const double log_mag = 0.5 * std::lgamma(2.0 * m + 1.0) -
                         std::lgamma(m + 1.0) +
                         m * (std::log(excess) - std::log(2.0)) +
                         0.5 * std::log(branch.beta_sq) -
                         0.125 * std::log(branch.eta);
  return std::exp(log_mag);
}

PoissonWeights poisson_weights(double nbar, double eps, int hard_cap) {
  if (!(nbar >= 0.0)) {
    throw std::invalid_argument("poisson_weights: nbar must be >= 0");
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("poisson_weights: eps must be in (0, 1)");
  }
  if (nbar == 0.0) return PoissonWeights{{1.0}, 0};

  std::vector<double> w;
  double wp = std::exp(-nbar);
  w.push_back(wp);
  // compensated cumulative sum: the stopping test stays reliable for eps
  // approaching machine precision
  double sum = wp, comp = 0.0;
  int p = 0;
  while (sum < 1.0 - eps) {
    ++p;
    if (p > hard_cap) {
      throw std::domain_error(
          "poisson_weights: truncation for nbar = " + std::to_string(nbar) +
          " exceeds the hard cap of " + std::to_string(hard_cap) + " terms");
    }
    wp *= nbar / static_cast<double>(p);
    w.push_back(wp);
    const double y = wp - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return PoissonWeights{std::move(w), p};
}

SourceState::SourceState(std::complex<double> alpha, double eps)
    : alpha_(alpha),
      nbar_(std::norm(alpha)),
      eps_(eps),
      weights_(poisson_weights(std::norm(alpha), eps)) {
  const int n = weights_.p_max;
  amplitudes_.resize(n + 1);
  if (nbar_ == 0.0) {
    amplitudes_[0] = 1.0;
    return;
  }
  const double log_abs = std::log(std::abs(alpha));
  const double phase = std::arg(alpha);
  for (int p = 0; p <= n; ++p) {
    const double mag =
        std::exp(p * log_abs - 0.5 * nbar_ - 0.5 * std::lgamma(p + 1.0));
    amplitudes_[p] = std::polar(mag, phase * p);
  }
}

TimeGrid::TimeGrid(std::vector<double> tau, double scaling)
    : tau_(std::move(tau)), scaling_(scaling) {
  if (tau_.empty()) {
    throw std::invalid_argument("TimeGrid: no samples");
  }
  if (!(tau_.front() >= 0.0)) {
    throw std::invalid_argument("TimeGrid: tau must start at >= 0");
  }
  for (std::size_t i = 1; i < tau_.size(); ++i) {
    if (!(tau_[i] > tau_[i - 1])) {
      throw std::invalid_argument("TimeGrid: tau must be strictly increasing");
    }
  }
  if (!(scaling_ > 0.0)) {
    throw std::invalid_argument("TimeGrid: scaling must be > 0");
  }
}

TimeGrid TimeGrid::uniform(double tau_max, int points, double scaling,
                           double tau_min) {
  if (points < 1) {
    throw std::invalid_argument("TimeGrid: points must be >= 1");
  }
  std::vector<double> tau(points);
  if (points == 1) {
    tau[0] = tau_min;
  } else {
    const double step = (tau_max - tau_min) / (points - 1);
    for (int i = 0; i < points; ++i) tau[i] = tau_min + step * i;
  }
  return TimeGrid(std::move(tau), scaling);
}

}  // namespace qspring
