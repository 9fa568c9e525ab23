#ifndef QSPRING_MODEL_HPP
#define QSPRING_MODEL_HPP

#include <complex>
#include <vector>

// Static model quantities for an oscillator whose squared frequency is
// rescaled by 1 + mu * p, where p is the photon number of a quantized
// source mode. Units: hbar = m = 1, omega kept as a free parameter.

namespace qspring {

inline constexpr double kDefaultTruncationEps = 1e-12;
inline constexpr int kPoissonHardCap = 4096;

struct SpringParams {
  double mu;           // modulation strength, >= 0
  double omega = 1.0;  // base angular frequency, > 0

  SpringParams(double mu_, double omega_ = 1.0);
};

// Quantities attached to one photon-number sector p:
//   eta     = 1 + mu p
//   omega_p = omega sqrt(eta)
//   beta_sq = 2 sqrt(eta) / (1 + sqrt(eta)),  in [1, 2)
struct FrequencyBranch {
  int p;
  double eta;
  double omega_p;
  double beta_sq;
};

FrequencyBranch frequency_branch(const SpringParams& params, int p);

// Overlap <psi_l^p | phi_0> between the l-th eigenstate of the branch
// oscillator and the ground state of the base oscillator. Zero for odd l by
// parity; for l = 2m,
//   (beta / eta^(1/8)) sqrt((2m)!) (beta_sq - 1)^m / (2^m m!),
// evaluated through log-factorials so m in the hundreds stays finite.
double overlap_ground(const FrequencyBranch& branch, int l);

struct PoissonWeights {
  std::vector<double> w;  // w[p] = nbar^p e^{-nbar} / p!
  int p_max;              // last retained index; w.size() == p_max + 1
};

// Smallest truncation with cumulative mass >= 1 - eps, built with the
// recurrence w_{p+1} = w_p nbar / (p+1). Throws std::domain_error when the
// required p_max would exceed hard_cap.
PoissonWeights poisson_weights(double nbar, double eps = kDefaultTruncationEps,
                               int hard_cap = kPoissonHardCap);

// Coherent state of the quantized source of modulation: amplitude alpha,
// Poisson weight table w_p = |alpha|^(2p) e^(-|alpha|^2) / p! and the
// coefficients c_p = alpha^p e^(-|alpha|^2 / 2) / sqrt(p!).
class SourceState {
 public:
  explicit SourceState(std::complex<double> alpha,
                       double eps = kDefaultTruncationEps);

  std::complex<double> alpha() const { return alpha_; }
  double nbar() const { return nbar_; }
  int p_max() const { return weights_.p_max; }
  double truncation_eps() const { return eps_; }

  double weight(int p) const { return weights_.w[p]; }
  const std::vector<double>& weights() const { return weights_.w; }

  std::complex<double> amplitude(int p) const { return amplitudes_[p]; }
  const std::vector<std::complex<double>>& amplitudes() const {
    return amplitudes_;
  }

 private:
  std::complex<double> alpha_;
  double nbar_;
  double eps_;
  PoissonWeights weights_;
  std::vector<std::complex<double>> amplitudes_;
};

// Dimensionless time samples tau with omega * t = scaling * tau.
class TimeGrid {
 public:
  TimeGrid(std::vector<double> tau, double scaling);

  // points samples, tau equally spaced on [tau_min, tau_max].
  static TimeGrid uniform(double tau_max, int points, double scaling,
                          double tau_min = 0.0);

  int size() const { return static_cast<int>(tau_.size()); }
  double tau(int i) const { return tau_[i]; }
  const std::vector<double>& taus() const { return tau_; }
  double scaling() const { return scaling_; }

  // physical time of sample i for a given base frequency
  double time_at(int i, double omega) const {
    return scaling_ * tau_[i] / omega;
  }

 private:
  std::vector<double> tau_;
  double scaling_;
};

}  // namespace qspring

#endif  // QSPRING_MODEL_HPP
