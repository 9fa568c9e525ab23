#ifndef QSPRING_BACKACTION_HPP
#define QSPRING_BACKACTION_HPP

#include <Eigen/Dense>
#include <complex>

#include "qspring/model.hpp"
#include "qspring/series.hpp"

// Back-action of the oscillator on the quantized source: the source density
// matrix under the number-conditioned evolution and the mean displacement
// <a>(t), via SU(1,1) disentangling of each branch propagator.

namespace qspring {

// Disentangling data for exp(-i h(n) t) acting on the oscillator ground
// state, where h(n) is the branch Hamiltonian with stiffness 1 + mu n:
//   exp(gamma_+ K_+ + gamma_- K_- + gamma_3 K_3)
//     = exp(Gamma_+ K_+) exp(ln(Gamma_3) K_3) exp(Gamma_- K_-)
// with K_3 = (b'b + bb')/4, K_+ = b'^2/2 and
//   gamma_+- = -i mu omega n t / 2,  gamma_3 = -i omega t (mu n + 2).
// All Gamma's are evaluated through the even functions cosh(beta) and
// sinh(beta)/beta of beta_arg_sq = gamma_3^2/4 - gamma_+ gamma_-, so no
// square root of beta_arg_sq is ever branch-sensitive.
struct Su11Gammas {
  int n;
  std::complex<double> gamma_plus;
  std::complex<double> gamma_minus;
  std::complex<double> gamma_3;
  std::complex<double> beta_arg_sq;  // equals -(omega t)^2 (1 + mu n)
  std::complex<double> Gamma_plus;   // |Gamma_plus| < 1
  std::complex<double> Gamma_minus;
  std::complex<double> Gamma_3;      // |Gamma_3| <= 1
  // Quarter root of Gamma_3 continued in t from its value 1 at t = 0. This is
  // the ground-state amplitude <phi_0|exp(-i h(n) t)|phi_0>; the principal
  // quarter root would jump as Gamma_3 winds around the origin.
  std::complex<double> Gamma_3_root4;
};

Su11Gammas su11_coefficients(const SpringParams& params, int n, double t);

// Overlap kernel X_{n,l} = <phi_0| e^{+i h(n) t} e^{-i h(l) t} |phi_0>
//   = conj(G3n^(1/4)) G3l^(1/4) / sqrt(1 - conj(Gamma_+n) Gamma_+l),
// principal square root (the radicand stays in the right half plane because
// |Gamma_+| < 1). X_{n,n} = 1 and X_{n,l} = conj(X_{l,n}).
std::complex<double> x_matrix_element(const SpringParams& params, int n, int l,
                                      double t);

// Square complex matrix with Hermitian producers; hermiticity itself is a
// checked property of the contents, not enforced here.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(Eigen::MatrixXcd m);

  int dim() const { return static_cast<int>(m_.rows()); }
  std::complex<double> operator()(int n, int l) const { return m_(n, l); }
  const Eigen::MatrixXcd& matrix() const { return m_; }

  std::complex<double> trace() const { return m_.trace(); }
  double max_hermiticity_violation() const;

 private:
  Eigen::MatrixXcd m_;
};

// Which reduced description of the source to report.
//   kPartialTrace: trace the oscillator out of the joint state; unit trace,
//                  diagonal frozen at |c_n|^2.
//   kConditional:  pure state obtained by projecting the oscillator onto its
//                  initial ground state, renormalized.
enum class BackactionMode { kPartialTrace, kConditional };

// Source density matrix at time t, rho_{n,l} = c_n conj(c_l) X_{l,n} in the
// partial-trace mode, truncated to dim x dim (default: the full weight
// table). Throws std::invalid_argument when dim exceeds the available
// weights.
HermitianMatrix source_density(const SpringParams& params,
                               const SourceState& source, double t,
                               int dim = -1,
                               BackactionMode mode = BackactionMode::kPartialTrace);

// Mean displacement d(t) = Tr(rho a) = sum_n sqrt(n) rho_{n,n-1}; d(0) equals
// the coherent amplitude up to the weight-table truncation.
std::complex<double> mean_displacement(
    const SpringParams& params, const SourceState& source, double t,
    BackactionMode mode = BackactionMode::kPartialTrace);

ComplexSeries sample_mean_displacement(
    const SpringParams& params, const SourceState& source,
    const TimeGrid& grid, BackactionMode mode = BackactionMode::kPartialTrace);

}  // namespace qspring

#endif  // QSPRING_BACKACTION_HPP
