#ifndef QSPRING_DYNAMICS_HPP
#define QSPRING_DYNAMICS_HPP

#include <complex>

#include "qspring/model.hpp"
#include "qspring/series.hpp"

// Closed-form observables: ground-state survival, its classical-modulation
// limit, and the quadrature variances, for a ground-state oscillator driven
// by a coherent source.

namespace qspring {

// Survival amplitude of one photon-number branch,
//   A_p(t) = beta_sq / (eta^(1/4) sqrt(1 - (beta_sq-1)^2 e^(-2 i omega_p t))),
// principal square root. The radicand has real part >= 1 - (beta_sq-1)^2 > 0,
// so the branch cut is never approached; |A_p| <= 1.
std::complex<double> survival_amplitude(const FrequencyBranch& branch,
                                        double t);

// |A_p(t)|^2 evaluated from the explicit real form
//   beta_sq^2 / sqrt(eta ((1-c)^2 + 4 c sin^2(omega_p t))), c = (beta_sq-1)^2.
double survival_probability_branch(const FrequencyBranch& branch, double t);

// P_0(t) = sum_p w_p |A_p(t)|^2, in (0, 1].
double survival_probability(const SpringParams& params,
                            const SourceState& source, double t);

// Classical-modulation limit: the branch form evaluated at the mean photon
// number, eta_a = 1 + mu nbar. Periodic with period pi / (omega sqrt(eta_a)).
double survival_classical(const SpringParams& params, double nbar, double t);

// V_x(t) = 1 - sum_n w_n sin^2(omega t sqrt(1+mu n)) mu n / (1 + mu n)
// V_p(t) = 1 + sum_n w_n sin^2(omega t sqrt(1+mu n)) mu n
// Both equal 1 at t = 0; V_x <= 1 <= V_p.
double variance_x(const SpringParams& params, const SourceState& source,
                  double t);
double variance_p(const SpringParams& params, const SourceState& source,
                  double t);

// Classical-modulation variance and its floor 1 - mu nbar / (1 + mu nbar).
double variance_x_classical(const SpringParams& params, double nbar, double t);
double variance_x_classical_min(const SpringParams& params, double nbar);

// Grid samplers (physical time t = scaling * tau / omega at each sample).
RealSeries sample_survival(const SpringParams& params,
                           const SourceState& source, const TimeGrid& grid);
RealSeries sample_survival_classical(const SpringParams& params, double nbar,
                                     const TimeGrid& grid);
RealSeries sample_variance_x(const SpringParams& params,
                             const SourceState& source, const TimeGrid& grid);
RealSeries sample_variance_p(const SpringParams& params,
                             const SourceState& source, const TimeGrid& grid);
RealSeries sample_variance_x_classical(const SpringParams& params, double nbar,
                                       const TimeGrid& grid);
ComplexSeries sample_survival_amplitude(const FrequencyBranch& branch,
                                        const SpringParams& params,
                                        const TimeGrid& grid);

}  // namespace qspring

#endif  // QSPRING_DYNAMICS_HPP
