#ifndef QSPRING_ORACLE_HPP
#define QSPRING_ORACLE_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qspring/backaction.hpp"
#include "qspring/model.hpp"

// Brute-force reference numerics: exact evolution in a truncated Fock basis
// of the base oscillator, one dense symmetric block per source photon
// number, with reduced density matrices and moments obtained directly from
// the joint state. Everything here is deliberately independent of the
// closed-form code paths it is used to check.

namespace qspring::oracle {

inline constexpr int kDefaultBasisSize = 400;
inline constexpr int kBasisSizeCeiling = 2048;
inline constexpr double kLeakageThreshold = 1e-10;

// H_p in the base-oscillator Fock basis:
//   diagonal   omega (2 + mu p)(k + 1/2) / 2
//   k <-> k+2  omega mu p sqrt((k+1)(k+2)) / 4
Eigen::MatrixXd block_matrix(const SpringParams& params, int p, int basis_size);

struct BlockHamiltonian {
  int p;
  int basis_size;
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // orthonormal columns
};

// Dense symmetric eigendecomposition, computed once and reused for any t.
BlockHamiltonian build_block(const SpringParams& params, int p, int basis_size);

// Blocks p = 0..p_max, built in parallel.
std::vector<BlockHamiltonian> build_blocks(const SpringParams& params,
                                           int p_max, int basis_size);

// exp(-i H_p t) |phi_0> within one block.
Eigen::VectorXcd evolved_ground(const BlockHamiltonian& block, double t);

// Joint state sum_{p,k} C[p][k] |p> (x) |k>, |k> the base-oscillator Fock
// basis.
struct JointState {
  int basis_size;
  std::vector<Eigen::VectorXcd> blocks;  // indexed by p

  double norm_sq() const;
  // population of the top tenth of the Fock basis, maximized over blocks
  double max_top_decile_leakage = 0.0;
  bool leakage_flagged = false;
};

// Ground-state oscillator entangled with nothing: C[p][k] = c_p delta_{k0}.
JointState initial_state(const SourceState& source, int basis_size);

// Arbitrary joint coefficients, row p and column k.
JointState initial_state(const Eigen::MatrixXcd& coefficients);

// Applies exp(-i H_p t) blockwise through the cached eigendecompositions.
// Sets the leakage diagnostics on the result.
JointState evolve(const JointState& state,
                  const std::vector<BlockHamiltonian>& blocks, double t);

// P(ground) = sum_p |C[p][0]|^2, the (0,0) element of the reduced
// oscillator matrix.
double ground_probability(const JointState& state);

HermitianMatrix reduced_oscillator(const JointState& state);
HermitianMatrix reduced_source(const JointState& state);

struct Moments {
  double x;
  double p;
  double xx;
  double pp;
  double xp_sym;  // <xp + px>
};

// Expectation values via the tridiagonal ladder matrices of the base
// oscillator (x ~ sqrt(1/2 omega), p ~ sqrt(omega/2)).
Moments moments(const JointState& state, double omega);

struct QuadratureSpec {
  double half_width = 12.0;  // in units of the base ground-state scale
  int points = 4001;
};

// The overlap integral of overlap_ground evaluated by explicit Hermite
// functions on a uniform grid. Stable recurrences, trapezoid sum: with the
// Gaussian-decaying integrand the trapezoid rule is limited only by the
// domain cutoff, far below 1e-12 at the default grid.
double overlap_quadrature(const FrequencyBranch& branch, int l,
                          const QuadratureSpec& spec = {});

// Truncated spectral route to the branch survival amplitude:
//   A_p(t) = sum_l exp(-i omega_p t l) <psi_l^p|phi_0>^2, even l <= max_level.
std::complex<double> survival_amplitude_spectral(const FrequencyBranch& branch,
                                                 double t, int max_level = 400);

// <phi_0| e^{+i h(n) t} e^{-i h(l) t} |phi_0> by two block evolutions.
std::complex<double> x_matrix_element_oracle(const SpringParams& params, int n,
                                             int l, double t, int basis_size);

// Tr(rho^2)
double purity(const HermitianMatrix& rho);

}  // namespace qspring::oracle

#endif  // QSPRING_ORACLE_HPP
