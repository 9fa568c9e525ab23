#include "qspring/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qspring/parallel.hpp"

namespace qspring::oracle {

namespace {

using Complex = std::complex<double>;

// real matrix (or expression) times complex vector, via two real products
template <typename Mat>
Eigen::VectorXcd real_times_complex(const Mat& m, const Eigen::VectorXcd& v) {
  const Eigen::VectorXd re = m * v.real();
  const Eigen::VectorXd im = m * v.imag();
  Eigen::VectorXcd out(re.size());
  out.real() = re;
  out.imag() = im;
  return out;
}

void check_basis_size(int basis_size) {
  if (basis_size < 4) {
    throw std::invalid_argument("oracle: basis_size must be >= 4");
  }
  if (basis_size > kBasisSizeCeiling) {
    throw std::invalid_argument("oracle: basis_size exceeds the ceiling of " +
                                std::to_string(kBasisSizeCeiling));
  }
}

}  // namespace

Eigen::MatrixXd block_matrix(const SpringParams& params, int p,
                             int basis_size) {
  check_basis_size(basis_size);
  if (p < 0) throw std::invalid_argument("oracle: p must be >= 0");
  const double mu_p = params.mu * static_cast<double>(p);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(basis_size, basis_size);
  for (int k = 0; k < basis_size; ++k) {
    h(k, k) = 0.5 * params.omega * (2.0 + mu_p) * (k + 0.5);
  }
  for (int k = 0; k + 2 < basis_size; ++k) {
    const double v =
        0.25 * params.omega * mu_p * std::sqrt((k + 1.0) * (k + 2.0));
    h(k, k + 2) = v;
    h(k + 2, k) = v;
  }
  return h;
}

BlockHamiltonian build_block(const SpringParams& params, int p,
                             int basis_size) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      block_matrix(params, p, basis_size));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("oracle: eigendecomposition failed for block " +
                             std::to_string(p));
  }
  return BlockHamiltonian{p, basis_size, solver.eigenvalues(),
                          solver.eigenvectors()};
}

std::vector<BlockHamiltonian> build_blocks(const SpringParams& params,
                                           int p_max, int basis_size) {
  if (p_max < 0) throw std::invalid_argument("oracle: p_max must be >= 0");
  std::vector<BlockHamiltonian> blocks(p_max + 1);
  parallel_for(static_cast<std::size_t>(p_max) + 1, [&](std::size_t p) {
    blocks[p] = build_block(params, static_cast<int>(p), basis_size);
  });
  return blocks;
}

Eigen::VectorXcd evolved_ground(const BlockHamiltonian& block, double t) {
  const int n = block.basis_size;
  // ground state in the eigenbasis is the first row of the eigenvector matrix
  Eigen::VectorXcd phases(n);
  for (int j = 0; j < n; ++j) {
    phases(j) = std::polar(block.eigenvectors(0, j), -block.eigenvalues(j) * t);
  }
  return real_times_complex(block.eigenvectors, phases);
}

double JointState::norm_sq() const {
  double total = 0.0;
  for (const auto& b : blocks) total += b.squaredNorm();
  return total;
}

JointState initial_state(const SourceState& source, int basis_size) {
  check_basis_size(basis_size);
  JointState state;
  state.basis_size = basis_size;
  state.blocks.resize(source.p_max() + 1);
  for (int p = 0; p <= source.p_max(); ++p) {
    state.blocks[p] = Eigen::VectorXcd::Zero(basis_size);
    state.blocks[p](0) = source.amplitude(p);
  }
  return state;
}

JointState initial_state(const Eigen::MatrixXcd& coefficients) {
  check_basis_size(static_cast<int>(coefficients.cols()));
  JointState state;
  state.basis_size = static_cast<int>(coefficients.cols());
  state.blocks.resize(coefficients.rows());
  for (int p = 0; p < coefficients.rows(); ++p) {
    state.blocks[p] = coefficients.row(p).transpose();
  }
  return state;
}

JointState evolve(const JointState& state,
                  const std::vector<BlockHamiltonian>& blocks, double t) {
  if (blocks.size() < state.blocks.size()) {
    throw std::invalid_argument("oracle::evolve: missing Hamiltonian blocks");
  }
  JointState out;
  out.basis_size = state.basis_size;
  out.blocks.resize(state.blocks.size());
  std::vector<double> leakage(state.blocks.size(), 0.0);
  parallel_for(state.blocks.size(), [&](std::size_t p) {
    const BlockHamiltonian& block = blocks[p];
    if (block.basis_size != state.basis_size) {
      throw std::invalid_argument("oracle::evolve: basis size mismatch");
    }
    const int n = block.basis_size;
    Eigen::VectorXcd in_eigen =
        real_times_complex(block.eigenvectors.transpose(), state.blocks[p]);
    for (int j = 0; j < n; ++j) {
      in_eigen(j) *= std::polar(1.0, -block.eigenvalues(j) * t);
    }
    out.blocks[p] = real_times_complex(block.eigenvectors, in_eigen);
    const int decile_start = n - n / 10;
    leakage[p] = out.blocks[p].tail(n - decile_start).squaredNorm();
  });
  for (double l : leakage) {
    out.max_top_decile_leakage = std::max(out.max_top_decile_leakage, l);
  }
  out.leakage_flagged = out.max_top_decile_leakage > kLeakageThreshold;
  return out;
}

double ground_probability(const JointState& state) {
  double p0 = 0.0;
  for (const auto& b : state.blocks) p0 += std::norm(b(0));
  return p0;
}

HermitianMatrix reduced_oscillator(const JointState& state) {
  const int n = state.basis_size;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& b : state.blocks) rho += b * b.adjoint();
  return HermitianMatrix(std::move(rho));
}

HermitianMatrix reduced_source(const JointState& state) {
  const int np = static_cast<int>(state.blocks.size());
  Eigen::MatrixXcd rho(np, np);
  for (int p1 = 0; p1 < np; ++p1) {
    for (int p2 = 0; p2 < np; ++p2) {
      // <p1|rho|p2> = sum_k C[p1][k] conj(C[p2][k])
      rho(p1, p2) = state.blocks[p2].dot(state.blocks[p1]);
    }
  }
  return HermitianMatrix(std::move(rho));
}

Moments moments(const JointState& state, double omega) {
  const double x_scale = std::sqrt(0.5 / omega);   // x = x_scale (b + b')
  const double p_scale = std::sqrt(0.5 * omega);   // p = i p_scale (b' - b)
  Moments m{0.0, 0.0, 0.0, 0.0, 0.0};
  for (const auto& b : state.blocks) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
      const double pop = std::norm(b(k));
      m.xx += pop * x_scale * x_scale * (2.0 * k + 1.0);
      m.pp += pop * p_scale * p_scale * (2.0 * k + 1.0);
      if (k + 1 < n) {
        const Complex cross = std::conj(b(k)) * b(k + 1);
        const double root = std::sqrt(k + 1.0);
        m.x += 2.0 * x_scale * root * cross.real();
        m.p += 2.0 * p_scale * root * cross.imag();
      }
      if (k + 2 < n) {
        const Complex cross2 = std::conj(b(k)) * b(k + 2);
        const double root2 = std::sqrt((k + 1.0) * (k + 2.0));
        m.xx += 2.0 * x_scale * x_scale * root2 * cross2.real();
        m.pp -= 2.0 * p_scale * p_scale * root2 * cross2.real();
        m.xp_sym += 2.0 * root2 * cross2.imag();
      }
    }
  }
  return m;
}

double overlap_quadrature(const FrequencyBranch& branch, int l,
                          const QuadratureSpec& spec) {
  if (l < 0) throw std::invalid_argument("overlap_quadrature: l must be >= 0");
  if (spec.points < 4001) {
    throw std::invalid_argument("overlap_quadrature: need >= 4001 points");
  }
  const double omega = branch.omega_p / std::sqrt(branch.eta);
  const double alpha = std::sqrt(omega);           // base oscillator scale
  const double alpha_p = std::sqrt(branch.omega_p);
  const double half_width = spec.half_width / alpha;
  const double step = 2.0 * half_width / (spec.points - 1);
  const double quarter_pi = std::pow(std::numbers::pi, -0.25);

  double sum = 0.0, comp = 0.0;
  for (int i = 0; i < spec.points; ++i) {
    const double x = -half_width + step * i;
    // normalized Hermite functions by upward recurrence
    const double xi = alpha_p * x;
    double hm1 = 0.0;
    double h = quarter_pi * std::exp(-0.5 * xi * xi);
    for (int j = 0; j < l; ++j) {
      const double next =
          std::sqrt(2.0 / (j + 1.0)) * xi * h - std::sqrt(j / (j + 1.0)) * hm1;
      hm1 = h;
      h = next;
    }
    const double xi0 = alpha * x;
    const double ground = quarter_pi * std::exp(-0.5 * xi0 * xi0);
    double term = std::sqrt(alpha_p) * h * std::sqrt(alpha) * ground * step;
    if (i == 0 || i == spec.points - 1) term *= 0.5;
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

std::complex<double> survival_amplitude_spectral(const FrequencyBranch& branch,
                                                 double t, int max_level) {
  Complex sum = 0.0;
  for (int l = 0; l <= max_level; l += 2) {
    const double ov = overlap_ground(branch, l);
    sum += std::polar(ov * ov, -branch.omega_p * t * l);
  }
  return sum;
}

std::complex<double> x_matrix_element_oracle(const SpringParams& params, int n,
                                             int l, double t, int basis_size) {
  const Eigen::VectorXcd bra =
      evolved_ground(build_block(params, n, basis_size), t);
  const Eigen::VectorXcd ket =
      evolved_ground(build_block(params, l, basis_size), t);
  return bra.dot(ket);  // conjugates the n-evolved state
}

double purity(const HermitianMatrix& rho) {
  return rho.matrix().squaredNorm();
}

}  // namespace qspring::oracle
