#include "qspring/backaction.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qspring/parallel.hpp"

namespace qspring {

namespace {

using Complex = std::complex<double>;

// cosh(beta) and sinh(beta)/beta as functions of z = beta^2. Both are entire
// and even in beta, so the principal sqrt is safe; a short series covers
// |z| below 1e-8.
struct EvenHyperbolics {
  Complex cosh_beta;
  Complex sinhc_beta;
};

EvenHyperbolics even_hyperbolics(Complex z) {
  if (std::abs(z) < 1e-8) {
    const Complex z2 = z * z;
    return {1.0 + z / 2.0 + z2 / 24.0, 1.0 + z / 6.0 + z2 / 120.0};
  }
  const Complex beta = std::sqrt(z);
  return {std::cosh(beta), std::sinh(beta) / beta};
}

// Non-consecutive-index kernel shared by the density matrix and the
// displacement: X_{l,n} = <chi_l | chi_n> built from per-index (root4, G+).
Complex kernel(const Complex& root4_l, const Complex& gp_l,
               const Complex& root4_n, const Complex& gp_n) {
  return std::conj(root4_l) * root4_n /
         std::sqrt(1.0 - std::conj(gp_l) * gp_n);
}

struct KernelTable {
  std::vector<Complex> root4;
  std::vector<Complex> gplus;
};

KernelTable kernel_table(const SpringParams& params, int count, double t) {
  KernelTable tab;
  tab.root4.resize(count);
  tab.gplus.resize(count);
  for (int n = 0; n < count; ++n) {
    const Su11Gammas g = su11_coefficients(params, n, t);
    tab.root4[n] = g.Gamma_3_root4;
    tab.gplus[n] = g.Gamma_plus;
  }
  return tab;
}

}  // namespace

Su11Gammas su11_coefficients(const SpringParams& params, int n, double t) {
  if (n < 0) {
    throw std::invalid_argument("su11_coefficients: n must be >= 0");
  }
  if (!(t >= 0.0)) {
    throw std::invalid_argument("su11_coefficients: t must be >= 0");
  }
  const double mu_n = params.mu * static_cast<double>(n);
  const double wt = params.omega * t;
  const Complex minus_i(0.0, -1.0);

  Su11Gammas g;
  g.n = n;
  g.gamma_plus = minus_i * (0.5 * mu_n * wt);
  g.gamma_minus = g.gamma_plus;
  g.gamma_3 = minus_i * (wt * (mu_n + 2.0));
  g.beta_arg_sq = 0.25 * g.gamma_3 * g.gamma_3 - g.gamma_plus * g.gamma_minus;

  const auto [cosh_b, sinhc_b] = even_hyperbolics(g.beta_arg_sq);
  const Complex denom = cosh_b - 0.5 * g.gamma_3 * sinhc_b;
  g.Gamma_plus = g.gamma_plus * sinhc_b / denom;
  g.Gamma_minus = g.gamma_minus * sinhc_b / denom;
  g.Gamma_3 = 1.0 / (denom * denom);

  // denom traces the ellipse cos(theta) + i q sin(theta) with
  // theta = omega t sqrt(1 + mu n) and q = (mu n + 2) / (2 sqrt(1 + mu n)),
  // winding monotonically; its accumulated argument from theta = 0 is
  //   kappa pi + atan(q tan(theta - kappa pi)),  kappa = round(theta / pi).
  // The continued quarter root of Gamma_3 = 1/denom^2 follows directly.
  const double theta = wt * std::sqrt(1.0 + mu_n);
  const double q = (mu_n + 2.0) / (2.0 * std::sqrt(1.0 + mu_n));
  const double kappa = std::round(theta / std::numbers::pi);
  const double winding =
      kappa * std::numbers::pi +
      std::atan(q * std::tan(theta - kappa * std::numbers::pi));
  g.Gamma_3_root4 =
      std::polar(1.0 / std::sqrt(std::abs(denom)), -0.5 * winding);
  return g;
}

std::complex<double> x_matrix_element(const SpringParams& params, int n, int l,
                                      double t) {
  const Su11Gammas gn = su11_coefficients(params, n, t);
  const Su11Gammas gl = su11_coefficients(params, l, t);
  return kernel(gn.Gamma_3_root4, gn.Gamma_plus, gl.Gamma_3_root4,
                gl.Gamma_plus);
}

HermitianMatrix::HermitianMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw std::invalid_argument("HermitianMatrix: matrix must be square");
  }
}

double HermitianMatrix::max_hermiticity_violation() const {
  double worst = 0.0;
  for (int n = 0; n < dim(); ++n) {
    for (int l = n; l < dim(); ++l) {
      worst = std::max(worst, std::abs(m_(n, l) - std::conj(m_(l, n))));
    }
  }
  return worst;
}

HermitianMatrix source_density(const SpringParams& params,
                               const SourceState& source, double t, int dim,
                               BackactionMode mode) {
  const int available = source.p_max() + 1;
  if (dim < 0) dim = available;
  if (dim > available) {
    throw std::invalid_argument(
        "source_density: requested dimension exceeds the weight table");
  }
  const KernelTable tab = kernel_table(params, dim, t);
  Eigen::MatrixXcd rho(dim, dim);

  if (mode == BackactionMode::kConditional) {
    // Projecting the oscillator onto its initial ground state leaves the
    // source in sum_n c_n G3n^(1/4) |n>, renormalized.
    Eigen::VectorXcd u(dim);
    for (int n = 0; n < dim; ++n) u(n) = source.amplitude(n) * tab.root4[n];
    const double norm_sq = u.squaredNorm();
    rho = u * u.adjoint() / norm_sq;
    return HermitianMatrix(std::move(rho));
  }

  for (int n = 0; n < dim; ++n) {
    for (int l = n; l < dim; ++l) {
      const Complex x_ln =
          kernel(tab.root4[l], tab.gplus[l], tab.root4[n], tab.gplus[n]);
      const Complex entry =
          source.amplitude(n) * std::conj(source.amplitude(l)) * x_ln;
      rho(n, l) = entry;
      rho(l, n) = std::conj(entry);
    }
  }
  return HermitianMatrix(std::move(rho));
}

std::complex<double> mean_displacement(const SpringParams& params,
                                       const SourceState& source, double t,
                                       BackactionMode mode) {
  const int count = source.p_max() + 1;
  const KernelTable tab = kernel_table(params, count, t);

  if (mode == BackactionMode::kConditional) {
    Complex d = 0.0;
    double norm_sq = 0.0;
    std::vector<Complex> u(count);
    for (int n = 0; n < count; ++n) {
      u[n] = source.amplitude(n) * tab.root4[n];
      norm_sq += std::norm(u[n]);
    }
    for (int n = 1; n < count; ++n) {
      d += std::sqrt(static_cast<double>(n)) * u[n] * std::conj(u[n - 1]);
    }
    return d / norm_sq;
  }

  Complex d = 0.0;
  for (int n = 1; n < count; ++n) {
    const Complex x_prev_n = kernel(tab.root4[n - 1], tab.gplus[n - 1],
                                    tab.root4[n], tab.gplus[n]);
    d += std::sqrt(static_cast<double>(n)) * source.amplitude(n) *
         std::conj(source.amplitude(n - 1)) * x_prev_n;
  }
  return d;
}

ComplexSeries sample_mean_displacement(const SpringParams& params,
                                       const SourceState& source,
                                       const TimeGrid& grid,
                                       BackactionMode mode) {
  const char* label =
      mode == BackactionMode::kPartialTrace ? "mean_a" : "mean_a_conditional";
  return sample_complex(grid, params, label, [&](double t) {
    return mean_displacement(params, source, t, mode);
  });
}

}  // namespace qspring
