#include <doctest.h>

#include <cmath>
#include <complex>

#include "qspring/model.hpp"
#include "qspring/oracle.hpp"

using namespace qspring;

namespace {

// independently accumulated Poisson mass, long double + direct term formula
long double poisson_mass_direct(double nbar, int up_to) {
  long double sum = 0.0L;
  for (int p = 0; p <= up_to; ++p) {
    sum += std::exp(static_cast<long double>(p) * std::log((long double)nbar) -
                    (long double)nbar - std::lgamma((long double)p + 1.0L));
  }
  return sum;
}

}  // namespace

TEST_CASE("spring params validation") {
  CHECK_THROWS_AS(SpringParams(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(SpringParams(0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SpringParams(0.1, -1.0), std::invalid_argument);
  const SpringParams p(0.3);
  CHECK(p.omega == 1.0);
}

TEST_CASE("frequency branch values") {
  const SpringParams none(0.0);
  for (int p : {0, 3, 57}) {
    const FrequencyBranch b = frequency_branch(none, p);
    CHECK(b.eta == 1.0);
    CHECK(b.omega_p == 1.0);
    CHECK(b.beta_sq == 1.0);
  }

  const FrequencyBranch weak = frequency_branch(SpringParams(0.1), 4);
  CHECK(weak.eta == doctest::Approx(1.4).epsilon(1e-15));
  CHECK(weak.omega_p == doctest::Approx(std::sqrt(1.4)).epsilon(1e-15));
  CHECK(weak.beta_sq == doctest::Approx(1.0839202169003840).epsilon(1e-15));

  // strong-modulation point, frozen from a separate high-precision evaluation
  const FrequencyBranch strong = frequency_branch(SpringParams(0.3), 25);
  CHECK(strong.eta == doctest::Approx(8.5).epsilon(1e-15));
  CHECK(strong.omega_p == doctest::Approx(2.9154759474226504).epsilon(1e-15));
  CHECK(strong.beta_sq == doctest::Approx(1.4892064140206266).epsilon(1e-15));

  CHECK_THROWS_AS(frequency_branch(none, -1), std::invalid_argument);
}

TEST_CASE("frequency branch bounds and monotonicity") {
  for (double mu : {0.05, 0.1, 0.3}) {
    const SpringParams params(mu, 2.0);
    double prev = 0.0;
    for (int p = 0; p <= 60; ++p) {
      const FrequencyBranch b = frequency_branch(params, p);
      CHECK(b.eta >= 1.0);
      CHECK(b.omega_p >= params.omega);
      CHECK(b.beta_sq >= 1.0);
      CHECK(b.beta_sq < 2.0);
      const double excess = b.beta_sq - 1.0;
      CHECK(excess * excess < 1.0);
      if (p > 0) CHECK(b.beta_sq > prev);  // strictly increasing for mu > 0
      prev = b.beta_sq;
    }
  }
}

TEST_CASE("ground overlaps: parity, unmodulated limit, normalization") {
  const FrequencyBranch strong = frequency_branch(SpringParams(0.3), 25);
  for (int l : {1, 3, 17, 401}) CHECK(overlap_ground(strong, l) == 0.0);

  const FrequencyBranch flat = frequency_branch(SpringParams(0.0), 7);
  CHECK(overlap_ground(flat, 0) == 1.0);
  for (int m = 1; m <= 10; ++m) CHECK(overlap_ground(flat, 2 * m) == 0.0);

  for (double mu : {0.1, 0.3}) {
    for (int p : {0, 1, 25, 60}) {
      const FrequencyBranch b = frequency_branch(SpringParams(mu), p);
      const double head = overlap_ground(b, 0);
      CHECK(head > 0.0);
      CHECK(head <= 1.0);
      if (mu * p > 0.0) CHECK(head < 1.0);
      double sum = 0.0;
      for (int m = 0; m <= 200; ++m) {
        const double ov = overlap_ground(b, 2 * m);
        sum += ov * ov;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("ground overlaps match quadrature") {
  const FrequencyBranch b = frequency_branch(SpringParams(0.3), 25);
  for (int m = 0; m <= 40; ++m) {
    const double closed = overlap_ground(b, 2 * m);
    const double quad = oracle::overlap_quadrature(b, 2 * m);
    CHECK(std::abs(closed - quad) <= 1e-10);
  }
}

TEST_CASE("ground overlaps stay finite at extreme level index") {
  const FrequencyBranch b = frequency_branch(SpringParams(0.3), 60);
  const double far = overlap_ground(b, 1000);  // m = 500
  CHECK(std::isfinite(far));
  CHECK(far >= 0.0);
  CHECK(far < 1e-40);
}

TEST_CASE("poisson weights: vacuum, truncation, minimality") {
  const PoissonWeights vacuum = poisson_weights(0.0, 1e-12);
  CHECK(vacuum.p_max == 0);
  CHECK(vacuum.w.size() == 1);
  CHECK(vacuum.w[0] == 1.0);

  const PoissonWeights w4 = poisson_weights(4.0, 1e-12);
  CHECK(w4.p_max == 25);
  CHECK(poisson_mass_direct(4.0, w4.p_max) >= 1.0L - 1e-12L);
  CHECK(poisson_mass_direct(4.0, w4.p_max - 1) < 1.0L - 1e-12L);

  const PoissonWeights w25 = poisson_weights(25.0, 1e-12);
  CHECK(w25.p_max == 68);
  CHECK(poisson_mass_direct(25.0, w25.p_max) >= 1.0L - 1e-12L);
  CHECK(poisson_mass_direct(25.0, w25.p_max - 1) < 1.0L - 1e-12L);

  for (double v : w25.w) CHECK(v >= 0.0);

  // tighter tolerance extends the table
  CHECK(poisson_weights(25.0, 1e-15).p_max > w25.p_max);
}

TEST_CASE("poisson weights: rejected inputs") {
  CHECK_THROWS_AS(poisson_weights(-1.0, 1e-12), std::invalid_argument);
  CHECK_THROWS_AS(poisson_weights(4.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(poisson_weights(4.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(poisson_weights(5000.0, 1e-12), std::domain_error);
}

TEST_CASE("source state amplitudes are consistent with the weights") {
  const SourceState source(2.0);
  CHECK(source.nbar() == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(source.p_max() == 25);
  double mass = 0.0;
  for (int p = 0; p <= source.p_max(); ++p) {
    mass += source.weight(p);
    CHECK(std::abs(std::norm(source.amplitude(p)) - source.weight(p)) <=
          1e-13 * source.weight(p) + 1e-300);
  }
  CHECK(mass >= 1.0 - 1e-12);
}

TEST_CASE("source state with complex amplitude") {
  const std::complex<double> alpha(1.0, 1.0);
  const SourceState source(alpha);
  CHECK(source.nbar() == doctest::Approx(2.0).epsilon(1e-15));
  // c_{p+1} / c_p = alpha / sqrt(p+1)
  for (int p = 0; p + 1 <= source.p_max(); ++p) {
    const std::complex<double> ratio =
        source.amplitude(p + 1) / source.amplitude(p);
    CHECK(std::abs(ratio - alpha / std::sqrt(p + 1.0)) <= 1e-12);
  }
  const SourceState vacuum(0.0);
  CHECK(vacuum.p_max() == 0);
  CHECK(vacuum.amplitude(0) == std::complex<double>(1.0, 0.0));
}

TEST_CASE("time grid") {
  const TimeGrid grid = TimeGrid::uniform(20.0, 2001, 2.0 * 3.141592653589793);
  CHECK(grid.size() == 2001);
  CHECK(grid.tau(0) == 0.0);
  CHECK(grid.tau(2000) == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(grid.time_at(2000, 2.0) ==
        doctest::Approx(20.0 * 3.141592653589793).epsilon(1e-14));

  CHECK_THROWS_AS(TimeGrid({1.0, 1.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid({2.0, 1.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid({-0.5, 1.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid({}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid::uniform(1.0, 0, 1.0), std::invalid_argument);

  const TimeGrid single = TimeGrid::uniform(5.0, 1, 1.0);
  CHECK(single.size() == 1);
  CHECK(single.tau(0) == 0.0);
}
