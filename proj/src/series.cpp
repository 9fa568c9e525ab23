#include "qspring/series.hpp"

#include "qspring/parallel.hpp"

namespace qspring {

RealSeries sample_real(const TimeGrid& grid, const SpringParams& params,
                       std::string label,
                       const std::function<double(double)>& f) {
  std::vector<double> values(grid.size());
  parallel_for(static_cast<std::size_t>(grid.size()), [&](std::size_t i) {
    values[i] = f(grid.time_at(static_cast<int>(i), params.omega));
  });
  return RealSeries{grid, std::move(values), std::move(label)};
}

ComplexSeries sample_complex(
    const TimeGrid& grid, const SpringParams& params, std::string label,
    const std::function<std::complex<double>(double)>& f) {
  std::vector<std::complex<double>> values(grid.size());
  parallel_for(static_cast<std::size_t>(grid.size()), [&](std::size_t i) {
    values[i] = f(grid.time_at(static_cast<int>(i), params.omega));
  });
  return ComplexSeries{grid, std::move(values), std::move(label)};
}

}  // namespace qspring
