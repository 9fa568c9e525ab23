#ifndef QSPRING_SERIES_HPP
#define QSPRING_SERIES_HPP

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "qspring/model.hpp"

namespace qspring {

struct RealSeries {
  TimeGrid grid;
  std::vector<double> values;
  std::string label;
};

struct ComplexSeries {
  TimeGrid grid;
  std::vector<std::complex<double>> values;
  std::string label;
};

// Pointwise sampling over a grid; f receives the physical time
// t = scaling * tau / omega. Samples are independent and may be evaluated in
// parallel; placement in the output follows the grid order.
RealSeries sample_real(const TimeGrid& grid, const SpringParams& params,
                       std::string label,
                       const std::function<double(double)>& f);

ComplexSeries sample_complex(
    const TimeGrid& grid, const SpringParams& params, std::string label,
    const std::function<std::complex<double>(double)>& f);

}  // namespace qspring

#endif  // QSPRING_SERIES_HPP
