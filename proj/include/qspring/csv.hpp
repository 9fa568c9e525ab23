#ifndef QSPRING_CSV_HPP
#define QSPRING_CSV_HPP

#include <string>
#include <utility>
#include <vector>

#include "qspring/series.hpp"

// CSV output: '#'-prefixed metadata lines, then a header row, then data rows
// with numbers at 17 significant digits. Files are written atomically
// (temporary file + rename), so identical inputs produce identical bytes.

namespace qspring {

using Metadata = std::vector<std::pair<std::string, std::string>>;

std::string format_double(double v);  // %.17g

// header "tau,value"
std::string series_csv(const RealSeries& series, const Metadata& metadata);

// long format, header "mu,nbar,tau,value"
struct SweepRow {
  double mu;
  double nbar;
  double tau;
  double value;
};
std::string sweep_csv(const std::vector<SweepRow>& rows,
                      const Metadata& metadata);

void atomic_write(const std::string& path, const std::string& content);

}  // namespace qspring

#endif  // QSPRING_CSV_HPP
