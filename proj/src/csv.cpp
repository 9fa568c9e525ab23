#include "qspring/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace qspring {

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string metadata_block(const Metadata& metadata) {
  std::string out;
  for (const auto& [key, value] : metadata) {
    out += "# " + key + "=" + value + "\n";
  }
  return out;
}

}  // namespace

std::string series_csv(const RealSeries& series, const Metadata& metadata) {
  std::string out = metadata_block(metadata);
  out += "tau,value\n";
  for (int i = 0; i < series.grid.size(); ++i) {
    out += format_double(series.grid.tau(i));
    out += ',';
    out += format_double(series.values[i]);
    out += '\n';
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows,
                      const Metadata& metadata) {
  std::string out = metadata_block(metadata);
  out += "mu,nbar,tau,value\n";
  for (const auto& row : rows) {
    out += format_double(row.mu);
    out += ',';
    out += format_double(row.nbar);
    out += ',';
    out += format_double(row.tau);
    out += ',';
    out += format_double(row.value);
    out += '\n';
  }
  return out;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, target);
}

}  // namespace qspring
