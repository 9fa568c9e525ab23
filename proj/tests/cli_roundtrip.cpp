// Exercises the installed CLI end to end: figure presets, overrides, sweeps,
// CSV schema, and byte-for-byte determinism. Takes the CLI binary path as
// argv[1].

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int failures = 0;

#define CHECK_MSG(cond, msg)                                       \
  do {                                                             \
    if (!(cond)) {                                                 \
      std::printf("FAILED: %s (%s:%d)\n", msg, __FILE__, __LINE__); \
      ++failures;                                                  \
    }                                                              \
  } while (0)

struct Csv {
  std::vector<std::string> metadata;
  std::string header;
  std::vector<std::vector<double>> rows;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Csv parse_csv(const fs::path& path) {
  Csv csv;
  std::ifstream in(path);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') {
      CHECK_MSG(!header_seen, "metadata must precede the header");
      csv.metadata.push_back(line);
      continue;
    }
    if (!header_seen) {
      csv.header = line;
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    csv.rows.push_back(std::move(row));
  }
  return csv;
}

bool metadata_has(const Csv& csv, const std::string& needle) {
  for (const auto& line : csv.metadata) {
    if (line.find(needle) != std::string::npos) return true;
  }
  return false;
}

int run(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::printf("usage: cli_roundtrip <path-to-cli>\n");
    return 2;
  }
  const std::string cli = std::string("\"") + argv[1] + "\"";
  const fs::path dir =
      fs::temp_directory_path() / ("qspring_cli_test_" + std::to_string(getpid()));
  fs::create_directories(dir);
  const std::string quiet = " >/dev/null 2>&1";

  // figure 1: schema, anchors, determinism
  const fs::path fig1 = dir / "fig1.csv";
  const fs::path fig1b = dir / "fig1b.csv";
  CHECK_MSG(run(cli + " figure 1 --out " + fig1.string() + quiet) == 0,
            "figure 1 exits cleanly");
  CHECK_MSG(run(cli + " figure 1 --out " + fig1b.string() + quiet) == 0,
            "figure 1 rerun exits cleanly");
  CHECK_MSG(slurp(fig1) == slurp(fig1b), "figure output is byte-stable");
  const Csv c1 = parse_csv(fig1);
  CHECK_MSG(c1.header == "tau,value", "figure header is tau,value");
  CHECK_MSG(static_cast<int>(c1.rows.size()) == 2000, "figure 1 has 2000 rows");
  CHECK_MSG(!c1.metadata.empty(), "figure carries metadata");
  CHECK_MSG(metadata_has(c1, "observable=P0"), "figure 1 reports P0");
  CHECK_MSG(metadata_has(c1, "mu=0.1"), "figure 1 reports mu");
  CHECK_MSG(c1.rows.front()[0] == 0.0, "first sample at tau=0");
  CHECK_MSG(std::abs(c1.rows.front()[1] - 1.0) <= 1e-12,
            "P0 starts at unity");

  // figure 5: back-action preset
  const fs::path fig5 = dir / "fig5.csv";
  CHECK_MSG(run(cli + " figure --figure 5 --out " + fig5.string() + quiet) == 0,
            "figure 5 exits cleanly");
  const Csv c5 = parse_csv(fig5);
  CHECK_MSG(metadata_has(c5, "observable=ImA"), "figure 5 reports ImA");
  CHECK_MSG(metadata_has(c5, "mode=partial-trace"),
            "figure 5 records the back-action mode");
  CHECK_MSG(metadata_has(c5, "scaling=50.26548"),
            "figure 5 records the 16 pi scaling");
  CHECK_MSG(std::abs(c5.rows.front()[1]) <= 1e-15,
            "Im<a> starts at zero");
  double peak = 0.0;
  for (const auto& row : c5.rows) peak = std::max(peak, std::abs(row[1]));
  CHECK_MSG(peak > 1.0, "Im<a> builds up over the window");

  // conditional mode is exposed and stamped
  const fs::path fig5c = dir / "fig5c.csv";
  CHECK_MSG(run(cli + " figure 5 --mode conditional --out " + fig5c.string() +
                quiet) == 0,
            "conditional mode runs");
  CHECK_MSG(metadata_has(parse_csv(fig5c), "mode=conditional"),
            "conditional mode recorded");

  // figure 3: squeezing floor in metadata, curve respects it
  const fs::path fig3 = dir / "fig3.csv";
  CHECK_MSG(run(cli + " figure 3 --out " + fig3.string() + quiet) == 0,
            "figure 3 exits cleanly");
  const Csv c3 = parse_csv(fig3);
  CHECK_MSG(metadata_has(c3, "observable=Vx"), "figure 3 reports Vx");
  double recorded_floor = -1.0;
  for (const auto& line : c3.metadata) {
    const auto pos = line.find("classical_vx_min=");
    if (pos != std::string::npos) {
      recorded_floor = std::stod(line.substr(pos + 17));
    }
  }
  CHECK_MSG(std::abs(recorded_floor - 5.0 / 7.0) <= 1e-15,
            "figure 3 records the classical floor 5/7");
  double vx_min = 2.0;
  for (const auto& row : c3.rows) vx_min = std::min(vx_min, row[1]);
  CHECK_MSG(vx_min >= 5.0 / 7.0 - 1e-9, "quantum Vx respects the floor");
  CHECK_MSG(vx_min < 0.8, "figure 3 shows real squeezing");

  // overrides are honored and recorded
  const fs::path small = dir / "small.csv";
  CHECK_MSG(run(cli + " figure 1 --points 101 --tau-max 5 --out " +
                small.string() + quiet) == 0,
            "figure override runs");
  const Csv cs = parse_csv(small);
  CHECK_MSG(static_cast<int>(cs.rows.size()) == 101, "points override applied");
  CHECK_MSG(cs.rows.back()[0] == 5.0, "tau-max override applied");
  CHECK_MSG(metadata_has(cs, "points=101"), "points override recorded");

  // sweep: long format, block structure, single cell equals the figure
  const fs::path sweep = dir / "sweep.csv";
  const fs::path sweep2 = dir / "sweep2.csv";
  const std::string sweep_cmd = cli +
      " sweep --observable P0 --mu 0,0.1 --nbar 4 --points 50 --tau-max 5"
      " --out ";
  CHECK_MSG(run(sweep_cmd + sweep.string() + quiet) == 0, "sweep runs");
  CHECK_MSG(run(sweep_cmd + sweep2.string() + quiet) == 0, "sweep rerun");
  CHECK_MSG(slurp(sweep) == slurp(sweep2), "sweep output is byte-stable");
  const Csv sw = parse_csv(sweep);
  CHECK_MSG(sw.header == "mu,nbar,tau,value", "sweep header");
  CHECK_MSG(static_cast<int>(sw.rows.size()) == 100, "sweep row count");
  for (const auto& row : sw.rows) {
    if (row[0] == 0.0) {
      CHECK_MSG(std::abs(row[3] - 1.0) <= 1e-12, "mu=0 sweep block is unity");
    }
  }

  const fs::path cell = dir / "cell.csv";
  CHECK_MSG(run(cli + " figure 1 --points 50 --tau-max 5 --out " +
                cell.string() + quiet) == 0,
            "matching figure for sweep cell");
  const Csv cc = parse_csv(cell);
  int matched = 0;
  for (std::size_t i = 0; i < sw.rows.size(); ++i) {
    if (sw.rows[i][0] != 0.1) continue;
    const auto& fig_row = cc.rows[matched];
    CHECK_MSG(sw.rows[i][2] == fig_row[0] && sw.rows[i][3] == fig_row[1],
              "sweep cell matches figure output");
    ++matched;
  }
  CHECK_MSG(matched == 50, "sweep contains the full cell");

  // failure modes
  CHECK_MSG(run(cli + " figure 9 --out " + (dir / "x.csv").string() + quiet) !=
            0, "invalid figure id is rejected");
  CHECK_MSG(run(cli + " figure 1 --mode sideways --out " +
                (dir / "y.csv").string() + quiet) != 0,
            "invalid mode is rejected");
  CHECK_MSG(run(cli + " sweep --observable Qx --mu 0.1 --nbar 4 --out " +
                (dir / "z.csv").string() + quiet) != 0,
            "invalid observable is rejected");

  fs::remove_all(dir);
  if (failures == 0) std::printf("cli_roundtrip: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
