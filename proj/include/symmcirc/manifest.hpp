#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symmcirc/circuit.hpp"

namespace symmcirc {

// Experiment description parsed from a JSON manifest. Unknown keys and
// constraint violations are errors; every violation is reported at once.
struct RunManifest {
  enum class Kind { sweep, oracle, percolation, tau };
  Kind kind = Kind::sweep;

  std::vector<size_t> sizes;           // L grid
  std::vector<double> p_s_grid;
  std::vector<double> p_u_grid;
  size_t trajectories = 1;
  size_t workers = 1;

  Schedule schedule = Schedule::sequential;
  SingleBasis basis = SingleBasis::Z;
  Boundary boundary = Boundary::open;
  AncillaProtocol ancilla = AncillaProtocol::none;
  size_t t_equil = 0;                  // 0 = default 2N
  size_t t_probe = 0;                  // 0 = default N
  uint64_t master_seed = 0;
  size_t pool_size = 4096;

  std::vector<std::string> observables = {"s_topo"};
  std::vector<size_t> probe_times;     // time steps; empty = final step only
  size_t probe_stride = 10;            // oracle: updating steps between checks

  std::string perc_mode = "sweep";     // percolation: sweep | profile | time
  size_t rows = 0;                     // percolation bond rows; 0 = 2N
  size_t time_max = 0;                 // percolation time series horizon
  size_t cap_time_steps = 0;           // tau censoring cap; 0 = 100N

  std::string out_dir = "results";

  // Fills a CircuitConfig for one grid point.
  CircuitConfig config_for(size_t L, double p_s, double p_u) const;

  static RunManifest parse_file(const std::string& path);
  static RunManifest parse_json_text(const std::string& text);
};

struct ManifestError : std::runtime_error {
  explicit ManifestError(const std::string& what) : std::runtime_error(what) {}
};

// One observation; trajectory == -1 denotes an aggregated row.
struct ResultRow {
  double p_s = 0.0;
  double p_u = 0.0;
  size_t L = 0;
  size_t t = 0;
  std::string observable;
  int64_t trajectory = -1;
  double value = 0.0;
  uint64_t seed = 0;
};

inline constexpr const char* kCsvSchemaTag = "# symmcirc-csv v1";

void write_rows_csv(const std::string& path, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_rows_csv(const std::string& path);  // rejects unknown schema

}  // namespace symmcirc
