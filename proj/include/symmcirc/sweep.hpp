#pragma once

#include <string>
#include <utility>
#include <vector>

#include "symmcirc/manifest.hpp"

namespace symmcirc {

// Aggregated observable statistics; one row per
// (p_s, p_u, L, t, observable) cell.
struct AggregateRow {
  double p_s = 0.0;
  double p_u = 0.0;
  size_t L = 0;
  size_t t = 0;
  std::string observable;
  double mean = 0.0;
  double std_error = 0.0;
  size_t count = 0;
};

void write_curves_csv(const std::string& path, const std::vector<AggregateRow>& rows);
std::vector<AggregateRow> read_curves_csv(const std::string& path);

// Deterministic ordering used by rows.csv / curves.csv.
void sort_rows(std::vector<ResultRow>& rows);
std::vector<AggregateRow> aggregate_rows(const std::vector<ResultRow>& rows);

struct SweepOptions {
  size_t workers = 0;          // 0 = manifest value
  size_t stop_after_tasks = 0; // test hook: stop claiming tasks after N completions
};

struct SweepReport {
  size_t tasks_total = 0;
  size_t tasks_run = 0;
  size_t tasks_resumed = 0;  // skipped because already journaled
  bool finished = false;     // final rows.csv / curves.csv written
  std::string out_dir;
};

// Trajectory sweep over sizes x p_s x p_u. Completed tasks are journaled to
// <out>/journal.txt with their rows appended to <out>/trajectories.dat, so an
// interrupted sweep resumes without recomputation; rows.csv and curves.csv
// are regenerated (deterministically, independent of worker count) at the
// end of a finished run.
SweepReport run_sweep(const RunManifest& manifest, const std::string& out_dir,
                      const SweepOptions& options = {});

// Measurement-only percolation runs (modes: sweep / profile / time).
SweepReport run_percolation(const RunManifest& manifest, const std::string& out_dir,
                            const SweepOptions& options = {});

// Time-to-steady-state runs of the averaged channel (tau_star / tau_censored).
SweepReport run_tau(const RunManifest& manifest, const std::string& out_dir,
                    const SweepOptions& options = {});

struct OracleOptions {
  // Extra contiguous regions [first, last] to compare; the full prefix-cut
  // profile is always compared.
  std::vector<std::pair<size_t, size_t>> probe_regions;
};

struct OracleReport {
  size_t trajectories = 0;
  size_t probes = 0;       // probe instants compared
  size_t comparisons = 0;  // individual region comparisons
  size_t mismatches = 0;
  bool ok = true;
  // first failure, when any
  size_t fail_size = 0;
  double fail_p_s = 0.0;
  uint64_t fail_trajectory = 0;
  size_t fail_event_index = 0;
  std::string fail_detail;
};

// Runs the tableau simulator and the cluster dynamics on the identical event
// stream (p_u = 0, sequential, Z basis) and compares region entropies every
// manifest.probe_stride updating steps. Writes <out>/oracle_report.json.
OracleReport run_oracle_check(const RunManifest& manifest, const std::string& out_dir,
                              const OracleOptions& options = {});

// Reads curves.csv from results_dir and writes per-panel plot data files
// (x,y,yerr) plus an index.json into out_dir.
void emit_plot_data(const std::string& results_dir, const std::string& out_dir);

}  // namespace symmcirc
