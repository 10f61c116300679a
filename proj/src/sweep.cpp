#include "symmcirc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "symmcirc/analysis.hpp"
#include "symmcirc/channel.hpp"
#include "symmcirc/percolation.hpp"

namespace symmcirc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir);
}

auto row_key(const ResultRow& r) {
  return std::tie(r.L, r.p_u, r.p_s, r.observable, r.t, r.trajectory);
}

auto cell_key(const ResultRow& r) {
  return std::make_tuple(r.L, r.p_u, r.p_s, r.observable, r.t);
}

struct GridPoint {
  size_t L;
  double p_s, p_u;
};

std::vector<GridPoint> grid_points(const RunManifest& m) {
  std::vector<GridPoint> pts;
  for (size_t L : m.sizes)
    for (double ps : m.p_s_grid)
      for (double pu : m.p_u_grid) pts.push_back({L, ps, pu});
  return pts;
}

// Journaled task runner shared by the sweep-like commands. task_fn(task_id)
// returns the rows of one unit of work; completed units are appended to
// trajectories.dat and journal.txt so an interrupted run resumes without
// recomputation. When every task is done, rows.csv / curves.csv / run.json
// are regenerated deterministically from the store.
template <typename TaskFn>
SweepReport run_journaled(const std::string& out_dir, size_t n_tasks, size_t workers,
                          size_t stop_after_tasks, const json& provenance,
                          TaskFn task_fn) {
  ensure_dir(out_dir);
  fs::path store_path = fs::path(out_dir) / "trajectories.dat";
  fs::path journal_path = fs::path(out_dir) / "journal.txt";

  // Resume: only tasks listed in the journal are trusted; rows from any task
  // that died mid-write are dropped when the store is reloaded.
  std::vector<bool> done(n_tasks, false);
  size_t resumed = 0;
  if (fs::exists(journal_path)) {
    std::ifstream jin(journal_path);
    size_t id;
    while (jin >> id) {
      if (id < n_tasks && !done[id]) {
        done[id] = true;
        ++resumed;
      }
    }
  }
  std::map<size_t, std::vector<ResultRow>> stored;
  if (fs::exists(store_path)) {
    std::ifstream sin(store_path);
    std::string line;
    std::getline(sin, line);  // schema tag
    while (std::getline(sin, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string field;
      auto next = [&]() {
        std::getline(ss, field, ',');
        return field;
      };
      size_t task_id = std::stoull(next());
      ResultRow r;
      r.p_s = std::stod(next());
      r.p_u = std::stod(next());
      r.L = std::stoull(next());
      r.t = std::stoull(next());
      r.observable = next();
      r.trajectory = std::stoll(next());
      r.value = std::stod(next());
      r.seed = std::stoull(next());
      if (task_id < n_tasks && done[task_id]) stored[task_id].push_back(std::move(r));
    }
  }

  std::ofstream store(store_path, std::ios::app);
  std::ofstream journal(journal_path, std::ios::app);
  if (!fs::exists(store_path) || fs::file_size(store_path) == 0) {
    store << kCsvSchemaTag << "\n";
  }
  store.precision(17);
  if (!store || !journal) throw std::runtime_error("cannot open store in " + out_dir);

  std::mutex write_mu;
  std::atomic<size_t> next_task{0};
  std::atomic<size_t> completed_now{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto worker = [&]() {
    for (;;) {
      if (stop.load()) return;
      size_t id = next_task.fetch_add(1);
      if (id >= n_tasks) return;
      if (done[id]) continue;
      std::vector<ResultRow> rows;
      try {
        rows = task_fn(id);
      } catch (...) {
        std::lock_guard lk(error_mu);
        if (!first_error) first_error = std::current_exception();
        stop.store(true);
        return;
      }
      {
        std::lock_guard lk(write_mu);
        for (const ResultRow& r : rows) {
          store << id << ',' << r.p_s << ',' << r.p_u << ',' << r.L << ','
                << r.t << ',' << r.observable << ',' << r.trajectory << ','
                << r.value << ',' << r.seed << '\n';
        }
        store.flush();
        journal << id << '\n';
        journal.flush();
        stored[id] = std::move(rows);
      }
      size_t n_done = completed_now.fetch_add(1) + 1;
      if (stop_after_tasks && n_done >= stop_after_tasks) stop.store(true);
    }
  };

  size_t n_workers = std::max<size_t>(1, workers);
  std::vector<std::thread> pool;
  for (size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);

  SweepReport report;
  report.tasks_total = n_tasks;
  report.tasks_resumed = resumed;
  report.tasks_run = completed_now.load();
  report.out_dir = out_dir;
  report.finished = stored.size() == n_tasks;
  if (report.finished) {
    std::vector<ResultRow> all;
    for (auto& [id, rows] : stored) {
      all.insert(all.end(), rows.begin(), rows.end());
    }
    sort_rows(all);
    write_rows_csv((fs::path(out_dir) / "rows.csv").string(), all);
    write_curves_csv((fs::path(out_dir) / "curves.csv").string(), aggregate_rows(all));
    json run = provenance;
    run["schema"] = "symmcirc-run v1";
    run["tasks"] = n_tasks;
    std::ofstream rj(fs::path(out_dir) / "run.json");
    rj << run.dump(2) << "\n";
  }
  return report;
}

json provenance_of(const RunManifest& m, const char* kind) {
  json p;
  p["kind"] = kind;
  p["master_seed"] = m.master_seed;
  p["sizes"] = m.sizes;
  p["p_s"] = m.p_s_grid;
  p["p_u"] = m.p_u_grid;
  p["trajectories"] = m.trajectories;
  p["observables"] = m.observables;
  return p;
}

bool wants(const RunManifest& m, const char* name) {
  return std::find(m.observables.begin(), m.observables.end(), name) !=
         m.observables.end();
}

std::string profile_name(size_t x) { return "profile:" + std::to_string(x); }

}  // namespace

void sort_rows(std::vector<ResultRow>& rows) {
  std::sort(rows.begin(), rows.end(),
            [](const ResultRow& a, const ResultRow& b) { return row_key(a) < row_key(b); });
}

std::vector<AggregateRow> aggregate_rows(const std::vector<ResultRow>& rows) {
  std::vector<AggregateRow> out;
  size_t i = 0;
  while (i < rows.size()) {
    size_t j = i;
    std::vector<double> values;
    while (j < rows.size() && cell_key(rows[j]) == cell_key(rows[i])) {
      values.push_back(rows[j].value);
      ++j;
    }
    MeanStdErr s = mean_std_error(values);
    AggregateRow a;
    a.p_s = rows[i].p_s;
    a.p_u = rows[i].p_u;
    a.L = rows[i].L;
    a.t = rows[i].t;
    a.observable = rows[i].observable;
    a.mean = s.mean;
    a.std_error = s.std_error;
    a.count = s.count;
    out.push_back(std::move(a));
    i = j;
  }
  return out;
}

void write_curves_csv(const std::string& path, const std::vector<AggregateRow>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << kCsvSchemaTag << "\n";
  out << "p_s,p_u,L,t,observable,mean,std_error,count\n";
  out.precision(17);
  for (const AggregateRow& r : rows) {
    out << r.p_s << ',' << r.p_u << ',' << r.L << ',' << r.t << ','
        << r.observable << ',' << r.mean << ',' << r.std_error << ','
        << r.count << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<AggregateRow> read_curves_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kCsvSchemaTag) {
    throw std::runtime_error(path + ": unknown CSV schema");
  }
  std::getline(in, line);
  std::vector<AggregateRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    auto next = [&]() {
      if (!std::getline(ss, field, ',')) {
        throw std::runtime_error(path + ": short row: " + line);
      }
      return field;
    };
    AggregateRow r;
    r.p_s = std::stod(next());
    r.p_u = std::stod(next());
    r.L = std::stoull(next());
    r.t = std::stoull(next());
    r.observable = next();
    r.mean = std::stod(next());
    r.std_error = std::stod(next());
    r.count = std::stoull(next());
    rows.push_back(std::move(r));
  }
  return rows;
}

SweepReport run_sweep(const RunManifest& manifest, const std::string& out_dir,
                      const SweepOptions& options) {
  std::vector<GridPoint> pts = grid_points(manifest);
  size_t n_tasks = pts.size() * manifest.trajectories;

  bool any_unitary = false;
  for (double pu : manifest.p_u_grid) any_unitary |= pu > 0.0;
  // The gate pool is only consulted for unitary events; a 1-gate pool keeps
  // p_u = 0 runs cheap while preserving the event stream contract.
  SymmetricGatePool pool(any_unitary ? manifest.pool_size : 1,
                         splitmix64(manifest.master_seed ^ 0x706f6f6cULL));

  ProbeRequest probes;
  probes.s_topo = wants(manifest, "s_topo");
  probes.profile = wants(manifest, "profile");
  probes.half_chain = wants(manifest, "half_chain");
  probes.ancilla_entropy = wants(manifest, "ancilla_entropy");

  auto task_fn = [&](size_t id) {
    const GridPoint& g = pts[id / manifest.trajectories];
    uint64_t traj = id % manifest.trajectories;
    CircuitConfig cfg = manifest.config_for(g.L, g.p_s, g.p_u);
    ProbeRequest pr = probes;
    pr.times = manifest.probe_times;
    if (pr.times.empty()) pr.times = {cfg.total_time_steps()};
    std::sort(pr.times.begin(), pr.times.end());
    pr.times.erase(std::unique(pr.times.begin(), pr.times.end()), pr.times.end());

    TrajectoryRecord rec = run_trajectory(cfg, traj, pool, pr);
    uint64_t seed = trajectory_seed(cfg.master_seed, traj);
    std::vector<ResultRow> rows;
    auto push = [&](size_t t, const std::string& name, double value) {
      rows.push_back({g.p_s, g.p_u, g.L, t, name, static_cast<int64_t>(traj),
                      value, seed});
    };
    for (const ProbeSnapshot& snap : rec.probes) {
      if (snap.s_topo) push(snap.t, "s_topo", static_cast<double>(*snap.s_topo));
      if (snap.half_chain) {
        push(snap.t, "half_chain", static_cast<double>(*snap.half_chain));
      }
      if (snap.ancilla_entropy) {
        push(snap.t, "ancilla_entropy", static_cast<double>(*snap.ancilla_entropy));
      }
      if (snap.profile) {
        for (size_t x = 1; x <= snap.profile->size(); ++x) {
          push(snap.t, profile_name(x), static_cast<double>((*snap.profile)[x - 1]));
        }
      }
    }
    return rows;
  };

  size_t workers = options.workers ? options.workers : manifest.workers;
  return run_journaled(out_dir, n_tasks, workers, options.stop_after_tasks,
                       provenance_of(manifest, "sweep"), task_fn);
}

namespace {

void bond_row(PercolationState& state, double p_t, Rng& rng) {
  size_t n = state.n_sites();
  for (size_t s = 0; s < n; ++s) {
    if (rng.next_double() >= p_t) {
      state.update({CircuitEvent::Kind::single, s, 0, false});
    }
  }
  for (size_t c = 1; c + 1 < n; ++c) {
    if (rng.next_double() < p_t) {
      state.update({CircuitEvent::Kind::stabilizer, c, 0, false});
    }
  }
}

}  // namespace

SweepReport run_percolation(const RunManifest& manifest, const std::string& out_dir,
                            const SweepOptions& options) {
  std::vector<GridPoint> pts = grid_points(manifest);
  size_t n_tasks = pts.size() * manifest.trajectories;
  bool layered = manifest.schedule == Schedule::layered;
  bool time_mode = manifest.perc_mode == "time";
  bool profile_mode = manifest.perc_mode == "profile";

  auto task_fn = [&](size_t id) {
    const GridPoint& g = pts[id / manifest.trajectories];
    uint64_t traj = id % manifest.trajectories;
    CircuitConfig cfg = manifest.config_for(g.L, g.p_s, 0.0);
    uint64_t seed = trajectory_seed(cfg.master_seed, traj);
    Rng rng(seed);
    PercolationState state(g.L);
    std::vector<ResultRow> rows;
    auto push = [&](size_t t, const std::string& name, double value) {
      rows.push_back({g.p_s, 0.0, g.L, t, name, static_cast<int64_t>(traj),
                      value, seed});
    };
    auto time_step = [&]() {
      if (layered) {
        bond_row(state, cfg.p_t(), rng);
      } else {
        for (size_t k = 0; k < g.L; ++k) state.standalone_step(g.p_s, rng);
      }
    };

    if (time_mode) {
      size_t horizon = manifest.time_max ? manifest.time_max : cfg.t_equil_or_default();
      for (size_t t = 1; t <= horizon; ++t) {
        time_step();
        push(t, "half_chain",
             static_cast<double>(state.entropy_interval(0, g.L / 2 - 1)));
      }
      return rows;
    }

    size_t t_equil = layered && manifest.rows ? manifest.rows : cfg.t_equil_or_default();
    for (size_t t = 1; t <= t_equil; ++t) time_step();

    if (profile_mode) {
      std::vector<size_t> profile = state.prefix_profile();
      for (size_t x = 1; x <= profile.size(); ++x) {
        push(t_equil, profile_name(x), static_cast<double>(profile[x - 1]));
      }
      return rows;
    }
    if (wants(manifest, "s_topo")) push(t_equil, "s_topo", percolation_s_topo(state));
    if (wants(manifest, "half_chain")) {
      push(t_equil, "half_chain",
           static_cast<double>(state.entropy_interval(0, g.L / 2 - 1)));
    }
    return rows;
  };

  size_t workers = options.workers ? options.workers : manifest.workers;
  return run_journaled(out_dir, n_tasks, workers, options.stop_after_tasks,
                       provenance_of(manifest, "percolation"), task_fn);
}

SweepReport run_tau(const RunManifest& manifest, const std::string& out_dir,
                    const SweepOptions& options) {
  std::vector<GridPoint> pts = grid_points(manifest);
  size_t n_tasks = pts.size() * manifest.trajectories;
  bool any_unitary = false;
  for (double pu : manifest.p_u_grid) any_unitary |= pu > 0.0;
  SymmetricGatePool pool(any_unitary ? manifest.pool_size : 1,
                         splitmix64(manifest.master_seed ^ 0x706f6f6cULL));

  auto task_fn = [&](size_t id) {
    const GridPoint& g = pts[id / manifest.trajectories];
    uint64_t traj = id % manifest.trajectories;
    CircuitConfig cfg = manifest.config_for(g.L, g.p_s, g.p_u);
    uint64_t seed = trajectory_seed(cfg.master_seed, traj);
    Rng rng(seed);
    SteadyTimeResult r = time_to_steady(cfg, pool, rng, manifest.cap_time_steps);
    std::vector<ResultRow> rows;
    rows.push_back({g.p_s, g.p_u, g.L, 0, "tau_star", static_cast<int64_t>(traj),
                    r.time_steps, seed});
    rows.push_back({g.p_s, g.p_u, g.L, 0, "tau_censored",
                    static_cast<int64_t>(traj), r.censored ? 1.0 : 0.0, seed});
    return rows;
  };

  size_t workers = options.workers ? options.workers : manifest.workers;
  return run_journaled(out_dir, n_tasks, workers, options.stop_after_tasks,
                       provenance_of(manifest, "tau"), task_fn);
}

OracleReport run_oracle_check(const RunManifest& manifest, const std::string& out_dir,
                              const OracleOptions& options) {
  ensure_dir(out_dir);
  OracleReport report;
  SymmetricGatePool pool(1, splitmix64(manifest.master_seed ^ 0x706f6f6cULL));

  for (const GridPoint& g : grid_points(manifest)) {
    CircuitConfig cfg = manifest.config_for(g.L, g.p_s, 0.0);
    cfg.validate();
    if (cfg.basis != SingleBasis::Z || cfg.schedule != Schedule::sequential) {
      throw ManifestError("oracle runs require sequential schedule and Z basis");
    }
    size_t total = cfg.total_time_steps() * g.L;
    for (uint64_t traj = 0; traj < manifest.trajectories; ++traj) {
      ++report.trajectories;
      Rng rng(trajectory_seed(cfg.master_seed, traj));
      StabilizerState state = StabilizerState::zero_state(g.L);
      PercolationState perc(g.L);
      for (size_t step = 1; step <= total; ++step) {
        CircuitEvent ev = sample_event(cfg, pool.size(), rng);
        apply_event(state, ev, cfg, pool);
        perc.update(ev);
        if (step % manifest.probe_stride != 0 && step != total) continue;
        ++report.probes;
        auto record_fail = [&](const std::string& detail) {
          ++report.mismatches;
          if (report.ok) {
            report.ok = false;
            report.fail_size = g.L;
            report.fail_p_s = g.p_s;
            report.fail_trajectory = traj;
            report.fail_event_index = step;
            report.fail_detail = detail;
          }
        };
        std::vector<size_t> sp = state.prefix_entropy_profile();
        std::vector<size_t> pp = perc.prefix_profile();
        for (size_t x = 1; x <= sp.size(); ++x) {
          ++report.comparisons;
          if (sp[x - 1] != pp[x - 1]) {
            record_fail("prefix cut x=" + std::to_string(x) + ": tableau " +
                        std::to_string(sp[x - 1]) + " vs clusters " +
                        std::to_string(pp[x - 1]));
          }
        }
        for (auto [first, last] : options.probe_regions) {
          if (last >= g.L || first > last) continue;
          ++report.comparisons;
          size_t st = state.entropy_interval(first, last);
          size_t pe = perc.entropy_interval(first, last);
          if (st != pe) {
            record_fail("region [" + std::to_string(first) + "," +
                        std::to_string(last) + "]: tableau " + std::to_string(st) +
                        " vs clusters " + std::to_string(pe));
          }
        }
      }
    }
  }

  json j;
  j["schema"] = "symmcirc-oracle v1";
  j["ok"] = report.ok;
  j["trajectories"] = report.trajectories;
  j["probes"] = report.probes;
  j["comparisons"] = report.comparisons;
  j["mismatches"] = report.mismatches;
  j["master_seed"] = manifest.master_seed;
  if (!report.ok) {
    j["first_failure"] = {{"L", report.fail_size},
                          {"p_s", report.fail_p_s},
                          {"trajectory", report.fail_trajectory},
                          {"event_index", report.fail_event_index},
                          {"detail", report.fail_detail}};
  }
  std::ofstream out(fs::path(out_dir) / "oracle_report.json");
  out << j.dump(2) << "\n";
  return report;
}

void emit_plot_data(const std::string& results_dir, const std::string& out_dir) {
  ensure_dir(out_dir);
  std::vector<AggregateRow> rows =
      read_curves_csv((fs::path(results_dir) / "curves.csv").string());

  // Panels keyed by (observable, p_u, L); x axis is p_s unless the panel is
  // a single-parameter time series.
  std::map<std::tuple<std::string, double, size_t>, std::vector<AggregateRow>> panels;
  for (const AggregateRow& r : rows) {
    panels[{r.observable, r.p_u, r.L}].push_back(r);
  }
  json index = json::array();
  size_t file_id = 0;
  for (auto& [key, panel] : panels) {
    const auto& [observable, p_u, L] = key;
    bool time_axis = true;
    for (const AggregateRow& r : panel) {
      if (r.p_s != panel.front().p_s) time_axis = false;
    }
    if (panel.size() < 2) time_axis = false;
    std::ostringstream name;
    name << "panel_" << file_id++ << ".csv";
    std::ofstream out(fs::path(out_dir) / name.str());
    out.precision(17);
    out << "x,y,yerr\n";
    for (const AggregateRow& r : panel) {
      double x = time_axis ? static_cast<double>(r.t) : r.p_s;
      out << x << ',' << r.mean << ',' << r.std_error << '\n';
    }
    json entry;
    entry["file"] = name.str();
    entry["observable"] = observable;
    entry["p_u"] = p_u;
    entry["L"] = L;
    entry["x_axis"] = time_axis ? "t" : "p_s";
    if (time_axis) entry["p_s"] = panel.front().p_s;
    index.push_back(entry);
  }
  json top;
  top["schema"] = "symmcirc-plot v1";
  top["panels"] = index;
  std::ofstream out(fs::path(out_dir) / "index.json");
  out << top.dump(2) << "\n";
}

}  // namespace symmcirc
