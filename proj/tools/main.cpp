#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "symmcirc/analysis.hpp"
#include "symmcirc/sweep.hpp"

namespace {

using namespace symmcirc;
namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitOracleMismatch = 3;
constexpr int kExitIo = 4;

size_t default_workers() {
  if (const char* env = std::getenv("SYMMCIRC_WORKERS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<size_t>(v);
  }
  return 1;
}

// "a:b,c:d" -> inclusive site regions.
std::vector<std::pair<size_t, size_t>> parse_regions(const std::string& spec) {
  std::vector<std::pair<size_t, size_t>> out;
  if (spec.empty()) return out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t colon = item.find(':');
    if (colon == std::string::npos) {
      throw ManifestError("--probe-regions: expected FIRST:LAST, got \"" + item + "\"");
    }
    size_t first = std::stoull(item.substr(0, colon));
    size_t last = std::stoull(item.substr(colon + 1));
    if (first > last) throw ManifestError("--probe-regions: FIRST > LAST in \"" + item + "\"");
    out.emplace_back(first, last);
  }
  return out;
}

struct CommonArgs {
  std::string manifest_path;
  std::string out_dir;
  size_t workers = 0;
  std::optional<uint64_t> seed;
};

RunManifest load_manifest(const CommonArgs& args, RunManifest::Kind expected) {
  RunManifest m = RunManifest::parse_file(args.manifest_path);
  if (m.kind != expected) {
    throw ManifestError("manifest kind does not match this subcommand");
  }
  if (args.seed) m.master_seed = *args.seed;
  if (args.workers) m.workers = args.workers;
  if (m.workers == 0) m.workers = default_workers();
  if (!args.out_dir.empty()) m.out_dir = args.out_dir;
  return m;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_manifest = true) {
  auto* opt = cmd->add_option("--manifest", args.manifest_path, "run manifest (JSON)");
  if (needs_manifest) opt->required();
  cmd->add_option("--out", args.out_dir, "output directory (overrides manifest)");
  cmd->add_option("--workers", args.workers,
                  "worker thread count (default: SYMMCIRC_WORKERS or 1)");
  cmd->add_option("--seed", args.seed, "master seed (overrides manifest)");
}

void print_report(const char* what, const SweepReport& r) {
  std::cout << what << ": " << r.tasks_run << " task(s) run, " << r.tasks_resumed
            << " resumed, " << r.tasks_total << " total; outputs in " << r.out_dir
            << (r.finished ? "" : " (incomplete)") << "\n";
}

struct CurveFilter {
  std::string observable = "s_topo";
  double p_u = 0.0;
};

// Builds one curve per system size: mean observable vs p_s at the latest
// probe time of each (L, p_s) cell.
std::vector<EntropyCurve> curves_from_rows(const std::vector<AggregateRow>& rows,
                                           const CurveFilter& filter) {
  std::map<size_t, std::map<double, AggregateRow>> by_size;
  for (const AggregateRow& r : rows) {
    if (r.observable != filter.observable || r.p_u != filter.p_u) continue;
    auto& cell = by_size[r.L];
    auto it = cell.find(r.p_s);
    if (it == cell.end() || it->second.t < r.t) cell[r.p_s] = r;
  }
  std::vector<EntropyCurve> curves;
  for (auto& [L, cell] : by_size) {
    EntropyCurve c;
    c.parameter_name = "p_s";
    c.system_size = L;
    for (auto& [ps, r] : cell) {
      c.parameter.push_back(ps);
      c.mean.push_back(r.mean);
      c.std_error.push_back(r.std_error);
      c.count.push_back(r.count);
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

int cmd_collapse(const std::string& results_dir, const std::string& out_dir,
                 const CurveFilter& filter, const CollapseSearch& search) {
  auto rows = read_curves_csv((fs::path(results_dir) / "curves.csv").string());
  std::vector<EntropyCurve> curves = curves_from_rows(rows, filter);
  CollapseResult res = scaling_collapse(curves, search);
  json j;
  j["schema"] = "symmcirc-collapse v1";
  j["observable"] = filter.observable;
  j["p_u"] = filter.p_u;
  j["p_c"] = res.p_c;
  j["p_c_err"] = res.p_c_err;
  j["nu"] = res.nu;
  j["nu_err"] = res.nu_err;
  j["quality"] = res.quality;
  j["sizes"] = json::array();
  for (const EntropyCurve& c : curves) j["sizes"].push_back(c.system_size);
  j["search"] = {{"p_c_lo", res.p_c_grid_lo}, {"p_c_hi", res.p_c_grid_hi},
                 {"p_c_step", res.p_c_grid_step}, {"nu_lo", res.nu_grid_lo},
                 {"nu_hi", res.nu_grid_hi}, {"nu_step", res.nu_grid_step}};
  fs::create_directories(out_dir);
  std::ofstream out(fs::path(out_dir) / "collapse.json");
  out << j.dump(2) << "\n";
  std::cout << "collapse: p_c = " << res.p_c << " +- " << res.p_c_err
            << ", nu = " << res.nu << " +- " << res.nu_err << "\n";
  return kExitOk;
}

int cmd_fit(const std::string& results_dir, const std::string& out_dir,
            const std::string& kind, size_t L, double p_u, const std::string& observable,
            size_t x_min, double t_lo, double t_hi) {
  auto rows = read_curves_csv((fs::path(results_dir) / "curves.csv").string());
  FitResult fit;
  json j;
  j["schema"] = "symmcirc-fit v1";
  j["L"] = L;
  j["p_u"] = p_u;
  if (kind == "profile") {
    std::vector<double> profile(L - 1, 0.0);
    std::vector<bool> seen(L - 1, false);
    for (const AggregateRow& r : rows) {
      if (r.L != L || r.p_u != p_u) continue;
      if (r.observable.rfind("profile:", 0) != 0) continue;
      size_t x = std::stoull(r.observable.substr(8));
      if (x >= 1 && x <= L - 1) {
        profile[x - 1] = r.mean;
        seen[x - 1] = true;
      }
    }
    for (bool s : seen) {
      if (!s) throw ManifestError("fit: incomplete entropy profile in curves.csv");
    }
    fit = fit_log_profile(profile, L, x_min);
    j["kind"] = "profile";
    j["x_min"] = x_min;
  } else {
    std::vector<double> times, values;
    for (const AggregateRow& r : rows) {
      if (r.L != L || r.p_u != p_u || r.observable != observable) continue;
      times.push_back(static_cast<double>(r.t));
      values.push_back(r.mean);
    }
    fit = fit_log_time(times, values, t_lo, t_hi);
    j["kind"] = "time";
    j["observable"] = observable;
    j["t_lo"] = t_lo;
    j["t_hi"] = t_hi;
  }
  j["slope"] = fit.slope;
  j["slope_err"] = fit.slope_err;
  j["intercept"] = fit.intercept;
  j["window_lo"] = fit.window_lo;
  j["window_hi"] = fit.window_hi;
  fs::create_directories(out_dir);
  std::ofstream out(fs::path(out_dir) / "fit.json");
  out << j.dump(2) << "\n";
  std::cout << "fit: slope = " << fit.slope << " +- " << fit.slope_err << "\n";
  return kExitOk;
}

int run(int argc, char** argv) {
  CLI::App app{"symmetric measurement-circuit phase diagram toolkit"};
  app.require_subcommand(1);

  CommonArgs sweep_args, oracle_args, perc_args, tau_args;
  std::string probe_regions;

  auto* sweep_cmd = app.add_subcommand("sweep", "trajectory sweep over the parameter grid");
  add_common(sweep_cmd, sweep_args);
  auto* oracle_cmd =
      app.add_subcommand("oracle", "tableau vs cluster-dynamics equivalence check");
  add_common(oracle_cmd, oracle_args);
  oracle_cmd->add_option("--probe-regions", probe_regions,
                         "extra regions FIRST:LAST[,FIRST:LAST...] to compare");
  auto* perc_cmd = app.add_subcommand("perc", "measurement-only cluster dynamics runs");
  add_common(perc_cmd, perc_args);
  auto* tau_cmd = app.add_subcommand("tau", "averaged-channel time-to-steady-state runs");
  add_common(tau_cmd, tau_args);

  std::string results_dir, out_dir = "results";
  CurveFilter filter;
  CollapseSearch search;
  auto* collapse_cmd =
      app.add_subcommand("collapse", "finite-size scaling collapse from curves.csv");
  collapse_cmd->add_option("--results", results_dir, "directory with curves.csv")
      ->required();
  collapse_cmd->add_option("--out", out_dir, "output directory");
  collapse_cmd->add_option("--observable", filter.observable, "curve observable");
  collapse_cmd->add_option("--p-u", filter.p_u, "p_u slice");
  collapse_cmd->add_option("--p-c-lo", search.p_c_lo, "p_c search window low");
  collapse_cmd->add_option("--p-c-hi", search.p_c_hi, "p_c search window high");

  std::string fit_kind = "profile", fit_observable = "half_chain";
  size_t fit_L = 0, fit_x_min = 4;
  double fit_p_u = 0.0, fit_t_lo = 1.0, fit_t_hi = 1e18;
  auto* fit_cmd = app.add_subcommand("fit", "logarithmic entropy fits from curves.csv");
  fit_cmd->add_option("--results", results_dir, "directory with curves.csv")->required();
  fit_cmd->add_option("--out", out_dir, "output directory");
  fit_cmd->add_option("--kind", fit_kind, "profile | time")
      ->check(CLI::IsMember({"profile", "time"}));
  fit_cmd->add_option("--L", fit_L, "system size")->required();
  fit_cmd->add_option("--p-u", fit_p_u, "p_u slice");
  fit_cmd->add_option("--observable", fit_observable, "time-series observable");
  fit_cmd->add_option("--x-min", fit_x_min, "profile window margin");
  fit_cmd->add_option("--t-lo", fit_t_lo, "time window low");
  fit_cmd->add_option("--t-hi", fit_t_hi, "time window high");

  auto* emit_cmd = app.add_subcommand("emit", "plot-ready panel files from curves.csv");
  emit_cmd->add_option("--results", results_dir, "directory with curves.csv")->required();
  emit_cmd->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  if (sweep_cmd->parsed()) {
    RunManifest m = load_manifest(sweep_args, RunManifest::Kind::sweep);
    print_report("sweep", run_sweep(m, m.out_dir));
    return kExitOk;
  }
  if (oracle_cmd->parsed()) {
    RunManifest m = load_manifest(oracle_args, RunManifest::Kind::oracle);
    OracleOptions opts;
    opts.probe_regions = parse_regions(probe_regions);
    OracleReport report = run_oracle_check(m, m.out_dir, opts);
    std::cout << "oracle: " << report.comparisons << " comparisons, "
              << report.mismatches << " mismatch(es)\n";
    if (!report.ok) {
      std::cerr << "first failure: L=" << report.fail_size << " p_s=" << report.fail_p_s
                << " trajectory=" << report.fail_trajectory << " event "
                << report.fail_event_index << ": " << report.fail_detail << "\n";
      return kExitOracleMismatch;
    }
    return kExitOk;
  }
  if (perc_cmd->parsed()) {
    RunManifest m = load_manifest(perc_args, RunManifest::Kind::percolation);
    print_report("perc", run_percolation(m, m.out_dir));
    return kExitOk;
  }
  if (tau_cmd->parsed()) {
    RunManifest m = load_manifest(tau_args, RunManifest::Kind::tau);
    print_report("tau", run_tau(m, m.out_dir));
    return kExitOk;
  }
  if (collapse_cmd->parsed()) return cmd_collapse(results_dir, out_dir, filter, search);
  if (fit_cmd->parsed()) {
    return cmd_fit(results_dir, out_dir, fit_kind, fit_L, fit_p_u, fit_observable,
                   fit_x_min, fit_t_lo, fit_t_hi);
  }
  if (emit_cmd->parsed()) {
    emit_plot_data(results_dir, out_dir);
    std::cout << "emit: wrote panels to " << out_dir << "\n";
    return kExitOk;
  }
  return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ManifestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}
