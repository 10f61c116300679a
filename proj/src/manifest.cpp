#include "symmcirc/manifest.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace symmcirc {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "kind",        "sizes",        "p_s",          "p_u",
    "trajectories", "workers",     "schedule",     "basis",
    "boundary",    "ancilla",      "t_equil",      "t_probe",
    "master_seed", "pool_size",    "observables",  "probe_times",
    "probe_stride", "perc_mode",   "rows",         "time_max",
    "cap_time_steps", "out"};

const std::set<std::string> kObservables = {"s_topo", "half_chain", "profile",
                                            "ancilla_entropy"};

template <typename T>
void read_field(const json& j, const char* key, T& out, std::vector<std::string>& errors) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    errors.push_back(std::string(key) + ": wrong type");
  }
}

void read_enum(const json& j, const char* key, const std::vector<std::string>& allowed,
               std::string& out, std::vector<std::string>& errors) {
  if (!j.contains(key)) return;
  std::string v;
  try {
    v = j.at(key).get<std::string>();
  } catch (const json::exception&) {
    errors.push_back(std::string(key) + ": wrong type");
    return;
  }
  for (const std::string& a : allowed) {
    if (v == a) {
      out = v;
      return;
    }
  }
  errors.push_back(std::string(key) + ": unknown value \"" + v + "\"");
}

}  // namespace

CircuitConfig RunManifest::config_for(size_t L, double p_s, double p_u) const {
  CircuitConfig cfg;
  cfg.n = L;
  cfg.p_s = p_s;
  cfg.p_u = p_u;
  cfg.schedule = schedule;
  cfg.basis = basis;
  cfg.boundary = boundary;
  cfg.ancilla = ancilla;
  cfg.t_equil = t_equil;
  cfg.t_probe = t_probe;
  cfg.master_seed = master_seed;
  return cfg;
}

RunManifest RunManifest::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open manifest: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str());
}

RunManifest RunManifest::parse_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ManifestError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ManifestError("manifest must be a JSON object");

  std::vector<std::string> errors;
  for (const auto& [key, value] : j.items()) {
    if (!kKnownKeys.count(key)) errors.push_back("unknown key \"" + key + "\"");
  }

  RunManifest m;
  std::string kind = "sweep", schedule = "sequential", basis = "Z",
              boundary = "open", ancilla = "none";
  read_enum(j, "kind", {"sweep", "oracle", "percolation", "tau"}, kind, errors);
  read_enum(j, "schedule", {"sequential", "layered"}, schedule, errors);
  read_enum(j, "basis", {"Z", "X"}, basis, errors);
  read_enum(j, "boundary", {"open", "periodic"}, boundary, errors);
  read_enum(j, "ancilla", {"none", "plain", "scrambled"}, ancilla, errors);
  read_enum(j, "perc_mode", {"sweep", "profile", "time"}, m.perc_mode, errors);

  read_field(j, "sizes", m.sizes, errors);
  read_field(j, "p_s", m.p_s_grid, errors);
  read_field(j, "p_u", m.p_u_grid, errors);
  read_field(j, "trajectories", m.trajectories, errors);
  read_field(j, "workers", m.workers, errors);
  read_field(j, "t_equil", m.t_equil, errors);
  read_field(j, "t_probe", m.t_probe, errors);
  read_field(j, "master_seed", m.master_seed, errors);
  read_field(j, "pool_size", m.pool_size, errors);
  read_field(j, "observables", m.observables, errors);
  read_field(j, "probe_times", m.probe_times, errors);
  read_field(j, "probe_stride", m.probe_stride, errors);
  read_field(j, "rows", m.rows, errors);
  read_field(j, "time_max", m.time_max, errors);
  read_field(j, "cap_time_steps", m.cap_time_steps, errors);
  read_field(j, "out", m.out_dir, errors);

  m.kind = kind == "sweep"    ? Kind::sweep
           : kind == "oracle" ? Kind::oracle
           : kind == "percolation" ? Kind::percolation
                                   : Kind::tau;
  m.schedule = schedule == "sequential" ? Schedule::sequential : Schedule::layered;
  m.basis = basis == "Z" ? SingleBasis::Z : SingleBasis::X;
  m.boundary = boundary == "open" ? Boundary::open : Boundary::periodic;
  m.ancilla = ancilla == "none"    ? AncillaProtocol::none
              : ancilla == "plain" ? AncillaProtocol::plain
                                   : AncillaProtocol::scrambled;

  if (m.sizes.empty()) errors.push_back("sizes: must list at least one L");
  for (size_t L : m.sizes) {
    if (L < 4 || L % 2 != 0) {
      errors.push_back("sizes: L=" + std::to_string(L) + " must be even and >= 4");
    }
  }
  if (m.p_s_grid.empty()) errors.push_back("p_s: must list at least one value");
  if (m.p_u_grid.empty()) m.p_u_grid = {0.0};
  for (double v : m.p_s_grid) {
    if (v < 0.0 || v > 1.0) errors.push_back("p_s: value out of [0,1]");
  }
  for (double v : m.p_u_grid) {
    if (v < 0.0 || v > 1.0) errors.push_back("p_u: value out of [0,1]");
  }
  for (double ps : m.p_s_grid) {
    for (double pu : m.p_u_grid) {
      if (ps + pu > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "p_s+p_u>1 at p_s=" << ps << ", p_u=" << pu;
        errors.push_back(os.str());
        break;
      }
    }
  }
  if (m.trajectories == 0) errors.push_back("trajectories: must be positive");
  for (const std::string& o : m.observables) {
    if (!kObservables.count(o)) errors.push_back("observables: unknown \"" + o + "\"");
  }
  if (m.kind == Kind::oracle || m.kind == Kind::percolation) {
    for (double pu : m.p_u_grid) {
      if (pu != 0.0) {
        errors.push_back("p_u: must be 0 for oracle/percolation runs");
        break;
      }
    }
    if (m.ancilla != AncillaProtocol::none) {
      errors.push_back("ancilla: must be none for oracle/percolation runs");
    }
  }
  std::string ancilla_obs_error;
  for (const std::string& o : m.observables) {
    if (o == "ancilla_entropy" && m.ancilla == AncillaProtocol::none) {
      errors.push_back("observables: ancilla_entropy needs an ancilla protocol");
    }
    if (o == "profile" && m.ancilla != AncillaProtocol::none) {
      errors.push_back("observables: profile requires ancilla none");
    }
  }

  if (!errors.empty()) {
    std::string msg = "manifest validation failed:";
    for (const std::string& e : errors) msg += "\n  - " + e;
    throw ManifestError(msg);
  }
  return m;
}

void write_rows_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << kCsvSchemaTag << "\n";
  out << "p_s,p_u,L,t,observable,trajectory,value,seed\n";
  out.precision(17);
  for (const ResultRow& r : rows) {
    out << r.p_s << ',' << r.p_u << ',' << r.L << ',' << r.t << ','
        << r.observable << ',' << r.trajectory << ',' << r.value << ','
        << r.seed << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<ResultRow> read_rows_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kCsvSchemaTag) {
    throw std::runtime_error(path + ": unknown CSV schema (expected \"" +
                             std::string(kCsvSchemaTag) + "\")");
  }
  std::getline(in, line);  // column header
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    ResultRow r;
    auto next = [&]() {
      if (!std::getline(ss, field, ',')) {
        throw std::runtime_error(path + ": short row: " + line);
      }
      return field;
    };
    r.p_s = std::stod(next());
    r.p_u = std::stod(next());
    r.L = std::stoull(next());
    r.t = std::stoull(next());
    r.observable = next();
    r.trajectory = std::stoll(next());
    r.value = std::stod(next());
    r.seed = std::stoull(next());
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace symmcirc
