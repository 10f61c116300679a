#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "symmcirc/analysis.hpp"
#include "symmcirc/channel.hpp"
#include "symmcirc/percolation.hpp"
#include "symmcirc/sweep.hpp"

namespace py = pybind11;
using namespace symmcirc;

namespace {

CircuitConfig make_config(size_t n, double p_s, double p_u, const std::string& schedule,
                          const std::string& basis, const std::string& ancilla,
                          size_t t_equil, size_t t_probe, uint64_t master_seed) {
  CircuitConfig cfg;
  cfg.n = n;
  cfg.p_s = p_s;
  cfg.p_u = p_u;
  cfg.schedule = schedule == "layered" ? Schedule::layered : Schedule::sequential;
  cfg.basis = basis == "X" ? SingleBasis::X : SingleBasis::Z;
  cfg.ancilla = ancilla == "plain"       ? AncillaProtocol::plain
                : ancilla == "scrambled" ? AncillaProtocol::scrambled
                                         : AncillaProtocol::none;
  cfg.t_equil = t_equil;
  cfg.t_probe = t_probe;
  cfg.master_seed = master_seed;
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_symmcirc, m) {
  m.doc() = "stabilizer-circuit phase diagram toolkit";

  py::class_<PauliOperator>(m, "PauliOperator")
      .def(py::init([](const std::string& s) { return PauliOperator::from_string(s); }))
      .def_property_readonly("n_qubits", &PauliOperator::n_qubits)
      .def("sign", &PauliOperator::sign)
      .def("weight", &PauliOperator::weight)
      .def("commutes_with", &PauliOperator::commutes_with)
      .def("__mul__",
           [](const PauliOperator& a, const PauliOperator& b) { return a * b; })
      .def("__str__", &PauliOperator::to_string)
      .def("__eq__", [](const PauliOperator& a, const PauliOperator& b) { return a == b; });

  py::class_<StabilizerState>(m, "StabilizerState")
      .def_static("zero_state", &StabilizerState::zero_state)
      .def_property_readonly("n_qubits", &StabilizerState::n_qubits)
      .def("measure",
           [](StabilizerState& s, const PauliOperator& p, bool outcome_bit) {
             return s.measure(p, outcome_bit);
           })
      .def("deterministic_outcome", &StabilizerState::deterministic_outcome)
      .def("entropy_interval", &StabilizerState::entropy_interval)
      .def("prefix_entropy_profile", &StabilizerState::prefix_entropy_profile)
      .def("member_sign", &StabilizerState::member_sign)
      .def("is_valid", &StabilizerState::is_valid);

  py::class_<PercolationState>(m, "PercolationState")
      .def(py::init<size_t>())
      .def_property_readonly("n_sites", &PercolationState::n_sites)
      .def("split",
           [](PercolationState& p, size_t site) {
             p.update({CircuitEvent::Kind::single, site, 0, false});
           })
      .def("merge_at",
           [](PercolationState& p, size_t center) {
             p.update({CircuitEvent::Kind::stabilizer, center, 0, false});
           })
      .def("entropy_interval",
           [](const PercolationState& p, size_t first, size_t last) {
             return p.entropy_interval(first, last);
           })
      .def("prefix_profile", &PercolationState::prefix_profile)
      .def("sorted_clusters", &PercolationState::sorted_clusters);

  m.def("symmetry_generators", &symmetry_generators);
  m.def("cluster_stabilizer", &cluster_stabilizer);
  m.def("g_string", &g_string);
  m.def("duality_transform",
        py::overload_cast<const PauliOperator&>(&duality_transform));
  m.def("trajectory_seed", &trajectory_seed);

  m.def(
      "run_trajectory",
      [](size_t n, double p_s, double p_u, uint64_t master_seed, uint64_t trajectory,
         const std::string& schedule, const std::string& basis,
         const std::string& ancilla, size_t t_equil, size_t t_probe, size_t pool_size,
         std::vector<size_t> probe_times, bool s_topo, bool profile, bool half_chain,
         bool ancilla_entropy) {
        CircuitConfig cfg = make_config(n, p_s, p_u, schedule, basis, ancilla, t_equil,
                                        t_probe, master_seed);
        SymmetricGatePool pool(p_u > 0 ? pool_size : 1,
                               splitmix64(master_seed ^ 0x706f6f6cULL));
        ProbeRequest probes;
        if (probe_times.empty()) probe_times = {cfg.total_time_steps()};
        probes.times = std::move(probe_times);
        probes.s_topo = s_topo;
        probes.profile = profile;
        probes.half_chain = half_chain;
        probes.ancilla_entropy = ancilla_entropy;
        TrajectoryRecord rec = run_trajectory(cfg, trajectory, pool, probes);
        py::list out;
        for (const ProbeSnapshot& snap : rec.probes) {
          py::dict d;
          d["t"] = snap.t;
          if (snap.s_topo) d["s_topo"] = *snap.s_topo;
          if (snap.half_chain) d["half_chain"] = *snap.half_chain;
          if (snap.ancilla_entropy) d["ancilla_entropy"] = *snap.ancilla_entropy;
          if (snap.profile) d["profile"] = *snap.profile;
          out.append(std::move(d));
        }
        return out;
      },
      py::arg("n"), py::arg("p_s"), py::arg("p_u") = 0.0, py::arg("master_seed") = 0,
      py::arg("trajectory") = 0, py::arg("schedule") = "sequential",
      py::arg("basis") = "Z", py::arg("ancilla") = "none", py::arg("t_equil") = 0,
      py::arg("t_probe") = 0, py::arg("pool_size") = 4096,
      py::arg("probe_times") = std::vector<size_t>{}, py::arg("s_topo") = true,
      py::arg("profile") = false, py::arg("half_chain") = false,
      py::arg("ancilla_entropy") = false);

  m.def(
      "run_sweep",
      [](const std::string& manifest_path, const std::string& out_dir, size_t workers) {
        RunManifest manifest = RunManifest::parse_file(manifest_path);
        SweepOptions opts;
        opts.workers = workers;
        SweepReport r = run_sweep(manifest, out_dir.empty() ? manifest.out_dir : out_dir,
                                  opts);
        py::dict d;
        d["tasks_total"] = r.tasks_total;
        d["tasks_run"] = r.tasks_run;
        d["tasks_resumed"] = r.tasks_resumed;
        d["finished"] = r.finished;
        d["out_dir"] = r.out_dir;
        return d;
      },
      py::arg("manifest_path"), py::arg("out_dir") = "", py::arg("workers") = 0);

  m.def("fit_log_profile",
        [](const std::vector<double>& profile, size_t system_size, size_t x_min) {
          FitResult f = fit_log_profile(profile, system_size, x_min);
          py::dict d;
          d["slope"] = f.slope;
          d["intercept"] = f.intercept;
          d["slope_err"] = f.slope_err;
          return d;
        },
        py::arg("profile"), py::arg("system_size"), py::arg("x_min") = 4);
}
