#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "symmcirc/symmetry.hpp"
#include "symmcirc/tableau.hpp"

namespace symmcirc {

enum class Schedule { sequential, layered };
enum class SingleBasis { Z, X };
enum class Boundary { open, periodic };
enum class AncillaProtocol { none, plain, scrambled };

struct CircuitConfig {
  size_t n = 0;          // chain length L (even; S_topo probes need L % 4 == 0)
  double p_s = 0.0;
  double p_u = 0.0;      // p_t = 1 - p_s - p_u
  Schedule schedule = Schedule::sequential;
  SingleBasis basis = SingleBasis::Z;
  Boundary boundary = Boundary::open;
  size_t t_equil = 0;    // time steps before probes/ancilla; 0 -> default 2N
  AncillaProtocol ancilla = AncillaProtocol::none;
  size_t t_probe = 0;    // time steps after ancilla entangling; 0 -> default N
  uint64_t master_seed = 0;

  double p_t() const { return 1.0 - p_s - p_u; }
  size_t t_equil_or_default() const { return t_equil ? t_equil : 2 * n; }
  size_t t_probe_or_default() const { return t_probe ? t_probe : n; }
  size_t ancilla_count() const {
    switch (ancilla) {
      case AncillaProtocol::none: return 0;
      case AncillaProtocol::plain: return 1;
      case AncillaProtocol::scrambled: return 10;
    }
    return 0;
  }
  size_t total_time_steps() const {
    return t_equil_or_default() +
           (ancilla == AncillaProtocol::none ? 0 : t_probe_or_default());
  }

  void validate() const;  // throws std::invalid_argument
  uint64_t hash() const;
};

struct CircuitEvent {
  enum class Kind { unitary, single, stabilizer };
  Kind kind;
  size_t site;          // stabilizer/unitary: center qubit; single: the qubit
  uint32_t gate_index;  // unitary only
  bool outcome_bit;     // measurement kinds only; false -> outcome +1
};

// One updating step of the sequential schedule. Draw order is fixed (kind,
// site, then gate_index or outcome_bit); golden files depend on it.
CircuitEvent sample_event(const CircuitConfig& config, size_t pool_size, Rng& rng);

// Applies an event to a state whose first config.n qubits are the chain.
// Returns the measurement outcome, if any. With resolve_deterministic false,
// deterministic measurement outcomes come back as nullopt instead of paying
// the member-sign solve (the state update is identical).
std::optional<int> apply_event(StabilizerState& state, const CircuitEvent& event,
                               const CircuitConfig& config, const SymmetricGatePool& pool,
                               bool resolve_deterministic = true);

// One time step of the layered schedule (p_u = 0): a stabilizer layer
// (Bernoulli(p_t) per interior center, ascending), then a single-qubit layer
// (Bernoulli(1-p_t) per qubit, ascending).
void layered_step(StabilizerState& state, const CircuitConfig& config, Rng& rng);

// Measures Z_{N/2-2} Z_a, Z_{N/2} Z_a, X_{N/2-2} X_a X_{N/2}, in that order
// (the two chain qubits adjacent to the midpoint; a = the single ancilla).
void entangle_ancilla(StabilizerState& state, const CircuitConfig& config, Rng& rng);

// 10 (N+10) updating steps of a scrambling circuit: each step a uniform
// 3-qubit Clifford on 3 distinct qubits drawn from chain + ancillas.
void entangle_scrambled_ancillas(StabilizerState& state, const CircuitConfig& config,
                                 Rng& rng);

struct ProbeRequest {
  std::vector<size_t> times;  // time steps from circuit start, sorted
  bool s_topo = false;
  bool profile = false;     // prefix-cut entropy profile (no-ancilla runs only)
  bool half_chain = false;
  bool ancilla_entropy = false;
};

struct ProbeSnapshot {
  size_t t = 0;
  std::optional<int64_t> s_topo;
  std::optional<std::vector<size_t>> profile;
  std::optional<size_t> half_chain;
  std::optional<size_t> ancilla_entropy;
};

struct TrajectoryRecord {
  uint64_t config_hash = 0;
  uint64_t trajectory_index = 0;
  std::vector<ProbeSnapshot> probes;
};

// S_AB + S_BC - S_B - S_ABC over equal quarters laid out A|B|D|C, so A and C
// hold the chain ends (= 2 on SPT eigenstates, 0 on product states).
int64_t s_topo_of_state(const StabilizerState& state, size_t chain_length);

// Runs one quantum trajectory from |0...0>, fully determined by
// (config.master_seed, trajectory_index).
TrajectoryRecord run_trajectory(const CircuitConfig& config, uint64_t trajectory_index,
                                const SymmetricGatePool& pool, const ProbeRequest& probes);

}  // namespace symmcirc
