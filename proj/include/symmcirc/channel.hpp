#pragma once

#include <cstdint>
#include <vector>

#include "symmcirc/circuit.hpp"

namespace symmcirc {

// Mixed stabilizer state rho = 2^{-N} sum_{g in G} g with n <= N independent
// commuting generators. Measurements only ever shrink the group (to the
// centralizer of the measured operator); unitaries conjugate it in place.
class StabilizerGroupState {
public:
  StabilizerGroupState(size_t n_qubits, std::vector<PauliOperator> generators);

  // <G1, G2, Z_1, ..., Z_{N-2}> (0-indexed interior Z's), the group of
  // |0...0><0...0| restricted to symmetry-respecting labels.
  static StabilizerGroupState initial_state(size_t n_qubits);

  size_t n_qubits() const { return n_; }
  size_t generator_count() const { return gens_.size(); }
  const std::vector<PauliOperator>& generators() const { return gens_; }

  // E_P(rho) = (rho + P rho P)/2: unchanged if P centralizes the group,
  // otherwise re-express so exactly one generator anticommutes and drop it.
  void channel_measure(const PauliOperator& p);

  void channel_unitary(const CliffordGate& gate, std::span<const size_t> sites);

  // True iff the group is exactly <G1, G2> with both member signs +1.
  bool is_steady_state() const;

  bool is_valid() const;  // commutation + independence of the bit rows

private:
  size_t n_;
  std::vector<PauliOperator> gens_;
};

struct SteadyTimeResult {
  double time_steps = 0.0;  // elapsed updating steps / N
  bool censored = false;
};

// Runs the channel on the same event stream as the trajectory simulator
// until the steady state <G1,G2> is reached, or `cap_time_steps` elapses.
SteadyTimeResult time_to_steady(const CircuitConfig& config, const SymmetricGatePool& pool,
                                Rng& rng, size_t cap_time_steps = 0);

}  // namespace symmcirc
