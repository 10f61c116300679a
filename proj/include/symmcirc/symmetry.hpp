#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "symmcirc/clifford.hpp"
#include "symmcirc/rng.hpp"
#include "symmcirc/tableau.hpp"

namespace symmcirc {

// The Z2 x Z2 generators on an even-length open chain, 0-indexed:
// first = product of Z over qubits 1,3,5,... (the even sites when counting
// from 1), second = product of Z over qubits 0,2,4,...
std::pair<PauliOperator, PauliOperator> symmetry_generators(size_t n_qubits);

// The cluster stabilizer X_{c-1} Z_c X_{c+1} centered at qubit c (0-indexed,
// 1 <= c <= N-2).
PauliOperator cluster_stabilizer(size_t n_qubits, size_t center);

// Exactly uniform over the k-qubit Clifford group (sign conventions
// included): sequential sampling of a symplectic basis image pair per qubit,
// each pair drawn by rejection from the uniform signed Paulis.
CliffordGate sample_uniform_clifford(size_t arity, Rng& rng);

// A 3-site gate respects the symmetry iff conjugation fixes +Z_0 Z_2 and
// +Z_1 exactly (the 3-site restrictions of the two global generators).
bool is_symmetric(const CliffordGate& gate);

// Cache of i.i.d. symmetry-respecting 3-qubit Cliffords, drawn by rejection
// from the uniform distribution; immutable after construction and safe to
// share across trajectory workers.
class SymmetricGatePool {
public:
  SymmetricGatePool(size_t pool_size, uint64_t source_seed);

  size_t size() const { return gates_.size(); }
  uint64_t source_seed() const { return source_seed_; }
  const CliffordGate& gate(size_t index) const { return gates_[index]; }

private:
  uint64_t source_seed_;
  std::vector<CliffordGate> gates_;
};

// Substitutes every Z_i factor by X_{i-1} Z_i X_{i+1} (indices mod N) and
// leaves X factors fixed, generator by generator, with exact signs. The map
// is an involution on operator content.
StabilizerState duality_transform(const StabilizerState& state);
PauliOperator duality_transform(const PauliOperator& p);

}  // namespace symmcirc
