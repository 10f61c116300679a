#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "symmcirc/clifford.hpp"
#include "symmcirc/pauli.hpp"
#include "symmcirc/rng.hpp"

namespace symmcirc {

// Pure stabilizer state on N qubits: N independent, mutually commuting
// generators. Entropy of a region is rank_{GF(2)} of the restricted (x|z)
// generator matrix minus |region| (the clipped gauge exists separately as a
// validation path).
class StabilizerState {
public:
  explicit StabilizerState(size_t n_qubits);

  // |0...0>, stabilized by {Z_0, ..., Z_{N-1}}.
  static StabilizerState zero_state(size_t n_qubits);

  static StabilizerState from_generators(std::vector<PauliOperator> generators);

  size_t n_qubits() const { return n_; }
  const std::vector<PauliOperator>& generators() const { return gens_; }

  // Conjugates every generator through `gate` acting on `sites` (distinct,
  // in-range). Rejects non-symplectic gates.
  void apply(const CliffordGate& gate, std::span<const size_t> sites);

  // Projective measurement of a sign-free Pauli. Returns the outcome in
  // {+1,-1}. Random outcomes consume `outcome_bit` (false -> +1). The lowest
  // index anticommuting generator is the one replaced.
  int measure(const PauliOperator& p, bool outcome_bit);
  int measure(const PauliOperator& p, Rng& rng);

  // Same projective update as measure(), but deterministic outcomes are left
  // unresolved (nullopt) instead of paying the O(N^3) member-sign solve. The
  // resulting state is identical either way.
  std::optional<int> project(const PauliOperator& p, bool outcome_bit);

  // Outcome of measuring p if it is deterministic, nullopt otherwise.
  std::optional<int> deterministic_outcome(const PauliOperator& p) const;

  // Rank-based entanglement entropy in bits.
  size_t entanglement_entropy(std::span<const size_t> region) const;
  size_t entropy_interval(size_t first, size_t last) const;  // inclusive ends

  // Entropy of the prefix [0, x) for every x in one pass (profile of cuts).
  std::vector<size_t> prefix_entropy_profile() const;

  // True iff the (x|z) row of p lies in the GF(2) span of the generators.
  bool contains_up_to_sign(const PauliOperator& p) const;

  // If +-p is in the group, returns the member's sign relative to p as given
  // (+1 when p itself is a member); nullopt when the bits are not in the span.
  std::optional<int> member_sign(const PauliOperator& p) const;

  // Same group, generators satisfying the clipped-gauge endpoint conditions.
  StabilizerState clipped() const;
  bool is_clipped() const;

  // For a clipped state: half the number of generators with exactly one
  // endpoint inside [first, last].
  size_t clipped_entropy_interval(size_t first, size_t last) const;

  // Full invariant check (commutation + GF(2) independence); test helper.
  bool is_valid() const;

  void negate_generator(size_t k) { gens_[k].negate(); }

private:
  size_t n_;
  std::vector<PauliOperator> gens_;
};

namespace gf2 {

// Rank of bit-packed rows (each row `words` wide), destroys `rows`.
size_t rank_in_place(std::vector<std::vector<uint64_t>>& rows);

// Row-echelon reduction of Pauli rows (phases tracked through multiplies),
// over columns ordered (x_0..x_{N-1}, z_0..z_{N-1}). Returns pivot columns.
std::vector<size_t> echelonize(std::vector<PauliOperator>& rows);

// Reduce p by an echelonized basis; the residual has zero bits iff p is in
// the span. Returned Pauli is p multiplied by basis rows.
PauliOperator reduce(const std::vector<PauliOperator>& echelon,
                     const std::vector<size_t>& pivots, PauliOperator p);

}  // namespace gf2

}  // namespace symmcirc
