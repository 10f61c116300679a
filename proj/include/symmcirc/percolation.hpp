#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "symmcirc/circuit.hpp"
#include "symmcirc/pauli.hpp"

namespace symmcirc {

struct ReconstructedStabilizerSet {
  std::vector<PauliOperator> operators;     // signs fixed to +1
  std::vector<std::vector<int>> grouping;   // sorted site sets, one per cluster
};

// Cluster representation of the p_u = 0 dynamics: each parity sublattice
// carries a partition of its sites, maintained incrementally. A single-qubit
// measurement splits its site off into a fresh cluster; a stabilizer
// measurement merges the clusters of the two endpoints. Cluster ids are
// never reused.
class PercolationState {
public:
  explicit PercolationState(size_t n_sites);

  size_t n_sites() const { return n_; }
  size_t step_count() const { return steps_; }

  int64_t cluster_id(size_t site) const { return cluster_of_[site]; }

  // Applies a measurement event (kind single or stabilizer); rejects unitary.
  void update(const CircuitEvent& event);

  // One updating step drawn from the idealized measurement-only marginals
  // (lattice parity 1/2 each; then single w.p. p_s, else a stabilizer merge).
  void standalone_step(double p_s, Rng& rng);

  // All current clusters (both lattices), sites sorted ascending.
  std::vector<std::vector<int>> sorted_clusters() const;

  // Entropy (bits) of the contiguous region [first, last]: half the endpoint
  // crossings of the reconstructed clipped stabilizers.
  size_t entropy_interval(size_t first, size_t last) const;
  static size_t entropy_interval(const std::vector<std::vector<int>>& clusters,
                                 size_t first, size_t last);

  // Entropy (bits) of an arbitrary site set (sorted, distinct): GF(2) rank of
  // the reconstructed stabilizers restricted to the region, minus its size.
  size_t entropy_region(std::span<const size_t> region) const;

  // Prefix-cut profile: S([0,x)) for x = 1..N-1, i.e. the number of clusters
  // with sites on both sides of each cut.
  std::vector<size_t> prefix_profile() const;

  // Number of clusters spanning the cut between sites cut-1 and cut.
  size_t spanning_count(size_t cut) const;

  // Proposition-style stabilizer reconstruction: per cluster the Z-string
  // over its sites plus the g-strings between consecutive sites.
  ReconstructedStabilizerSet reconstruct_stabilizers() const;

  // Canonical label per site (smallest site index in its cluster).
  std::vector<int> canonical_labels() const;

private:
  void split(size_t site);
  void merge(size_t a, size_t b);

  size_t n_;
  size_t steps_ = 0;
  int64_t next_id_;
  std::vector<int64_t> cluster_of_;
  std::unordered_map<int64_t, std::vector<int32_t>> members_;
};

// S_AB + S_BC - S_B - S_ABC over the same A|B|D|C quarters as
// s_topo_of_state, evaluated on the cluster representation.
double percolation_s_topo(const PercolationState& state);

// The g-string X_i [prod of Z on the opposite-parity sites between] X_j.
PauliOperator g_string(size_t n_qubits, size_t i, size_t j);

// Standard bond percolation on the two N/2 x rows sublattices: per row every
// vertical bond present with probability p_t (absent -> split), then every
// horizontal bond present with probability p_t (present -> merge). Matches
// the layered schedule's induced cluster dynamics.
PercolationState standard_bond_sample(size_t n_sites, size_t rows, double p_t, Rng& rng);

}  // namespace symmcirc
