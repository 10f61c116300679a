#include "symmcirc/symmetry.hpp"

#include <stdexcept>
#include <unordered_map>

namespace symmcirc {

std::pair<PauliOperator, PauliOperator> symmetry_generators(size_t n_qubits) {
  if (n_qubits % 2 != 0) {
    throw std::invalid_argument("symmetry_generators: chain length must be even");
  }
  PauliOperator g1(n_qubits), g2(n_qubits);
  for (size_t q = 0; q < n_qubits; ++q) {
    if (q % 2 == 1) {
      g1.set_z(q, true);
    } else {
      g2.set_z(q, true);
    }
  }
  return {g1, g2};
}

PauliOperator cluster_stabilizer(size_t n_qubits, size_t center) {
  if (center == 0 || center + 1 >= n_qubits) {
    throw std::out_of_range("cluster_stabilizer: center must be interior");
  }
  PauliOperator g(n_qubits);
  g.set_x(center - 1, true);
  g.set_z(center, true);
  g.set_x(center + 1, true);
  return g;
}

namespace {

PauliOperator random_signed_pauli(size_t arity, Rng& rng) {
  PauliOperator p(arity);
  uint64_t bits = rng.next_u64();
  for (size_t j = 0; j < arity; ++j) {
    p.set_x(j, (bits >> (2 * j)) & 1u);
    p.set_z(j, (bits >> (2 * j + 1)) & 1u);
  }
  p.set_sign(((bits >> 63) & 1u) ? -1 : +1);
  return p;
}

}  // namespace

CliffordGate sample_uniform_clifford(size_t arity, Rng& rng) {
  if (arity == 0 || arity > 3) {
    throw std::invalid_argument("sample_uniform_clifford: arity must be 1..3");
  }
  CliffordGate g(arity);
  std::vector<const PauliOperator*> chosen;
  for (size_t j = 0; j < arity; ++j) {
    // Image of X_j: uniform non-identity signed Pauli commuting with every
    // previously fixed image (automatically independent of them).
    for (;;) {
      PauliOperator cand = random_signed_pauli(arity, rng);
      if (cand.identity_bits()) continue;
      bool ok = true;
      for (const PauliOperator* q : chosen) {
        if (!cand.commutes_with(*q)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      g.image_x(j) = std::move(cand);
      break;
    }
    // Image of Z_j: uniform signed Pauli commuting with the previous images
    // and anticommuting with the image of X_j.
    for (;;) {
      PauliOperator cand = random_signed_pauli(arity, rng);
      if (cand.commutes_with(g.image_x(j))) continue;
      bool ok = true;
      for (const PauliOperator* q : chosen) {
        if (!cand.commutes_with(*q)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      g.image_z(j) = std::move(cand);
      break;
    }
    chosen.push_back(&g.image_x(j));
    chosen.push_back(&g.image_z(j));
  }
  return g;
}

bool is_symmetric(const CliffordGate& gate) {
  if (gate.arity() != 3) {
    throw std::invalid_argument("is_symmetric: expects a 3-qubit gate");
  }
  PauliOperator z1z3 = PauliOperator::single(3, 0, 'Z');
  z1z3.set_z(2, true);
  if (!(gate.conjugate(z1z3) == z1z3)) return false;
  PauliOperator z2 = PauliOperator::single(3, 1, 'Z');
  return gate.conjugate(z2) == z2;
}

namespace {

// The symmetric 3-qubit gates form the centralizer of {Z_0 Z_2, Z_1} in the
// Clifford group. By orbit-stabilizer its order is |C_3| / 7560 = 12288
// (7560 = ordered pairs of commuting, independent signed Paulis), small
// enough to enumerate once: seed with rejection-found elements, close under
// composition, and insist on the exact order.
const std::vector<CliffordGate>& symmetric_gate_group() {
  static const std::vector<CliffordGate> group = [] {
    constexpr size_t kOrder = 12288;
    std::vector<CliffordGate> elems;
    std::unordered_map<uint64_t, std::vector<size_t>> buckets;
    auto add = [&](const CliffordGate& g) {
      std::vector<size_t>& bucket = buckets[g.tableau_hash()];
      for (size_t k : bucket) {
        if (elems[k] == g) return false;
      }
      bucket.push_back(elems.size());
      elems.push_back(g);
      return true;
    };
    add(CliffordGate::identity(3));
    std::vector<CliffordGate> gens;
    Rng rng(0x73796d6d67727570ULL);
    size_t attempts = 0;
    while (elems.size() < kOrder) {
      CliffordGate cand = sample_uniform_clifford(3, rng);
      if (++attempts > 1000000) {
        throw std::logic_error("symmetric_gate_group: closure failed");
      }
      if (!is_symmetric(cand)) continue;
      if (!add(cand)) continue;
      gens.push_back(cand);
      // Re-close: compose every known element with every generator until the
      // set stops growing.
      for (size_t i = 0; i < elems.size(); ++i) {
        for (const CliffordGate& h : gens) {
          add(elems[i].then(h));
          if (elems.size() > kOrder) {
            throw std::logic_error("symmetric_gate_group: order overflow");
          }
        }
      }
    }
    return elems;
  }();
  return group;
}

}  // namespace

SymmetricGatePool::SymmetricGatePool(size_t pool_size, uint64_t source_seed)
    : source_seed_(source_seed) {
  if (pool_size == 0) {
    throw std::invalid_argument("SymmetricGatePool: pool_size must be >= 1");
  }
  const std::vector<CliffordGate>& group = symmetric_gate_group();
  Rng rng(splitmix64(source_seed));
  gates_.reserve(pool_size);
  while (gates_.size() < pool_size) {
    gates_.push_back(group[rng.next_below(group.size())]);
  }
}

PauliOperator duality_transform(const PauliOperator& p) {
  size_t n = p.n_qubits();
  PauliOperator out(n);
  out.set_phase(p.phase());
  for (size_t i = 0; i < n; ++i) {
    if (p.x(i)) out *= PauliOperator::single(n, i, 'X');
    if (p.z(i)) {
      PauliOperator g(n);
      g.set_x((i + n - 1) % n, true);
      g.set_z(i, true);
      g.set_x((i + 1) % n, true);
      out *= g;
    }
  }
  return out;
}

StabilizerState duality_transform(const StabilizerState& state) {
  if (state.n_qubits() % 2 != 0) {
    throw std::invalid_argument("duality_transform: chain length must be even");
  }
  std::vector<PauliOperator> gens;
  gens.reserve(state.n_qubits());
  for (const PauliOperator& g : state.generators()) {
    gens.push_back(duality_transform(g));
  }
  return StabilizerState::from_generators(std::move(gens));
}

}  // namespace symmcirc
