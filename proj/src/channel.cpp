#include "symmcirc/channel.hpp"

#include <array>
#include <stdexcept>

namespace symmcirc {

StabilizerGroupState::StabilizerGroupState(size_t n_qubits,
                                           std::vector<PauliOperator> generators)
    : n_(n_qubits), gens_(std::move(generators)) {
  if (gens_.size() > n_qubits) {
    throw std::invalid_argument("StabilizerGroupState: more generators than qubits");
  }
  if (!is_valid()) {
    throw std::invalid_argument("StabilizerGroupState: invalid generator set");
  }
}

StabilizerGroupState StabilizerGroupState::initial_state(size_t n_qubits) {
  auto [g1, g2] = symmetry_generators(n_qubits);
  std::vector<PauliOperator> gens;
  gens.reserve(n_qubits);
  gens.push_back(g1);
  gens.push_back(g2);
  for (size_t i = 1; i + 1 < n_qubits; ++i) {
    gens.push_back(PauliOperator::single(n_qubits, i, 'Z'));
  }
  return StabilizerGroupState(n_qubits, std::move(gens));
}

void StabilizerGroupState::channel_measure(const PauliOperator& p) {
  size_t pivot = gens_.size();
  for (size_t i = 0; i < gens_.size(); ++i) {
    if (!gens_[i].commutes_with(p)) {
      pivot = i;
      break;
    }
  }
  if (pivot == gens_.size()) return;
  for (size_t i = pivot + 1; i < gens_.size(); ++i) {
    if (!gens_[i].commutes_with(p)) gens_[i] *= gens_[pivot];
  }
  gens_.erase(gens_.begin() + static_cast<ptrdiff_t>(pivot));
}

void StabilizerGroupState::channel_unitary(const CliffordGate& gate,
                                           std::span<const size_t> sites) {
  size_t k = gate.arity();
  if (sites.size() != k) throw std::invalid_argument("channel_unitary: site count");
  if (!gate.is_symplectic()) throw std::invalid_argument("channel_unitary: bad gate");
  for (PauliOperator& g : gens_) {
    PauliOperator window(k);
    bool trivial = true;
    for (size_t j = 0; j < k; ++j) {
      if (g.x(sites[j])) window.set_x(j, true);
      if (g.z(sites[j])) window.set_z(j, true);
      trivial = trivial && !g.x(sites[j]) && !g.z(sites[j]);
    }
    if (trivial) continue;
    PauliOperator img = gate.conjugate(window);
    for (size_t j = 0; j < k; ++j) {
      g.set_x(sites[j], img.x(j));
      g.set_z(sites[j], img.z(j));
    }
    g.set_phase((g.phase() + img.phase()) & 3);
  }
}

bool StabilizerGroupState::is_steady_state() const {
  if (gens_.size() != 2) return false;
  auto [g1, g2] = symmetry_generators(n_);
  std::vector<PauliOperator> basis = gens_;
  std::vector<size_t> pivots = gf2::echelonize(basis);
  if (basis.size() != 2) return false;
  for (const PauliOperator& target : {g1, g2}) {
    PauliOperator residual = gf2::reduce(basis, pivots, target);
    if (!residual.identity_bits() || residual.sign() != +1) return false;
  }
  return true;
}

bool StabilizerGroupState::is_valid() const {
  for (size_t a = 0; a < gens_.size(); ++a) {
    if (gens_[a].n_qubits() != n_ || !gens_[a].is_hermitian()) return false;
    for (size_t b = a + 1; b < gens_.size(); ++b) {
      if (!gens_[a].commutes_with(gens_[b])) return false;
    }
  }
  std::vector<PauliOperator> basis = gens_;
  gf2::echelonize(basis);
  return basis.size() == gens_.size();
}

SteadyTimeResult time_to_steady(const CircuitConfig& config, const SymmetricGatePool& pool,
                                Rng& rng, size_t cap_time_steps) {
  config.validate();
  if (config.p_s <= 0.0 || config.p_t() <= 0.0) {
    throw std::invalid_argument("time_to_steady: requires p_s > 0 and p_t > 0");
  }
  if (cap_time_steps == 0) cap_time_steps = 100 * config.n;
  StabilizerGroupState group = StabilizerGroupState::initial_state(config.n);
  size_t n = config.n;
  size_t cap_steps = cap_time_steps * n;
  for (size_t step = 1; step <= cap_steps; ++step) {
    CircuitEvent ev = sample_event(config, pool.size(), rng);
    switch (ev.kind) {
      case CircuitEvent::Kind::unitary: {
        std::array<size_t, 3> sites = {ev.site - 1, ev.site, ev.site + 1};
        group.channel_unitary(pool.gate(ev.gate_index), sites);
        break;
      }
      case CircuitEvent::Kind::single:
        group.channel_measure(PauliOperator::single(n, ev.site, 'Z'));
        break;
      case CircuitEvent::Kind::stabilizer:
        group.channel_measure(cluster_stabilizer(n, ev.site));
        break;
    }
    if (group.generator_count() == 2 && group.is_steady_state()) {
      return {static_cast<double>(step) / static_cast<double>(n), false};
    }
  }
  return {static_cast<double>(cap_time_steps), true};
}

}  // namespace symmcirc
