#include "symmcirc/circuit.hpp"

#include <array>
#include <cstring>
#include <stdexcept>

namespace symmcirc {

void CircuitConfig::validate() const {
  if (n == 0 || n % 2 != 0) {
    throw std::invalid_argument("CircuitConfig: chain length must be positive and even");
  }
  if (p_s < 0.0 || p_u < 0.0 || p_s + p_u > 1.0 + 1e-12) {
    throw std::invalid_argument("CircuitConfig: need 0 <= p_s, p_u and p_s + p_u <= 1");
  }
  if (schedule == Schedule::layered && p_u != 0.0) {
    throw std::invalid_argument("CircuitConfig: layered schedule requires p_u = 0");
  }
}

uint64_t CircuitConfig::hash() const {
  uint64_t h = splitmix64(n);
  auto mix = [&h](uint64_t v) { h = splitmix64(h ^ v); };
  uint64_t ps_bits, pu_bits;
  static_assert(sizeof(double) == 8);
  std::memcpy(&ps_bits, &p_s, 8);
  std::memcpy(&pu_bits, &p_u, 8);
  mix(ps_bits);
  mix(pu_bits);
  mix(static_cast<uint64_t>(schedule));
  mix(static_cast<uint64_t>(basis));
  mix(static_cast<uint64_t>(boundary));
  mix(t_equil_or_default());
  mix(static_cast<uint64_t>(ancilla));
  mix(t_probe_or_default());
  mix(master_seed);
  return h;
}

namespace {

size_t wrap(size_t i, size_t n) { return (i + n) % n; }

PauliOperator single_op(size_t n_total, size_t site, SingleBasis basis) {
  return PauliOperator::single(n_total, site, basis == SingleBasis::Z ? 'Z' : 'X');
}

PauliOperator stabilizer_op(size_t n_total, size_t center, size_t chain, Boundary boundary) {
  PauliOperator g(n_total);
  if (boundary == Boundary::periodic) {
    g.set_x(wrap(center + chain - 1, chain), true);
    g.set_z(center, true);
    g.set_x(wrap(center + 1, chain), true);
  } else {
    g.set_x(center - 1, true);
    g.set_z(center, true);
    g.set_x(center + 1, true);
  }
  return g;
}

}  // namespace

CircuitEvent sample_event(const CircuitConfig& config, size_t pool_size, Rng& rng) {
  CircuitEvent ev{};
  double u = rng.next_double();
  size_t n = config.n;
  bool periodic = config.boundary == Boundary::periodic;
  size_t interior = periodic ? n : n - 2;  // centers for unitary/stabilizer
  size_t interior_base = periodic ? 0 : 1;
  if (u < config.p_u) {
    ev.kind = CircuitEvent::Kind::unitary;
    ev.site = interior_base + rng.next_below(interior);
    ev.gate_index = static_cast<uint32_t>(rng.next_below(pool_size));
  } else if (u < config.p_u + config.p_s) {
    ev.kind = CircuitEvent::Kind::single;
    ev.site = rng.next_below(n);
    ev.outcome_bit = rng.next_bit();
  } else {
    ev.kind = CircuitEvent::Kind::stabilizer;
    ev.site = interior_base + rng.next_below(interior);
    ev.outcome_bit = rng.next_bit();
  }
  return ev;
}

std::optional<int> apply_event(StabilizerState& state, const CircuitEvent& event,
                               const CircuitConfig& config, const SymmetricGatePool& pool,
                               bool resolve_deterministic) {
  size_t n_total = state.n_qubits();
  size_t n = config.n;
  auto run = [&](const PauliOperator& op) -> std::optional<int> {
    if (resolve_deterministic) return state.measure(op, event.outcome_bit);
    return state.project(op, event.outcome_bit);
  };
  switch (event.kind) {
    case CircuitEvent::Kind::unitary: {
      if (event.site < 1 && config.boundary == Boundary::open) {
        throw std::invalid_argument("apply_event: unitary site out of range");
      }
      std::array<size_t, 3> sites = {wrap(event.site + n - 1, n), event.site,
                                     wrap(event.site + 1, n)};
      state.apply(pool.gate(event.gate_index), sites);
      return std::nullopt;
    }
    case CircuitEvent::Kind::single:
      return run(single_op(n_total, event.site, config.basis));
    case CircuitEvent::Kind::stabilizer:
      return run(stabilizer_op(n_total, event.site, n, config.boundary));
  }
  throw std::invalid_argument("apply_event: bad event kind");
}

void layered_step(StabilizerState& state, const CircuitConfig& config, Rng& rng) {
  if (config.schedule != Schedule::layered || config.p_u != 0.0) {
    throw std::invalid_argument("layered_step: requires layered schedule with p_u = 0");
  }
  size_t n_total = state.n_qubits();
  size_t n = config.n;
  double p_t = config.p_t();
  for (size_t c = 1; c + 1 < n; ++c) {
    if (rng.next_double() < p_t) {
      state.project(stabilizer_op(n_total, c, n, config.boundary), rng.next_bit());
    }
  }
  for (size_t i = 0; i < n; ++i) {
    if (rng.next_double() < 1.0 - p_t) {
      state.project(single_op(n_total, i, config.basis), rng.next_bit());
    }
  }
}

void entangle_ancilla(StabilizerState& state, const CircuitConfig& config, Rng& rng) {
  size_t n = config.n;
  size_t a = n;  // single ancilla index
  if (state.n_qubits() != n + 1) {
    throw std::invalid_argument("entangle_ancilla: expects exactly one ancilla qubit");
  }
  size_t left = n / 2 - 2, right = n / 2;
  PauliOperator za_left(n + 1), za_right(n + 1), xax(n + 1);
  za_left.set_z(left, true);
  za_left.set_z(a, true);
  za_right.set_z(right, true);
  za_right.set_z(a, true);
  xax.set_x(left, true);
  xax.set_x(a, true);
  xax.set_x(right, true);
  state.measure(za_left, rng);
  state.measure(za_right, rng);
  state.measure(xax, rng);
}

void entangle_scrambled_ancillas(StabilizerState& state, const CircuitConfig& config,
                                 Rng& rng) {
  size_t n_total = config.n + 10;
  if (state.n_qubits() != n_total) {
    throw std::invalid_argument("entangle_scrambled_ancillas: expects 10 ancilla qubits");
  }
  for (size_t step = 0; step < 10 * n_total; ++step) {
    CliffordGate gate = sample_uniform_clifford(3, rng);
    std::array<size_t, 3> sites;
    sites[0] = rng.next_below(n_total);
    do {
      sites[1] = rng.next_below(n_total);
    } while (sites[1] == sites[0]);
    do {
      sites[2] = rng.next_below(n_total);
    } while (sites[2] == sites[0] || sites[2] == sites[1]);
    state.apply(gate, sites);
  }
}

int64_t s_topo_of_state(const StabilizerState& state, size_t chain_length) {
  size_t n = chain_length;
  if (n % 4 != 0) {
    throw std::invalid_argument("s_topo_of_state: chain length must be divisible by 4");
  }
  size_t q = n / 4;
  // Quarters A|B|D|C (A and C hold the chain ends so the conditional mutual
  // information I(A:C|B) = S_AB + S_BC - S_B - S_ABC sees both edge modes).
  auto quarters = [&](std::initializer_list<size_t> which) {
    std::vector<size_t> region;
    for (size_t k : which) {
      for (size_t i = k * q; i < (k + 1) * q; ++i) region.push_back(i);
    }
    return region;
  };
  auto s = [&](std::initializer_list<size_t> which) {
    return static_cast<int64_t>(state.entanglement_entropy(quarters(which)));
  };
  return s({0, 1}) + s({1, 3}) - s({1}) - s({0, 1, 3});
}

TrajectoryRecord run_trajectory(const CircuitConfig& config, uint64_t trajectory_index,
                                const SymmetricGatePool& pool, const ProbeRequest& probes) {
  config.validate();
  size_t horizon = config.total_time_steps();
  for (size_t t : probes.times) {
    if (t > horizon) throw std::invalid_argument("run_trajectory: probe beyond horizon");
  }

  Rng rng(trajectory_seed(config.master_seed, trajectory_index));
  size_t n = config.n;
  StabilizerState state = StabilizerState::zero_state(n + config.ancilla_count());

  TrajectoryRecord record;
  record.config_hash = config.hash();
  record.trajectory_index = trajectory_index;

  size_t probe_cursor = 0;
  auto maybe_probe = [&](size_t t) {
    while (probe_cursor < probes.times.size() && probes.times[probe_cursor] == t) {
      ProbeSnapshot snap;
      snap.t = t;
      if (probes.s_topo) snap.s_topo = s_topo_of_state(state, n);
      if (probes.profile) {
        if (config.ancilla != AncillaProtocol::none) {
          throw std::invalid_argument("run_trajectory: profile probe needs ancilla=none");
        }
        snap.profile = state.prefix_entropy_profile();
      }
      if (probes.half_chain) snap.half_chain = state.entropy_interval(0, n / 2 - 1);
      if (probes.ancilla_entropy && config.ancilla != AncillaProtocol::none) {
        snap.ancilla_entropy =
            state.entropy_interval(n, n + config.ancilla_count() - 1);
      }
      record.probes.push_back(std::move(snap));
      ++probe_cursor;
    }
  };

  auto run_time_step = [&]() {
    if (config.schedule == Schedule::layered) {
      layered_step(state, config, rng);
    } else {
      for (size_t k = 0; k < n; ++k) {
        CircuitEvent ev = sample_event(config, pool.size(), rng);
        apply_event(state, ev, config, pool, /*resolve_deterministic=*/false);
      }
    }
  };

  maybe_probe(0);
  size_t t_equil = config.t_equil_or_default();
  for (size_t t = 1; t <= t_equil; ++t) {
    run_time_step();
    maybe_probe(t);
  }
  if (config.ancilla == AncillaProtocol::plain) {
    entangle_ancilla(state, config, rng);
  } else if (config.ancilla == AncillaProtocol::scrambled) {
    entangle_scrambled_ancillas(state, config, rng);
  }
  if (config.ancilla != AncillaProtocol::none) {
    for (size_t t = t_equil + 1; t <= horizon; ++t) {
      run_time_step();
      maybe_probe(t);
    }
  }
  return record;
}

}  // namespace symmcirc
