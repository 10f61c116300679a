#include "symmcirc/clifford.hpp"

#include "symmcirc/rng.hpp"

namespace symmcirc {

namespace {

// U X U^dag = image_x, U Z U^dag = image_z for a single-qubit elementary gate,
// installed at qubit q of an identity tableau.
CliffordGate single_site(size_t arity, size_t q, const PauliOperator& img_x,
                         const PauliOperator& img_z) {
  CliffordGate g(arity);
  g.image_x(q) = img_x;
  g.image_z(q) = img_z;
  return g;
}

}  // namespace

CliffordGate CliffordGate::hadamard(size_t arity, size_t q) {
  return single_site(arity, q, PauliOperator::single(arity, q, 'Z'),
                     PauliOperator::single(arity, q, 'X'));
}

CliffordGate CliffordGate::phase_s(size_t arity, size_t q) {
  // S X S^dag = Y, S Z S^dag = Z
  return single_site(arity, q, PauliOperator::single(arity, q, 'Y'),
                     PauliOperator::single(arity, q, 'Z'));
}

CliffordGate CliffordGate::pauli_x(size_t arity, size_t q) {
  return single_site(arity, q, PauliOperator::single(arity, q, 'X'),
                     PauliOperator::single(arity, q, 'Z', -1));
}

CliffordGate CliffordGate::pauli_z(size_t arity, size_t q) {
  return single_site(arity, q, PauliOperator::single(arity, q, 'X', -1),
                     PauliOperator::single(arity, q, 'Z'));
}

CliffordGate CliffordGate::cnot(size_t arity, size_t control, size_t target) {
  CliffordGate g(arity);
  // X_c -> X_c X_t ; Z_t -> Z_c Z_t ; X_t, Z_c fixed.
  PauliOperator xc = PauliOperator::single(arity, control, 'X');
  xc.set_x(target, true);
  PauliOperator zt = PauliOperator::single(arity, target, 'Z');
  zt.set_z(control, true);
  g.image_x(control) = xc;
  g.image_z(target) = zt;
  return g;
}

CliffordGate CliffordGate::cz(size_t arity, size_t a, size_t b) {
  CliffordGate g(arity);
  PauliOperator xa = PauliOperator::single(arity, a, 'X');
  xa.set_z(b, true);
  PauliOperator xb = PauliOperator::single(arity, b, 'X');
  xb.set_z(a, true);
  g.image_x(a) = xa;
  g.image_x(b) = xb;
  return g;
}

CliffordGate CliffordGate::swap(size_t arity, size_t a, size_t b) {
  CliffordGate g(arity);
  g.image_x(a) = PauliOperator::single(arity, b, 'X');
  g.image_z(a) = PauliOperator::single(arity, b, 'Z');
  g.image_x(b) = PauliOperator::single(arity, a, 'X');
  g.image_z(b) = PauliOperator::single(arity, a, 'Z');
  return g;
}

uint64_t CliffordGate::tableau_hash() const {
  uint64_t h = splitmix64(arity_);
  auto mix = [&h](const PauliOperator& p) {
    for (uint64_t w : p.x_words()) h = splitmix64(h ^ w);
    for (uint64_t w : p.z_words()) h = splitmix64(h ^ w);
    h = splitmix64(h ^ p.phase());
  };
  for (size_t j = 0; j < arity_; ++j) {
    mix(image_x_[j]);
    mix(image_z_[j]);
  }
  return h;
}

CliffordGate gate_from_circuit(size_t arity, const std::vector<ElementaryGate>& circuit) {
  CliffordGate g = CliffordGate::identity(arity);
  for (const ElementaryGate& e : circuit) {
    CliffordGate step;
    switch (e.kind) {
      case ElementaryGate::Kind::H: step = CliffordGate::hadamard(arity, e.a); break;
      case ElementaryGate::Kind::S: step = CliffordGate::phase_s(arity, e.a); break;
      case ElementaryGate::Kind::X: step = CliffordGate::pauli_x(arity, e.a); break;
      case ElementaryGate::Kind::Z: step = CliffordGate::pauli_z(arity, e.a); break;
      case ElementaryGate::Kind::CNOT: step = CliffordGate::cnot(arity, e.a, e.b); break;
      case ElementaryGate::Kind::CZ: step = CliffordGate::cz(arity, e.a, e.b); break;
      case ElementaryGate::Kind::SWAP: step = CliffordGate::swap(arity, e.a, e.b); break;
    }
    g = g.then(step);
  }
  return g;
}

}  // namespace symmcirc
