#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "symmcirc/pauli.hpp"

namespace symmcirc {

// A k-qubit Clifford element stored as its conjugation tableau: the images
// U X_j U^dag and U Z_j U^dag of the 2k basis Paulis, signs included.
class CliffordGate {
public:
  CliffordGate() = default;

  explicit CliffordGate(size_t arity) : arity_(arity) {
    image_x_.reserve(arity);
    image_z_.reserve(arity);
    for (size_t j = 0; j < arity; ++j) {
      image_x_.push_back(PauliOperator::single(arity, j, 'X'));
      image_z_.push_back(PauliOperator::single(arity, j, 'Z'));
    }
  }

  static CliffordGate identity(size_t arity) { return CliffordGate(arity); }

  size_t arity() const { return arity_; }

  const PauliOperator& image_x(size_t j) const { return image_x_[j]; }
  const PauliOperator& image_z(size_t j) const { return image_z_[j]; }
  PauliOperator& image_x(size_t j) { return image_x_[j]; }
  PauliOperator& image_z(size_t j) { return image_z_[j]; }

  // Conjugate an arity-sized Pauli through the gate. Order of factors follows
  // the canonical form X^x Z^z site by site, so signs compose exactly.
  PauliOperator conjugate(const PauliOperator& p) const {
    if (p.n_qubits() != arity_) {
      throw std::invalid_argument("CliffordGate::conjugate: arity mismatch");
    }
    PauliOperator out(arity_);
    out.set_phase(p.phase());
    for (size_t j = 0; j < arity_; ++j) {
      if (p.x(j)) out *= image_x_[j];
      if (p.z(j)) out *= image_z_[j];
    }
    return out;
  }

  // Gate performing `second` after `*this` (conjugation composes outward).
  CliffordGate then(const CliffordGate& second) const {
    if (second.arity_ != arity_) {
      throw std::invalid_argument("CliffordGate::then: arity mismatch");
    }
    CliffordGate out(arity_);
    for (size_t j = 0; j < arity_; ++j) {
      out.image_x_[j] = second.conjugate(image_x_[j]);
      out.image_z_[j] = second.conjugate(image_z_[j]);
    }
    return out;
  }

  // All images Hermitian, pairwise relations of the basis preserved.
  bool is_symplectic() const {
    for (size_t j = 0; j < arity_; ++j) {
      if (!image_x_[j].is_hermitian() || !image_z_[j].is_hermitian()) return false;
      if (image_x_[j].identity_bits() || image_z_[j].identity_bits()) return false;
      if (image_x_[j].commutes_with(image_z_[j])) return false;
      for (size_t l = j + 1; l < arity_; ++l) {
        if (!image_x_[j].commutes_with(image_x_[l])) return false;
        if (!image_x_[j].commutes_with(image_z_[l])) return false;
        if (!image_z_[j].commutes_with(image_x_[l])) return false;
        if (!image_z_[j].commutes_with(image_z_[l])) return false;
      }
    }
    return true;
  }

  bool operator==(const CliffordGate& o) const {
    return arity_ == o.arity_ && image_x_ == o.image_x_ && image_z_ == o.image_z_;
  }

  // A stable 64-bit hash of the tableau (used for distribution tests).
  uint64_t tableau_hash() const;

  // Elementary gates, embedded into an arity-k identity.
  static CliffordGate hadamard(size_t arity, size_t q);
  static CliffordGate phase_s(size_t arity, size_t q);
  static CliffordGate pauli_x(size_t arity, size_t q);
  static CliffordGate pauli_z(size_t arity, size_t q);
  static CliffordGate cnot(size_t arity, size_t control, size_t target);
  static CliffordGate cz(size_t arity, size_t a, size_t b);
  static CliffordGate swap(size_t arity, size_t a, size_t b);

private:
  size_t arity_ = 0;
  std::vector<PauliOperator> image_x_, image_z_;
};

// One elementary step of a Clifford circuit; enough to drive both the tableau
// and a dense statevector oracle from the same seed.
struct ElementaryGate {
  enum class Kind { H, S, X, Z, CNOT, CZ, SWAP };
  Kind kind;
  size_t a;
  size_t b;  // unused for single-qubit kinds
};

CliffordGate gate_from_circuit(size_t arity, const std::vector<ElementaryGate>& circuit);

}  // namespace symmcirc
