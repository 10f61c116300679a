#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace symmcirc {

// A Hermitian N-qubit Pauli string, bit-packed as X and Z masks plus a phase.
//
// Internally the operator is  i^phase * prod_j X_j^{x_j} Z_j^{z_j}  with the
// phase exponent kept mod 4. A Hermitian string with y Y-factors and sign s
// has phase == y (s=+1) or y+2 (s=-1) mod 4, so sign() is well defined
// whenever the invariant (phase - y) even holds. Multiplication only needs
// the rule Z^z1 X^x2 = (-1)^{|z1 & x2|} X^x2 Z^z1.
class PauliOperator {
public:
  PauliOperator() = default;

  explicit PauliOperator(size_t n_qubits)
      : n_(n_qubits), x_(word_count(n_qubits), 0), z_(word_count(n_qubits), 0), phase_(0) {}

  static size_t word_count(size_t n_qubits) { return (n_qubits + 63) / 64; }

  // Single-site factory, c in {'I','X','Y','Z'}.
  static PauliOperator single(size_t n_qubits, size_t site, char c, int sign = +1) {
    PauliOperator p(n_qubits);
    switch (c) {
      case 'I': break;
      case 'X': p.set_x(site, true); break;
      case 'Z': p.set_z(site, true); break;
      case 'Y':
        p.set_x(site, true);
        p.set_z(site, true);
        p.phase_ = 1;
        break;
      default: throw std::invalid_argument("PauliOperator::single: bad Pauli letter");
    }
    if (sign < 0) {
      p.phase_ = (p.phase_ + 2) & 3;
    }
    return p;
  }

  // Parse e.g. "+XIZ" / "-YZ" / "XX".
  static PauliOperator from_string(const std::string& s) {
    size_t start = 0;
    int sign = +1;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
      sign = (s[0] == '-') ? -1 : +1;
      start = 1;
    }
    PauliOperator p(s.size() - start);
    for (size_t i = start; i < s.size(); ++i) {
      size_t q = i - start;
      switch (s[i]) {
        case 'I': case '_': break;
        case 'X': p.set_x(q, true); break;
        case 'Z': p.set_z(q, true); break;
        case 'Y':
          p.set_x(q, true);
          p.set_z(q, true);
          p.phase_ = (p.phase_ + 1) & 3;
          break;
        default: throw std::invalid_argument("PauliOperator::from_string: bad character");
      }
    }
    if (sign < 0) {
      p.phase_ = (p.phase_ + 2) & 3;
    }
    return p;
  }

  size_t n_qubits() const { return n_; }

  bool x(size_t i) const { return (x_[i >> 6] >> (i & 63)) & 1u; }
  bool z(size_t i) const { return (z_[i >> 6] >> (i & 63)) & 1u; }

  void set_x(size_t i, bool v) { set_bit(x_, i, v); }
  void set_z(size_t i, bool v) { set_bit(z_, i, v); }

  const std::vector<uint64_t>& x_words() const { return x_; }
  const std::vector<uint64_t>& z_words() const { return z_; }
  std::vector<uint64_t>& x_words() { return x_; }
  std::vector<uint64_t>& z_words() { return z_; }

  uint8_t phase() const { return phase_; }
  void set_phase(uint8_t p) { phase_ = p & 3; }

  size_t y_count() const {
    size_t c = 0;
    for (size_t w = 0; w < x_.size(); ++w) {
      c += std::popcount(x_[w] & z_[w]);
    }
    return c;
  }

  bool is_hermitian() const { return ((phase_ - y_count()) & 1) == 0; }

  int sign() const {
    unsigned k = (phase_ + 4 - (y_count() & 3)) & 3;
    if (k == 0) return +1;
    if (k == 2) return -1;
    throw std::logic_error("PauliOperator::sign: operator is not Hermitian");
  }

  void set_sign(int s) {
    phase_ = static_cast<uint8_t>((y_count() + (s < 0 ? 2 : 0)) & 3);
  }

  void negate() { phase_ = (phase_ + 2) & 3; }

  bool identity_bits() const {
    for (size_t w = 0; w < x_.size(); ++w) {
      if (x_[w] | z_[w]) return false;
    }
    return true;
  }

  bool same_bits(const PauliOperator& o) const {
    return x_ == o.x_ && z_ == o.z_;
  }

  bool operator==(const PauliOperator& o) const {
    return n_ == o.n_ && x_ == o.x_ && z_ == o.z_ && phase_ == o.phase_;
  }

  // Symplectic form: parity of |x & z'| + |z & x'|. Zero parity = commute.
  bool commutes_with(const PauliOperator& o) const {
    uint64_t acc = 0;
    for (size_t w = 0; w < x_.size(); ++w) {
      acc ^= std::popcount(x_[w] & o.z_[w]) ^ std::popcount(z_[w] & o.x_[w]);
    }
    return (acc & 1) == 0;
  }

  PauliOperator& operator*=(const PauliOperator& o) {
    unsigned cross = 0;
    for (size_t w = 0; w < x_.size(); ++w) {
      cross ^= std::popcount(z_[w] & o.x_[w]) & 1;
      x_[w] ^= o.x_[w];
      z_[w] ^= o.z_[w];
    }
    phase_ = (phase_ + o.phase_ + 2 * cross) & 3;
    return *this;
  }

  friend PauliOperator operator*(PauliOperator a, const PauliOperator& b) {
    a *= b;
    return a;
  }

  size_t weight() const {
    size_t c = 0;
    for (size_t w = 0; w < x_.size(); ++w) {
      c += std::popcount(x_[w] | z_[w]);
    }
    return c;
  }

  // First/last site acted on; n_qubits() if identity.
  size_t left_endpoint() const {
    for (size_t w = 0; w < x_.size(); ++w) {
      uint64_t m = x_[w] | z_[w];
      if (m) return w * 64 + std::countr_zero(m);
    }
    return n_;
  }

  size_t right_endpoint() const {
    for (size_t w = x_.size(); w-- > 0;) {
      uint64_t m = x_[w] | z_[w];
      if (m) return w * 64 + 63 - std::countl_zero(m);
    }
    return n_;
  }

  std::string to_string() const {
    std::string s(sign() > 0 ? "+" : "-");
    for (size_t i = 0; i < n_; ++i) {
      bool xb = x(i), zb = z(i);
      s += xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
    }
    return s;
  }

private:
  static void set_bit(std::vector<uint64_t>& v, size_t i, bool val) {
    uint64_t mask = uint64_t{1} << (i & 63);
    if (val) {
      v[i >> 6] |= mask;
    } else {
      v[i >> 6] &= ~mask;
    }
  }

  size_t n_ = 0;
  std::vector<uint64_t> x_, z_;
  uint8_t phase_ = 0;
};

}  // namespace symmcirc
