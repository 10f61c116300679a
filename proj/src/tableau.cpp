#include "symmcirc/tableau.hpp"

#include <algorithm>
#include <stdexcept>

namespace symmcirc {

namespace gf2 {

size_t rank_in_place(std::vector<std::vector<uint64_t>>& rows) {
  if (rows.empty()) return 0;
  size_t words = rows[0].size();
  size_t rank = 0;
  for (size_t w = 0; w < words; ++w) {
    for (int b = 0; b < 64; ++b) {
      uint64_t mask = uint64_t{1} << b;
      size_t pivot = rows.size();
      for (size_t r = rank; r < rows.size(); ++r) {
        if (rows[r][w] & mask) {
          pivot = r;
          break;
        }
      }
      if (pivot == rows.size()) continue;
      std::swap(rows[rank], rows[pivot]);
      for (size_t r = 0; r < rows.size(); ++r) {
        if (r != rank && (rows[r][w] & mask)) {
          for (size_t k = w; k < words; ++k) {
            rows[r][k] ^= rows[rank][k];
          }
        }
      }
      ++rank;
      if (rank == rows.size()) return rank;
    }
  }
  return rank;
}

namespace {

// Column order for membership reduction: x_0..x_{N-1}, z_0..z_{N-1}.
bool col_bit(const PauliOperator& p, size_t c) {
  size_t n = p.n_qubits();
  return c < n ? p.x(c) : p.z(c - n);
}

size_t first_col(const PauliOperator& p) {
  size_t n = p.n_qubits();
  const auto& xw = p.x_words();
  for (size_t w = 0; w < xw.size(); ++w) {
    if (xw[w]) return w * 64 + std::countr_zero(xw[w]);
  }
  const auto& zw = p.z_words();
  for (size_t w = 0; w < zw.size(); ++w) {
    if (zw[w]) return n + w * 64 + std::countr_zero(zw[w]);
  }
  return 2 * n;
}

}  // namespace

std::vector<size_t> echelonize(std::vector<PauliOperator>& rows) {
  std::vector<size_t> pivots;
  std::vector<PauliOperator> basis;
  basis.reserve(rows.size());
  for (PauliOperator& row : rows) {
    PauliOperator r = std::move(row);
    for (size_t k = 0; k < basis.size(); ++k) {
      if (col_bit(r, pivots[k])) r *= basis[k];
    }
    if (!r.identity_bits()) {
      pivots.push_back(first_col(r));
      basis.push_back(std::move(r));
    }
  }
  rows = std::move(basis);
  return pivots;
}

PauliOperator reduce(const std::vector<PauliOperator>& echelon,
                     const std::vector<size_t>& pivots, PauliOperator p) {
  for (size_t k = 0; k < echelon.size(); ++k) {
    if (col_bit(p, pivots[k])) p *= echelon[k];
  }
  return p;
}

}  // namespace gf2

namespace {

// Commutation of a generator with a short measurement operator, restricted to
// the word range where the operator has support.
bool commutes_windowed(const PauliOperator& gen, const PauliOperator& p,
                       size_t w_lo, size_t w_hi) {
  uint64_t acc = 0;
  const auto& gx = gen.x_words();
  const auto& gz = gen.z_words();
  const auto& px = p.x_words();
  const auto& pz = p.z_words();
  for (size_t w = w_lo; w < w_hi; ++w) {
    acc ^= std::popcount(gx[w] & pz[w]) ^ std::popcount(gz[w] & px[w]);
  }
  return (acc & 1) == 0;
}

void support_words(const PauliOperator& p, size_t& w_lo, size_t& w_hi) {
  const auto& xw = p.x_words();
  const auto& zw = p.z_words();
  w_lo = xw.size();
  w_hi = 0;
  for (size_t w = 0; w < xw.size(); ++w) {
    if (xw[w] | zw[w]) {
      w_lo = std::min(w_lo, w);
      w_hi = std::max(w_hi, w + 1);
    }
  }
}

// Interleaved column order used for clipping: site i has x at 2i, z at 2i+1.
bool clip_bit(const PauliOperator& p, size_t c) {
  return (c & 1) ? p.z(c >> 1) : p.x(c >> 1);
}

size_t rightmost_clip_col(const PauliOperator& p) {
  size_t i = p.right_endpoint();
  return p.z(i) ? 2 * i + 1 : 2 * i;
}

// Extract bits [first, first+len) of a packed mask into dst starting at
// bit offset dst_off.
void extract_bits(const std::vector<uint64_t>& src, size_t first, size_t len,
                  std::vector<uint64_t>& dst, size_t dst_off) {
  for (size_t k = 0; k < len; ++k) {
    size_t s = first + k;
    if ((src[s >> 6] >> (s & 63)) & 1u) {
      size_t d = dst_off + k;
      dst[d >> 6] |= uint64_t{1} << (d & 63);
    }
  }
}

}  // namespace

StabilizerState::StabilizerState(size_t n_qubits) : n_(n_qubits) {
  if (n_qubits == 0) throw std::invalid_argument("StabilizerState: zero qubits");
}

StabilizerState StabilizerState::zero_state(size_t n_qubits) {
  StabilizerState s(n_qubits);
  s.gens_.reserve(n_qubits);
  for (size_t i = 0; i < n_qubits; ++i) {
    s.gens_.push_back(PauliOperator::single(n_qubits, i, 'Z'));
  }
  return s;
}

StabilizerState StabilizerState::from_generators(std::vector<PauliOperator> generators) {
  if (generators.empty()) throw std::invalid_argument("from_generators: empty");
  StabilizerState s(generators[0].n_qubits());
  s.gens_ = std::move(generators);
  if (s.gens_.size() != s.n_ || !s.is_valid()) {
    throw std::invalid_argument("from_generators: not a valid stabilizer set");
  }
  return s;
}

void StabilizerState::apply(const CliffordGate& gate, std::span<const size_t> sites) {
  size_t k = gate.arity();
  if (sites.size() != k) throw std::invalid_argument("apply: site count != arity");
  for (size_t a = 0; a < k; ++a) {
    if (sites[a] >= n_) throw std::out_of_range("apply: site out of range");
    for (size_t b = a + 1; b < k; ++b) {
      if (sites[a] == sites[b]) throw std::invalid_argument("apply: repeated site");
    }
  }
  if (!gate.is_symplectic()) throw std::invalid_argument("apply: non-symplectic gate");

  for (PauliOperator& g : gens_) {
    PauliOperator window(k);
    bool trivial = true;
    for (size_t j = 0; j < k; ++j) {
      bool xb = g.x(sites[j]);
      bool zb = g.z(sites[j]);
      if (xb) window.set_x(j, true);
      if (zb) window.set_z(j, true);
      trivial = trivial && !xb && !zb;
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

std::optional<int> StabilizerState::member_sign(const PauliOperator& p) const {
  std::vector<PauliOperator> basis = gens_;
  std::vector<size_t> pivots = gf2::echelonize(basis);
  PauliOperator residual = gf2::reduce(basis, pivots, p);
  if (!residual.identity_bits()) return std::nullopt;
  return residual.sign();
}

bool StabilizerState::contains_up_to_sign(const PauliOperator& p) const {
  return member_sign(p).has_value();
}

std::optional<int> StabilizerState::deterministic_outcome(const PauliOperator& p) const {
  size_t w_lo, w_hi;
  support_words(p, w_lo, w_hi);
  for (const PauliOperator& g : gens_) {
    if (!commutes_windowed(g, p, w_lo, w_hi)) return std::nullopt;
  }
  return member_sign(p);
}

std::optional<int> StabilizerState::project(const PauliOperator& p, bool outcome_bit) {
  size_t w_lo, w_hi;
  support_words(p, w_lo, w_hi);
  size_t pivot = gens_.size();
  for (size_t i = 0; i < gens_.size(); ++i) {
    if (!commutes_windowed(gens_[i], p, w_lo, w_hi)) {
      pivot = i;
      break;
    }
  }
  if (pivot == gens_.size()) {
    // Deterministic: projecting leaves the group unchanged; skip the O(N^3)
    // sign solve that only the outcome value would need.
    return std::nullopt;
  }
  for (size_t i = pivot + 1; i < gens_.size(); ++i) {
    if (!commutes_windowed(gens_[i], p, w_lo, w_hi)) {
      gens_[i] *= gens_[pivot];
    }
  }
  int outcome = outcome_bit ? -1 : +1;
  PauliOperator replacement = p;
  if (outcome < 0) replacement.negate();
  gens_[pivot] = std::move(replacement);
  return outcome;
}

int StabilizerState::measure(const PauliOperator& p, bool outcome_bit) {
  std::optional<int> outcome = project(p, outcome_bit);
  if (outcome) return *outcome;
  // The outcome is the sign with which p sits in the group.
  return *member_sign(p);
}

int StabilizerState::measure(const PauliOperator& p, Rng& rng) {
  // The bit is drawn unconditionally so a trajectory's event stream has a
  // fixed shape regardless of which outcomes happen to be deterministic.
  bool bit = rng.next_bit();
  return measure(p, bit);
}

size_t StabilizerState::entropy_interval(size_t first, size_t last) const {
  if (first > last || last >= n_) throw std::out_of_range("entropy_interval: bad region");
  size_t len = last - first + 1;
  size_t words = PauliOperator::word_count(2 * len);
  std::vector<std::vector<uint64_t>> rows(gens_.size(), std::vector<uint64_t>(words, 0));
  for (size_t r = 0; r < gens_.size(); ++r) {
    extract_bits(gens_[r].x_words(), first, len, rows[r], 0);
    extract_bits(gens_[r].z_words(), first, len, rows[r], len);
  }
  size_t rank = gf2::rank_in_place(rows);
  return rank - len;
}

size_t StabilizerState::entanglement_entropy(std::span<const size_t> region) const {
  size_t len = region.size();
  if (len == 0) return 0;
  for (size_t q : region) {
    if (q >= n_) throw std::out_of_range("entanglement_entropy: site out of range");
  }
  size_t words = PauliOperator::word_count(2 * len);
  std::vector<std::vector<uint64_t>> rows(gens_.size(), std::vector<uint64_t>(words, 0));
  for (size_t r = 0; r < gens_.size(); ++r) {
    const PauliOperator& g = gens_[r];
    for (size_t k = 0; k < len; ++k) {
      if (g.x(region[k])) rows[r][k >> 6] |= uint64_t{1} << (k & 63);
      size_t c = len + k;
      if (g.z(region[k])) rows[r][c >> 6] |= uint64_t{1} << (c & 63);
    }
  }
  size_t rank = gf2::rank_in_place(rows);
  return rank - len;
}

StabilizerState StabilizerState::clipped() const {
  StabilizerState out = *this;
  std::vector<PauliOperator>& rows = out.gens_;
  size_t n_rows = rows.size();

  // Pass 1: reduced echelon form over interleaved columns (left endpoints).
  std::vector<size_t> left_pivot(n_rows, 2 * n_);
  size_t next = 0;
  for (size_t c = 0; c < 2 * n_ && next < n_rows; ++c) {
    size_t pivot = n_rows;
    for (size_t r = next; r < n_rows; ++r) {
      if (clip_bit(rows[r], c)) {
        pivot = r;
        break;
      }
    }
    if (pivot == n_rows) continue;
    std::swap(rows[next], rows[pivot]);
    for (size_t r = 0; r < n_rows; ++r) {
      if (r != next && clip_bit(rows[r], c)) rows[r] *= rows[next];
    }
    left_pivot[next] = c;
    ++next;
  }

  // Pass 2: make rightmost columns distinct. When two rows share a rightmost
  // column, the one with the smaller left pivot absorbs the other; its left
  // pivot is untouched and its right endpoint strictly decreases.
  std::vector<std::vector<size_t>> bucket(2 * n_);
  for (size_t r = 0; r < n_rows; ++r) {
    bucket[rightmost_clip_col(rows[r])].push_back(r);
  }
  for (size_t c = 2 * n_; c-- > 0;) {
    while (bucket[c].size() > 1) {
      size_t keep_idx = 0;
      for (size_t k = 1; k < bucket[c].size(); ++k) {
        if (left_pivot[bucket[c][k]] > left_pivot[bucket[c][keep_idx]]) keep_idx = k;
      }
      size_t keep = bucket[c][keep_idx];
      std::vector<size_t> others;
      for (size_t k = 0; k < bucket[c].size(); ++k) {
        if (k != keep_idx) others.push_back(bucket[c][k]);
      }
      bucket[c].assign(1, keep);
      for (size_t r : others) {
        rows[r] *= rows[keep];
        bucket[rightmost_clip_col(rows[r])].push_back(r);
      }
    }
  }
  return out;
}

bool StabilizerState::is_clipped() const {
  std::vector<int> rho_l(n_, 0), rho_r(n_, 0);
  std::vector<std::vector<size_t>> left_rows(n_), right_rows(n_);
  for (size_t r = 0; r < gens_.size(); ++r) {
    size_t l = gens_[r].left_endpoint();
    size_t rr = gens_[r].right_endpoint();
    if (l >= n_) return false;  // identity generator
    rho_l[l]++;
    rho_r[rr]++;
    left_rows[l].push_back(r);
    right_rows[rr].push_back(r);
  }
  for (size_t i = 0; i < n_; ++i) {
    if (rho_l[i] + rho_r[i] != 2) return false;
    auto distinct_at = [&](const std::vector<size_t>& rs) {
      if (rs.size() != 2) return true;
      const PauliOperator& a = gens_[rs[0]];
      const PauliOperator& b = gens_[rs[1]];
      return a.x(i) != b.x(i) || a.z(i) != b.z(i);
    };
    if (!distinct_at(left_rows[i]) || !distinct_at(right_rows[i])) return false;
  }
  return true;
}

size_t StabilizerState::clipped_entropy_interval(size_t first, size_t last) const {
  size_t crossings = 0;
  for (const PauliOperator& g : gens_) {
    size_t l = g.left_endpoint();
    size_t r = g.right_endpoint();
    bool l_in = l >= first && l <= last;
    bool r_in = r >= first && r <= last;
    if (l_in != r_in) ++crossings;
  }
  return crossings / 2;
}

std::vector<size_t> StabilizerState::prefix_entropy_profile() const {
  StabilizerState c = clipped();
  // S([0,x)) = half the clipped generators with l < x <= r; accumulate with a
  // difference array over the cut positions x = 1..N-1.
  std::vector<int> diff(n_ + 1, 0);
  for (const PauliOperator& g : c.gens_) {
    size_t l = g.left_endpoint();
    size_t r = g.right_endpoint();
    if (l < r) {
      diff[l + 1] += 1;
      diff[r + 1] -= 1;
    }
  }
  std::vector<size_t> profile(n_ - 1);
  int run = 0;
  for (size_t x = 1; x < n_; ++x) {
    run += diff[x];
    profile[x - 1] = static_cast<size_t>(run) / 2;
  }
  return profile;
}

bool StabilizerState::is_valid() const {
  if (gens_.size() != n_) return false;
  for (size_t a = 0; a < gens_.size(); ++a) {
    if (gens_[a].n_qubits() != n_ || !gens_[a].is_hermitian()) return false;
    for (size_t b = a + 1; b < gens_.size(); ++b) {
      if (!gens_[a].commutes_with(gens_[b])) return false;
    }
  }
  size_t words = PauliOperator::word_count(2 * n_);
  std::vector<std::vector<uint64_t>> rows(gens_.size(), std::vector<uint64_t>(words, 0));
  for (size_t r = 0; r < gens_.size(); ++r) {
    extract_bits(gens_[r].x_words(), 0, n_, rows[r], 0);
    extract_bits(gens_[r].z_words(), 0, n_, rows[r], n_);
  }
  return gf2::rank_in_place(rows) == n_;
}

}  // namespace symmcirc
