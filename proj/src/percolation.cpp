#include "symmcirc/percolation.hpp"

#include <algorithm>
#include <stdexcept>

#include "symmcirc/tableau.hpp"

namespace symmcirc {

PercolationState::PercolationState(size_t n_sites)
    : n_(n_sites), next_id_(static_cast<int64_t>(n_sites)), cluster_of_(n_sites) {
  if (n_sites == 0 || n_sites % 2 != 0) {
    throw std::invalid_argument("PercolationState: chain length must be positive and even");
  }
  members_.reserve(2 * n_sites);
  for (size_t s = 0; s < n_sites; ++s) {
    cluster_of_[s] = static_cast<int64_t>(s);
    members_[static_cast<int64_t>(s)] = {static_cast<int32_t>(s)};
  }
}

void PercolationState::split(size_t site) {
  int64_t old_id = cluster_of_[site];
  std::vector<int32_t>& old_members = members_[old_id];
  old_members.erase(std::find(old_members.begin(), old_members.end(),
                              static_cast<int32_t>(site)));
  if (old_members.empty()) members_.erase(old_id);
  int64_t id = next_id_++;
  cluster_of_[site] = id;
  members_[id] = {static_cast<int32_t>(site)};
}

void PercolationState::merge(size_t a, size_t b) {
  int64_t ia = cluster_of_[a], ib = cluster_of_[b];
  if (ia == ib) return;
  std::vector<int32_t>& ma = members_[ia];
  std::vector<int32_t>& mb = members_[ib];
  if (ma.size() < mb.size()) {
    std::swap(ia, ib);
  }
  // ia survives; move the smaller cluster's sites.
  std::vector<int32_t>& keep = members_[ia];
  std::vector<int32_t>& gone = members_[ib];
  for (int32_t s : gone) {
    cluster_of_[static_cast<size_t>(s)] = ia;
    keep.push_back(s);
  }
  members_.erase(ib);
}

void PercolationState::update(const CircuitEvent& event) {
  switch (event.kind) {
    case CircuitEvent::Kind::single:
      split(event.site);
      break;
    case CircuitEvent::Kind::stabilizer:
      if (event.site == 0 || event.site + 1 >= n_) {
        throw std::out_of_range("PercolationState::update: stabilizer center");
      }
      merge(event.site - 1, event.site + 1);
      break;
    case CircuitEvent::Kind::unitary:
      throw std::invalid_argument(
          "PercolationState::update: unitary events have no percolation representation");
  }
  ++steps_;
}

void PercolationState::standalone_step(double p_s, Rng& rng) {
  size_t parity = rng.next_bit() ? 1 : 0;
  size_t half = n_ / 2;
  if (rng.next_double() < p_s) {
    size_t site = parity + 2 * rng.next_below(half);
    split(site);
  } else {
    // Merge a uniform adjacent same-parity pair (s, s+2).
    size_t s = parity + 2 * rng.next_below(half - 1);
    merge(s, s + 2);
  }
  ++steps_;
}

std::vector<std::vector<int>> PercolationState::sorted_clusters() const {
  std::vector<std::vector<int>> out;
  out.reserve(members_.size());
  for (const auto& [id, sites] : members_) {
    std::vector<int> c(sites.begin(), sites.end());
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
  }
  // Deterministic order regardless of hash-map iteration.
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  return out;
}

size_t PercolationState::entropy_interval(const std::vector<std::vector<int>>& clusters,
                                          size_t first, size_t last) {
  auto inside = [&](int s) {
    return s >= static_cast<int>(first) && s <= static_cast<int>(last);
  };
  size_t crossings = 0;
  for (const std::vector<int>& c : clusters) {
    if (c.size() < 2) continue;
    // Clipped stabilizers of the cluster: the Z-string spans (front, back),
    // plus a g-string per consecutive pair.
    if (inside(c.front()) != inside(c.back())) ++crossings;
    for (size_t k = 0; k + 1 < c.size(); ++k) {
      if (inside(c[k]) != inside(c[k + 1])) ++crossings;
    }
  }
  return crossings / 2;
}

size_t PercolationState::entropy_interval(size_t first, size_t last) const {
  if (first > last || last >= n_) {
    throw std::out_of_range("PercolationState::entropy_interval: bad region");
  }
  return entropy_interval(sorted_clusters(), first, last);
}

size_t PercolationState::entropy_region(std::span<const size_t> region) const {
  for (size_t k = 0; k < region.size(); ++k) {
    if (region[k] >= n_ || (k > 0 && region[k] <= region[k - 1])) {
      throw std::out_of_range("PercolationState::entropy_region: bad region");
    }
  }
  ReconstructedStabilizerSet set = reconstruct_stabilizers();
  size_t r = region.size();
  size_t words = (2 * r + 63) / 64;
  std::vector<std::vector<uint64_t>> rows;
  rows.reserve(set.operators.size());
  for (const PauliOperator& p : set.operators) {
    std::vector<uint64_t> row(words, 0);
    for (size_t k = 0; k < r; ++k) {
      if (p.x(region[k])) row[(2 * k) / 64] |= uint64_t{1} << ((2 * k) % 64);
      if (p.z(region[k])) row[(2 * k + 1) / 64] |= uint64_t{1} << ((2 * k + 1) % 64);
    }
    rows.push_back(std::move(row));
  }
  return gf2::rank_in_place(rows) - r;
}

std::vector<size_t> PercolationState::prefix_profile() const {
  std::vector<int> diff(n_ + 1, 0);
  for (const auto& [id, sites] : members_) {
    if (sites.size() < 2) continue;
    auto [lo, hi] = std::minmax_element(sites.begin(), sites.end());
    diff[*lo + 1] += 1;
    diff[*hi + 1] -= 1;
  }
  std::vector<size_t> profile(n_ - 1);
  int run = 0;
  for (size_t x = 1; x < n_; ++x) {
    run += diff[x];
    profile[x - 1] = static_cast<size_t>(run);
  }
  return profile;
}

size_t PercolationState::spanning_count(size_t cut) const {
  size_t count = 0;
  for (const auto& [id, sites] : members_) {
    if (sites.size() < 2) continue;
    auto [lo, hi] = std::minmax_element(sites.begin(), sites.end());
    if (static_cast<size_t>(*lo) < cut && static_cast<size_t>(*hi) >= cut) ++count;
  }
  return count;
}

double percolation_s_topo(const PercolationState& state) {
  size_t q = state.n_sites() / 4;
  auto s = [&](std::initializer_list<size_t> which) {
    std::vector<size_t> region;
    for (size_t k : which) {
      for (size_t i = k * q; i < (k + 1) * q; ++i) region.push_back(i);
    }
    return static_cast<double>(state.entropy_region(region));
  };
  return s({0, 1}) + s({1, 3}) - s({1}) - s({0, 1, 3});
}

PauliOperator g_string(size_t n_qubits, size_t i, size_t j) {
  if (i >= j || (j - i) % 2 != 0 || j >= n_qubits) {
    throw std::invalid_argument("g_string: endpoints must be distinct same-parity sites");
  }
  PauliOperator g(n_qubits);
  g.set_x(i, true);
  g.set_x(j, true);
  for (size_t s = i + 1; s < j; s += 2) {
    g.set_z(s, true);
  }
  return g;
}

ReconstructedStabilizerSet PercolationState::reconstruct_stabilizers() const {
  ReconstructedStabilizerSet out;
  out.grouping = sorted_clusters();
  out.operators.reserve(n_);
  for (const std::vector<int>& c : out.grouping) {
    PauliOperator z_string(n_);
    for (int s : c) z_string.set_z(static_cast<size_t>(s), true);
    out.operators.push_back(std::move(z_string));
    for (size_t k = 0; k + 1 < c.size(); ++k) {
      out.operators.push_back(g_string(n_, static_cast<size_t>(c[k]),
                                       static_cast<size_t>(c[k + 1])));
    }
  }
  return out;
}

std::vector<int> PercolationState::canonical_labels() const {
  std::vector<int> labels(n_);
  std::unordered_map<int64_t, int> min_site;
  min_site.reserve(members_.size());
  for (const auto& [id, sites] : members_) {
    min_site[id] = *std::min_element(sites.begin(), sites.end());
  }
  for (size_t s = 0; s < n_; ++s) {
    labels[s] = min_site[cluster_of_[s]];
  }
  return labels;
}

PercolationState standard_bond_sample(size_t n_sites, size_t rows, double p_t, Rng& rng) {
  PercolationState state(n_sites);
  for (size_t row = 0; row < rows; ++row) {
    for (size_t s = 0; s < n_sites; ++s) {
      if (rng.next_double() >= p_t) {
        CircuitEvent ev{CircuitEvent::Kind::single, s, 0, false};
        state.update(ev);
      }
    }
    for (size_t c = 1; c + 1 < n_sites; ++c) {
      if (rng.next_double() < p_t) {
        CircuitEvent ev{CircuitEvent::Kind::stabilizer, c, 0, false};
        state.update(ev);
      }
    }
  }
  return state;
}

}  // namespace symmcirc
