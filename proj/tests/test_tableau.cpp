#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "statevector_oracle.hpp"
#include "symmcirc/tableau.hpp"

using namespace symmcirc;
using testing::DenseState;
using testing::embed_circuit;
using testing::random_elementary_circuit;

namespace {

PauliOperator random_observable(size_t n, Rng& rng, size_t max_weight = 0) {
  PauliOperator p(n);
  do {
    for (size_t i = 0; i < n; ++i) {
      bool on = max_weight == 0 || rng.next_below(n) < max_weight;
      p.set_x(i, on && rng.next_bit());
      p.set_z(i, on && rng.next_bit());
    }
  } while (p.identity_bits());
  p.set_sign(+1);
  return p;
}

std::vector<size_t> random_distinct_sites(size_t n, size_t k, Rng& rng) {
  std::vector<size_t> sites;
  while (sites.size() < k) {
    size_t s = rng.next_below(n);
    if (std::find(sites.begin(), sites.end(), s) == sites.end()) sites.push_back(s);
  }
  return sites;
}

// One synchronized random evolution step on both simulators.
void lockstep_step(StabilizerState& tab, DenseState& dense, Rng& rng) {
  size_t n = tab.n_qubits();
  if (rng.next_bit()) {
    size_t k = 1 + rng.next_below(std::min<size_t>(3, n));
    auto circuit = random_elementary_circuit(k, 10, rng);
    auto sites = random_distinct_sites(n, k, rng);
    tab.apply(gate_from_circuit(k, circuit), sites);
    dense.apply(embed_circuit(circuit, sites));
  } else {
    PauliOperator p = random_observable(n, rng);
    bool bit = rng.next_bit();
    int got_tab = tab.measure(p, bit);
    int got_dense = dense.measure(p, bit);
    CHECK(got_tab == got_dense);
  }
}

}  // namespace

TEST_CASE("zero state basics") {
  StabilizerState s = StabilizerState::zero_state(6);
  CHECK(s.is_valid());
  CHECK(s.entropy_interval(0, 2) == 0);
  CHECK(s.entropy_interval(1, 4) == 0);
  CHECK(*s.deterministic_outcome(PauliOperator::single(6, 3, 'Z')) == +1);
  CHECK_FALSE(s.deterministic_outcome(PauliOperator::single(6, 3, 'X')));
  CHECK(*s.member_sign(PauliOperator::from_string("ZZZZZZ")) == +1);
  CHECK_FALSE(s.member_sign(PauliOperator::from_string("XIIIII")));
}

TEST_CASE("measurement replaces the lowest-index anticommuting generator") {
  StabilizerState s = StabilizerState::zero_state(4);
  PauliOperator x1 = PauliOperator::single(4, 1, 'X');
  int outcome = s.measure(x1, true);  // forced -1
  CHECK(outcome == -1);
  CHECK(*s.deterministic_outcome(x1) == -1);
  // Z_1 is gone; the remaining Z's survive untouched.
  CHECK(*s.deterministic_outcome(PauliOperator::single(4, 0, 'Z')) == +1);
  CHECK(*s.deterministic_outcome(PauliOperator::single(4, 2, 'Z')) == +1);
  // Repeat measurement is deterministic and idempotent.
  CHECK(s.measure(x1, false) == -1);
  CHECK(s.measure(x1, true) == -1);
}

TEST_CASE("lockstep with the dense simulator: outcomes, entropies, signs") {
  Rng rng(101);
  for (size_t n : {2u, 4u, 6u}) {
    for (int rep = 0; rep < 12; ++rep) {
      StabilizerState tab = StabilizerState::zero_state(n);
      DenseState dense(n);
      for (int step = 0; step < 30; ++step) {
        lockstep_step(tab, dense, rng);
      }
      REQUIRE(tab.is_valid());
      CHECK(dense.norm() == doctest::Approx(1.0).epsilon(1e-9));

      // Full stabilizer group expectation check: every signed generator has
      // dense expectation +1.
      for (const PauliOperator& g : tab.generators()) {
        double e = dense.expectation(g).real();
        CHECK(std::abs(e - 1.0) < 1e-8);
      }
      // Entropies of random intervals.
      for (int t = 0; t < 6; ++t) {
        size_t a = rng.next_below(n), b = rng.next_below(n);
        if (a > b) std::swap(a, b);
        double de = dense.entropy_interval(a, b);
        CHECK(tab.entropy_interval(a, b) ==
              static_cast<size_t>(std::llround(de)));
        CHECK(std::abs(de - std::llround(de)) < 1e-7);
      }
      // Deterministic-outcome agreement on random observables.
      for (int t = 0; t < 8; ++t) {
        PauliOperator p = random_observable(n, rng);
        auto det = tab.deterministic_outcome(p);
        double e = dense.expectation(p).real();
        if (det) {
          CHECK(std::abs(e - *det) < 1e-8);
        } else {
          CHECK(std::abs(e) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("prefix profile equals per-interval entropies") {
  Rng rng(202);
  for (int rep = 0; rep < 10; ++rep) {
    StabilizerState tab = StabilizerState::zero_state(24);
    DenseState dummy(1);
    for (int step = 0; step < 120; ++step) {
      size_t k = 1 + rng.next_below(3);
      auto circuit = random_elementary_circuit(k, 8, rng);
      auto sites = random_distinct_sites(24, k, rng);
      tab.apply(gate_from_circuit(k, circuit), sites);
      if (rng.next_bit()) {
        tab.measure(random_observable(24, rng, 2), rng.next_bit());
      }
    }
    std::vector<size_t> profile = tab.prefix_entropy_profile();
    REQUIRE(profile.size() == 23);
    for (size_t x = 1; x < 24; ++x) {
      CHECK(profile[x - 1] == tab.entropy_interval(0, x - 1));
    }
  }
}

TEST_CASE("clipped gauge: same group, endpoint conditions, same entropies") {
  Rng rng(303);
  for (int rep = 0; rep < 10; ++rep) {
    StabilizerState tab = StabilizerState::zero_state(20);
    for (int step = 0; step < 100; ++step) {
      size_t k = 1 + rng.next_below(3);
      auto circuit = random_elementary_circuit(k, 8, rng);
      auto sites = random_distinct_sites(20, k, rng);
      tab.apply(gate_from_circuit(k, circuit), sites);
      if (rng.next_below(3) == 0) {
        tab.measure(random_observable(20, rng, 3), rng.next_bit());
      }
    }
    StabilizerState clipped = tab.clipped();
    REQUIRE(clipped.is_valid());
    CHECK(clipped.is_clipped());
    // Same group, signs included, both directions: each signed generator is
    // a member of the other presentation with relative sign +1.
    for (const PauliOperator& g : clipped.generators()) {
      auto sign = tab.member_sign(g);
      REQUIRE(sign);
      CHECK(*sign == +1);
    }
    for (const PauliOperator& g : tab.generators()) {
      auto sign = clipped.member_sign(g);
      REQUIRE(sign);
      CHECK(*sign == +1);
    }
    for (int t = 0; t < 10; ++t) {
      size_t a = rng.next_below(20), b = rng.next_below(20);
      if (a > b) std::swap(a, b);
      CHECK(clipped.clipped_entropy_interval(a, b) == tab.entropy_interval(a, b));
    }
  }
}

TEST_CASE("from_generators validates") {
  std::vector<PauliOperator> bad = {PauliOperator::from_string("XI"),
                                    PauliOperator::from_string("ZI")};
  CHECK_THROWS(StabilizerState::from_generators(bad));  // anticommuting
  std::vector<PauliOperator> dep = {PauliOperator::from_string("ZI"),
                                    PauliOperator::from_string("ZI")};
  CHECK_THROWS(StabilizerState::from_generators(dep));  // dependent
  std::vector<PauliOperator> good = {PauliOperator::from_string("XX"),
                                     PauliOperator::from_string("ZZ")};
  StabilizerState bell = StabilizerState::from_generators(good);
  CHECK(bell.entropy_interval(0, 0) == 1);
}
