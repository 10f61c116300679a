#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>

#include "symmcirc/channel.hpp"

using namespace symmcirc;

TEST_CASE("initial state of the averaged channel") {
  StabilizerGroupState g = StabilizerGroupState::initial_state(8);
  CHECK(g.generator_count() == 8);  // G1, G2, six interior Z's
  CHECK(g.is_valid());
  CHECK_FALSE(g.is_steady_state());
}

TEST_CASE("steady-state detection is basis independent") {
  auto [g1, g2] = symmetry_generators(8);
  CHECK(StabilizerGroupState(8, {g1, g2}).is_steady_state());
  CHECK(StabilizerGroupState(8, {g1 * g2, g2}).is_steady_state());
  PauliOperator neg_g2 = g2;
  neg_g2.negate();
  CHECK_FALSE(StabilizerGroupState(8, {g1, neg_g2}).is_steady_state());
  CHECK_FALSE(StabilizerGroupState(8, {g1, PauliOperator::single(8, 1, 'Z')})
                  .is_steady_state());
}

TEST_CASE("channel measurement shrinks to the centralizer") {
  StabilizerGroupState g = StabilizerGroupState::initial_state(6);
  size_t before = g.generator_count();
  // X_2 anticommutes with Z_2 (and with G2): exactly one generator is lost.
  g.channel_measure(PauliOperator::single(6, 2, 'X'));
  CHECK(g.generator_count() == before - 1);
  CHECK(g.is_valid());
  // Everything left commutes with the measured operator.
  for (const PauliOperator& gen : g.generators()) {
    CHECK(gen.commutes_with(PauliOperator::single(6, 2, 'X')));
  }
  // Measuring a centralizing operator changes nothing.
  size_t mid = g.generator_count();
  g.channel_measure(PauliOperator::single(6, 4, 'Z'));
  CHECK(g.generator_count() == mid);
}

TEST_CASE("stabilizer measurements drive the channel to the steady state") {
  StabilizerGroupState g = StabilizerGroupState::initial_state(8);
  // Cluster stabilizers anticommute with single-site Z's but commute with
  // G1 and G2; measuring them all peels the interior Z's away.
  for (size_t c = 1; c <= 6; ++c) {
    g.channel_measure(cluster_stabilizer(8, c));
  }
  CHECK(g.is_steady_state());
}

TEST_CASE("channel unitaries preserve validity and the symmetry sector") {
  Rng rng(21);
  SymmetricGatePool pool(16, 5);
  StabilizerGroupState g = StabilizerGroupState::initial_state(8);
  auto [g1, g2] = symmetry_generators(8);
  for (int step = 0; step < 50; ++step) {
    size_t c = 1 + rng.next_below(6);
    std::array<size_t, 3> sites = {c - 1, c, c + 1};
    g.channel_unitary(pool.gate(rng.next_below(pool.size())), sites);
  }
  CHECK(g.is_valid());
  // G1 and G2 are still members with +1 signs (they are conserved).
  StabilizerGroupState ref(8, g.generators());
  CHECK(ref.is_valid());
  std::vector<PauliOperator> basis = g.generators();
  std::vector<size_t> pivots = gf2::echelonize(basis);
  for (const PauliOperator& target : {g1, g2}) {
    PauliOperator residual = gf2::reduce(basis, pivots, target);
    CHECK(residual.identity_bits());
    CHECK(residual.sign() == +1);
  }
}

TEST_CASE("time_to_steady terminates and is reproducible") {
  CircuitConfig cfg;
  cfg.n = 8;
  cfg.p_s = 0.3;
  cfg.p_u = 0.2;
  cfg.master_seed = 7;
  SymmetricGatePool pool(16, 5);
  Rng r1(111), r2(111);
  SteadyTimeResult a = time_to_steady(cfg, pool, r1);
  SteadyTimeResult b = time_to_steady(cfg, pool, r2);
  CHECK_FALSE(a.censored);
  CHECK(a.time_steps > 0.0);
  CHECK(a.time_steps == b.time_steps);
  // A tiny cap forces censoring.
  Rng r3(111);
  SteadyTimeResult c = time_to_steady(cfg, pool, r3, 1);
  if (c.censored) CHECK(c.time_steps == 1.0);
}

TEST_CASE("time_to_steady rejects degenerate rates") {
  CircuitConfig cfg;
  cfg.n = 8;
  cfg.p_s = 0.0;
  cfg.p_u = 0.0;
  SymmetricGatePool pool(1, 5);
  Rng rng(1);
  CHECK_THROWS(time_to_steady(cfg, pool, rng));
  cfg.p_s = 1.0;
  CHECK_THROWS(time_to_steady(cfg, pool, rng));
}
