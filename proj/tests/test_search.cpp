#include <gtest/gtest.h>

#include "support.hpp"

using namespace acfx;
using namespace testing_support;

namespace {

bool is_trivial_class(const Presentation& p) {
  return canonical_key(p) == canonical_key(gen_trivial(p.generator_count()));
}

void expect_found_and_valid(const SearchOutcome& r) {
  ASSERT_EQ(r.status, SearchStatus::found);
  ASSERT_TRUE(r.certificate);
  EXPECT_TRUE(verify_certificate(*r.certificate).valid);
  EXPECT_TRUE(is_trivial_class(r.certificate->claimed_end));
  EXPECT_TRUE(is_trivial_class(replay(*r.certificate)));
}

}  // namespace

TEST(Scramble, ZeroStepsIsIdentity) {
  for (std::uint64_t seed : {1u, 7u, 99u}) {
    ScrambleResult s = scramble(gen_trivial(2), 0, seed);
    EXPECT_EQ(s.presentation, gen_trivial(2));
    EXPECT_TRUE(s.moves.empty());
  }
}

TEST(Scramble, ReplayReproducesOutput) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    ScrambleResult s = scramble(gen_trivial(2), 1 + seed % 6, seed);
    EXPECT_EQ(apply_moves(gen_trivial(2), s.moves), s.presentation);
    EXPECT_EQ(std::abs(abel_det(s.presentation)), 1);
  }
}

TEST(Scramble, DeterministicPerSeed) {
  ScrambleResult a = scramble(gen_trivial(2), 3, 7), b = scramble(gen_trivial(2), 3, 7);
  EXPECT_EQ(a.presentation, b.presentation);
  EXPECT_EQ(a.moves, b.moves);
  EXPECT_EQ(F(a.presentation), "x,y,z | x, yz, z");
}

TEST(Search, TrivialStartNeedsNoMoves) {
  for (int n = 0; n <= 3; ++n) {
    SearchOutcome r = search_trivialization(gen_trivial(n));
    expect_found_and_valid(r);
    EXPECT_TRUE(r.certificate->moves.empty());
    EXPECT_EQ(r.stats.visited, 1u);
    EXPECT_EQ(r.summary_line(false), "outcome=FOUND nodes=1 depth=0");
  }
}

TEST(Search, SummaryLineCarriesTime) {
  SearchOutcome r = search_trivialization(gen_trivial(2));
  EXPECT_EQ(r.summary_line().rfind("outcome=FOUND nodes=1 depth=0 time_ms=", 0), 0u);
}

TEST(Search, CyclicallyReducesStartBeforeSearching) {
  // Relators that only need conjugation are trivial after cyclic reduction.
  SearchOutcome r = search_trivialization(P("x,y | yxY, xyX"));
  expect_found_and_valid(r);
  EXPECT_EQ(r.stats.depth, 0u);
}

TEST(Search, Seed7DepthThreeScramble) {
  ScrambleResult s = scramble(gen_trivial(2), 3, 7);
  SearchOutcome r = search_trivialization(s.presentation);
  expect_found_and_valid(r);
  EXPECT_EQ(r.certificate->start, s.presentation);
  EXPECT_LE(r.stats.depth, 3u);
  EXPECT_LE(class_changing_moves(*r.certificate), 3u);
}

TEST(Search, ScrambleRecoveryWithinScrambleDepth) {
  for (std::size_t k = 1; k <= 4; ++k) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      ScrambleResult s = scramble(gen_trivial(2), k, seed);
      SearchOutcome r = search_trivialization(s.presentation);
      expect_found_and_valid(r);
      EXPECT_LE(class_changing_moves(*r.certificate), k) << "k=" << k << " seed=" << seed;
    }
  }
}

TEST(Search, TwoConcatsNeedThreeLiteralMoves) {
  // {xy, yxy} is two class steps from T2 but the shortest literal move
  // sequence has three moves, so BFS depth and certificate length differ.
  Presentation p = apply_moves(gen_trivial(2), {Move::concat(1, 2), Move::concat(2, 1)});
  EXPECT_EQ(F(p), "x,y | xy, yxy");
  SearchOutcome r = search_trivialization(p);
  expect_found_and_valid(r);
  EXPECT_EQ(r.stats.depth, 2u);
  EXPECT_EQ(class_changing_moves(*r.certificate), 2u);
  EXPECT_GE(r.certificate->moves.size(), 3u);
}

TEST(Search, DeterminantGate) {
  SearchOutcome r = search_trivialization(P("x,y | xy, xy"));
  EXPECT_EQ(r.status, SearchStatus::exhausted);
  EXPECT_EQ(r.stats.visited, 0u);
  EXPECT_EQ(search_trivialization(Presentation(2, {W("x")})).status, SearchStatus::exhausted);
}

TEST(Search, NodeBudget) {
  SearchConfig cfg;
  cfg.node_budget = 100;
  SearchOutcome r = search_trivialization(gen_gpn(4), cfg);
  EXPECT_EQ(r.status, SearchStatus::budget_exceeded);
  EXPECT_LE(r.stats.visited, 100u);
  EXPECT_FALSE(r.certificate);
}

TEST(Search, ExhaustsSmallBoundedGraph) {
  // No class-changing move from G(P2) fits within length 6 and two generators.
  SearchConfig cfg;
  cfg.max_len = 6;
  cfg.max_gens = 2;
  SearchOutcome r = search_trivialization(gen_gpn(2), cfg);
  EXPECT_EQ(r.status, SearchStatus::exhausted);
  EXPECT_EQ(r.stats.visited, 1u);
}

TEST(Search, InvalidConfig) {
  SearchConfig cfg;
  cfg.max_len = 5;
  EXPECT_THROW(search_trivialization(gen_gpn(2), cfg), InvalidArgument);
  SearchConfig few;
  few.max_gens = 2;
  EXPECT_THROW(search_trivialization(gen_trivial(3), few), InvalidArgument);
  SearchConfig zero;
  zero.node_budget = 0;
  EXPECT_THROW(search_trivialization(gen_trivial(1), zero), InvalidArgument);
}

TEST(Search, StatisticsAreConsistent) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ScrambleResult s = scramble(gen_trivial(2), 4, seed);
    SearchOutcome r = search_trivialization(s.presentation);
    EXPECT_EQ(r.stats.generated, r.stats.dedup_hits + r.stats.visited);
    EXPECT_LE(r.stats.expanded, r.stats.visited);
  }
  SearchConfig cfg;
  cfg.max_len = 6;
  cfg.max_gens = 2;
  SearchOutcome r = search_trivialization(gen_gpn(2), cfg);
  EXPECT_EQ(r.stats.generated, r.stats.dedup_hits + r.stats.visited);
  EXPECT_EQ(r.stats.expanded, r.stats.visited);
}

TEST(Search, SingleWorkerIsReproducible) {
  ScrambleResult s = scramble(gen_trivial(2), 5, 3);
  SearchOutcome a = search_trivialization(s.presentation), b = search_trivialization(s.presentation);
  ASSERT_EQ(a.status, SearchStatus::found);
  EXPECT_EQ(serialize(*a.certificate), serialize(*b.certificate));
  EXPECT_EQ(a.summary_line(false), b.summary_line(false));
}

TEST(Search, MultiWorkerMatchesDepth) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ScrambleResult s = scramble(gen_trivial(2), 4, seed);
    SearchOutcome one = search_trivialization(s.presentation);
    SearchConfig cfg;
    cfg.workers = 4;
    SearchOutcome many = search_trivialization(s.presentation, cfg);
    expect_found_and_valid(many);
    EXPECT_EQ(many.stats.depth, one.stats.depth);
  }
}

TEST(Search, BeamAndDeepeningFindScrambles) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ScrambleResult s = scramble(gen_trivial(2), 3, seed);
    SearchConfig beam;
    beam.strategy = Strategy::beam;
    beam.beam_width = 200;
    expect_found_and_valid(search_trivialization(s.presentation, beam));
    SearchConfig id;
    id.strategy = Strategy::iterative_deepening;
    SearchOutcome r = search_trivialization(s.presentation, id);
    expect_found_and_valid(r);
    EXPECT_EQ(r.stats.depth, search_trivialization(s.presentation).stats.depth);
  }
}

TEST(Search, FamilyWithSmallIndex) {
  // G(P0) = {xyxYXY, x} is a short walk from T2.
  SearchOutcome r = search_trivialization(gen_gpn(0));
  expect_found_and_valid(r);
}
