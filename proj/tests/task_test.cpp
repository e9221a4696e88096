#include <gtest/gtest.h>

#include <numeric>

#include "belltasks/task.hpp"

using namespace belltasks;

TEST(Task, ParseNames) {
  EXPECT_EQ(parse_task_kind("domination"), TaskKind::domination);
  EXPECT_EQ(parse_start_rule("distinct"), StartRule::distinct);
  EXPECT_THROW(parse_task_kind("chase"), Error);
  EXPECT_THROW(parse_start_rule("same"), Error);
}

TEST(Task, TupleCodingRoundTrips) {
  for (std::size_t i = 0; i < ipow(5, 3); ++i) EXPECT_EQ(encode_tuple(decode_tuple(i, 3, 5), 5), i);
}

TEST(Task, RendezvousScore) {
  const Graph g = make_cycle(5);
  EXPECT_EQ(score(TaskKind::rendezvous, g, {2, 2}), 1);
  EXPECT_EQ(score(TaskKind::rendezvous, g, {2, 3}), 0);
  EXPECT_EQ(score(TaskKind::rendezvous, g, {1, 1, 1}), 1);
  EXPECT_EQ(score(TaskKind::rendezvous, g, {1, 1, 2}), 0);
}

TEST(Task, DominationScoreCountsClosedNeighborhoodUnion) {
  const Graph g = make_cycle(5);
  EXPECT_EQ(score(TaskKind::domination, g, {0, 0}), 3);
  EXPECT_EQ(score(TaskKind::domination, g, {0, 1}), 4);
  EXPECT_EQ(score(TaskKind::domination, g, {0, 2}), 5);
  // Loops do not enlarge a neighborhood.
  const Graph curly = with_all_loops(make_cycle(4), "square curly");
  EXPECT_EQ(score(TaskKind::domination, curly, {0, 0}), 3);
}

TEST(Task, AnyStartPriorIsUniform) {
  TaskSpec spec;
  const auto prior = start_prior(spec, 4);
  ASSERT_EQ(prior.size(), 16u);
  for (const auto& p : prior) EXPECT_EQ(p, Rational(1, 16));
}

TEST(Task, DistinctStartPriorExcludesCollisions) {
  TaskSpec spec;
  spec.start = StartRule::distinct;
  const auto prior = start_prior(spec, 4);
  EXPECT_EQ(std::accumulate(prior.begin(), prior.end(), Rational(0)), 1);
  for (int x = 0; x < 4; ++x) EXPECT_EQ(prior[encode_tuple({x, x}, 4)], 0);
  EXPECT_EQ(prior[encode_tuple({0, 1}, 4)], Rational(1, 12));

  spec.agents = 3;
  const auto p3 = start_prior(spec, 4);
  EXPECT_EQ(std::accumulate(p3.begin(), p3.end(), Rational(0)), 1);
  EXPECT_EQ(p3[encode_tuple({0, 1, 0}, 4)], 0);
  EXPECT_EQ(p3[encode_tuple({0, 1, 2}, 4)], Rational(1, 24));
}

TEST(Task, DistinctStartNeedsEnoughVertices) {
  TaskSpec spec;
  spec.start = StartRule::distinct;
  spec.agents = 3;
  try {
    start_prior(spec, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::infeasible_prior);
  }
}

TEST(Task, ValidateRejectsBadSpecs) {
  TaskSpec spec;
  spec.agents = 1;
  EXPECT_THROW(spec.validate(), Error);
  spec.agents = 2;
  spec.steps = 0;
  EXPECT_THROW(spec.validate(), Error);
}

TEST(Game, OutcomesAreAllowedMoves) {
  const Graph g = make_path(4, true);
  const BellGame game = build_game(g, TaskSpec{});
  EXPECT_EQ(game.n, 4);
  EXPECT_EQ(game.r, 2);
  for (int x = 0; x < 4; ++x) EXPECT_EQ(game.outcomes[x], g.allowed_moves(x));
  EXPECT_EQ(game.input_count(), 16u);
  EXPECT_EQ(game.max_outcomes(), 2);
}

TEST(Game, CoefficientsArePriorTimesScore) {
  const BellGame game = build_game(make_cycle(3), TaskSpec{});
  // Inputs (0,1): both can reach 2 only through (2,2).
  const auto xi = encode_tuple({0, 1}, 3);
  Rational total = 0;
  for (std::size_t ai = 0; ai < game.coefficients[xi].size(); ++ai) {
    const auto pos = game.outcome_positions({0, 1}, ai);
    const Vertex a = game.outcomes[0][pos[0]], b = game.outcomes[1][pos[1]];
    EXPECT_EQ(game.coefficients[xi][ai], a == b ? Rational(1, 9) : Rational(0));
    total += game.coefficients[xi][ai];
  }
  EXPECT_EQ(total, Rational(1, 9));
  EXPECT_EQ(game.min_value, 0);
  EXPECT_EQ(game.max_value, 1);
}

TEST(Game, MultiStepUsesWalkPowerForMovesAndGraphForScore) {
  TaskSpec spec;
  spec.kind = TaskKind::domination;
  spec.steps = 2;
  const Graph g = make_cycle(5);
  const BellGame game = build_game(g, spec);
  EXPECT_EQ(game.outcomes[0], (std::vector<Vertex>{0, 2, 3}));
  EXPECT_EQ(game.max_value, 5);
}

TEST(Game, PartySymmetry) {
  EXPECT_TRUE(build_game(make_cycle(5), TaskSpec{}).party_symmetric());
  TaskSpec dom;
  dom.kind = TaskKind::domination;
  dom.start = StartRule::distinct;
  EXPECT_TRUE(build_game(make_cycle(6), dom).party_symmetric());
  BellGame skewed = build_game(make_cycle(3), TaskSpec{});
  skewed.coefficients[encode_tuple({0, 1}, 3)][0] += 1;
  EXPECT_FALSE(skewed.party_symmetric());
}

TEST(Game, GlobalAlphabetKeepsUniformBehaviorValue) {
  const BellGame game = build_game(make_cycle(4), TaskSpec{});
  const BellGame wide = with_global_alphabet(game);
  EXPECT_EQ(wide.outcome_count(0), 4);
  // Product of per-party deterministic answers: both go to vertex 1 from every start they can.
  std::vector<std::vector<std::vector<double>>> local(2, std::vector<std::vector<double>>(4));
  std::vector<std::vector<std::vector<double>>> wide_local(2, std::vector<std::vector<double>>(4));
  for (int i = 0; i < 2; ++i)
    for (int x = 0; x < 4; ++x) {
      local[i][x].assign(game.outcome_count(x), 0.0);
      local[i][x][0] = 1.0;
      wide_local[i][x].assign(4, 0.0);
      wide_local[i][x][game.outcomes[x][0]] = 1.0;
    }
  EXPECT_DOUBLE_EQ(game_value(game, product_behavior(game, local)), game_value(wide, product_behavior(wide, wide_local)));
}

TEST(Game, JsonDumpCarriesExactCoefficients) {
  const auto j = game_to_json(build_game(make_cycle(3), TaskSpec{}));
  EXPECT_EQ(j.at("n").get<int>(), 3);
  EXPECT_EQ(j.at("r").get<int>(), 2);
  EXPECT_FALSE(j.dump().empty());
}
