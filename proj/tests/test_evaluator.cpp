#include "hstl/evaluator.hpp"
#include "hstl/parser.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace hstl;

namespace {

struct Fixture {
  GridGraph g{3, 3};
  Signature sig{{"h"}, {"z0", "z1"}};

  Formula f(std::string_view text) const { return parse(text, sig.props(), sig.nominals()); }

  // z0 drives up the first column, z1 sits at p(2,2); h marks p(3,1) at step 1.
  Trace trace() const {
    return Trace(g, sig,
                 {make_state(g, sig, {}, {{"z0", {1, 1}}, {"z1", {2, 2}}}),
                  make_state(g, sig, {{"h", {{3, 1}}}}, {{"z0", {2, 1}}, {"z1", {2, 2}}}),
                  make_state(g, sig, {}, {{"z0", {3, 1}}, {"z1", {2, 2}}})});
  }

  bool at(std::string_view text, Position p) const { return eval(g, trace(), p, f(text)); }
};

}  // namespace

TEST(Eval, AtomsAndBooleans) {
  Fixture x;
  EXPECT_TRUE(x.at("1", {1, 1}));
  EXPECT_FALSE(x.at("0", {1, 1}));
  EXPECT_TRUE(x.at("z0", {1, 1}));
  EXPECT_FALSE(x.at("z0", {2, 1}));
  EXPECT_FALSE(x.at("h", {3, 1}));  // h holds only at step 1
  EXPECT_TRUE(x.at("z0 & !z1", {1, 1}));
  EXPECT_TRUE(x.at("z1 | z0", {2, 2}));
  EXPECT_TRUE(x.at("h -> z1", {1, 1}));
  EXPECT_TRUE(x.at("z0 <-> !z1", {1, 1}));
}

TEST(Eval, SpatialMovesAndGridEdges) {
  Fixture x;
  EXPECT_TRUE(x.at("Front z1", {1, 2}));
  EXPECT_TRUE(x.at("Right z1", {2, 1}));
  EXPECT_TRUE(x.at("Back z0", {2, 1}));
  EXPECT_TRUE(x.at("Left z0", {1, 2}));
  EXPECT_FALSE(x.at("Back 1", {1, 3}));   // off the grid is false
  EXPECT_FALSE(x.at("Right 1", {2, 3}));
  EXPECT_TRUE(x.at("!(Back 1)", {1, 2}));
  EXPECT_TRUE(x.at("<Front:2> z1", {1, 2}));
  EXPECT_FALSE(x.at("<Front:1> z1", {3, 2}));
  EXPECT_TRUE(x.at("[Front] !z0", {1, 3}));
  EXPECT_FALSE(x.at("[Front] !z1", {1, 2}));
}

TEST(Eval, TemporalOperatorsOnFiniteTraces) {
  Fixture x;
  EXPECT_TRUE(x.at("X z0", {2, 1}));
  EXPECT_TRUE(x.at("X X z0", {3, 1}));
  EXPECT_FALSE(x.at("X X X 1", {1, 1}));     // no fourth step
  EXPECT_TRUE(x.at("X X WX 0", {1, 1}));     // weak next holds at the last step
  EXPECT_FALSE(x.at("WX 0", {1, 1}));
  EXPECT_TRUE(x.at("F h", {3, 1}));
  EXPECT_FALSE(x.at("G !h", {3, 1}));
  EXPECT_TRUE(x.at("G z1", {2, 2}));
  EXPECT_TRUE(x.at("!h U h", {3, 1}));
  EXPECT_FALSE(x.at("z0 U h", {3, 1}));      // z0 fails at p(3,1) before h appears
  EXPECT_FALSE(x.at("1 U 0", {1, 1}));
}

TEST(Eval, HybridOperators) {
  Fixture x;
  EXPECT_TRUE(x.at("@z1 Left Left 1 ", {3, 3}) == false);
  EXPECT_TRUE(x.at("@z1 Left 1", {3, 3}));
  EXPECT_TRUE(x.at("@z0 X X z0", {2, 2}) == false);  // @ fixes the cell at the current step
  EXPECT_TRUE(x.at("X @z0 Front X z0", {1, 1}));
  // Bind the current cell, then find z0 there two steps later.
  EXPECT_TRUE(x.at("down w X X @z0 w", {3, 1}));
  EXPECT_FALSE(x.at("down w X X @z0 w", {2, 1}));
  // Binding a declared nominal overrides its placement from now on.
  EXPECT_TRUE(x.at("down z1 G @z1 Front Back z1", {1, 1}));
  EXPECT_TRUE(x.at("down z1 X z1", {3, 3}));
}

TEST(Eval, FollowPictureSatisfiesSafeFollowing) {
  // z1 (POV) starts right ahead of z0 (SV) in a single lane. SV waits while
  // POV is right ahead and then both advance.
  const GridGraph g(4, 1);
  const Signature sig({}, {"z0", "z1"});
  const Trace t(g, sig,
                {make_state(g, sig, {}, {{"z0", {1, 1}}, {"z1", {2, 1}}}),
                 make_state(g, sig, {}, {{"z0", {1, 1}}, {"z1", {2, 1}}}),
                 make_state(g, sig, {}, {{"z0", {2, 1}}, {"z1", {3, 1}}})});
  const Formula safe = parse("G(!(@z0 z1))", sig.props(), sig.nominals());
  const Formula follow = parse("G (@z0 ↓z2 ((! X 1) | X (@z0 ((!z1 & Back z2 ) | (z2 & Front z1) ))))",
                               sig.props(), sig.nominals());
  for (const auto& p : g.positions()) {
    EXPECT_TRUE(eval(g, t, p, safe));
    EXPECT_TRUE(eval(g, t, p, follow));
  }
}

TEST(Eval, SatPointsCollectsEveryPoint) {
  Fixture x;
  const PositionSet s = sat_points(x.g, x.trace(), x.f("Front z1 | z0"));
  EXPECT_EQ(s.indices(), (std::vector<int>{x.g.index({1, 1}), x.g.index({1, 2})}));
}

TEST(Eval, Validation) {
  Fixture x;
  EXPECT_THROW(eval(GridGraph(2, 2), x.trace(), {1, 1}, x.f("1")), ValidationError);
  EXPECT_THROW(eval(x.g, x.trace(), {4, 1}, x.f("1")), ValidationError);
  // Names the trace does not declare.
  EXPECT_THROW(eval(x.g, x.trace(), {1, 1}, Formula::nom("z9")), ValidationError);
  EXPECT_THROW(eval(x.g, x.trace(), {1, 1}, Formula::prop("g")), ValidationError);
  // A binder-only name may not occur free.
  EXPECT_THROW(eval(x.g, x.trace(), {1, 1}, Formula::conj(Formula::bind("w", Formula::nom("w")), Formula::nom("w"))),
               ValidationError);
  EXPECT_THROW(eval_naive(x.g, x.trace(), {1, 1}, Formula::nom("z9")), ValidationError);
}

TEST(Eval, EvaluatorInstanceIsReusable) {
  Fixture x;
  auto sig = std::make_shared<const Signature>(x.sig);
  Evaluator ev(x.g, sig, x.f("F (h & X @z0 Back 1)"));
  const Trace t = x.trace();
  const Trace u = *suffix(t, 2);
  for (int round = 0; round < 3; ++round) {
    EXPECT_TRUE(ev.eval(t, {3, 1}));
    EXPECT_FALSE(ev.eval(u, {3, 1}));
    EXPECT_FALSE(ev.eval(t, {1, 1}));
  }
}

TEST(Eval, SameOccurrenceFromTwoViewpointsAtOneStep) {
  // The inner F h is reached at step 1 both from the outer F's own step
  // (viewpoint z0 at step 1) and from the inner F's recursion out of step 0
  // (viewpoint z0 at step 0). The two differ and must not share an answer.
  const GridGraph g(2, 1);
  const Signature sig({"h"}, {"a"});
  const Trace t(g, sig,
                {make_state(g, sig, {}, {{"a", {1, 1}}}),
                 make_state(g, sig, {{"h", {{1, 1}}}}, {{"a", {2, 1}}})});
  const Formula f = parse("F (@a F h)", sig.props(), sig.nominals());
  const Formula g2 = parse("F (@a F h) & X (@a !(F h))", sig.props(), sig.nominals());
  for (const auto& p : g.positions()) {
    EXPECT_EQ(eval(g, t, p, f), eval_naive(g, t, p, f));
    EXPECT_EQ(eval(g, t, p, g2), eval_naive(g, t, p, g2));
    EXPECT_TRUE(eval(g, t, p, g2));
  }
}

TEST(Eval, SameOccurrenceUnderTwoBindings) {
  // Under U the body "X @a w" is revisited at the same step with w bound to
  // different cells depending on where the enclosing binder fired.
  const GridGraph g(1, 3);
  const Signature sig({}, {"a"});
  const Trace t(g, sig,
                {make_state(g, sig, {}, {{"a", {1, 1}}}), make_state(g, sig, {}, {{"a", {1, 2}}}),
                 make_state(g, sig, {}, {{"a", {1, 2}}})});
  const Formula f = parse("@a X (down w (1 U @a X @a w))", sig.props(), sig.nominals());
  const Formula h = parse("F (@a down w (X @a w)) & @a down w X X @a w", sig.props(), sig.nominals());
  for (const auto& p : g.positions()) {
    EXPECT_EQ(eval(g, t, p, f), eval_naive(g, t, p, f));
    EXPECT_EQ(eval(g, t, p, h), eval_naive(g, t, p, h));
  }
}

TEST(Eval, DifferentialAgainstNaiveReading) {
  oracle::FormulaGen gen({"h"}, {"a", "b"}, {"w", "a"}, 2024);
  auto& rng = gen.rng();
  int checked = 0;
  for (int i = 0; i < 600; ++i) {
    const GridGraph g(1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 3));
    auto sig = std::make_shared<const Signature>(std::vector<std::string>{"h"}, std::vector<std::string>{"a", "b"});
    const Trace t = oracle::random_trace(g, sig, 1 + static_cast<int>(rng() % 4), rng);
    const Formula f = gen(1 + static_cast<int>(rng() % 12));
    Evaluator ev(g, sig, f);
    for (const auto& p : g.positions()) {
      ASSERT_EQ(ev.eval(t, p), eval_naive(g, t, p, f)) << render(f) << " at " << to_string(p);
      EXPECT_LE(ev.memo_entries(), t.size() * ev.node_count());
      ++checked;
    }
  }
  EXPECT_GT(checked, 600);
}

TEST(Eval, MemoNeverExceedsStepsTimesNodes) {
  const GridGraph g(3, 3);
  auto sig = std::make_shared<const Signature>(std::vector<std::string>{"h"}, std::vector<std::string>{"a"});
  std::mt19937_64 rng(5);
  const Trace t = oracle::random_trace(g, sig, 6, rng);
  // Nested untils make the naive reading exponential; the table stays linear.
  const Formula f = parse("(h U (h U (h U (h U (h U a))))) & F (@a down w F (@a Front w))", {"h"}, {"a"});
  Evaluator ev(g, sig, f);
  for (const auto& p : g.positions()) {
    ev.eval(t, p);
    EXPECT_LE(ev.memo_entries(), t.size() * ev.node_count());
  }
}
