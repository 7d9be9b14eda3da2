#include "hstl/parser.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace hstl;

namespace {

const std::set<std::string> kProps{"h", "q"};
const std::set<std::string> kNoms{"z0", "z1", "z2"};

Formula p(std::string_view text) { return parse(text, kProps, kNoms); }

std::size_t error_offset(std::string_view text) {
  try {
    p(text);
  } catch (const ParseError& e) {
    return e.offset();
  }
  ADD_FAILURE() << "no parse error for " << text;
  return std::string_view::npos;
}

}  // namespace

TEST(Parser, Atoms) {
  EXPECT_EQ(p("1"), Formula::top());
  EXPECT_EQ(p("0"), Formula::bottom());
  EXPECT_EQ(p("h"), Formula::prop("h"));
  EXPECT_EQ(p("z1"), Formula::nom("z1"));
  EXPECT_EQ(p("((q))"), Formula::prop("q"));
}

TEST(Parser, PrecedenceFromTightestToLoosest) {
  const Formula h = Formula::prop("h");
  const Formula q = Formula::prop("q");
  const Formula z = Formula::nom("z0");
  EXPECT_EQ(p("!h & q"), Formula::conj(Formula::negate(h), q));
  EXPECT_EQ(p("h & q | z0"), Formula::disj(Formula::conj(h, q), z));
  EXPECT_EQ(p("h | q U z0"), Formula::until(Formula::disj(h, q), z));
  EXPECT_EQ(p("h U q -> z0"), Formula::implies(Formula::until(h, q), z));
  EXPECT_EQ(p("h -> q <-> z0"), Formula::iff(Formula::implies(h, q), z));
  EXPECT_EQ(p("X h & q"), Formula::conj(Formula::next(h), q));
  EXPECT_EQ(p("@z0 h & q"), Formula::conj(Formula::at("z0", h), q));
}

TEST(Parser, Associativity) {
  const Formula h = Formula::prop("h");
  const Formula q = Formula::prop("q");
  const Formula z = Formula::nom("z0");
  EXPECT_EQ(p("h U q U z0"), Formula::until(h, Formula::until(q, z)));
  EXPECT_EQ(p("h -> q -> z0"), Formula::implies(h, Formula::implies(q, z)));
  EXPECT_EQ(p("h <-> q <-> z0"), Formula::iff(Formula::iff(h, q), z));
  EXPECT_EQ(p("h & q & z0"), Formula::conj(Formula::conj(h, q), z));
}

TEST(Parser, PrefixOperators) {
  const Formula h = Formula::prop("h");
  EXPECT_EQ(p("WX G F h"), Formula::weak_next(Formula::globally(Formula::eventually(h))));
  EXPECT_EQ(p("Front Back Left Right h"),
            Formula::along({Direction::Front, Direction::Back, Direction::Left, Direction::Right}, h));
  EXPECT_EQ(p("<Front:2> h"), Formula::some_dir(Direction::Front, 2, h));
  EXPECT_EQ(p("[Left] h"), Formula::all_dir(Direction::Left, std::nullopt, h));
  EXPECT_EQ(p("Left(Right(z0))"), Formula::move(Direction::Left, Formula::move(Direction::Right, Formula::nom("z0"))));
}

TEST(Parser, BindersInBothSpellings) {
  const Formula expected = Formula::bind("w", Formula::next(Formula::at("z0", Formula::nom("w"))));
  EXPECT_EQ(p("\xE2\x86\x93w X @z0 w"), expected);
  EXPECT_EQ(p("down w X @z0 w"), expected);
  // A binder may rebind a declared nominal.
  EXPECT_EQ(p("\xE2\x86\x93z1 z1"), Formula::bind("z1", Formula::nom("z1")));
  // No space needed between a nominal and a following arrow.
  EXPECT_EQ(p("G(@z1\xE2\x86\x93z z)"), Formula::globally(Formula::at("z1", Formula::bind("z", Formula::nom("z")))));
}

TEST(Parser, AppendixStyleStrings) {
  EXPECT_NO_THROW(p("G (@z1 \xE2\x86\x93z2 ((! X 1) | X @z1  (z2 | Back z2)))"));
  EXPECT_NO_THROW(p("G(Left(Right(z0)) <-> Right(Left(z0)))"));
  EXPECT_NO_THROW(p("@z0 ((Front (Front (G h))) U (Right z1))"));
}

TEST(Parser, Errors) {
  EXPECT_THROW(p(""), ParseError);
  EXPECT_THROW(p("h &"), ParseError);
  EXPECT_THROW(p("(h"), ParseError);
  EXPECT_THROW(p("h q"), ParseError);
  EXPECT_THROW(p("2"), ParseError);
  EXPECT_THROW(p("<Up> h"), ParseError);
  EXPECT_THROW(p("<Front:> h"), ParseError);
  EXPECT_THROW(p("@h q"), ParseError);      // h is not a nominal
  EXPECT_THROW(p("down h q"), ParseError);  // propositions cannot be bound
  EXPECT_THROW(p("h $ q"), ParseError);
  EXPECT_EQ(error_offset("h & unknown"), 4u);
  EXPECT_EQ(error_offset("h $"), 2u);
  EXPECT_EQ(error_offset("(h"), 2u);
}

TEST(Parser, UndeclaredIdentifiersAreErrors) {
  try {
    p("G nope");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("undeclared identifier 'nope'"), std::string::npos);
    EXPECT_EQ(e.offset(), 2u);
  }
}

TEST(Parser, DeclaredNamesAreChecked) {
  EXPECT_THROW(parse("1", {"X"}, {}), ValidationError);
  EXPECT_THROW(parse("1", {}, {"__v"}), ValidationError);
  EXPECT_THROW(parse("1", {"a"}, {"a"}), ValidationError);
  EXPECT_THROW(parse("1", {"9a"}, {}), ValidationError);
  EXPECT_NO_THROW(parse("1", {"_h"}, {"z_1"}));
}

TEST(Parser, RenderRoundTripsRandomFormulas) {
  oracle::FormulaGen gen({"h", "q"}, {"z0", "z1"}, {"w", "z2"}, 17);
  for (int i = 0; i < 2000; ++i) {
    const Formula f = gen(1 + i % 15);
    const std::string text = render(f);
    ASSERT_EQ(p(text), f) << text;
  }
}
