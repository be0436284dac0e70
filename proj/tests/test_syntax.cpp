#include <gtest/gtest.h>

#include "kvf/errors.hpp"
#include "kvf/syntax.hpp"
#include "support.hpp"

using namespace kvf;
using kvf::testing::make_sig;

namespace {

Signature abcd() { return Signature::with_agent_count({"p"}, {"a", "b", "c", "d"}, 2); }

}  // namespace

TEST(Parse, KfWithSetArgument) {
  auto sig = abcd();
  EXPECT_EQ(parse_formula("Kf({c}, d)", sig), Formula::kf(AgentId{0}, VarSet{sig.var("c")}, sig.var("d")));
}

TEST(Parse, ConjunctionOfAtoms) {
  auto sig = abcd();
  auto f = parse_formula("Kv(a) & Kf({b}, c)", sig);
  EXPECT_EQ(f, Formula::conj(Formula::kv(AgentId{0}, sig.var("a")),
                             Formula::kf(AgentId{0}, VarSet{sig.var("b")}, sig.var("c"))));
}

TEST(Parse, EmptyArgumentSet) {
  auto sig = abcd();
  EXPECT_EQ(parse_formula("~Kf_2({}, d)", sig), Formula::negate(Formula::kf(AgentId{1}, VarSet{}, sig.var("d"))));
}

TEST(Parse, UnaryAbbreviation) {
  auto sig = abcd();
  EXPECT_EQ(parse_formula("Kf(c, d)", sig), parse_formula("Kf({c}, d)", sig));
}

TEST(Parse, DerivedConnectivesExpand) {
  auto sig = abcd();
  auto p = Formula::prop(PropId{0});
  auto kv = Formula::kv(AgentId{0}, sig.var("a"));
  EXPECT_EQ(parse_formula("(p -> Kv(a))", sig), Formula::negate(Formula::conj(p, Formula::negate(kv))));
  EXPECT_EQ(parse_formula("p | Kv(a)", sig),
            Formula::negate(Formula::conj(Formula::negate(p), Formula::negate(kv))));
  EXPECT_EQ(parse_formula("F", sig), Formula::negate(Formula::top()));
  EXPECT_EQ(parse_formula("K_2 p", sig), Formula::know(AgentId{1}, p));
}

TEST(Parse, ArgumentOrderIsCanonical) {
  auto sig = abcd();
  EXPECT_EQ(parse_formula("Kf({c, a}, d)", sig), parse_formula("Kf({a, c}, d)", sig));
}

TEST(Parse, Errors) {
  auto sig = abcd();
  EXPECT_THROW(parse_formula("Kf({c, c}, d)", sig), DuplicateArgument);
  EXPECT_THROW(parse_formula("Kv(z)", sig), UnknownName);
  EXPECT_THROW(parse_formula("Kv_3(a)", sig), UnknownName);
  EXPECT_THROW(parse_formula("Kv(a) &", sig), SyntaxError);
  EXPECT_THROW(parse_formula("(Kv(a) & Kv(b) & Kv(c))", sig), SyntaxError);
  EXPECT_THROW(parse_formula("Kf({a}, d", sig), SyntaxError);
  try {
    parse_formula("Kv(a) $", sig);
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.position(), 6u);
  }
}

TEST(Print, CanonicalForms) {
  auto sig = abcd();
  EXPECT_EQ(print_formula(Formula::kf(AgentId{0}, VarSet{sig.var("b")}, sig.var("c")), sig), "Kf_1({b}, c)");
  EXPECT_EQ(print_formula(Formula::negate(Formula::top()), sig), "~T");
  EXPECT_EQ(print_formula(Formula::conj(Formula::kv(AgentId{0}, sig.var("a")),
                                        Formula::negate(Formula::kv(AgentId{0}, sig.var("b")))),
                          sig),
            "(Kv_1(a) & ~Kv_1(b))");
}

TEST(RoundTrip, RandomAsts) {
  kvf::testing::Rng rng(11);
  for (std::size_t vars : {1, 3, 5}) {
    auto sig = make_sig(vars, 3, 2);
    for (int i = 0; i < 2000; ++i) {
      auto f = kvf::testing::random_formula(sig, rng, 5);
      auto text = print_formula(f, sig);
      ASSERT_EQ(parse_formula(text, sig), f) << text;
      ASSERT_EQ(print_formula(parse_formula(text, sig), sig), text);
    }
  }
}

TEST(InferSignature, CollectsNames) {
  auto sig = infer_signature({"Kv_2(d) -> p", "Kf({c, a}, d)"});
  EXPECT_EQ(sig.vars(), (std::vector<std::string>{"a", "c", "d"}));
  EXPECT_EQ(sig.props(), (std::vector<std::string>{"p"}));
  EXPECT_EQ(sig.agent_count(), 2u);
}

TEST(Formula, AgentSpan) {
  auto sig = abcd();
  EXPECT_EQ(parse_formula("T", sig).agent_span(), 0u);
  EXPECT_EQ(parse_formula("K_1 Kv_2(a)", sig).agent_span(), 2u);
}
