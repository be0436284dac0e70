#include <gtest/gtest.h>

#include "kvf/closure.hpp"
#include "kvf/errors.hpp"
#include "support.hpp"

using namespace kvf;
namespace kt = kvf::testing;

namespace {

KnowledgeBase example_kb(Regime r = Regime::Full) {
  KnowledgeBase kb(Signature::with_agent_count({}, {"a", "b", "c", "d"}, 1), r);
  auto& al = kb.at(AgentId{0});
  al.kv_pos.insert(kb.sig.var("a"));
  al.kf_pos.insert({VarSet{kb.sig.var("b")}, kb.sig.var("c")});
  return kb;
}

const Regime kRegimes[] = {Regime::Full, Regime::Minimal, Regime::Intermediate, Regime::Lattice};

}  // namespace

TEST(Closure, Examples) {
  auto kb = example_kb();
  const auto& sig = kb.sig;
  EXPECT_EQ(sig.format(armstrong_closure(kb, AgentId{0}, sig.var_set({"b"}))), "{a, b, c}");

  KnowledgeBase empty(sig, Regime::Intermediate);
  EXPECT_EQ(armstrong_closure(empty, AgentId{0}, sig.var_set({"b", "d"})), sig.var_set({"b", "d"}));

  KnowledgeBase chain(sig, Regime::Lattice);
  chain.at(AgentId{0}).kf_pos = {{sig.var_set({"a"}), sig.var("b")}, {sig.var_set({"b"}), sig.var("c")}};
  EXPECT_EQ(armstrong_closure(chain, AgentId{0}, sig.var_set({"a"})), sig.var_set({"a", "b", "c"}));
}

TEST(Closure, MinimalReadsUnaryAtomsBothWays) {
  auto kb = example_kb(Regime::Minimal);
  const auto& sig = kb.sig;
  EXPECT_EQ(armstrong_closure(kb, AgentId{0}, sig.var_set({"c"})), sig.var_set({"b", "c"}));
}

TEST(Closure, MatchesNaiveOracle) {
  kt::Rng rng(12);
  for (std::size_t q = 1; q <= 6; ++q) {
    auto sig = kt::make_sig(q, 1);
    for (auto r : kRegimes) {
      for (int i = 0; i < 150; ++i) {
        auto kb = kt::random_kb(sig, r, rng, 8);
        for (int k = 0; k < 8; ++k) {
          VarSet c = kt::random_subset(rng, sig.all_vars(), 0.3);
          ASSERT_EQ(armstrong_closure(kb, AgentId{0}, c), kt::naive_closure(kb, AgentId{0}, c));
        }
      }
    }
  }
}

TEST(Closure, ClosureLaws) {
  kt::Rng rng(13);
  auto sig = kt::make_sig(5, 1);
  for (auto r : kRegimes) {
    for (int i = 0; i < 200; ++i) {
      auto kb = kt::random_kb(sig, r, rng, 8);
      VarSet c = kt::random_subset(rng, sig.all_vars(), 0.3);
      VarSet d = c | kt::random_subset(rng, sig.all_vars(), 0.3);
      VarSet cc = armstrong_closure(kb, AgentId{0}, c);
      EXPECT_TRUE(c.subset_of(cc));
      EXPECT_EQ(armstrong_closure(kb, AgentId{0}, cc), cc);
      EXPECT_TRUE(cc.subset_of(armstrong_closure(kb, AgentId{0}, d)));
      if (r == Regime::Full) EXPECT_TRUE(kb.at(AgentId{0}).kv_pos.subset_of(cc));
    }
  }
}

TEST(ClosedSets, ExampleFamily) {
  auto kb = example_kb();
  auto fam = closed_set_family(kb, AgentId{0});
  const auto& sig = kb.sig;
  for (auto names : std::vector<std::vector<std::string>>{{"a"}, {"a", "b", "c"}, {"a", "d"}, {"a", "b", "c", "d"}}) {
    EXPECT_NE(std::find(fam.members.begin(), fam.members.end(), sig.var_set(names)), fam.members.end());
  }
  EXPECT_EQ(fam.members.size(), 6u);

  KnowledgeBase abc(Signature::with_agent_count({}, {"a", "b", "c"}, 1));
  abc.at(AgentId{0}).kv_pos.insert(abc.sig.var("a"));
  abc.at(AgentId{0}).kf_pos.insert({VarSet{abc.sig.var("b")}, abc.sig.var("c")});
  EXPECT_EQ(closed_set_family(abc, AgentId{0}).members.size(), 3u);
}

TEST(ClosedSets, IntermediateAddsKnownValues) {
  auto sig = Signature::with_agent_count({}, {"a", "b", "c"}, 1);
  KnowledgeBase empty(sig, Regime::Intermediate);
  EXPECT_EQ(closed_set_family(empty, AgentId{0}).members.size(), 8u);
  EXPECT_EQ(closed_set_family(empty, AgentId{0}).members.front(), VarSet{});

  KnowledgeBase kv(sig, Regime::Intermediate);
  kv.at(AgentId{0}).kv_pos.insert(sig.var("a"));
  kv.at(AgentId{0}).kf_pos.insert({VarSet{sig.var("a")}, sig.var("b")});
  auto fam = closed_set_family(kv, AgentId{0});
  EXPECT_NE(std::find(fam.members.begin(), fam.members.end(), VarSet{sig.var("a")}), fam.members.end());
  ASSERT_TRUE(fam.kv_member);
  EXPECT_EQ(*fam.kv_member, VarSet{sig.var("a")});
}

TEST(ClosedSets, Budget) {
  auto sig = kt::make_sig(8, 1);
  KnowledgeBase kb(sig);
  EXPECT_THROW(closed_set_family(kb, AgentId{0}, 6), BudgetExceeded);
}

TEST(Lattice, Examples) {
  auto sig = Signature::with_agent_count({}, {"a", "b", "c"}, 1);
  KnowledgeBase kb(sig, Regime::Lattice);
  kb.at(AgentId{0}).kf_pos.insert({VarSet{sig.var("a")}, sig.var("b")});
  auto al = build_lattice(kb, AgentId{0});
  const auto& els = al.lattice.elements();
  VarSet ha = els[al.hat[sig.var("a").index]], hb = els[al.hat[sig.var("b").index]];
  EXPECT_EQ(ha, sig.var_set({"a", "b"}));
  EXPECT_EQ(hb, sig.var_set({"b"}));
  EXPECT_TRUE(DependencyLattice::leq(hb, ha));
  VarSet hc = els[al.hat[sig.var("c").index]];
  EXPECT_EQ(al.lattice.join(ha, hc), armstrong_closure(kb, AgentId{0}, sig.var_set({"a", "c"})));

  KnowledgeBase empty(sig, Regime::Lattice);
  auto pl = build_lattice(empty, AgentId{0});
  EXPECT_EQ(pl.lattice.size(), 8u);
  EXPECT_EQ(pl.lattice.bottom(), VarSet{});
}

TEST(Lattice, OrderMatchesClosureMembership) {
  kt::Rng rng(14);
  auto sig = kt::make_sig(4, 1);
  for (int i = 0; i < 300; ++i) {
    auto kb = kt::random_kb(sig, Regime::Lattice, rng, 8);
    auto al = build_lattice(kb, AgentId{0});
    const auto& els = al.lattice.elements();
    for (std::uint64_t bits = 0; bits < 16; ++bits) {
      VarSet c(bits);
      if (c.size() > 3) continue;
      VarSet join = al.lattice.bottom();
      for (Var v : c) join = al.lattice.join(join, els[al.hat[v.index]]);
      VarSet cl = armstrong_closure(kb, AgentId{0}, c);
      for (Var d : sig.all_vars()) {
        ASSERT_EQ(DependencyLattice::leq(els[al.hat[d.index]], join), cl.contains(d));
      }
    }
  }
}

TEST(ValueMove, Examples) {
  auto sig = Signature::with_agent_count({}, {"a", "b"}, 1);
  KnowledgeBase kb(sig, Regime::Lattice);
  kb.at(AgentId{0}).kv_pos.insert(sig.var("a"));
  EXPECT_EQ(value_move(kb, AgentId{0}, VarSet{}), sig.var_set({"b"}));
  kb.at(AgentId{0}).kv_pos = sig.all_vars();
  for (std::uint64_t bits = 0; bits < 4; ++bits) EXPECT_EQ(value_move(kb, AgentId{0}, VarSet(bits)), VarSet(bits));
}

TEST(ValueMove, InvolutionDeterminedByKnownValues) {
  kt::Rng rng(15);
  auto sig = kt::make_sig(5, 1);
  for (int i = 0; i < 200; ++i) {
    auto kb = kt::random_kb(sig, Regime::Lattice, rng, 8);
    KnowledgeBase bare(sig, Regime::Lattice);
    bare.at(AgentId{0}).kv_pos = kb.at(AgentId{0}).kv_pos;
    VarSet s = kt::random_subset(rng, sig.all_vars());
    EXPECT_EQ(value_move(kb, AgentId{0}, value_move(kb, AgentId{0}, s)), s);
    EXPECT_EQ(value_move(kb, AgentId{0}, s), value_move(bare, AgentId{0}, s));
  }
}
