#include <random>
#include <string>

#include "doctest.h"
#include "rapn/decide.hpp"
#include "rapn/reductions.hpp"
#include "rapn/structure.hpp"
#include "support/fixtures.hpp"
#include "support/random_nets.hpp"

using namespace rapn;
using namespace rapn::fixtures;

namespace {

bool all_weights_at_most(const Net& net, uint64_t bound) {
  for (const auto& t : net.transitions) {
    for (const auto& [p, w] : t.pre)
      if (w > bound) return false;
    for (const auto& [p, w] : t.post)
      if (w > bound) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("unary rewriting of one weighted transition") {
  NetBuilder nb("w42");
  const PlaceId p = nb.add_place("p");
  const PlaceId q = nb.add_place("q");
  const TransitionId t = nb.add_transition("t");
  nb.add_pre(t, p, Nat(4));
  nb.add_post(t, q, Nat(2));
  const Net net = nb.build_net();
  const Instance inst =
      make_instance(net, marking_of({4, 0}), marking_of({0, 2}), Objective::cover);

  const UnaryReduction red = binary_to_unary(inst);
  const Net& out = std::get<Net>(red.instance.net);

  SUBCASE("two halving steps, the key, one doubling step") {
    CHECK(out.place_count() == 5);
    CHECK(out.transition_count() == 4);
    CHECK(all_weights_at_most(out, 2));
  }
  SUBCASE("the key keeps the original name") {
    REQUIRE(red.key_of.size() == 1);
    CHECK(out.transitions[red.key_of[t]].name == "t");
  }
  SUBCASE("markings sit on the original places") {
    CHECK(red.instance.initial.v[out.place_index("p")] == Tokens(Nat(4)));
    CHECK(red.instance.initial.norm() == 4);
    CHECK(red.instance.target.v[out.place_index("q")] == Tokens(Nat(2)));
    CHECK(red.instance.target.norm() == 2);
  }
  SUBCASE("cover verdicts carry over") {
    CHECK(decide_cover_rapn(inst).answer == Answer::yes);
    CHECK(decide_cover_rapn(red.instance).answer == Answer::yes);

    const Instance short_inst =
        make_instance(net, marking_of({3, 0}), marking_of({0, 1}), Objective::cover);
    const UnaryReduction short_red = binary_to_unary(short_inst);
    CHECK(decide_cover_rapn(short_inst).answer == Answer::no);
    CHECK(decide_cover_rapn(short_red.instance).answer == Answer::no);
  }
}

TEST_CASE("a weight that is not a power of two taps two chain stages") {
  NetBuilder nb("w5");
  const PlaceId a = nb.add_place("a");
  const PlaceId b = nb.add_place("b");
  const TransitionId t = nb.add_transition("t");
  nb.add_pre(t, a, Nat(5));
  nb.add_post(t, b);
  const Net net = nb.build_net();
  const Instance inst =
      make_instance(net, marking_of({5, 0}), marking_of({0, 1}), Objective::cover);

  const UnaryReduction red = binary_to_unary(inst);
  const Net& out = std::get<Net>(red.instance.net);
  const Transition& key = out.transitions[red.key_of[t]];

  // The 1-component is drawn straight from a, the 4-component from the chain.
  const Nat* direct = key.pre_weight(out.place_index("a"));
  REQUIRE(direct != nullptr);
  CHECK(*direct == 1);
  CHECK(key.pre.size() == 2);
  CHECK(all_weights_at_most(out, 2));

  CHECK(decide_cover_rapn(red.instance).answer == Answer::yes);
  const Instance short_inst =
      make_instance(net, marking_of({4, 0}), marking_of({0, 1}), Objective::cover);
  CHECK(decide_cover_rapn(binary_to_unary(short_inst).instance).answer == Answer::no);
}

TEST_CASE("an all-unary net passes through isomorphically") {
  NetBuilder nb("chainy");
  const PlaceId a = nb.add_place("a");
  const PlaceId b = nb.add_place("b");
  const PlaceId c = nb.add_place("c");
  const TransitionId t1 = nb.add_transition("t1");
  nb.add_pre(t1, a);
  nb.add_post(t1, b);
  const TransitionId t2 = nb.add_transition("t2");
  nb.add_pre(t2, b);
  nb.add_reset(t2, a);
  nb.add_post(t2, c);
  const Net net = nb.build_net();
  const Instance inst =
      make_instance(net, marking_of({1, 0, 0}), marking_of({0, 0, 1}), Objective::cover);

  const UnaryReduction red = binary_to_unary(inst);
  const Net& out = std::get<Net>(red.instance.net);
  REQUIRE(out.place_count() == net.place_count());
  REQUIRE(out.transition_count() == net.transition_count());
  for (size_t i = 0; i < net.transition_count(); ++i) {
    CHECK(out.transitions[i].name == net.transitions[i].name);
    CHECK(out.transitions[i].pre == net.transitions[i].pre);
    CHECK(out.transitions[i].post == net.transitions[i].post);
    CHECK(out.transitions[i].resets == net.transitions[i].resets);
  }
}

TEST_CASE("resets spread onto the chains of gadgets touching the reset place") {
  NetBuilder nb("spread");
  const PlaceId a = nb.add_place("a");
  const PlaceId b = nb.add_place("b");
  const TransitionId t1 = nb.add_transition("t1");
  nb.add_pre(t1, a, Nat(4));
  nb.add_post(t1, b);
  const TransitionId t2 = nb.add_transition("t2");
  nb.add_pre(t2, b);
  nb.add_reset(t2, a);
  const Net net = nb.build_net();
  const Instance inst =
      make_instance(net, marking_of({4, 0}), marking_of({0, 1}), Objective::cover);

  const UnaryReduction red = binary_to_unary(inst);
  const Net& out = std::get<Net>(red.instance.net);
  const Transition& key2 = out.transitions[red.key_of[t2]];

  // t2 resets a, so its key also wipes t1's staging places for a: tokens
  // parked mid-chain are a-tokens in flight and must not survive the reset.
  REQUIRE(key2.resets.size() == 3);
  CHECK(std::find(key2.resets.begin(), key2.resets.end(), out.place_index("a")) !=
        key2.resets.end());
  int chain_hits = 0;
  for (PlaceId r : key2.resets)
    if (out.places[r].rfind("t1#in#a#", 0) == 0) ++chain_hits;
  CHECK(chain_hits == 2);
}

TEST_CASE("unary rewriting checks its preconditions") {
  const Net net = split_join_net();
  CHECK_THROWS_AS(binary_to_unary(make_instance(net, marking_of({2, 0, 0, 0}),
                                                marking_of({0, 0, 0, 1}), Objective::reach)),
                  PreconditionError);

  NetBuilder loop("loop");
  const PlaceId p = loop.add_place("p");
  const TransitionId t = loop.add_transition("t");
  loop.add_pre(t, p);
  loop.add_post(t, p);
  CHECK_THROWS_AS(binary_to_unary(make_instance(loop.build_net(), marking_of({1}),
                                                marking_of({1}), Objective::cover)),
                  PreconditionError);

  NetBuilder zt("zt");
  zt.add_place("p");
  zt.add_ztest(zt.add_transition("t"), 0);
  CHECK_THROWS_AS(binary_to_unary(make_instance(zt.build_zero_test_net(), marking_of({0}),
                                                marking_of({0}), Objective::cover)),
                  PreconditionError);
}

TEST_CASE("unary rewriting agrees with the cover decider on random instances") {
  std::mt19937 rng(1600);
  int compared = 0;
  for (int round = 0; round < 40; ++round) {
    const Instance inst = testgen::random_binary_cover_instance(rng);
    const Verdict orig = decide_cover_rapn(inst, {}, 100000);
    const Verdict red = decide_cover_rapn(binary_to_unary(inst).instance, {}, 400000);
    if (orig.answer == Answer::exhausted || red.answer == Answer::exhausted) continue;
    CHECK(orig.answer == red.answer);
    ++compared;
  }
  CHECK(compared >= 30);
}

TEST_CASE("acyclifying splits every transition into a three-step gadget") {
  NetBuilder nb("selfloop");
  const PlaceId a = nb.add_place("a");
  const PlaceId b = nb.add_place("b");
  const TransitionId t = nb.add_transition("t");
  nb.add_pre(t, a);
  nb.add_post(t, a);
  nb.add_post(t, b, Nat(2));
  nb.add_ztest(t, b);
  const ZeroTestNet net = nb.build_zero_test_net();
  const Instance inst =
      make_instance(net, marking_of({1, 0}), marking_of({1, 2}), Objective::reach);

  const Instance out_inst = acyclify_zero_tests(inst);
  const ZeroTestNet& out = std::get<ZeroTestNet>(out_inst.net);

  SUBCASE("counts: two control places and three transitions per original") {
    CHECK(out.base.place_count() == 4);
    CHECK(out.base.transition_count() == 3);
    // The documented 3-transition 2-place example scales the same way.
    NetBuilder big("three");
    big.add_place("p");
    big.add_place("q");
    big.add_pre(big.add_transition("t1"), 0);
    big.add_post(big.add_transition("t2"), 1);
    big.add_ztest(big.add_transition("t3"), 0);
    const Instance big_out = acyclify_zero_tests(make_instance(
        big.build_zero_test_net(), marking_of({1, 0}), marking_of({0, 0}), Objective::reach));
    CHECK(std::get<ZeroTestNet>(big_out.net).base.transition_count() == 9);
    CHECK(std::get<ZeroTestNet>(big_out.net).base.place_count() == 8);
  }
  SUBCASE("the gadget wiring follows the drawn shape") {
    const Net& base = out.base;
    const TransitionId sim = base.transition_index("t#sim");
    const TransitionId con = base.transition_index("t#con");
    const TransitionId pro = base.transition_index("t#pro");
    REQUIRE(sim >= 0);
    REQUIRE(con >= 0);
    REQUIRE(pro >= 0);
    const PlaceId ct = base.place_index("t#c");
    const PlaceId pt = base.place_index("t#p");

    CHECK(base.transitions[sim].pre.empty());
    CHECK(base.transitions[sim].post ==
          ArcList{{ct, Nat(1)}, {pt, Nat(1)}});
    CHECK(out.ztests[sim] == std::vector<PlaceId>{ct, pt});

    CHECK(base.transitions[con].pre == ArcList{{a, Nat(1)}, {ct, Nat(1)}});
    CHECK(base.transitions[con].post.empty());
    CHECK(out.ztests[con] == std::vector<PlaceId>{b});

    CHECK(base.transitions[pro].pre == ArcList{{pt, Nat(1)}});
    CHECK(base.transitions[pro].post == ArcList{{a, Nat(1)}, {b, Nat(2)}});
    CHECK(out.ztests[pro] == std::vector<PlaceId>{ct});
  }
  SUBCASE("the output is acyclic on ordinary arcs even though the input loops") {
    const StructureReport in_report =
        validate_structure(net, StructureClaim::make_plain());
    CHECK_FALSE(in_report.acyclic);
    const StructureReport out_report =
        validate_structure(out, StructureClaim::make_acyclic());
    CHECK(out_report.acyclic);
  }
  SUBCASE("markings are padded with zeroes on the control places") {
    CHECK(out_inst.initial.size() == 4);
    CHECK(out_inst.initial.norm() == 1);
    CHECK(out_inst.target.norm() == 3);
  }
  SUBCASE("the reach verdict carries over with tripled run length") {
    SearchBudget budget;
    budget.max_states = 50000;
    const Verdict orig = oracle_search(inst, budget);
    const Verdict red = oracle_search(out_inst, budget);
    REQUIRE(orig.answer == Answer::yes);
    REQUIRE(red.answer == Answer::yes);
    CHECK(red.witness->size() == 3 * orig.witness->size());
  }
}

TEST_CASE("acyclifying requires a reach objective on a zero-test net") {
  NetBuilder nb("zt");
  nb.add_place("p");
  nb.add_ztest(nb.add_transition("t"), 0);
  const ZeroTestNet net = nb.build_zero_test_net();
  CHECK_THROWS_AS(
      acyclify_zero_tests(make_instance(net, marking_of({0}), marking_of({0}),
                                        Objective::cover)),
      PreconditionError);
  CHECK_THROWS_AS(
      acyclify_zero_tests(make_instance(split_join_net(), marking_of({2, 0, 0, 0}),
                                        marking_of({0, 0, 0, 1}), Objective::reach)),
      PreconditionError);
}

TEST_CASE("acyclifying preserves oracle verdicts on random cyclic inputs") {
  std::mt19937 rng(59);
  SearchBudget orig_budget;
  orig_budget.max_steps = 14;
  orig_budget.max_states = 20000;
  SearchBudget red_budget;
  red_budget.max_steps = 42;
  red_budget.max_states = 120000;

  int compared = 0;
  for (int round = 0; round < 60 && compared < 25; ++round) {
    const Instance inst = testgen::random_zero_test_instance(rng, false);
    const Verdict orig = oracle_search(inst, orig_budget);
    if (orig.answer == Answer::exhausted) continue;
    const Verdict red = oracle_search(acyclify_zero_tests(inst), red_budget);
    if (red.answer == Answer::exhausted) continue;
    CHECK(orig.answer == red.answer);
    if (orig.answer == Answer::yes)
      CHECK(red.witness->size() == 3 * orig.witness->size());
    ++compared;
  }
  CHECK(compared >= 25);
}

TEST_CASE("replacing zero tests by resets doubles the places") {
  NetBuilder nb("gate");
  const PlaceId a = nb.add_place("a");
  const PlaceId b = nb.add_place("b");
  const TransitionId t = nb.add_transition("t");
  nb.add_pre(t, a);
  nb.add_ztest(t, b);
  const ZeroTestNet net = nb.build_zero_test_net();
  const Instance inst =
      make_instance(net, marking_of({1, 0}), marking_of({0, 0}), Objective::reach);

  const Instance out_inst = zero_tests_to_resets(inst);
  const Net& out = std::get<Net>(out_inst.net);

  SUBCASE("copies mirror the original arcs") {
    REQUIRE(out.place_count() == 4);
    CHECK(out.place_index("a#copy") >= 0);
    CHECK(out.place_index("b#copy") >= 0);
    const Transition& tr = out.transitions[0];
    REQUIRE(tr.pre.size() == 2);
    CHECK(tr.pre[0].first == a);
    CHECK(tr.pre[1].first == out.place_index("a#copy"));
  }
  SUBCASE("the tested place becomes a reset of the original only") {
    const Transition& tr = out.transitions[0];
    CHECK(tr.resets == std::vector<PlaceId>{b});
  }
  SUBCASE("markings are duplicated onto the copies") {
    CHECK(out_inst.initial.size() == 4);
    CHECK(out_inst.initial.v[a] == Tokens(Nat(1)));
    CHECK(out_inst.initial.v[out.place_index("a#copy")] == Tokens(Nat(1)));
    CHECK(out_inst.initial.norm() == 2);
  }
  SUBCASE("verdicts and witness lengths carry over") {
    SearchBudget budget;
    budget.max_states = 50000;
    const Verdict orig = oracle_search(inst, budget);
    const Verdict red = oracle_search(out_inst, budget);
    CHECK(orig.answer == red.answer);
    REQUIRE(orig.answer == Answer::yes);
    CHECK(red.witness->size() == orig.witness->size());
  }
}

TEST_CASE("the reset rewriting drops transitions that test a place they consume from") {
  // t needs p empty and a token on p at once, so it can never fire. Its reset
  // twin could fire from p=1 (consume to zero, reset as a no-op) and reach
  // q=1, flipping the verdict; the rewriting has to remove t instead.
  NetBuilder nb("blocked");
  const PlaceId p = nb.add_place("p");
  const PlaceId q = nb.add_place("q");
  const TransitionId t = nb.add_transition("t");
  nb.add_pre(t, p);
  nb.add_ztest(t, p);
  nb.add_post(t, q);
  const Instance inst = make_instance(nb.build_zero_test_net(), marking_of({1, 0}),
                                      marking_of({0, 1}), Objective::reach);

  const Instance red = zero_tests_to_resets(inst);
  CHECK(std::get<Net>(red.net).transition_count() == 0);

  SearchBudget budget;
  budget.max_states = 1000;
  CHECK(oracle_search(inst, budget).answer == Answer::no);
  CHECK(oracle_search(red, budget).answer == Answer::no);
}

TEST_CASE("the reset rewriting requires an acyclic reach instance") {
  NetBuilder nb("cyclic");
  const PlaceId p = nb.add_place("p");
  const TransitionId t = nb.add_transition("t");
  nb.add_pre(t, p);
  nb.add_post(t, p);
  nb.add_ztest(t, p);
  const ZeroTestNet net = nb.build_zero_test_net();
  CHECK_THROWS_AS(zero_tests_to_resets(make_instance(net, marking_of({0}), marking_of({0}),
                                                     Objective::reach)),
                  PreconditionError);

  NetBuilder ok("ok");
  ok.add_place("p");
  ok.add_ztest(ok.add_transition("t"), 0);
  CHECK_THROWS_AS(
      zero_tests_to_resets(make_instance(ok.build_zero_test_net(), marking_of({0}),
                                         marking_of({0}), Objective::cover)),
      PreconditionError);
}

TEST_CASE("the reset rewriting preserves oracle verdicts on random acyclic inputs") {
  std::mt19937 rng(60);
  SearchBudget budget;
  budget.max_states = 60000;

  int compared = 0;
  for (int round = 0; round < 50 && compared < 30; ++round) {
    const Instance inst = testgen::random_zero_test_instance(rng, true);
    const Verdict orig = oracle_search(inst, budget);
    const Verdict red = oracle_search(zero_tests_to_resets(inst), budget);
    if (orig.answer == Answer::exhausted || red.answer == Answer::exhausted) continue;
    CHECK(orig.answer == red.answer);
    if (orig.answer == Answer::yes && red.answer == Answer::yes)
      CHECK(red.witness->size() == orig.witness->size());
    ++compared;
  }
  CHECK(compared >= 30);
}
