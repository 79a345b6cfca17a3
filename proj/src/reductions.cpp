#include "rapn/reductions.hpp"

#include <algorithm>

#include "rapn/structure.hpp"

namespace rapn {

namespace {

int msb(const Nat& w) {
  // w >= 1; index of the highest set bit.
  return static_cast<int>(boost::multiprecision::msb(w));
}

Marking extend_zero(const Marking& m, size_t places) {
  Marking out = m;
  out.v.resize(places);
  return out;
}

const ZeroTestNet& require_zero_test_net(const Instance& inst, const char* who) {
  if (!has_zero_tests(inst))
    throw PreconditionError(std::string(who) + ": input must be a zero-test net");
  return std::get<ZeroTestNet>(inst.net);
}

}  // namespace

UnaryReduction binary_to_unary(const Instance& inst) {
  if (inst.objective != Objective::cover)
    throw PreconditionError("unary rewriting is cover-preserving only; objective must be cover");
  if (has_zero_tests(inst))
    throw PreconditionError("unary rewriting expects a reset net, not a zero-test net");
  const Net& base = std::get<Net>(inst.net);
  if (!validate_structure(base, StructureClaim::make_acyclic()).acyclic)
    throw PreconditionError("unary rewriting requires an acyclic net");

  NetBuilder nb(base.name + "#unary");
  for (const auto& p : base.places) nb.add_place(p);

  UnaryReduction out;
  out.key_of.resize(base.transitions.size());

  // Chain places of each gadget, for reset propagation.
  std::vector<std::vector<PlaceId>> gadget_places(base.transitions.size());

  for (size_t ti = 0; ti < base.transitions.size(); ++ti) {
    const Transition& tr = base.transitions[ti];
    ArcList key_pre, key_post;

    // Input side: a halving chain per arc; stage s holds 2^s of the
    // original tokens. The key takes one token from the stage of every set
    // bit, and takes bit zero straight from the place.
    for (const auto& [p, w] : tr.pre) {
      if (bit_test(w, 0)) key_pre.emplace_back(p, Nat(1));
      const int top = msb(w);
      PlaceId prev = p;
      for (int s = 1; s <= top; ++s) {
        const std::string stem = tr.name + "#in#" + base.places[p] + "#" + std::to_string(s);
        PlaceId stage = nb.add_place(stem);
        gadget_places[ti].push_back(stage);
        TransitionId halve = nb.add_transition(tr.name + "#halve#" + base.places[p] + "#" +
                                               std::to_string(s));
        nb.add_pre(halve, prev, Nat(2));
        nb.add_post(halve, stage);
        if (bit_test(w, unsigned(s))) key_pre.emplace_back(stage, Nat(1));
        prev = stage;
      }
    }

    TransitionId key = nb.add_transition(tr.name);
    out.key_of[ti] = key;

    // Output side: the key drops one token at the stage of every set bit;
    // doubling steps cascade them down to the place.
    for (const auto& [q, w] : tr.post) {
      if (bit_test(w, 0)) key_post.emplace_back(q, Nat(1));
      const int top = msb(w);
      std::vector<PlaceId> stages(top + 1);
      stages[0] = q;
      for (int s = 1; s <= top; ++s) {
        stages[s] = nb.add_place(tr.name + "#out#" + base.places[q] + "#" + std::to_string(s));
        gadget_places[ti].push_back(stages[s]);
        if (bit_test(w, unsigned(s))) key_post.emplace_back(stages[s], Nat(1));
      }
      for (int s = 1; s <= top; ++s) {
        TransitionId dbl = nb.add_transition(tr.name + "#double#" + base.places[q] + "#" +
                                             std::to_string(s));
        nb.add_pre(dbl, stages[s]);
        nb.add_post(dbl, stages[s - 1], Nat(2));
      }
    }

    for (const auto& [p, w] : key_pre) nb.add_pre(key, p, w);
    for (const auto& [q, w] : key_post) nb.add_post(key, q, w);
  }

  // Resets: originals as before; on top of that, a reset of p wipes the
  // chains of every gadget that moves tokens into or out of p, since their
  // in-flight tokens stand for tokens of p.
  for (size_t ti = 0; ti < base.transitions.size(); ++ti) {
    const Transition& tr = base.transitions[ti];
    if (tr.resets.empty()) continue;
    const TransitionId key = out.key_of[ti];
    std::vector<PlaceId> resets(tr.resets.begin(), tr.resets.end());
    for (size_t ui = 0; ui < base.transitions.size(); ++ui) {
      const Transition& other = base.transitions[ui];
      const bool touched = std::any_of(other.pre.begin(), other.pre.end(),
                                       [&](const auto& a) { return tr.resets_place(a.first); }) ||
                           std::any_of(other.post.begin(), other.post.end(),
                                       [&](const auto& a) { return tr.resets_place(a.first); });
      if (touched)
        resets.insert(resets.end(), gadget_places[ui].begin(), gadget_places[ui].end());
    }
    std::sort(resets.begin(), resets.end());
    resets.erase(std::unique(resets.begin(), resets.end()), resets.end());
    for (PlaceId p : resets) nb.add_reset(key, p);
  }

  Net net = nb.build_net();
  const size_t nplaces = net.place_count();
  out.instance = make_instance(std::move(net), extend_zero(inst.initial, nplaces),
                               extend_zero(inst.target, nplaces), Objective::cover);
  return out;
}

Instance acyclify_zero_tests(const Instance& inst) {
  if (inst.objective != Objective::reach)
    throw PreconditionError("the acyclifying split is reach-preserving only; objective must be reach");
  const ZeroTestNet& ztn = require_zero_test_net(inst, "acyclify");
  const Net& base = ztn.base;

  NetBuilder nb(base.name + "#acyclic");
  for (const auto& p : base.places) nb.add_place(p);

  std::vector<PlaceId> ctrl_c(base.transitions.size());
  std::vector<PlaceId> ctrl_p(base.transitions.size());
  for (size_t ti = 0; ti < base.transitions.size(); ++ti) {
    ctrl_c[ti] = nb.add_place(base.transitions[ti].name + "#c");
    ctrl_p[ti] = nb.add_place(base.transitions[ti].name + "#p");
  }

  for (size_t ti = 0; ti < base.transitions.size(); ++ti) {
    const Transition& tr = base.transitions[ti];

    // Choice: grab the one simulation slot. Zero-testing every control
    // place keeps gadgets from overlapping.
    TransitionId sim = nb.add_transition(tr.name + "#sim");
    nb.add_post(sim, ctrl_c[ti]);
    nb.add_post(sim, ctrl_p[ti]);
    for (size_t ui = 0; ui < base.transitions.size(); ++ui) {
      nb.add_ztest(sim, ctrl_c[ui]);
      nb.add_ztest(sim, ctrl_p[ui]);
    }

    TransitionId con = nb.add_transition(tr.name + "#con");
    for (const auto& [p, w] : tr.pre) nb.add_pre(con, p, w);
    nb.add_pre(con, ctrl_c[ti]);
    for (PlaceId p : ztn.ztests[ti]) nb.add_ztest(con, p);

    TransitionId pro = nb.add_transition(tr.name + "#pro");
    nb.add_pre(pro, ctrl_p[ti]);
    nb.add_ztest(pro, ctrl_c[ti]);
    for (const auto& [q, w] : tr.post) nb.add_post(pro, q, w);
  }

  ZeroTestNet net = nb.build_zero_test_net();
  const size_t nplaces = net.base.place_count();
  return make_instance(std::move(net), extend_zero(inst.initial, nplaces),
                       extend_zero(inst.target, nplaces), Objective::reach);
}

Instance zero_tests_to_resets(const Instance& inst) {
  if (inst.objective != Objective::reach)
    throw PreconditionError("the reset rewriting is reach-preserving only; objective must be reach");
  const ZeroTestNet& ztn = require_zero_test_net(inst, "zero_tests_to_resets");
  const Net& base = ztn.base;
  if (!validate_structure(ztn, StructureClaim::make_acyclic()).acyclic)
    throw PreconditionError("the reset rewriting requires an acyclic zero-test net");

  const size_t np = base.place_count();
  NetBuilder nb(base.name + "#resets");
  for (const auto& p : base.places) nb.add_place(p);
  for (const auto& p : base.places) nb.add_place(p + "#copy");
  auto copy_of = [&](PlaceId p) { return static_cast<PlaceId>(p + np); };

  for (size_t ti = 0; ti < base.transitions.size(); ++ti) {
    const Transition& tr = base.transitions[ti];
    // A transition testing a place it consumes from can never fire (the test
    // wants 0 tokens, the arc at least 1); its reset twin could, by consuming
    // the place down to exactly 0 and making the reset a no-op. Drop it.
    const auto& tests = ztn.ztests[ti];
    const bool dead = std::any_of(tests.begin(), tests.end(),
                                  [&](PlaceId p) { return tr.pre_weight(p) != nullptr; });
    if (dead) continue;
    TransitionId t = nb.add_transition(tr.name);
    for (const auto& [p, w] : tr.pre) {
      nb.add_pre(t, p, w);
      nb.add_pre(t, copy_of(p), w);
    }
    for (const auto& [q, w] : tr.post) {
      nb.add_post(t, q, w);
      nb.add_post(t, copy_of(q), w);
    }
    for (PlaceId p : tests) nb.add_reset(t, p);
  }

  Net net = nb.build_net();
  Marking initial = inst.initial, target = inst.target;
  initial.v.reserve(2 * np);
  target.v.reserve(2 * np);
  for (size_t p = 0; p < np; ++p) {
    initial.v.push_back(inst.initial.v[p]);
    target.v.push_back(inst.target.v[p]);
  }
  return make_instance(std::move(net), std::move(initial), std::move(target),
                       Objective::reach);
}

}  // namespace rapn
