#include "rapn/decide.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "rapn/semantics.hpp"
#include "rapn/structure.hpp"

namespace rapn {

namespace {

Nat nat_pow(Nat base, uint64_t exp) {
  Nat r = 1;
  while (exp > 0) {
    if (exp & 1) r *= base;
    base *= base;
    exp >>= 1;
  }
  return r;
}

struct SearchCore {
  struct Meta {
    uint32_t parent;
    TransitionId via;
    uint32_t depth;
  };
  std::unordered_map<std::string, uint32_t> seen;
  std::vector<Meta> meta;
  std::deque<std::pair<uint32_t, Marking>> frontier;
  Nat peak_norm;

  // Returns the state id for fresh markings, -1 for duplicates.
  int64_t push(Marking m, uint32_t parent, TransitionId via, uint32_t depth) {
    auto [it, fresh] = seen.emplace(m.key(), static_cast<uint32_t>(meta.size()));
    if (!fresh) return -1;
    Nat n = m.norm();
    if (n > peak_norm) peak_norm = n;
    meta.push_back({parent, via, depth});
    frontier.emplace_back(it->second, std::move(m));
    return it->second;
  }

  std::vector<TransitionId> witness(uint32_t id) const {
    std::vector<TransitionId> w;
    while (meta[id].depth > 0) {
      w.push_back(meta[id].via);
      id = meta[id].parent;
    }
    std::reverse(w.begin(), w.end());
    return w;
  }
};

const Net& reject_zero_tests(const Instance& inst, const char* who) {
  if (has_zero_tests(inst))
    throw PreconditionError(std::string(who) + ": zero-test nets are not supported here");
  return std::get<Net>(inst.net);
}

}  // namespace

Nat max_production(const Net& net) {
  Nat k = 0;
  for (const auto& t : net.transitions) {
    Nat sum = 0;
    for (const auto& [p, w] : t.post) sum += w;
    if (sum > k) k = sum;
  }
  return k;
}

Nat reach_norm_bound(const Net& net, const Marking& initial) {
  Nat m = norm_of(net) + initial.norm();
  return nat_pow(m, net.transitions.size() + 1);
}

Nat cover_norm_bound(const Net& net, const Marking& initial) {
  Nat k = max_production(net);
  if (k < 1) k = 1;
  return initial.norm() * nat_pow(k, net.places.size());
}

Verdict decide_reach_rawn(const Instance& inst, const StepObserver& observer) {
  const Net& net = reject_zero_tests(inst, "reachability decider");
  if (inst.objective != Objective::reach)
    throw PreconditionError("reachability decider requires a reach objective");
  StructureClaim claim = StructureClaim::make_workflow(0, 0);
  claim.wf = net.workflow ? net.workflow : infer_workflow_places(net);
  if (!claim.wf)
    throw PreconditionError(
        "structural precondition violated: no workflow initial/final places");
  StructureReport rep = validate_structure(net, claim);
  if (!rep.acyclic || !rep.workflow)
    throw PreconditionError(
        "structural precondition violated: net is not an acyclic workflow net");

  const Nat bound = reach_norm_bound(net, inst.initial);
  const auto tcount = static_cast<TransitionId>(net.transitions.size());

  SearchCore core;
  core.push(inst.initial, 0, -1, 0);
  if (inst.initial == inst.target)
    return {Answer::yes, std::vector<TransitionId>{},
            {core.meta.size(), core.peak_norm}};

  while (!core.frontier.empty()) {
    auto [id, m] = std::move(core.frontier.front());
    core.frontier.pop_front();
    uint32_t depth = core.meta[id].depth;
    for (TransitionId t = 0; t < tcount; ++t) {
      if (!is_enabled(net, m, t)) continue;
      Marking next = fire(net, m, t);
      if (observer) observer(m, t, next);
      if (next.norm() > bound)
        throw Error("internal: reachable marking exceeds the workflow norm bound");
      bool hit = next == inst.target;
      int64_t nid = core.push(std::move(next), id, t, depth + 1);
      if (nid < 0) continue;
      if (hit)
        return {Answer::yes, core.witness(static_cast<uint32_t>(nid)),
                {core.meta.size(), core.peak_norm}};
    }
  }
  return {Answer::no, std::nullopt, {core.meta.size(), core.peak_norm}};
}

Verdict decide_cover_rapn(const Instance& inst, const StepObserver& observer,
                          uint64_t safety_state_cap) {
  const Net& net = reject_zero_tests(inst, "coverability decider");
  if (inst.objective != Objective::cover)
    throw PreconditionError("coverability decider requires a cover objective");
  StructureReport rep = validate_structure(net, StructureClaim::make_acyclic());
  if (!rep.acyclic)
    throw PreconditionError("structural precondition violated: net is not acyclic");

  const auto tcount = static_cast<TransitionId>(net.transitions.size());

  SearchCore core;
  core.push(inst.initial, 0, -1, 0);
  if (inst.initial.covers(inst.target))
    return {Answer::yes, std::vector<TransitionId>{},
            {core.meta.size(), core.peak_norm}};

  while (!core.frontier.empty()) {
    auto [id, m] = std::move(core.frontier.front());
    core.frontier.pop_front();
    uint32_t depth = core.meta[id].depth;
    for (TransitionId t = 0; t < tcount; ++t) {
      if (!is_enabled(net, m, t)) continue;
      Marking next = fire_abstract(net, m, t);
      if (observer) observer(m, t, next);
      bool hit = next.covers(inst.target);
      int64_t nid = core.push(std::move(next), id, t, depth + 1);
      if (nid < 0) continue;
      if (hit)
        return {Answer::yes, core.witness(static_cast<uint32_t>(nid)),
                {core.meta.size(), core.peak_norm}};
      if (core.meta.size() >= safety_state_cap)
        return {Answer::exhausted, std::nullopt, {core.meta.size(), core.peak_norm}};
    }
  }
  return {Answer::no, std::nullopt, {core.meta.size(), core.peak_norm}};
}

namespace {

// Right-to-left demand pass over an abstract trace. Returns repetition
// counts per step, or nothing when the straight per-step expansion cannot
// work (a transition that consumes from a place it also resets cannot fire
// twice in a row unless it replaces what it takes).
std::optional<std::vector<Nat>> expansion_counts(const Net& net, const FiringTrace& trace,
                                                 const Marking& initial,
                                                 const Marking& target) {
  const size_t n = trace.steps.size();
  const size_t nplaces = net.places.size();
  std::vector<Nat> demand(nplaces, Nat(0));
  for (size_t p = 0; p < nplaces; ++p)
    if (!target.v[p].is_omega()) demand[p] = target.v[p].finite();

  std::vector<Nat> reps(n, Nat(1));
  for (size_t i = n; i-- > 0;) {
    const Marking& before = i == 0 ? trace.start : trace.steps[i - 1].second;
    TransitionId t = trace.steps[i].first;
    const Transition& tr = net.transitions[t];
    const bool gen = is_generating(net, before, t);

    Nat r = 1;
    if (gen) {
      for (const auto& [p, w] : tr.post) {
        if (tr.resets_place(p)) continue;
        Nat need = (demand[p] + w - 1) / w;  // rounds needed for this place alone
        if (need > r) r = need;
      }
    }
    reps[i] = r;

    if (gen && r > 1) {
      for (const auto& [p, w] : tr.pre) {
        const Nat* post_w = tr.post_weight(p);
        if (tr.resets_place(p) && (!post_w || *post_w < w)) return std::nullopt;
      }
    }

    std::vector<Nat> next(nplaces, Nat(0));
    for (size_t p = 0; p < nplaces; ++p) {
      const Nat* pre_w = tr.pre_weight(static_cast<PlaceId>(p));
      const Nat* post_w = tr.post_weight(static_cast<PlaceId>(p));
      Nat pre = pre_w ? *pre_w : Nat(0);
      Nat post = post_w ? *post_w : Nat(0);
      if (tr.resets_place(static_cast<PlaceId>(p))) {
        if (demand[p] > post) return std::nullopt;  // demand cannot survive the reset
        next[p] = pre;
        continue;
      }
      // Enough to enable every round, and enough that r rounds of net effect
      // still leave the demanded amount.
      Nat enab = pre;
      if (pre > post) enab += (r - 1) * (pre - post);
      Nat dem = demand[p] + r * pre;
      dem = dem > r * post ? dem - r * post : Nat(0);
      next[p] = std::max(enab, dem);
    }
    demand = std::move(next);
  }
  for (size_t p = 0; p < nplaces; ++p)
    if (!initial.v[p].at_least(demand[p])) return std::nullopt;
  return reps;
}

constexpr uint64_t kMaxExpandedLength = 1u << 20;

}  // namespace

std::vector<TransitionId> concretize_cover_witness(const Net& net, const Marking& initial,
                                                   std::span<const TransitionId> abstract_seq,
                                                   const Marking& target) {
  check_well_formed(net);
  FiringTrace trace;
  try {
    trace = replay(net, initial, abstract_seq, FireMode::abstracted);
  } catch (const StepError& e) {
    throw WitnessError(std::string("not a covering witness: ") + e.what());
  }
  if (!trace.final_marking().covers(target))
    throw WitnessError("not a covering witness: the saturated replay misses the target");

  if (auto reps = expansion_counts(net, trace, initial, target)) {
    Nat total = 0;
    for (const Nat& r : *reps) total += r;
    if (total <= kMaxExpandedLength) {
      std::vector<TransitionId> out;
      out.reserve(static_cast<size_t>(total));
      for (size_t i = 0; i < abstract_seq.size(); ++i)
        for (Nat j = 0; j < (*reps)[i]; ++j) out.push_back(abstract_seq[i]);
      FiringTrace check = replay(net, initial, out, FireMode::concrete);
      if (check.final_marking().covers(target)) return out;
    }
  }

  // A per-step expansion is not always a run: when a generating transition
  // consumes from a place it resets, its repetitions need the earlier pumping
  // steps replayed in between. Search for such an interleaving over the
  // witness's own transitions.
  std::vector<TransitionId> alphabet(abstract_seq.begin(), abstract_seq.end());
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());

  for (uint64_t cap : {uint64_t(1) << 14, uint64_t(1) << 17, uint64_t(1) << 20,
                       uint64_t(1) << 23}) {
    SearchCore core;
    core.push(initial, 0, -1, 0);
    if (initial.covers(target)) return {};
    while (!core.frontier.empty() && core.meta.size() < cap) {
      auto [id, m] = std::move(core.frontier.front());
      core.frontier.pop_front();
      uint32_t depth = core.meta[id].depth;
      for (TransitionId t : alphabet) {
        if (!is_enabled(net, m, t)) continue;
        Marking next = fire(net, m, t);
        bool hit = next.covers(target);
        int64_t nid = core.push(std::move(next), id, t, depth + 1);
        if (nid < 0) continue;
        if (hit) return core.witness(static_cast<uint32_t>(nid));
      }
    }
    if (core.frontier.empty()) break;  // full set seen, growing the cap is pointless
  }
  throw WitnessError("could not expand the witness into a concrete covering run");
}

Verdict oracle_search(const Instance& inst, const SearchBudget& budget) {
  if (!budget.any_finite())
    throw PreconditionError("oracle search needs at least one finite budget bound");
  const Net& base = underlying_net(inst);
  const ZeroTestNet* zt =
      has_zero_tests(inst) ? &std::get<ZeroTestNet>(inst.net) : nullptr;
  const auto tcount = static_cast<TransitionId>(base.transitions.size());

  auto matches = [&](const Marking& m) {
    return inst.objective == Objective::reach ? m == inst.target : m.covers(inst.target);
  };

  bool pruned = false;
  SearchCore core;
  core.push(inst.initial, 0, -1, 0);
  if (matches(inst.initial))
    return {Answer::yes, std::vector<TransitionId>{},
            {core.meta.size(), core.peak_norm}};

  while (!core.frontier.empty()) {
    auto [id, m] = std::move(core.frontier.front());
    core.frontier.pop_front();
    uint32_t depth = core.meta[id].depth;
    for (TransitionId t = 0; t < tcount; ++t) {
      bool enabled = zt ? is_zt_enabled(*zt, m, t) : is_enabled(base, m, t);
      if (!enabled) continue;
      if (budget.max_steps && depth >= *budget.max_steps) {
        pruned = true;
        continue;
      }
      Marking next = zt ? fire_zero_test(*zt, m, t) : fire(base, m, t);
      if (budget.max_norm && next.norm() > *budget.max_norm) {
        pruned = true;
        continue;
      }
      if (budget.max_states && core.meta.size() >= *budget.max_states &&
          !core.seen.contains(next.key())) {
        pruned = true;
        continue;
      }
      bool hit = matches(next);
      int64_t nid = core.push(std::move(next), id, t, depth + 1);
      if (nid < 0) continue;
      if (hit)
        return {Answer::yes, core.witness(static_cast<uint32_t>(nid)),
                {core.meta.size(), core.peak_norm}};
    }
  }
  if (pruned) return {Answer::exhausted, std::nullopt, {core.meta.size(), core.peak_norm}};
  return {Answer::no, std::nullopt, {core.meta.size(), core.peak_norm}};
}

}  // namespace rapn
