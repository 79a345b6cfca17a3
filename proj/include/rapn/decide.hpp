#pragma once

// Decision procedures: reachability for acyclic workflow nets with resets,
// coverability for acyclic nets with resets via the saturating abstraction,
// witness concretization, and a budgeted explicit-state search usable as an
// independent reference.

#include <functional>
#include <optional>
#include <span>

#include "rapn/net.hpp"

namespace rapn {

struct SearchBudget {
  std::optional<uint64_t> max_steps;   // longest run length explored
  std::optional<Nat> max_norm;        // largest marking norm enqueued
  std::optional<uint64_t> max_states;  // distinct markings visited

  bool any_finite() const { return max_steps || max_norm || max_states; }
};

enum class Answer { yes, no, exhausted };

struct SearchStats {
  uint64_t states_explored = 0;
  Nat peak_norm;
};

struct Verdict {
  Answer answer = Answer::exhausted;
  std::optional<std::vector<TransitionId>> witness;
  SearchStats stats;
};

// Called for every firing the search explores.
using StepObserver =
    std::function<void(const Marking& before, TransitionId t, const Marking& after)>;

// Largest norm any reachable marking of an acyclic workflow net with resets
// can have: (net norm + initial norm)^(|T|+1).
Nat reach_norm_bound(const Net& net, const Marking& initial);

// Norm bound claimed for the saturating abstraction: ||initial|| * k^|P| with
// k the largest total production of a single transition (at least 1). Used
// as a monitor; see decide_cover_rapn.
Nat cover_norm_bound(const Net& net, const Marking& initial);
Nat max_production(const Net& net);

// Exact-marking reachability on an acyclic workflow net with resets, by
// breadth-first exploration of the (finite) reachable set. Transitions are
// tried in index order, so the returned witness is the smallest shortest one.
Verdict decide_reach_rawn(const Instance& inst, const StepObserver& observer = {});

// Coverability on an acyclic net with resets, by breadth-first exploration
// of saturated markings. Yes-witnesses are saturating firing sequences. The
// search stops with `exhausted` if it exceeds safety_state_cap distinct
// markings, which only happens outside the norm-bounded regime (see
// cover_norm_bound).
Verdict decide_cover_rapn(const Instance& inst, const StepObserver& observer = {},
                          uint64_t safety_state_cap = uint64_t(1) << 22);

// Expands a saturating cover witness into a plain firing sequence whose
// concrete replay from `initial` covers `target`. Repetition counts are
// derived from a right-to-left demand pass; throws WitnessError when the
// input does not cover abstractly.
std::vector<TransitionId> concretize_cover_witness(const Net& net, const Marking& initial,
                                                   std::span<const TransitionId> abstract_seq,
                                                   const Marking& target);

// Budgeted breadth-first baseline over concrete markings (zero-test firing
// when the instance carries zero tests). Answers `no` only when the frontier
// emptied with no budget pruning, i.e. the full reachable set was seen.
Verdict oracle_search(const Instance& inst, const SearchBudget& budget);

}  // namespace rapn
