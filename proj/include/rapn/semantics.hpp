#pragma once

// Firing semantics. A firing consumes, then resets, then produces; omega
// entries absorb consumption and production and are cleared only by resets.

#include <span>
#include <vector>

#include "rapn/net.hpp"

namespace rapn {

enum class FireMode { concrete, abstracted, zero_test };

// Returns a place blocking t at m (insufficient tokens), or -1 when enabled.
PlaceId blocking_place(const Net& net, const Marking& m, TransitionId t);
bool is_enabled(const Net& net, const Marking& m, TransitionId t);

// Concrete firing; throws NotEnabledError.
Marking fire(const Net& net, const Marking& m, TransitionId t);

// True when every place t consumes from holds omega (vacuously true for an
// empty input set). Such a firing can be repeated arbitrarily often.
bool is_generating(const Net& net, const Marking& m, TransitionId t);

// Saturating firing: a generating transition floods its non-reset output
// places with omega; otherwise identical to fire().
Marking fire_abstract(const Net& net, const Marking& m, TransitionId t);

// Returns a zero-tested place that is non-empty at m, or -1.
PlaceId failed_zero_test(const ZeroTestNet& net, const Marking& m, TransitionId t);
bool is_zt_enabled(const ZeroTestNet& net, const Marking& m, TransitionId t);

// Firing with zero tests and no reset phase; throws NotEnabledError or
// ZeroTestError.
Marking fire_zero_test(const ZeroTestNet& net, const Marking& m, TransitionId t);

struct FiringTrace {
  Marking start;
  FireMode mode = FireMode::concrete;
  std::vector<std::pair<TransitionId, Marking>> steps;

  const Marking& final_marking() const { return steps.empty() ? start : steps.back().second; }
};

// Fires the whole sequence or throws StepError identifying the first failure.
FiringTrace replay(const Net& net, const Marking& m, std::span<const TransitionId> seq,
                   FireMode mode);
FiringTrace replay(const ZeroTestNet& net, const Marking& m,
                   std::span<const TransitionId> seq);

}  // namespace rapn
