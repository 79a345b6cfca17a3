#pragma once

#include <vector>

#include "rapn/net.hpp"

namespace rapn {

struct UnaryReduction {
  Instance instance;
  // Original transition id -> the gadget's key transition in the new net.
  // Keys keep the original transition's name.
  std::vector<TransitionId> key_of;
};

// Rewrites every arc of weight w >= 2 into unary machinery: halving chains
// feed each input's power-of-two components to the key transition, doubling
// chains expand the key's outputs, so every arc in the result has weight 1
// or 2. Gadget nodes are named <t>#in/out/halve/double#<place>#<stage>. A
// transition that resets p additionally resets the chain places of every
// gadget whose original transition touches p. Cover-equivalent; requires a
// cover objective and an acyclic reset net.
UnaryReduction binary_to_unary(const Instance& inst);

// Splits every transition t of a zero-test net into t#sim (claims the net's
// single simulation slot by zero-testing all control places), t#con
// (consumes pre(t) under t's own zero tests), and t#pro (produces post(t)).
// The result is acyclic on ordinary arcs whatever the input shape, and
// reach-equivalent with run lengths exactly tripled. Requires a reach
// objective.
Instance acyclify_zero_tests(const Instance& inst);

// Replaces zero tests by resets: every place gets a twin <p>#copy carrying
// the same arcs and marking, and a test of p becomes a reset of p alone.
// On acyclic nets a run that resets a non-empty place can never rebalance
// the twins, so reach verdicts and witness lengths carry over unchanged.
// Requires a reach objective and an acyclic input.
Instance zero_tests_to_resets(const Instance& inst);

}  // namespace rapn
