#pragma once

// Small hand-built nets and formulas shared by the unit and acceptance
// suites. All builders return fresh values; tests may mutate them.

#include "rapn/net.hpp"
#include "rapn/qbf.hpp"

namespace rapn::fixtures {

// Workflow net: i splits into p1 and p2 via t1, t2 joins two of each into f.
// From (2,0,0,0) the run (t1,t1,t2) ends at (0,0,0,1); (0,0,1,0) is not
// reachable exactly but is coverable once the pump below is added.
inline Net split_join_net() {
  NetBuilder nb("split_join");
  const PlaceId i = nb.add_place("i");
  const PlaceId p1 = nb.add_place("p1");
  const PlaceId p2 = nb.add_place("p2");
  const PlaceId f = nb.add_place("f");
  const TransitionId t1 = nb.add_transition("t1");
  const TransitionId t2 = nb.add_transition("t2");
  nb.add_pre(t1, i);
  nb.add_post(t1, p1);
  nb.add_post(t1, p2);
  nb.add_pre(t2, p1, Nat(2));
  nb.add_pre(t2, p2, Nat(2));
  nb.add_post(t2, f);
  nb.set_workflow(i, f);
  return nb.build_net();
}

// The same net plus a pump (t3 produces into p1 from nothing) and a drain
// (t4 swallows from p1). Still acyclic, no longer a workflow net.
inline Net pumped_split_join_net() {
  NetBuilder nb("split_join_pumped");
  const PlaceId i = nb.add_place("i");
  const PlaceId p1 = nb.add_place("p1");
  const PlaceId p2 = nb.add_place("p2");
  const PlaceId f = nb.add_place("f");
  const TransitionId t1 = nb.add_transition("t1");
  const TransitionId t2 = nb.add_transition("t2");
  const TransitionId t3 = nb.add_transition("t3");
  const TransitionId t4 = nb.add_transition("t4");
  nb.add_pre(t1, i);
  nb.add_post(t1, p1);
  nb.add_post(t1, p2);
  nb.add_pre(t2, p1, Nat(2));
  nb.add_pre(t2, p2, Nat(2));
  nb.add_post(t2, f);
  nb.add_post(t3, p1);
  nb.add_pre(t4, p1);
  return nb.build_net();
}

// One transition over places (a,b,c): consumes 3 from a and 2 from b, resets
// b and c, produces 4 to c. Firing from (6,2,1) lands on (3,0,4).
inline Net reset_demo_net() {
  NetBuilder nb("reset_demo");
  const PlaceId a = nb.add_place("a");
  const PlaceId b = nb.add_place("b");
  const PlaceId c = nb.add_place("c");
  const TransitionId t = nb.add_transition("t");
  nb.add_pre(t, a, Nat(3));
  nb.add_pre(t, b, Nat(2));
  nb.add_reset(t, b);
  nb.add_reset(t, c);
  nb.add_post(t, c, Nat(4));
  return nb.build_net();
}

// Two transitions that defeat the saturating-abstraction norm bound: t0
// refills the place it resets, t1 moves the token onward, so alternating
// them pumps p1 forever while each single marking stays tiny.
inline Net refill_pump_net() {
  NetBuilder nb("refill_pump");
  const PlaceId p0 = nb.add_place("p0");
  const PlaceId p1 = nb.add_place("p1");
  const TransitionId t0 = nb.add_transition("t0");
  const TransitionId t1 = nb.add_transition("t1");
  nb.add_reset(t0, p0);
  nb.add_post(t0, p0);
  nb.add_pre(t1, p0);
  nb.add_post(t1, p1);
  return nb.build_net();
}

// True 3-block formula with four real clauses; variables are numbered
// y1=1, x1=2, y2=3, x2=4, y3=5, x3=6.
inline Qbf alternation_qbf3() {
  return make_qbf(3, {{1, -2, -3}, {-2, -3, 4}, {3, 4, -5}, {4, 5, 6}});
}

}  // namespace rapn::fixtures
