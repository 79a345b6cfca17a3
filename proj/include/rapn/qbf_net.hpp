#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "rapn/net.hpp"
#include "rapn/qbf.hpp"
#include "rapn/structure.hpp"

namespace rapn {

// Roles tag every node of a generated net so diagnostics and tests can find
// gadget parts without parsing names. For compiled QBF nets the map is total
// and injective.
enum class PlaceRoleKind {
  holding,   // h_i: block entry
  waiting,   // w_i: second universal branch pending
  literal,   // b!/b/a!/a: literal token stores
  decision,  // v_i: existential choice pending
  dummy,     // per-variable tautology clause
  clause,    // real clause
  final_,    // f
  chain,     // unary-gadget intermediate
  copy,      // duplicate place of the reset simulation
  ctrl,      // c_t / p_t of the acyclification
};

enum class TransitionRoleKind {
  control,       // u_i / e_i
  loading,       // moves a literal token into its clauses
  satisfaction,  // s: one token from every clause place, one to f
  key,           // unary-gadget core
  chain,         // halving / doubling steps
  choice,        // t#sim
  consume,       // t#con
  produce,       // t#pro
};

struct PlaceRole {
  PlaceRoleKind kind;
  // Block number (1-based) for gadget places, clause number for clause
  // places, 0 where neither applies.
  int32_t index = 0;
  // literal: 0 = b!_i, 1 = b_i, 2 = a!_i, 3 = a_i; dummy: 0 = d_y, 1 = d_x.
  int32_t variant = 0;
};

struct TransitionRole {
  TransitionRoleKind kind;
  int32_t index = 0;
  // control: 0 = u_i down, 1 = u_i up, 2 = e_i down, 3 = e_i up;
  // loading: the literal store it drains, same coding as PlaceRole.
  int32_t variant = 0;
};

// A QBF compiled to a reset workflow net. Arc weights are the powers of two
// 2^(k-i); the stored node order orients every arc forward and drives the
// "later occurring" reset sets.
struct CompiledQbfNet {
  Net net;
  int k = 0;  // quantifier blocks
  int m = 0;  // real (non-dummy) clauses
  std::vector<PlaceRole> place_roles;            // by PlaceId
  std::vector<TransitionRole> transition_roles;  // by TransitionId
  std::vector<NodeId> order;                     // the linear order on all nodes

  // Handy id tables, all 0-based by block (block i lives at [i-1]).
  std::vector<PlaceId> h, w, v;
  std::vector<std::array<PlaceId, 4>> lit;  // b!_i, b_i, a!_i, a_i
  std::vector<PlaceId> dy, dx;
  std::vector<PlaceId> c;  // real clauses
  PlaceId f = -1;
  std::vector<std::array<TransitionId, 4>> u_e;   // u down, u up, e down, e up
  std::vector<std::array<TransitionId, 4>> load;  // same literal coding
  TransitionId s = -1;
};

// Block-wise progress measures. A marking is good when every g_i and g'_i
// equals 2^k; good markings are exactly the ones covering runs pass through.
struct GoodnessReport {
  std::vector<Nat> g;        // g_1..g_k (can go negative on arbitrary markings)
  std::vector<Nat> g_prime;  // g'_1..g'_k
  bool is_good = false;
  // Assignment visible in the marking: (beta_1, alpha_1, ..., beta_k,
  // alpha_k), each '0', '1', or '?' when neither literal place is marked.
  std::vector<char> val;
};

// Compiles a prenex QBF (forall y_1 exists x_1 ...) into a reset workflow
// net whose target (2^k tokens in the final place) is coverable exactly when
// the formula is true. Normalizes the formula first, so every variable has
// its tautology clause; the first occurrence of each serves as the dummy.
std::pair<CompiledQbfNet, Instance> compile_qbf_to_rawn(const Qbf& q);

// Evaluates the progress measures on an omega-free marking of the right size.
GoodnessReport goodness_report(const CompiledQbfNet& c, const Marking& m);

// For a true formula, builds the canonical covering run: depth-first over the
// universal choices, picking each existential by evaluating the residual
// formula. The run replays from one token in h_1 to exactly the target.
// Throws PreconditionError when the formula is false.
std::vector<TransitionId> synthesize_cover_run(const CompiledQbfNet& c, const Qbf& q);

// Rebuilds the role tables of a compiled net from its node names (h1, w1,
// bb1, ..., c1, f, u1f, ..., s), for use on reparsed files. Throws
// PreconditionError when the net does not have the compiled shape.
CompiledQbfNet recover_compiled_net(const Net& net);

// Checks the per-step invariants of compiled nets on one concrete firing:
// the final place grows by 0 or 1, no literal pair is marked on both sides
// after the step, and no progress measure increases. Returns human-readable
// violations, empty when the step is clean.
std::vector<std::string> check_compiled_step(const CompiledQbfNet& c, const Marking& before,
                                             TransitionId t, const Marking& after);

}  // namespace rapn
