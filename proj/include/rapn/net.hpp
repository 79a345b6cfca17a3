#pragma once

// Core structures: nets with weighted arcs and reset sets, zero-test nets,
// omega-extended markings, and decision problem instances.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rapn/errors.hpp"

namespace rapn {

// Token counts are unbounded: reachability bounds grow like m^(|T|+1) and
// intermediate markings may legitimately exceed 64 bits.
using Nat = boost::multiprecision::cpp_int;

using PlaceId = int32_t;
using TransitionId = int32_t;

// A token count extended with omega. Omega absorbs addition and subtraction;
// only a reset clears it.
class Tokens {
 public:
  Tokens() = default;
  explicit Tokens(Nat v) : v_(std::move(v)) {}
  explicit Tokens(uint64_t v) : v_(v) {}
  static Tokens omega() {
    Tokens t;
    t.omega_ = true;
    return t;
  }

  bool is_omega() const { return omega_; }
  const Nat& finite() const;  // requires !is_omega()

  bool at_least(const Nat& w) const { return omega_ || v_ >= w; }
  Tokens minus(const Nat& w) const;  // requires at_least(w); omega stays omega
  Tokens plus(const Nat& w) const;   // omega stays omega

  // this >= other in the usual order where omega dominates every natural.
  bool covers(const Tokens& other) const {
    if (other.omega_) return omega_;
    return omega_ || v_ >= other.v_;
  }

  bool operator==(const Tokens& o) const {
    return omega_ == o.omega_ && (omega_ || v_ == o.v_);
  }

 private:
  bool omega_ = false;
  Nat v_;
};

struct Marking {
  std::vector<Tokens> v;

  static Marking zero(size_t places) { return Marking{std::vector<Tokens>(places)}; }

  size_t size() const { return v.size(); }
  bool omega_free() const;
  // Sum of the non-omega entries.
  Nat norm() const;
  // Pointwise Tokens::covers.
  bool covers(const Marking& other) const;
  bool operator==(const Marking& o) const { return v == o.v; }

  // Compact byte encoding used as a hash key in search frontiers.
  void encode(std::string& out) const;
  std::string key() const;
};

// Arcs of one side of a transition, sorted by place id; weights are >= 1.
using ArcList = std::vector<std::pair<PlaceId, Nat>>;

struct Transition {
  std::string name;
  ArcList pre;
  ArcList post;
  std::vector<PlaceId> resets;  // sorted, unique

  bool resets_place(PlaceId p) const;
  const Nat* pre_weight(PlaceId p) const;   // nullptr when absent
  const Nat* post_weight(PlaceId p) const;  // nullptr when absent
};

struct WorkflowDecl {
  PlaceId initial_place = -1;
  PlaceId final_place = -1;
};

struct Net {
  std::string name = "net";
  std::vector<std::string> places;
  std::vector<Transition> transitions;
  // Declared initial/final workflow places, when the net claims to be one.
  std::optional<WorkflowDecl> workflow;

  size_t place_count() const { return places.size(); }
  size_t transition_count() const { return transitions.size(); }
  PlaceId place_index(std::string_view name) const;            // -1 when unknown
  TransitionId transition_index(std::string_view name) const;  // -1 when unknown
};

// A net whose transitions test places for emptiness instead of resetting
// them. The base net carries no resets.
struct ZeroTestNet {
  Net base;
  std::vector<std::vector<PlaceId>> ztests;  // one sorted set per transition
};

enum class Objective { reach, cover };

struct Instance {
  std::variant<Net, ZeroTestNet> net;
  Marking initial;  // omega-free
  Marking target;   // omega-free
  Objective objective = Objective::reach;
};

const Net& underlying_net(const Instance& inst);
bool has_zero_tests(const Instance& inst);

// Validated constructors; throw Error on ill-formed input.
Instance make_instance(Net net, Marking initial, Marking target, Objective obj);
Instance make_instance(ZeroTestNet net, Marking initial, Marking target, Objective obj);

void check_well_formed(const Net& net);
void check_well_formed(const ZeroTestNet& net);

// Incremental construction helper used by parsers, reductions and tests.
class NetBuilder {
 public:
  explicit NetBuilder(std::string name = "net");

  PlaceId add_place(std::string name);
  TransitionId add_transition(std::string name);
  void add_pre(TransitionId t, PlaceId p, Nat w = Nat(1));
  void add_post(TransitionId t, PlaceId p, Nat w = Nat(1));
  void add_reset(TransitionId t, PlaceId p);
  void add_ztest(TransitionId t, PlaceId p);
  void set_workflow(PlaceId initial_place, PlaceId final_place);

  PlaceId place(std::string_view name) const;
  TransitionId transition(std::string_view name) const;
  size_t place_count() const { return net_.places.size(); }
  size_t transition_count() const { return net_.transitions.size(); }
  bool has_ztests() const { return has_ztests_; }

  Net build_net();               // rejects ztest usage
  ZeroTestNet build_zero_test_net();

 private:
  Net net_;
  std::vector<std::vector<PlaceId>> ztests_;
  bool has_ztests_ = false;
  bool has_resets_ = false;
};

// Convenience for tests: marking from finite entries.
Marking marking_of(std::vector<uint64_t> entries);

std::string marking_to_string(const Net& net, const Marking& m);

}  // namespace rapn
