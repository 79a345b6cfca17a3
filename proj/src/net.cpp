#include "rapn/net.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace rapn {

const Nat& Tokens::finite() const {
  if (omega_) throw Error("omega entry has no finite value");
  return v_;
}

Tokens Tokens::minus(const Nat& w) const {
  if (omega_) return *this;
  if (v_ < w) throw Error("token count underflow");
  Tokens r;
  r.v_ = v_ - w;
  return r;
}

Tokens Tokens::plus(const Nat& w) const {
  if (omega_) return *this;
  Tokens r;
  r.v_ = v_ + w;
  return r;
}

bool Marking::omega_free() const {
  for (const Tokens& t : v)
    if (t.is_omega()) return false;
  return true;
}

Nat Marking::norm() const {
  Nat n = 0;
  for (const Tokens& t : v)
    if (!t.is_omega()) n += t.finite();
  return n;
}

bool Marking::covers(const Marking& other) const {
  if (v.size() != other.v.size()) throw Error("marking size mismatch");
  for (size_t i = 0; i < v.size(); ++i)
    if (!v[i].covers(other.v[i])) return false;
  return true;
}

namespace {

void encode_nat(const Nat& n, std::string& out) {
  // Unsigned LEB128; fast path for values fitting one limb.
  if (n <= std::numeric_limits<uint64_t>::max()) {
    uint64_t x = static_cast<uint64_t>(n);
    while (x >= 0x80) {
      out.push_back(static_cast<char>((x & 0x7f) | 0x80));
      x >>= 7;
    }
    out.push_back(static_cast<char>(x));
    return;
  }
  Nat x = n;
  while (x >= 0x80) {
    out.push_back(static_cast<char>(static_cast<unsigned>(x & 0x7f) | 0x80));
    x >>= 7;
  }
  out.push_back(static_cast<char>(static_cast<unsigned>(x)));
}

}  // namespace

void Marking::encode(std::string& out) const {
  for (const Tokens& t : v) {
    if (t.is_omega()) {
      out.push_back('\xff');
      out.push_back('\x01');  // distinguishes omega from any LEB128 value
    } else {
      encode_nat(t.finite(), out);
      out.push_back('\x00');
    }
  }
}

std::string Marking::key() const {
  std::string s;
  s.reserve(v.size() * 3);
  encode(s);
  return s;
}

bool Transition::resets_place(PlaceId p) const {
  return std::binary_search(resets.begin(), resets.end(), p);
}

namespace {
const Nat* arc_weight(const ArcList& arcs, PlaceId p) {
  auto it = std::lower_bound(arcs.begin(), arcs.end(), p,
                             [](const auto& a, PlaceId q) { return a.first < q; });
  if (it != arcs.end() && it->first == p) return &it->second;
  return nullptr;
}
}  // namespace

const Nat* Transition::pre_weight(PlaceId p) const { return arc_weight(pre, p); }
const Nat* Transition::post_weight(PlaceId p) const { return arc_weight(post, p); }

PlaceId Net::place_index(std::string_view n) const {
  for (size_t i = 0; i < places.size(); ++i)
    if (places[i] == n) return static_cast<PlaceId>(i);
  return -1;
}

TransitionId Net::transition_index(std::string_view n) const {
  for (size_t i = 0; i < transitions.size(); ++i)
    if (transitions[i].name == n) return static_cast<TransitionId>(i);
  return -1;
}

const Net& underlying_net(const Instance& inst) {
  if (const Net* n = std::get_if<Net>(&inst.net)) return *n;
  return std::get<ZeroTestNet>(inst.net).base;
}

bool has_zero_tests(const Instance& inst) {
  return std::holds_alternative<ZeroTestNet>(inst.net);
}

namespace {

void check_arclist(const Net& net, const Transition& t, const ArcList& arcs,
                   const char* side) {
  PlaceId prev = -1;
  for (const auto& [p, w] : arcs) {
    if (p < 0 || static_cast<size_t>(p) >= net.places.size())
      throw Error("transition " + t.name + ": " + side + " arc to unknown place");
    if (p <= prev)
      throw Error("transition " + t.name + ": " + side + " arcs not sorted/unique");
    if (w < 1) throw Error("transition " + t.name + ": arc weight must be positive");
    prev = p;
  }
}

void check_marking_sized(const Net& net, const Marking& m, const char* which) {
  if (m.size() != net.places.size())
    throw Error(std::string(which) + " marking size does not match place count");
}

}  // namespace

void check_well_formed(const Net& net) {
  std::unordered_set<std::string> names;
  for (const auto& p : net.places) {
    if (p.empty()) throw Error("empty place name");
    if (!names.insert(p).second) throw Error("duplicate node name: " + p);
  }
  for (const auto& t : net.transitions) {
    if (t.name.empty()) throw Error("empty transition name");
    if (!names.insert(t.name).second) throw Error("duplicate node name: " + t.name);
    check_arclist(net, t, t.pre, "input");
    check_arclist(net, t, t.post, "output");
    PlaceId prev = -1;
    for (PlaceId p : t.resets) {
      if (p < 0 || static_cast<size_t>(p) >= net.places.size())
        throw Error("transition " + t.name + ": reset of unknown place");
      if (p <= prev) throw Error("transition " + t.name + ": resets not sorted/unique");
      prev = p;
    }
  }
  if (net.workflow) {
    auto [i, f] = *net.workflow;
    if (i < 0 || static_cast<size_t>(i) >= net.places.size() || f < 0 ||
        static_cast<size_t>(f) >= net.places.size())
      throw Error("workflow declaration names unknown places");
  }
}

void check_well_formed(const ZeroTestNet& net) {
  check_well_formed(net.base);
  for (const auto& t : net.base.transitions)
    if (!t.resets.empty())
      throw Error("zero-test net must not carry resets (transition " + t.name + ")");
  if (net.ztests.size() != net.base.transitions.size())
    throw Error("zero-test table size does not match transition count");
  for (size_t ti = 0; ti < net.ztests.size(); ++ti) {
    PlaceId prev = -1;
    for (PlaceId p : net.ztests[ti]) {
      if (p < 0 || static_cast<size_t>(p) >= net.base.places.size())
        throw Error("transition " + net.base.transitions[ti].name +
                    ": zero test of unknown place");
      if (p <= prev)
        throw Error("transition " + net.base.transitions[ti].name +
                    ": zero tests not sorted/unique");
      prev = p;
    }
  }
}

namespace {
Instance finish_instance(std::variant<Net, ZeroTestNet> net, Marking initial,
                         Marking target, Objective obj) {
  Instance inst{std::move(net), std::move(initial), std::move(target), obj};
  const Net& base = underlying_net(inst);
  check_marking_sized(base, inst.initial, "initial");
  check_marking_sized(base, inst.target, "target");
  if (!inst.initial.omega_free() || !inst.target.omega_free())
    throw Error("instance markings must be omega-free");
  return inst;
}
}  // namespace

Instance make_instance(Net net, Marking initial, Marking target, Objective obj) {
  check_well_formed(net);
  return finish_instance(std::move(net), std::move(initial), std::move(target), obj);
}

Instance make_instance(ZeroTestNet net, Marking initial, Marking target, Objective obj) {
  check_well_formed(net);
  return finish_instance(std::move(net), std::move(initial), std::move(target), obj);
}

NetBuilder::NetBuilder(std::string name) { net_.name = std::move(name); }

PlaceId NetBuilder::add_place(std::string name) {
  net_.places.push_back(std::move(name));
  return static_cast<PlaceId>(net_.places.size() - 1);
}

TransitionId NetBuilder::add_transition(std::string name) {
  Transition t;
  t.name = std::move(name);
  net_.transitions.push_back(std::move(t));
  ztests_.emplace_back();
  return static_cast<TransitionId>(net_.transitions.size() - 1);
}

namespace {
void insert_arc(ArcList& arcs, PlaceId p, Nat w, const std::string& tname) {
  if (w < 1) throw Error("transition " + tname + ": arc weight must be positive");
  auto it = std::lower_bound(arcs.begin(), arcs.end(), p,
                             [](const auto& a, PlaceId q) { return a.first < q; });
  if (it != arcs.end() && it->first == p)
    throw Error("transition " + tname + ": duplicate arc");
  arcs.insert(it, {p, std::move(w)});
}

void insert_sorted_unique(std::vector<PlaceId>& v, PlaceId p, const std::string& tname,
                          const char* what) {
  auto it = std::lower_bound(v.begin(), v.end(), p);
  if (it != v.end() && *it == p)
    throw Error("transition " + tname + ": duplicate " + what);
  v.insert(it, p);
}
}  // namespace

void NetBuilder::add_pre(TransitionId t, PlaceId p, Nat w) {
  insert_arc(net_.transitions.at(t).pre, p, std::move(w), net_.transitions.at(t).name);
}

void NetBuilder::add_post(TransitionId t, PlaceId p, Nat w) {
  insert_arc(net_.transitions.at(t).post, p, std::move(w), net_.transitions.at(t).name);
}

void NetBuilder::add_reset(TransitionId t, PlaceId p) {
  if (has_ztests_) throw Error("resets and zero tests cannot be mixed");
  has_resets_ = true;
  insert_sorted_unique(net_.transitions.at(t).resets, p, net_.transitions.at(t).name,
                       "reset");
}

void NetBuilder::add_ztest(TransitionId t, PlaceId p) {
  if (has_resets_) throw Error("resets and zero tests cannot be mixed");
  has_ztests_ = true;
  insert_sorted_unique(ztests_.at(t), p, net_.transitions.at(t).name, "zero test");
}

void NetBuilder::set_workflow(PlaceId i, PlaceId f) { net_.workflow = WorkflowDecl{i, f}; }

PlaceId NetBuilder::place(std::string_view name) const { return net_.place_index(name); }

TransitionId NetBuilder::transition(std::string_view name) const {
  return net_.transition_index(name);
}

Net NetBuilder::build_net() {
  if (has_ztests_) throw Error("net with zero tests must be built as a zero-test net");
  check_well_formed(net_);
  return net_;
}

ZeroTestNet NetBuilder::build_zero_test_net() {
  if (has_resets_) throw Error("resets and zero tests cannot be mixed");
  ZeroTestNet zt{net_, ztests_};
  check_well_formed(zt);
  return zt;
}

Marking marking_of(std::vector<uint64_t> entries) {
  Marking m;
  m.v.reserve(entries.size());
  for (uint64_t e : entries) m.v.emplace_back(e);
  return m;
}

std::string marking_to_string(const Net& net, const Marking& m) {
  std::string out;
  for (size_t i = 0; i < m.v.size(); ++i) {
    const Tokens& t = m.v[i];
    if (!t.is_omega() && t.finite() == 0) continue;
    if (!out.empty()) out += ' ';
    out += net.places[i];
    out += '=';
    out += t.is_omega() ? "w" : t.finite().str();
  }
  if (out.empty()) out = "-";
  return out;
}

}  // namespace rapn
