#include "rapn/semantics.hpp"

#include <algorithm>

namespace rapn {

namespace {
const Transition& transition_at(const Net& net, TransitionId t) {
  if (t < 0 || static_cast<size_t>(t) >= net.transitions.size())
    throw Error("unknown transition id " + std::to_string(t));
  return net.transitions[t];
}

void check_sized(const Net& net, const Marking& m) {
  if (m.size() != net.places.size()) throw Error("marking size does not match net");
}
}  // namespace

PlaceId blocking_place(const Net& net, const Marking& m, TransitionId t) {
  check_sized(net, m);
  for (const auto& [p, w] : transition_at(net, t).pre)
    if (!m.v[p].at_least(w)) return p;
  return -1;
}

bool is_enabled(const Net& net, const Marking& m, TransitionId t) {
  return blocking_place(net, m, t) < 0;
}

Marking fire(const Net& net, const Marking& m, TransitionId t) {
  const Transition& tr = transition_at(net, t);
  if (PlaceId b = blocking_place(net, m, t); b >= 0)
    throw NotEnabledError("transition " + tr.name + " not enabled: place " +
                              net.places[b] + " holds too few tokens",
                          t, b);
  Marking r = m;
  for (const auto& [p, w] : tr.pre) r.v[p] = r.v[p].minus(w);
  for (PlaceId p : tr.resets) r.v[p] = Tokens();
  for (const auto& [p, w] : tr.post) r.v[p] = r.v[p].plus(w);
  return r;
}

bool is_generating(const Net& net, const Marking& m, TransitionId t) {
  check_sized(net, m);
  for (const auto& [p, w] : transition_at(net, t).pre)
    if (!m.v[p].is_omega()) return false;
  return true;
}

Marking fire_abstract(const Net& net, const Marking& m, TransitionId t) {
  const Transition& tr = transition_at(net, t);
  if (PlaceId b = blocking_place(net, m, t); b >= 0)
    throw NotEnabledError("transition " + tr.name + " not enabled: place " +
                              net.places[b] + " holds too few tokens",
                          t, b);
  if (!is_generating(net, m, t)) return fire(net, m, t);
  // The firing can repeat indefinitely: non-reset output places saturate,
  // reset places end at exactly the produced amount, the rest is untouched.
  Marking r = m;
  for (PlaceId p : tr.resets) r.v[p] = Tokens();
  for (const auto& [p, w] : tr.post)
    r.v[p] = tr.resets_place(p) ? Tokens(w) : Tokens::omega();
  return r;
}

PlaceId failed_zero_test(const ZeroTestNet& net, const Marking& m, TransitionId t) {
  check_sized(net.base, m);
  if (t < 0 || static_cast<size_t>(t) >= net.ztests.size())
    throw Error("unknown transition id " + std::to_string(t));
  for (PlaceId p : net.ztests[t]) {
    const Tokens& tok = m.v[p];
    if (tok.is_omega() || tok.finite() != 0) return p;
  }
  return -1;
}

bool is_zt_enabled(const ZeroTestNet& net, const Marking& m, TransitionId t) {
  return blocking_place(net.base, m, t) < 0 && failed_zero_test(net, m, t) < 0;
}

Marking fire_zero_test(const ZeroTestNet& net, const Marking& m, TransitionId t) {
  const Transition& tr = transition_at(net.base, t);
  if (PlaceId b = blocking_place(net.base, m, t); b >= 0)
    throw NotEnabledError("transition " + tr.name + " not enabled: place " +
                              net.base.places[b] + " holds too few tokens",
                          t, b);
  if (PlaceId z = failed_zero_test(net, m, t); z >= 0)
    throw ZeroTestError("transition " + tr.name + " zero test failed: place " +
                            net.base.places[z] + " is not empty",
                        t, z);
  Marking r = m;
  for (const auto& [p, w] : tr.pre) r.v[p] = r.v[p].minus(w);
  for (const auto& [p, w] : tr.post) r.v[p] = r.v[p].plus(w);
  return r;
}

namespace {
template <typename Step>
FiringTrace replay_impl(const Marking& m, std::span<const TransitionId> seq,
                        FireMode mode, Step step) {
  FiringTrace trace;
  trace.start = m;
  trace.mode = mode;
  const Marking* cur = &m;
  for (size_t i = 0; i < seq.size(); ++i) {
    try {
      trace.steps.emplace_back(seq[i], step(*cur, seq[i]));
    } catch (const Error& e) {
      throw StepError(i, e.what());
    }
    cur = &trace.steps.back().second;
  }
  return trace;
}
}  // namespace

FiringTrace replay(const Net& net, const Marking& m, std::span<const TransitionId> seq,
                   FireMode mode) {
  switch (mode) {
    case FireMode::concrete:
      return replay_impl(m, seq, mode,
                         [&](const Marking& c, TransitionId t) { return fire(net, c, t); });
    case FireMode::abstracted:
      return replay_impl(m, seq, mode, [&](const Marking& c, TransitionId t) {
        return fire_abstract(net, c, t);
      });
    case FireMode::zero_test:
      throw Error("zero-test replay needs a zero-test net");
  }
  throw Error("bad fire mode");
}

FiringTrace replay(const ZeroTestNet& net, const Marking& m,
                   std::span<const TransitionId> seq) {
  return replay_impl(m, seq, FireMode::zero_test, [&](const Marking& c, TransitionId t) {
    return fire_zero_test(net, c, t);
  });
}

}  // namespace rapn
