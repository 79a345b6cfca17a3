#include "rapn/qbf_net.hpp"

#include <algorithm>

namespace rapn {

namespace {

Nat pow2(int e) { return Nat(1) << e; }

bool is_gadget_kind(PlaceRoleKind k) {
  return k == PlaceRoleKind::holding || k == PlaceRoleKind::waiting ||
         k == PlaceRoleKind::decision || k == PlaceRoleKind::literal ||
         k == PlaceRoleKind::dummy;
}

// Derives the role maps and the linear order from the id tables.
void fill_roles_and_order(CompiledQbfNet& c, size_t nplaces, size_t ntransitions) {
  c.place_roles.assign(nplaces, {});
  c.transition_roles.assign(ntransitions, {});
  c.order.clear();
  using K = NodeId::Kind;
  for (int i = 0; i < c.k; ++i) {
    c.place_roles[c.h[i]] = {PlaceRoleKind::holding, i + 1, 0};
    c.place_roles[c.w[i]] = {PlaceRoleKind::waiting, i + 1, 0};
    c.place_roles[c.v[i]] = {PlaceRoleKind::decision, i + 1, 0};
    c.place_roles[c.dy[i]] = {PlaceRoleKind::dummy, i + 1, 0};
    c.place_roles[c.dx[i]] = {PlaceRoleKind::dummy, i + 1, 1};
    for (int vt = 0; vt < 4; ++vt) {
      c.place_roles[c.lit[i][vt]] = {PlaceRoleKind::literal, i + 1, vt};
      c.transition_roles[c.u_e[i][vt]] = {TransitionRoleKind::control, i + 1, vt};
      c.transition_roles[c.load[i][vt]] = {TransitionRoleKind::loading, i + 1, vt};
    }
  }
  for (int j = 0; j < c.m; ++j) c.place_roles[c.c[j]] = {PlaceRoleKind::clause, j + 1, 0};
  c.place_roles[c.f] = {PlaceRoleKind::final_, 0, 0};
  c.transition_roles[c.s] = {TransitionRoleKind::satisfaction, 0, 0};

  for (int i = 0; i < c.k; ++i) {
    c.order.push_back({K::place, c.h[i]});
    c.order.push_back({K::transition, c.u_e[i][0]});
    c.order.push_back({K::place, c.w[i]});
    c.order.push_back({K::transition, c.u_e[i][1]});
    c.order.push_back({K::place, c.lit[i][0]});
    c.order.push_back({K::place, c.lit[i][1]});
    c.order.push_back({K::place, c.v[i]});
    c.order.push_back({K::transition, c.u_e[i][2]});
    c.order.push_back({K::transition, c.u_e[i][3]});
    c.order.push_back({K::place, c.lit[i][2]});
    c.order.push_back({K::place, c.lit[i][3]});
  }
  for (int i = 0; i < c.k; ++i)
    for (int vt = 0; vt < 4; ++vt) c.order.push_back({K::transition, c.load[i][vt]});
  for (int i = 0; i < c.k; ++i) {
    c.order.push_back({K::place, c.dy[i]});
    c.order.push_back({K::place, c.dx[i]});
  }
  for (int j = 0; j < c.m; ++j) c.order.push_back({K::place, c.c[j]});
  c.order.push_back({K::transition, c.s});
  c.order.push_back({K::place, c.f});
}

}  // namespace

std::pair<CompiledQbfNet, Instance> compile_qbf_to_rawn(const Qbf& q_in) {
  const Qbf q = normalize_qbf(q_in);
  const int k = q.k;
  if (k < 1) throw PreconditionError("qbf compilation needs at least one block");

  // Pick each variable's dummy clause: the first occurrence of its
  // tautology. Everything else, duplicate tautologies included, is a real
  // clause with its own place.
  const int nvars = 2 * k;
  std::vector<bool> taken(q.clauses.size(), false);
  for (int var = 1; var <= nvars; ++var) {
    const auto taut = tautology_clause(var);
    bool found = false;
    for (size_t j = 0; j < q.clauses.size() && !found; ++j) {
      if (!taken[j] && q.clauses[j] == taut) {
        taken[j] = true;
        found = true;
      }
    }
    if (!found) throw Error("internal: normalized formula lacks a tautology clause");
  }
  std::vector<int32_t> real_idx;
  for (size_t j = 0; j < q.clauses.size(); ++j)
    if (!taken[j]) real_idx.push_back(static_cast<int32_t>(j));
  const int m = static_cast<int>(real_idx.size());

  CompiledQbfNet c;
  c.k = k;
  c.m = m;

  NetBuilder nb("qbf_k" + std::to_string(k) + "_m" + std::to_string(m));

  c.h.resize(k);
  c.w.resize(k);
  c.v.resize(k);
  c.lit.resize(k);
  c.dy.resize(k);
  c.dx.resize(k);
  for (int i = 1; i <= k; ++i) {
    const std::string n = std::to_string(i);
    c.h[i - 1] = nb.add_place("h" + n);
    c.w[i - 1] = nb.add_place("w" + n);
    c.lit[i - 1][0] = nb.add_place("bb" + n);  // y_i negative store
    c.lit[i - 1][1] = nb.add_place("b" + n);   // y_i positive store
    c.v[i - 1] = nb.add_place("v" + n);
    c.lit[i - 1][2] = nb.add_place("ab" + n);  // x_i negative store
    c.lit[i - 1][3] = nb.add_place("a" + n);   // x_i positive store
  }
  for (int i = 1; i <= k; ++i) {
    c.dy[i - 1] = nb.add_place("dy" + std::to_string(i));
    c.dx[i - 1] = nb.add_place("dx" + std::to_string(i));
  }
  c.c.resize(m);
  for (int j = 1; j <= m; ++j) c.c[j - 1] = nb.add_place("c" + std::to_string(j));
  c.f = nb.add_place("f");

  c.u_e.resize(k);
  for (int i = 1; i <= k; ++i) {
    const std::string n = std::to_string(i);
    c.u_e[i - 1][0] = nb.add_transition("u" + n + "f");
    c.u_e[i - 1][1] = nb.add_transition("u" + n + "t");
    c.u_e[i - 1][2] = nb.add_transition("e" + n + "f");
    c.u_e[i - 1][3] = nb.add_transition("e" + n + "t");
  }
  c.load.resize(k);
  for (int i = 1; i <= k; ++i) {
    const std::string n = std::to_string(i);
    c.load[i - 1][0] = nb.add_transition("lbb" + n);
    c.load[i - 1][1] = nb.add_transition("lb" + n);
    c.load[i - 1][2] = nb.add_transition("lab" + n);
    c.load[i - 1][3] = nb.add_transition("la" + n);
  }
  c.s = nb.add_transition("s");

  // Block arcs. A block's literal grants carry 2^(k-i) tokens: one per pass
  // of the subtree below it.
  for (int i = 0; i < k; ++i) {
    const Nat grant = pow2(k - 1 - i);
    nb.add_pre(c.u_e[i][0], c.h[i]);
    nb.add_post(c.u_e[i][0], c.w[i]);
    nb.add_post(c.u_e[i][0], c.v[i]);
    nb.add_post(c.u_e[i][0], c.lit[i][0], grant);
    nb.add_pre(c.u_e[i][1], c.w[i]);
    nb.add_post(c.u_e[i][1], c.v[i]);
    nb.add_post(c.u_e[i][1], c.lit[i][1], grant);
    nb.add_pre(c.u_e[i][2], c.v[i]);
    nb.add_post(c.u_e[i][2], c.lit[i][2], grant);
    nb.add_pre(c.u_e[i][3], c.v[i]);
    nb.add_post(c.u_e[i][3], c.lit[i][3], grant);
    if (i + 1 < k) {
      nb.add_post(c.u_e[i][2], c.h[i + 1]);
      nb.add_post(c.u_e[i][3], c.h[i + 1]);
    }
  }

  // Loading arcs: a literal token buys one token in every clause the literal
  // satisfies, its own dummy included.
  for (int i = 0; i < k; ++i) {
    for (int vt = 0; vt < 4; ++vt) {
      const int var = vt < 2 ? 2 * i + 1 : 2 * i + 2;
      const int lit = vt % 2 == 0 ? -var : var;
      const TransitionId ld = c.load[i][vt];
      nb.add_pre(ld, c.lit[i][vt]);
      nb.add_post(ld, vt < 2 ? c.dy[i] : c.dx[i]);
      for (int j = 0; j < m; ++j) {
        const auto& cl = q.clauses[real_idx[j]];
        if (std::find(cl.begin(), cl.end(), lit) != cl.end()) nb.add_post(ld, c.c[j]);
      }
    }
  }

  // Satisfaction: one token from every clause place, one to the final place.
  for (int i = 0; i < k; ++i) {
    nb.add_pre(c.s, c.dy[i]);
    nb.add_pre(c.s, c.dx[i]);
  }
  for (int j = 0; j < m; ++j) nb.add_pre(c.s, c.c[j]);
  nb.add_post(c.s, c.f);

  // Roles and the linear order: blocks, then loaders, then dummies, then real
  // clauses, then s and f. Every arc points forward in the order.
  fill_roles_and_order(c, nb.place_count(), nb.transition_count());

  // Resets. Control transitions wipe every gadget place occurring later in
  // the order; loaders wipe the dummies of later variables, which forces
  // loading to happen in variable order; s wipes all clause places so no
  // satisfaction token survives into the next round.
  using K = NodeId::Kind;
  std::vector<size_t> place_pos(nb.place_count(), 0);
  for (size_t idx = 0; idx < c.order.size(); ++idx)
    if (c.order[idx].kind == K::place) place_pos[c.order[idx].index] = idx;
  for (size_t idx = 0; idx < c.order.size(); ++idx) {
    if (c.order[idx].kind != K::transition) continue;
    const TransitionId t = c.order[idx].index;
    if (c.transition_roles[t].kind != TransitionRoleKind::control) continue;
    for (PlaceId p = 0; p < static_cast<PlaceId>(nb.place_count()); ++p)
      if (is_gadget_kind(c.place_roles[p].kind) && place_pos[p] > idx) nb.add_reset(t, p);
  }
  for (int i = 0; i < k; ++i) {
    for (int vt = 0; vt < 4; ++vt) {
      const int own = 2 * i + (vt < 2 ? 0 : 1);  // position in dy1 dx1 dy2 ...
      for (int d = own + 1; d < 2 * k; ++d)
        nb.add_reset(c.load[i][vt], d % 2 == 0 ? c.dy[d / 2] : c.dx[d / 2]);
    }
  }
  for (int i = 0; i < k; ++i) {
    nb.add_reset(c.s, c.dy[i]);
    nb.add_reset(c.s, c.dx[i]);
  }
  for (int j = 0; j < m; ++j) nb.add_reset(c.s, c.c[j]);

  nb.set_workflow(c.h[0], c.f);
  c.net = nb.build_net();

  const StructureClaim claim = StructureClaim::make_workflow(c.h[0], c.f);
  if (!claim_holds(validate_structure(c.net, claim), claim))
    throw Error("internal: compiled net failed structural validation");

  Marking initial = Marking::zero(c.net.place_count());
  initial.v[c.h[0]] = Tokens(Nat(1));
  Marking target = Marking::zero(c.net.place_count());
  target.v[c.f] = Tokens(pow2(k));
  Instance inst = make_instance(c.net, std::move(initial), std::move(target),
                                Objective::cover);
  return {std::move(c), std::move(inst)};
}

GoodnessReport goodness_report(const CompiledQbfNet& c, const Marking& m) {
  if (m.size() != c.net.place_count())
    throw PreconditionError("marking size does not match the compiled net");
  if (!m.omega_free())
    throw PreconditionError("progress measures are defined on omega-free markings");

  const int k = c.k;
  const Nat full = pow2(k);
  auto at = [&](PlaceId p) -> const Nat& { return m.v[p].finite(); };

  GoodnessReport r;
  r.g.resize(k);
  r.g_prime.resize(k);
  r.val.assign(2 * k, '?');
  bool good = true;
  Nat run = 0;  // sum over blocks so far of 2^(k-j) (2 h_j + w_j + v_j)
  for (int i = 0; i < k; ++i) {
    const Nat wt = pow2(k - 1 - i);
    run += wt * (2 * at(c.h[i]) + at(c.w[i]) + at(c.v[i]));
    r.g[i] = at(c.f) + at(c.lit[i][0]) + at(c.lit[i][1]) + at(c.dy[i]) + run -
             wt * at(c.v[i]);
    r.g_prime[i] = at(c.f) + at(c.lit[i][2]) + at(c.lit[i][3]) + at(c.dx[i]) + run;
    good = good && r.g[i] == full && r.g_prime[i] == full;

    auto three_way = [&](PlaceId neg, PlaceId pos) -> char {
      const bool has_neg = at(neg) > 0, has_pos = at(pos) > 0;
      if (has_neg == has_pos) return '?';
      return has_pos ? '1' : '0';
    };
    r.val[2 * i] = three_way(c.lit[i][0], c.lit[i][1]);
    r.val[2 * i + 1] = three_way(c.lit[i][2], c.lit[i][3]);
  }
  r.is_good = good;
  return r;
}

std::vector<TransitionId> synthesize_cover_run(const CompiledQbfNet& c, const Qbf& q) {
  if (q.k != c.k)
    throw PreconditionError("formula and compiled net disagree on the block count");
  if (!eval_qbf(q))
    throw PreconditionError("cannot synthesize a covering run: the formula is false");

  std::vector<TransitionId> out;
  std::vector<int> prefix;
  auto rec = [&](auto&& self, int block) -> void {
    if (block == c.k) {
      for (int i = 0; i < c.k; ++i) {
        out.push_back(c.load[i][prefix[2 * i] == 0 ? 0 : 1]);
        out.push_back(c.load[i][prefix[2 * i + 1] == 0 ? 2 : 3]);
      }
      out.push_back(c.s);
      return;
    }
    for (int y = 0; y <= 1; ++y) {
      out.push_back(c.u_e[block][y]);
      prefix.push_back(y);
      prefix.push_back(0);
      const int x = eval_qbf_partial(q, prefix) ? 0 : 1;
      prefix.back() = x;
      out.push_back(c.u_e[block][2 + x]);
      self(self, block + 1);
      prefix.pop_back();
      prefix.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

CompiledQbfNet recover_compiled_net(const Net& net) {
  CompiledQbfNet c;
  c.net = net;

  int k = 0;
  while (c.net.place_index("h" + std::to_string(k + 1)) >= 0) ++k;
  if (k < 1) throw PreconditionError("not a compiled net: no h1 place");
  int m = 0;
  while (c.net.place_index("c" + std::to_string(m + 1)) >= 0) ++m;
  c.k = k;
  c.m = m;
  if (c.net.place_count() != size_t(9 * k + m + 1) ||
      c.net.transition_count() != size_t(8 * k + 1))
    throw PreconditionError("not a compiled net: wrong place or transition census");

  auto place = [&](const std::string& n) {
    PlaceId p = c.net.place_index(n);
    if (p < 0) throw PreconditionError("not a compiled net: missing place " + n);
    return p;
  };
  auto trans = [&](const std::string& n) {
    TransitionId t = c.net.transition_index(n);
    if (t < 0) throw PreconditionError("not a compiled net: missing transition " + n);
    return t;
  };

  c.h.resize(k);
  c.w.resize(k);
  c.v.resize(k);
  c.lit.resize(k);
  c.dy.resize(k);
  c.dx.resize(k);
  c.u_e.resize(k);
  c.load.resize(k);
  c.c.resize(m);
  for (int i = 1; i <= k; ++i) {
    const std::string n = std::to_string(i);
    c.h[i - 1] = place("h" + n);
    c.w[i - 1] = place("w" + n);
    c.v[i - 1] = place("v" + n);
    c.lit[i - 1] = {place("bb" + n), place("b" + n), place("ab" + n), place("a" + n)};
    c.dy[i - 1] = place("dy" + n);
    c.dx[i - 1] = place("dx" + n);
    c.u_e[i - 1] = {trans("u" + n + "f"), trans("u" + n + "t"), trans("e" + n + "f"),
                    trans("e" + n + "t")};
    c.load[i - 1] = {trans("lbb" + n), trans("lb" + n), trans("lab" + n), trans("la" + n)};
  }
  for (int j = 1; j <= m; ++j) c.c[j - 1] = place("c" + std::to_string(j));
  c.f = place("f");
  c.s = trans("s");
  fill_roles_and_order(c, c.net.place_count(), c.net.transition_count());
  return c;
}

std::vector<std::string> check_compiled_step(const CompiledQbfNet& c, const Marking& before,
                                             TransitionId t, const Marking& after) {
  std::vector<std::string> bad;
  if (before.size() != c.net.place_count() || after.size() != c.net.place_count()) {
    bad.push_back("marking size does not match the compiled net");
    return bad;
  }
  if (!before.omega_free() || !after.omega_free()) {
    bad.push_back("omega entry in a compiled-net marking");
    return bad;
  }
  const std::string name = t >= 0 && t < static_cast<TransitionId>(c.net.transition_count())
                               ? c.net.transitions[t].name
                               : "?";

  const Nat df = after.v[c.f].finite() - before.v[c.f].finite();
  if (df < 0 || df > 1)
    bad.push_back("final place changed by " + df.str() + " on " + name);

  for (int i = 0; i < c.k; ++i) {
    auto both = [&](int neg, int pos) {
      return after.v[c.lit[i][neg]].finite() > 0 && after.v[c.lit[i][pos]].finite() > 0;
    };
    if (both(0, 1))
      bad.push_back("both y" + std::to_string(i + 1) + " literal places marked after " + name);
    if (both(2, 3))
      bad.push_back("both x" + std::to_string(i + 1) + " literal places marked after " + name);
  }

  const GoodnessReport gb = goodness_report(c, before);
  const GoodnessReport ga = goodness_report(c, after);
  for (int i = 0; i < c.k; ++i) {
    if (ga.g[i] > gb.g[i])
      bad.push_back("g" + std::to_string(i + 1) + " increased on " + name);
    if (ga.g_prime[i] > gb.g_prime[i])
      bad.push_back("g'" + std::to_string(i + 1) + " increased on " + name);
  }
  return bad;
}

}  // namespace rapn
