#include "rapn/structure.hpp"

#include <algorithm>
#include <queue>

namespace rapn {

std::string node_name(const Net& net, NodeId n) {
  if (n.kind == NodeId::Kind::place) return net.places.at(n.index);
  return net.transitions.at(n.index).name;
}

namespace {

// Nodes are numbered places first, transitions after, so "lowest index first"
// is well defined across both kinds.
struct ArcGraph {
  const Net& net;
  size_t p, t, n;
  std::vector<std::vector<int>> succ;
  std::vector<std::vector<int>> pred;

  explicit ArcGraph(const Net& net_) : net(net_) {
    p = net.places.size();
    t = net.transitions.size();
    n = p + t;
    succ.resize(n);
    pred.resize(n);
    for (size_t ti = 0; ti < t; ++ti) {
      int tn = static_cast<int>(p + ti);
      for (const auto& [pl, w] : net.transitions[ti].pre) {
        succ[pl].push_back(tn);
        pred[tn].push_back(pl);
      }
      for (const auto& [pl, w] : net.transitions[ti].post) {
        succ[tn].push_back(pl);
        pred[pl].push_back(tn);
      }
    }
    for (auto& v : succ) std::sort(v.begin(), v.end());
    for (auto& v : pred) std::sort(v.begin(), v.end());
  }

  NodeId node(int i) const {
    if (i < static_cast<int>(p)) return {NodeId::Kind::place, i};
    return {NodeId::Kind::transition, static_cast<int32_t>(i - p)};
  }
};

void topo_sort(const ArcGraph& g, StructureReport& rep) {
  std::vector<int> indeg(g.n, 0);
  for (size_t i = 0; i < g.n; ++i) indeg[i] = static_cast<int>(g.pred[i].size());
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (size_t i = 0; i < g.n; ++i)
    if (indeg[i] == 0) ready.push(static_cast<int>(i));
  std::vector<char> placed(g.n, 0);
  while (!ready.empty()) {
    int u = ready.top();
    ready.pop();
    placed[u] = 1;
    rep.topo_order.push_back(g.node(u));
    for (int v : g.succ[u])
      if (--indeg[v] == 0) ready.push(v);
  }
  if (rep.topo_order.size() == g.n) {
    rep.acyclic = true;
    return;
  }
  rep.acyclic = false;
  rep.topo_order.clear();
  // Extract one concrete cycle from the leftover subgraph: every remaining
  // node lies on or feeds into a cycle, so a successor walk must repeat.
  int start = -1;
  for (size_t i = 0; i < g.n; ++i)
    if (!placed[i]) {
      start = static_cast<int>(i);
      break;
    }
  std::vector<int> pos(g.n, -1);
  std::vector<int> path;
  int u = start;
  while (pos[u] < 0) {
    pos[u] = static_cast<int>(path.size());
    path.push_back(u);
    for (int v : g.succ[u])
      if (!placed[v]) {
        u = v;
        break;
      }
  }
  for (size_t i = pos[u]; i < path.size(); ++i) rep.cycle.push_back(g.node(path[i]));
  rep.cycle.push_back(g.node(u));
}

void check_workflow(const ArcGraph& g, const WorkflowDecl& wf, StructureReport& rep) {
  const Net& net = g.net;
  rep.workflow_checked = true;
  rep.workflow_places = wf;
  if (wf.initial_place < 0 || static_cast<size_t>(wf.initial_place) >= g.p ||
      wf.final_place < 0 || static_cast<size_t>(wf.final_place) >= g.p)
    throw PreconditionError("workflow check: unknown initial or final place");

  for (const auto& t : net.transitions) {
    if (t.post_weight(wf.initial_place))
      rep.violations.push_back("transition " + t.name + " produces into initial place " +
                               net.places[wf.initial_place]);
    if (t.pre_weight(wf.final_place))
      rep.violations.push_back("transition " + t.name + " consumes from final place " +
                               net.places[wf.final_place]);
  }

  auto bfs = [&](int start, const std::vector<std::vector<int>>& edges) {
    std::vector<char> seen(g.n, 0);
    std::queue<int> q;
    seen[start] = 1;
    q.push(start);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : edges[u])
        if (!seen[v]) {
          seen[v] = 1;
          q.push(v);
        }
    }
    return seen;
  };
  std::vector<char> fwd = bfs(wf.initial_place, g.succ);
  std::vector<char> bwd = bfs(wf.final_place, g.pred);
  for (size_t i = 0; i < g.n; ++i) {
    if (!fwd[i] || !bwd[i]) {
      NodeId nd = g.node(static_cast<int>(i));
      rep.violations.push_back((nd.kind == NodeId::Kind::place ? "place " : "transition ") +
                               node_name(net, nd) + " lies on no path from " +
                               net.places[wf.initial_place] + " to " +
                               net.places[wf.final_place]);
    }
  }
  rep.workflow = rep.violations.empty();
}

StructureReport validate_net(const Net& net, const StructureClaim& claim) {
  check_well_formed(net);
  ArcGraph g(net);
  StructureReport rep;
  topo_sort(g, rep);
  rep.every_transition_consumes = true;
  for (const auto& t : net.transitions)
    if (t.pre.empty()) rep.every_transition_consumes = false;
  if (claim.kind == StructureClaim::workflow) {
    std::optional<WorkflowDecl> wf = claim.wf ? claim.wf : net.workflow;
    if (!wf) wf = infer_workflow_places(net);
    if (!wf)
      throw PreconditionError(
          "workflow claim needs declared or inferable initial/final places");
    check_workflow(g, *wf, rep);
  }
  return rep;
}

}  // namespace

StructureReport validate_structure(const Net& net, const StructureClaim& claim) {
  return validate_net(net, claim);
}

StructureReport validate_structure(const ZeroTestNet& net, const StructureClaim& claim) {
  check_well_formed(net);
  return validate_net(net.base, claim);
}

bool claim_holds(const StructureReport& report, const StructureClaim& claim) {
  switch (claim.kind) {
    case StructureClaim::plain:
      return true;
    case StructureClaim::acyclic:
      return report.acyclic;
    case StructureClaim::workflow:
      return report.acyclic && report.workflow;
  }
  return false;
}

std::vector<PlaceId> place_topo_order(const Net& net) {
  StructureReport rep = validate_structure(net, StructureClaim::make_acyclic());
  if (!rep.acyclic) throw PreconditionError("net is not acyclic");
  std::vector<PlaceId> order;
  for (NodeId n : rep.topo_order)
    if (n.kind == NodeId::Kind::place) order.push_back(n.index);
  return order;
}

std::optional<WorkflowDecl> infer_workflow_places(const Net& net) {
  std::vector<char> has_in(net.places.size(), 0), has_out(net.places.size(), 0);
  for (const auto& t : net.transitions) {
    for (const auto& [p, w] : t.post) has_in[p] = 1;
    for (const auto& [p, w] : t.pre) has_out[p] = 1;
  }
  PlaceId source = -1, sink = -1;
  for (size_t i = 0; i < net.places.size(); ++i) {
    if (!has_in[i]) {
      if (source >= 0) return std::nullopt;
      source = static_cast<PlaceId>(i);
    }
    if (!has_out[i]) {
      if (sink >= 0) return std::nullopt;
      sink = static_cast<PlaceId>(i);
    }
  }
  if (source < 0 || sink < 0) return std::nullopt;
  return WorkflowDecl{source, sink};
}

Nat norm_of(const Net& net) {
  Nat n = Nat(net.places.size()) * Nat(net.transitions.size());
  for (const auto& t : net.transitions) {
    for (const auto& [p, w] : t.pre) n += w;
    for (const auto& [p, w] : t.post) n += w;
    n += t.resets.size();
  }
  return n;
}

Nat norm_of(const Marking& m) { return m.norm(); }

Nat norm_of(const Instance& inst) {
  return norm_of(underlying_net(inst)) + inst.initial.norm() + inst.target.norm();
}

Net strip_resets(const Net& net) {
  Net out = net;
  for (auto& t : out.transitions) t.resets.clear();
  return out;
}

}  // namespace rapn
