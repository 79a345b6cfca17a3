#include "rapn/net_format.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>

namespace rapn {

namespace {

// Whitespace-splits one line; a token starting with '#' ends the payload, so
// '#' may appear inside names.
std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    if (tok.front() == '#') break;
    out.push_back(std::move(tok));
  }
  return out;
}

Nat parse_nat(const std::string& s, int line, const char* what) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c);
      }))
    throw ParseError(line, std::string(what) + " must be a decimal number, got '" + s + "'");
  return Nat(s);
}

void reject_unserializable(const std::string& name) {
  const bool bad = name.empty() || name.front() == '#' ||
                   name.find_first_of(" \t\r\n=,") != std::string::npos;
  if (bad) throw Error("name '" + name + "' cannot be written to a net file");
}

void append_marking(std::ostream& o, const char* label, const Net& net, const Marking& m) {
  o << label;
  for (size_t p = 0; p < m.size(); ++p) {
    if (m.v[p].is_omega()) throw Error("markings with omega entries cannot be written");
    if (m.v[p].finite() != 0) o << ' ' << net.places[p] << '=' << m.v[p].finite();
  }
  o << '\n';
}

struct MarkingSpec {
  int line = 0;
  std::vector<std::pair<PlaceId, Nat>> entries;
};

Marking realize(const MarkingSpec& spec, size_t places) {
  Marking m = Marking::zero(places);
  for (const auto& [p, n] : spec.entries) m.v[p] = Tokens(n);
  return m;
}

}  // namespace

const Net& NetDocument::base() const {
  return zero_test() ? std::get<ZeroTestNet>(net).base : std::get<Net>(net);
}

Instance NetDocument::instance(Objective fallback) const {
  if (!has_instance())
    throw PreconditionError("the net file carries no initial/target marking");
  const Objective obj = objective.value_or(fallback);
  if (zero_test()) return make_instance(std::get<ZeroTestNet>(net), *initial, *target, obj);
  return make_instance(std::get<Net>(net), *initial, *target, obj);
}

NetDocument parse_net_file(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  std::optional<NetBuilder> nb;
  StructureClaim claim = StructureClaim::make_plain();
  std::string wf_initial, wf_final;
  int wf_line = 0;
  int first_reset_line = 0, first_ztest_line = 0;
  std::optional<MarkingSpec> initial_spec, target_spec;
  std::optional<Objective> objective;

  auto builder = [&]() -> NetBuilder& {
    if (!nb) throw ParseError(lineno, "the file must start with a 'net' line");
    return *nb;
  };
  auto fresh_name = [&](const std::string& id) {
    if (builder().place(id) >= 0 || builder().transition(id) >= 0)
      throw ParseError(lineno, "duplicate identifier '" + id + "'");
  };
  auto place_of = [&](const std::string& id) {
    PlaceId p = builder().place(id);
    if (p < 0) throw ParseError(lineno, "unknown place '" + id + "'");
    return p;
  };
  auto transition_of = [&](const std::string& id) {
    TransitionId t = builder().transition(id);
    if (t < 0) throw ParseError(lineno, "unknown transition '" + id + "'");
    return t;
  };
  auto parse_marking_line = [&](const std::vector<std::string>& toks) {
    MarkingSpec spec;
    spec.line = lineno;
    for (size_t i = 1; i < toks.size(); ++i) {
      const auto eq = toks[i].find('=');
      if (eq == std::string::npos || eq == 0)
        throw ParseError(lineno, "expected place=count, got '" + toks[i] + "'");
      PlaceId p = place_of(toks[i].substr(0, eq));
      for (const auto& [seen, n] : spec.entries)
        if (seen == p) throw ParseError(lineno, "place '" + toks[i].substr(0, eq) +
                                                    "' listed twice");
      spec.entries.emplace_back(p, parse_nat(toks[i].substr(eq + 1), lineno, "token count"));
    }
    return spec;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto toks = tokens_of(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];

    if (kw == "net") {
      if (nb) throw ParseError(lineno, "duplicate 'net' line");
      if (toks.size() < 2) throw ParseError(lineno, "'net' needs a name");
      nb.emplace(toks[1]);
      if (toks.size() == 2 || (toks.size() == 3 && toks[2] == "plain")) {
        claim = StructureClaim::make_plain();
      } else if (toks.size() == 3 && toks[2] == "acyclic") {
        claim = StructureClaim::make_acyclic();
      } else if (toks.size() == 5 && toks[2] == "workflow") {
        claim.kind = StructureClaim::workflow;
        wf_initial = toks[3];
        wf_final = toks[4];
        wf_line = lineno;
      } else {
        throw ParseError(lineno, "expected 'net <name> [plain|acyclic|workflow <i> <f>]'");
      }
    } else if (kw == "place") {
      if (toks.size() != 2) throw ParseError(lineno, "'place' needs exactly one name");
      fresh_name(toks[1]);
      builder().add_place(toks[1]);
    } else if (kw == "trans") {
      if (toks.size() != 2) throw ParseError(lineno, "'trans' needs exactly one name");
      fresh_name(toks[1]);
      builder().add_transition(toks[1]);
    } else if (kw == "arc") {
      if (toks.size() != 4 && toks.size() != 5)
        throw ParseError(lineno, "expected 'arc <from> -> <to> [weight]'");
      if (toks[2] != "->") throw ParseError(lineno, "expected '->' between arc endpoints");
      Nat w = toks.size() == 5 ? parse_nat(toks[4], lineno, "arc weight") : Nat(1);
      if (w == 0) throw ParseError(lineno, "arc weight must be at least 1");
      PlaceId p = builder().place(toks[1]);
      if (p >= 0) {
        builder().add_pre(transition_of(toks[3]), p, std::move(w));
      } else {
        TransitionId t = transition_of(toks[1]);
        builder().add_post(t, place_of(toks[3]), std::move(w));
      }
    } else if (kw == "reset" || kw == "ztest") {
      if (toks.size() < 2) throw ParseError(lineno, "'" + kw + "' needs a transition");
      const bool is_reset = kw == "reset";
      int& first = is_reset ? first_reset_line : first_ztest_line;
      if (!first) first = lineno;
      if (first_reset_line && first_ztest_line)
        throw ParseError(lineno, "a file may not mix 'reset' and 'ztest'");
      TransitionId t = transition_of(toks[1]);
      for (size_t i = 2; i < toks.size(); ++i) {
        if (is_reset)
          builder().add_reset(t, place_of(toks[i]));
        else
          builder().add_ztest(t, place_of(toks[i]));
      }
    } else if (kw == "initial" || kw == "target") {
      auto& slot = kw == "initial" ? initial_spec : target_spec;
      if (slot) throw ParseError(lineno, "duplicate '" + kw + "' line");
      builder();
      slot = parse_marking_line(toks);
    } else if (kw == "objective") {
      if (objective) throw ParseError(lineno, "duplicate 'objective' line");
      if (toks.size() != 2 || (toks[1] != "reach" && toks[1] != "cover"))
        throw ParseError(lineno, "expected 'objective reach|cover'");
      objective = toks[1] == "reach" ? Objective::reach : Objective::cover;
    } else {
      throw ParseError(lineno, "unknown directive '" + kw + "'");
    }
  }

  if (!nb) throw ParseError(lineno, "empty input: expected a 'net' line");

  if (claim.kind == StructureClaim::workflow) {
    lineno = wf_line;
    claim.wf = WorkflowDecl{place_of(wf_initial), place_of(wf_final)};
    nb->set_workflow(claim.wf->initial_place, claim.wf->final_place);
  }

  NetDocument doc;
  doc.claim = claim;
  try {
    // A bare `ztest <t>` line types the net even when every test set is
    // empty; serialization relies on this to round-trip the kind.
    if (nb->has_ztests() || first_ztest_line)
      doc.net = nb->build_zero_test_net();
    else
      doc.net = nb->build_net();
  } catch (const Error& e) {
    throw ParseError(std::string(e.what()));
  }
  const size_t nplaces = doc.base().place_count();
  if (initial_spec) doc.initial = realize(*initial_spec, nplaces);
  if (target_spec) doc.target = realize(*target_spec, nplaces);
  doc.objective = objective;
  return doc;
}

std::string serialize_net_file(const NetDocument& doc) {
  const Net& b = doc.base();
  reject_unserializable(b.name);
  for (const auto& p : b.places) reject_unserializable(p);
  for (const auto& t : b.transitions) reject_unserializable(t.name);

  std::ostringstream o;
  o << "net " << b.name;
  if (doc.claim.kind == StructureClaim::workflow) {
    const std::optional<WorkflowDecl>& wf = doc.claim.wf ? doc.claim.wf : b.workflow;
    if (!wf) throw Error("workflow document without initial/final places");
    o << " workflow " << b.places.at(wf->initial_place) << ' '
      << b.places.at(wf->final_place);
  } else if (doc.claim.kind == StructureClaim::acyclic) {
    o << " acyclic";
  }
  o << '\n';

  for (const auto& p : b.places) o << "place " << p << '\n';

  const ZeroTestNet* ztn = doc.zero_test() ? &std::get<ZeroTestNet>(doc.net) : nullptr;
  bool any_ztest = false;
  for (size_t ti = 0; ti < b.transitions.size(); ++ti) {
    const Transition& t = b.transitions[ti];
    o << "trans " << t.name << '\n';
    for (const auto& [p, w] : t.pre) {
      o << "arc " << b.places[p] << " -> " << t.name;
      if (w != 1) o << ' ' << w;
      o << '\n';
    }
    for (const auto& [p, w] : t.post) {
      o << "arc " << t.name << " -> " << b.places[p];
      if (w != 1) o << ' ' << w;
      o << '\n';
    }
    if (!t.resets.empty()) {
      o << "reset " << t.name;
      for (PlaceId p : t.resets) o << ' ' << b.places[p];
      o << '\n';
    }
    if (ztn && !ztn->ztests[ti].empty()) {
      any_ztest = true;
      o << "ztest " << t.name;
      for (PlaceId p : ztn->ztests[ti]) o << ' ' << b.places[p];
      o << '\n';
    }
  }
  // A zero-test net whose tests are all empty still has to read back as one:
  // a bare ztest line marks the kind.
  if (ztn && !any_ztest && !b.transitions.empty())
    o << "ztest " << b.transitions.front().name << '\n';

  if (doc.initial) append_marking(o, "initial", b, *doc.initial);
  if (doc.target) append_marking(o, "target", b, *doc.target);
  if (doc.objective)
    o << "objective " << (*doc.objective == Objective::reach ? "reach" : "cover") << '\n';
  return o.str();
}

NetDocument document_of(Net net, std::optional<Instance> inst) {
  NetDocument doc;
  doc.claim = net.workflow
                  ? StructureClaim{StructureClaim::workflow, net.workflow}
                  : StructureClaim::make_plain();
  doc.net = std::move(net);
  if (inst) {
    if (inst->initial.size() != doc.base().place_count())
      throw PreconditionError("instance markings do not fit the net");
    doc.initial = std::move(inst->initial);
    doc.target = std::move(inst->target);
    doc.objective = inst->objective;
  }
  return doc;
}

NetDocument document_of(ZeroTestNet net, std::optional<Instance> inst) {
  NetDocument doc;
  doc.claim = StructureClaim::make_plain();
  doc.net = std::move(net);
  if (inst) {
    if (inst->initial.size() != doc.base().place_count())
      throw PreconditionError("instance markings do not fit the net");
    doc.initial = std::move(inst->initial);
    doc.target = std::move(inst->target);
    doc.objective = inst->objective;
  }
  return doc;
}

Marking parse_marking_spec(const Net& net, const std::string& spec) {
  Marking m = Marking::zero(net.place_count());
  std::vector<bool> seen(net.place_count(), false);
  size_t pos = 0;
  while (pos < spec.size()) {
    size_t comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    std::string item = spec.substr(pos, comma - pos);
    pos = comma + 1;
    // Trim blanks around the pair.
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    item = item.substr(b, e - b + 1);
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParseError("expected place=count, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    PlaceId p = net.place_index(name);
    if (p < 0) throw ParseError("unknown place '" + name + "'");
    if (seen[p]) throw ParseError("place '" + name + "' listed twice");
    seen[p] = true;
    m.v[p] = Tokens(parse_nat(item.substr(eq + 1), 0, "token count"));
  }
  return m;
}

std::vector<TransitionId> parse_run_file(const Net& net, const std::string& text) {
  std::vector<TransitionId> run;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    for (const auto& tok : tokens_of(line)) {
      TransitionId t = net.transition_index(tok);
      if (t < 0) throw ParseError(lineno, "unknown transition '" + tok + "'");
      run.push_back(t);
    }
  }
  return run;
}

}  // namespace rapn
