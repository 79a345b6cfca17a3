// Command-line front end.
//
// Exit codes: 0 = yes (valid / reachable / coverable / good / witness ok),
// 1 = no, 2 = search exhausted its budget, 3 = bad input of any kind.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rapn/decide.hpp"
#include "rapn/net_format.hpp"
#include "rapn/qbf.hpp"
#include "rapn/qbf_net.hpp"
#include "rapn/reductions.hpp"
#include "rapn/semantics.hpp"
#include "rapn/structure.hpp"

namespace {

using namespace rapn;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error("cannot write " + path);
}

NetDocument load_document(const std::string& path) { return parse_net_file(slurp(path)); }

const char* verdict_word(Answer a, Objective obj) {
  switch (a) {
    case Answer::yes:
      return obj == Objective::reach ? "REACHABLE" : "COVERABLE";
    case Answer::no:
      return obj == Objective::reach ? "UNREACHABLE" : "UNCOVERABLE";
    default:
      return "EXHAUSTED";
  }
}

int verdict_exit(Answer a) {
  switch (a) {
    case Answer::yes:
      return 0;
    case Answer::no:
      return 1;
    default:
      return 2;
  }
}

void print_witness(const Net& net, const std::vector<TransitionId>& seq) {
  std::cout << "witness:";
  for (TransitionId t : seq) std::cout << ' ' << net.transitions[t].name;
  std::cout << '\n';
}

void print_stats(const SearchStats& s) {
  std::cout << "stats: states=" << s.states_explored << " peak_norm=" << s.peak_norm
            << '\n';
}

// The reach/cover commands insist that the file does not declare the other
// objective; a missing objective line defaults to the command's own.
Instance instance_for(const NetDocument& doc, Objective obj, const char* other_cmd) {
  if (doc.objective && *doc.objective != obj)
    throw Error(std::string("the file declares the other objective; use the ") +
                other_cmd + " command");
  return doc.instance(obj);
}

std::vector<TransitionId> parse_fire_list(const Net& net, const std::string& spec) {
  std::vector<TransitionId> seq;
  std::string tok;
  std::istringstream in(spec);
  while (std::getline(in, tok, ',')) {
    const auto a = tok.find_first_not_of(" \t");
    if (a == std::string::npos) throw Error("empty entry in --fire list");
    const auto b = tok.find_last_not_of(" \t");
    const std::string name = tok.substr(a, b - a + 1);
    const TransitionId t = net.transition_index(name);
    if (t < 0) throw Error("unknown transition " + name);
    seq.push_back(t);
  }
  if (seq.empty()) throw Error("empty --fire list");
  return seq;
}

int cmd_validate(const std::string& path) {
  const NetDocument doc = load_document(path);
  const StructureReport rep =
      doc.zero_test() ? validate_structure(std::get<ZeroTestNet>(doc.net), doc.claim)
                      : validate_structure(std::get<Net>(doc.net), doc.claim);
  if (claim_holds(rep, doc.claim)) {
    std::cout << "VALID\n";
    return 0;
  }
  std::cout << "INVALID\n";
  for (const std::string& v : rep.violations) std::cout << "  " << v << '\n';
  return 1;
}

int cmd_simulate(const std::string& path, const std::string& fire, bool abstracted) {
  const NetDocument doc = load_document(path);
  if (!doc.initial) throw Error("the net file carries no initial marking");
  const Net& base = doc.base();
  const std::vector<TransitionId> seq = parse_fire_list(base, fire);

  FiringTrace trace;
  if (doc.zero_test()) {
    if (abstracted) throw Error("abstract simulation is defined for reset nets only");
    trace = replay(std::get<ZeroTestNet>(doc.net), *doc.initial, seq);
  } else {
    trace = replay(std::get<Net>(doc.net), *doc.initial, seq,
                   abstracted ? FireMode::abstracted : FireMode::concrete);
  }
  std::cout << "start: " << marking_to_string(base, trace.start) << '\n';
  for (const auto& [t, m] : trace.steps)
    std::cout << base.transitions[t].name << ": " << marking_to_string(base, m) << '\n';
  return 0;
}

int cmd_reach(const std::string& path) {
  const NetDocument doc = load_document(path);
  const Instance inst = instance_for(doc, Objective::reach, "cover");
  const Verdict v = decide_reach_rawn(inst);
  std::cout << verdict_word(v.answer, Objective::reach) << '\n';
  if (v.witness) print_witness(underlying_net(inst), *v.witness);
  print_stats(v.stats);
  return verdict_exit(v.answer);
}

int cmd_cover(const std::string& path) {
  const NetDocument doc = load_document(path);
  const Instance inst = instance_for(doc, Objective::cover, "reach");
  const Verdict v = decide_cover_rapn(inst);
  std::cout << verdict_word(v.answer, Objective::cover) << '\n';
  if (v.witness) {
    // Printed witnesses must replay concretely, so expand the saturating
    // sequence before showing it.
    const Net& net = underlying_net(inst);
    try {
      print_witness(net, concretize_cover_witness(net, inst.initial, *v.witness, inst.target));
    } catch (const WitnessError& e) {
      std::cerr << "note: witness suppressed: " << e.what() << '\n';
    }
  }
  print_stats(v.stats);
  return verdict_exit(v.answer);
}

int cmd_oracle(const std::string& path, const SearchBudget& budget) {
  const NetDocument doc = load_document(path);
  const Instance inst = doc.instance(Objective::reach);
  const Verdict v = oracle_search(inst, budget);
  std::cout << verdict_word(v.answer, inst.objective) << '\n';
  if (v.witness) print_witness(underlying_net(inst), *v.witness);
  print_stats(v.stats);
  return verdict_exit(v.answer);
}

int cmd_compile_qbf(const std::string& path, const std::string& out) {
  const Qbf q = parse_qdimacs(slurp(path));
  auto [compiled, inst] = compile_qbf_to_rawn(q);
  spill(out, serialize_net_file(document_of(compiled.net, inst)));
  return 0;
}

int cmd_to_unary(const std::string& path, const std::string& out) {
  const NetDocument doc = load_document(path);
  const UnaryReduction red = binary_to_unary(doc.instance(Objective::cover));
  spill(out, serialize_net_file(
                 document_of(std::get<Net>(red.instance.net), red.instance)));
  return 0;
}

int cmd_acyclify(const std::string& path, const std::string& out) {
  const NetDocument doc = load_document(path);
  const Instance red = acyclify_zero_tests(doc.instance(Objective::reach));
  spill(out, serialize_net_file(document_of(std::get<ZeroTestNet>(red.net), red)));
  return 0;
}

int cmd_deresets(const std::string& path, const std::string& out) {
  const NetDocument doc = load_document(path);
  const Instance red = zero_tests_to_resets(doc.instance(Objective::reach));
  spill(out, serialize_net_file(document_of(std::get<Net>(red.net), red)));
  return 0;
}

int cmd_check_witness(const std::string& path, const std::string& run_path) {
  const NetDocument doc = load_document(path);
  const Instance inst = doc.instance(Objective::reach);
  const std::vector<TransitionId> seq = parse_run_file(doc.base(), slurp(run_path));

  FiringTrace trace;
  try {
    if (doc.zero_test())
      trace = replay(std::get<ZeroTestNet>(inst.net), inst.initial, seq);
    else
      trace = replay(std::get<Net>(inst.net), inst.initial, seq, FireMode::concrete);
  } catch (const StepError& e) {
    std::cout << "WITNESS BAD: " << e.what() << '\n';
    return 1;
  }

  const Marking& fin = trace.final_marking();
  const bool ok = inst.objective == Objective::reach ? fin == inst.target
                                                     : fin.covers(inst.target);
  if (ok) {
    std::cout << "WITNESS OK\n";
    return 0;
  }
  std::cout << "WITNESS BAD: the final marking "
            << (inst.objective == Objective::reach ? "is not" : "does not cover")
            << " the target\n";
  return 1;
}

int cmd_goodness(const std::string& path, const std::string& spec) {
  const NetDocument doc = load_document(path);
  if (doc.zero_test()) throw Error("goodness is defined on compiled reset nets");
  const Net& net = std::get<Net>(doc.net);
  const CompiledQbfNet compiled = recover_compiled_net(net);
  const Marking m = parse_marking_spec(net, spec);
  const GoodnessReport rep = goodness_report(compiled, m);

  std::cout << (rep.is_good ? "GOOD" : "NOT-GOOD") << '\n';
  for (int i = 0; i < compiled.k; ++i)
    std::cout << 'g' << i + 1 << '=' << rep.g[i] << " g'" << i + 1 << '='
              << rep.g_prime[i] << '\n';
  std::cout << "val:";
  for (int i = 0; i < compiled.k; ++i)
    std::cout << " y" << i + 1 << '=' << rep.val[2 * i] << " x" << i + 1 << '='
              << rep.val[2 * i + 1];
  std::cout << '\n';
  return rep.is_good ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reset and zero-test net toolkit"};
  app.require_subcommand(1);

  std::string net_path, run_path, marking_spec, fire_spec, out_path;
  bool abstracted = false;
  std::optional<uint64_t> max_steps, max_norm, max_states;

  auto* validate = app.add_subcommand("validate", "check a net file against its declared kind");
  validate->add_option("net", net_path, "net file")->required();

  auto* simulate = app.add_subcommand("simulate", "fire a transition sequence");
  simulate->add_option("net", net_path, "net file")->required();
  simulate->add_option("--fire", fire_spec, "comma-separated transition names")->required();
  simulate->add_flag("--abstract", abstracted, "fire in the saturating abstraction");

  auto* reach = app.add_subcommand("reach", "decide exact reachability (acyclic workflow nets)");
  reach->add_option("net", net_path, "net file")->required();

  auto* cover = app.add_subcommand("cover", "decide coverability (acyclic nets)");
  cover->add_option("net", net_path, "net file")->required();

  auto* oracle = app.add_subcommand("oracle", "budgeted brute-force search");
  oracle->add_option("net", net_path, "net file")->required();
  oracle->add_option("--max-steps", max_steps, "longest run explored");
  oracle->add_option("--max-norm", max_norm, "largest marking norm enqueued");
  oracle->add_option("--max-states", max_states, "distinct markings visited");

  auto* compile = app.add_subcommand("compile-qbf", "compile a QDIMACS formula to a net");
  compile->add_option("qdimacs", net_path, "QDIMACS file")->required();
  compile->add_option("-o", out_path, "output net file (default stdout)");

  auto* tounary = app.add_subcommand("to-unary", "rewrite weighted arcs into unary gadgets");
  tounary->add_option("net", net_path, "net file")->required();
  tounary->add_option("-o", out_path, "output net file (default stdout)");

  auto* acyclify = app.add_subcommand("acyclify", "make a zero-test net acyclic");
  acyclify->add_option("net", net_path, "net file")->required();
  acyclify->add_option("-o", out_path, "output net file (default stdout)");

  auto* deresets = app.add_subcommand("deresets", "turn zero tests into resets");
  deresets->add_option("net", net_path, "net file")->required();
  deresets->add_option("-o", out_path, "output net file (default stdout)");

  auto* checkw = app.add_subcommand("check-witness", "replay a run against the instance");
  checkw->add_option("net", net_path, "net file")->required();
  checkw->add_option("--run", run_path, "file with a transition-name sequence")->required();

  auto* goodness = app.add_subcommand("goodness", "progress measures of a compiled-net marking");
  goodness->add_option("net", net_path, "compiled net file")->required();
  goodness->add_option("--marking", marking_spec, "comma-separated place=count pairs")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (*validate) return cmd_validate(net_path);
    if (*simulate) return cmd_simulate(net_path, fire_spec, abstracted);
    if (*reach) return cmd_reach(net_path);
    if (*cover) return cmd_cover(net_path);
    if (*oracle) {
      SearchBudget budget;
      budget.max_steps = max_steps;
      if (max_norm) budget.max_norm = Nat(*max_norm);
      budget.max_states = max_states;
      return cmd_oracle(net_path, budget);
    }
    if (*compile) return cmd_compile_qbf(net_path, out_path);
    if (*tounary) return cmd_to_unary(net_path, out_path);
    if (*acyclify) return cmd_acyclify(net_path, out_path);
    if (*deresets) return cmd_deresets(net_path, out_path);
    if (*checkw) return cmd_check_witness(net_path, run_path);
    if (*goodness) return cmd_goodness(net_path, marking_spec);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 3;
}
