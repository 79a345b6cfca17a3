#pragma once

#include <optional>
#include <string>
#include <variant>

#include "rapn/net.hpp"
#include "rapn/structure.hpp"

namespace rapn {

// A parsed net file: the net, the structural kind its header claims, and the
// optional decision instance carried alongside. parse/serialize round-trip,
// and serialization is canonical (declaration order, weight 1 left implicit,
// zero marking entries dropped).
struct NetDocument {
  std::variant<Net, ZeroTestNet> net;
  StructureClaim claim;
  std::optional<Marking> initial;
  std::optional<Marking> target;
  std::optional<Objective> objective;

  const Net& base() const;
  bool zero_test() const { return std::holds_alternative<ZeroTestNet>(net); }
  bool has_instance() const { return initial && target; }

  // Builds the instance from the file's markings. The file's objective wins;
  // fallback is used when the file has none. Throws when markings are absent.
  Instance instance(Objective fallback = Objective::reach) const;
};

NetDocument parse_net_file(const std::string& text);
std::string serialize_net_file(const NetDocument& doc);

NetDocument document_of(Net net, std::optional<Instance> inst = std::nullopt);
NetDocument document_of(ZeroTestNet net, std::optional<Instance> inst = std::nullopt);

// Comma-separated `place=count` pairs, e.g. "a=2,f=1". Unlisted places are
// zero; an empty spec is the zero marking.
Marking parse_marking_spec(const Net& net, const std::string& spec);

// A whitespace-separated transition-name sequence, `#` comments allowed.
std::vector<TransitionId> parse_run_file(const Net& net, const std::string& text);

}  // namespace rapn
