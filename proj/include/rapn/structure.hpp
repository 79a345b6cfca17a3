#pragma once

// Structural analysis: acyclicity over the arc graph (reset and zero-test
// edges are exempt), workflow shape, and size norms.

#include <optional>
#include <string>
#include <vector>

#include "rapn/net.hpp"

namespace rapn {

struct NodeId {
  enum class Kind { place, transition };
  Kind kind = Kind::place;
  int32_t index = 0;

  bool operator==(const NodeId&) const = default;
};

std::string node_name(const Net& net, NodeId n);

struct StructureClaim {
  enum Kind { plain, acyclic, workflow };
  Kind kind = plain;
  // Required for workflow claims unless the net itself declares the places.
  std::optional<WorkflowDecl> wf;

  static StructureClaim make_plain() { return {plain, std::nullopt}; }
  static StructureClaim make_acyclic() { return {acyclic, std::nullopt}; }
  static StructureClaim make_workflow(PlaceId i, PlaceId f) {
    return {workflow, WorkflowDecl{i, f}};
  }
};

struct StructureReport {
  bool acyclic = false;
  // Interleaved places and transitions; valid iff acyclic. Ties are broken
  // lowest-index-first, places before transitions of equal index.
  std::vector<NodeId> topo_order;
  // Non-empty iff cyclic; first and last node coincide.
  std::vector<NodeId> cycle;

  bool workflow_checked = false;
  bool workflow = false;
  std::optional<WorkflowDecl> workflow_places;
  std::vector<std::string> violations;

  bool every_transition_consumes = false;
};

StructureReport validate_structure(const Net& net, const StructureClaim& claim);
StructureReport validate_structure(const ZeroTestNet& net, const StructureClaim& claim);

bool claim_holds(const StructureReport& report, const StructureClaim& claim);

// Places filtered from the topological order; throws PreconditionError on a
// cyclic net.
std::vector<PlaceId> place_topo_order(const Net& net);

// The unique source/sink places, when they are unique. Used when a workflow
// check is requested without declared initial/final places.
std::optional<WorkflowDecl> infer_workflow_places(const Net& net);

Nat norm_of(const Net& net);
Nat norm_of(const Marking& m);
Nat norm_of(const Instance& inst);

Net strip_resets(const Net& net);

}  // namespace rapn
