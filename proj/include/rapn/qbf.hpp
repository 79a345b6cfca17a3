#pragma once

// Fully quantified boolean formulas with a strictly alternating
// forall/exists prefix, in conjunctive normal form.

#include <span>
#include <string>
#include <vector>

#include "rapn/errors.hpp"

namespace rapn {

// Variables are positions 1..2k of the prefix: odd positions are universally
// quantified, even positions existentially. A literal is +v or -v. Clauses
// are kept sorted by (variable, polarity) with duplicates removed.
struct Qbf {
  int k = 0;
  std::vector<std::vector<int>> clauses;

  int variable_count() const { return 2 * k; }
  static bool universal(int var) { return var % 2 == 1; }
};

// Canonicalizes literal order, rejects out-of-range or empty clauses.
Qbf make_qbf(int k, std::vector<std::vector<int>> clauses);

// Accepts the QDIMACS subset: "p cnf V C", alternating single-variable
// quantifier lines starting universal, then exactly C zero-terminated
// clauses. Prefix position, not textual variable id, determines a
// variable's identity.
Qbf parse_qdimacs(const std::string& text);
std::string serialize_qdimacs(const Qbf& q);

// Game-tree evaluation; rejects k > 12.
bool eval_qbf(const Qbf& q);

// Evaluation of the residual game after fixing the first prefix_values.size()
// variables (values 0/1 in prefix order).
bool eval_qbf_partial(const Qbf& q, std::span<const int> prefix_values);

// Appends the two-literal tautology over every variable unless that exact
// clause is already present.
Qbf normalize_qbf(const Qbf& q);

// The tautology clause for prefix position var.
std::vector<int> tautology_clause(int var);

}  // namespace rapn
