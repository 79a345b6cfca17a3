#include "rapn/qbf.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace rapn {

namespace {
// Sort key: variable first, negative polarity before positive.
bool lit_less(int a, int b) {
  int va = std::abs(a), vb = std::abs(b);
  if (va != vb) return va < vb;
  return a < b;
}

std::vector<int> canonical_clause(std::vector<int> lits, int nvars) {
  if (lits.empty()) throw Error("empty clause");
  for (int l : lits) {
    int v = std::abs(l);
    if (l == 0 || v < 1 || v > nvars)
      throw Error("literal " + std::to_string(l) + " out of range");
  }
  std::sort(lits.begin(), lits.end(), lit_less);
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  return lits;
}
}  // namespace

Qbf make_qbf(int k, std::vector<std::vector<int>> clauses) {
  if (k < 1) throw Error("at least one quantifier block is required");
  Qbf q;
  q.k = k;
  q.clauses.reserve(clauses.size());
  for (auto& c : clauses) q.clauses.push_back(canonical_clause(std::move(c), 2 * k));
  return q;
}

Qbf parse_qdimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  long vars = -1, nclauses = -1;

  auto next_line = [&](std::string& out) {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      if (line[0] == 'c') continue;  // comment
      out = line;
      return true;
    }
    return false;
  };

  std::string cur;
  if (!next_line(cur)) throw ParseError(lineno, "missing header");
  {
    std::istringstream hs(cur);
    std::string p, cnf;
    if (!(hs >> p >> cnf >> vars >> nclauses) || p != "p" || cnf != "cnf" || vars < 0 ||
        nclauses < 0)
      throw ParseError(lineno, "malformed header, expected 'p cnf <vars> <clauses>'");
    std::string extra;
    if (hs >> extra) throw ParseError(lineno, "trailing tokens after header");
  }
  if (vars == 0) throw ParseError(lineno, "at least one variable is required");

  // Quantifier prefix: strictly alternating, one variable per line, starting
  // with a universal block. Position in the prefix is the variable identity;
  // the header count only bounds the textual ids. The prefix ends at the
  // first line not starting with a quantifier letter.
  std::vector<int> position_of(vars + 1, 0);
  int positions = 0;
  bool pending = false;
  while (next_line(cur)) {
    if (cur[0] != 'a' && cur[0] != 'e') {
      pending = true;
      break;
    }
    const int pos = ++positions;
    std::istringstream qs(cur);
    std::string qtype;
    long var = 0, zero = -1;
    if (!(qs >> qtype >> var >> zero) || (qtype != "a" && qtype != "e") || zero != 0)
      throw ParseError(lineno, "malformed quantifier line");
    std::string extra;
    if (qs >> extra)
      throw ParseError(lineno, "quantifier line must bind exactly one variable");
    const bool want_universal = pos % 2 == 1;
    if (want_universal != (qtype == "a"))
      throw ParseError(lineno, "prefix must alternate a,e,a,e,... starting with a");
    if (var < 1 || var > vars) throw ParseError(lineno, "quantified variable out of range");
    if (position_of[var] != 0)
      throw ParseError(lineno, "variable quantified twice");
    position_of[var] = pos;
  }
  if (positions == 0) throw ParseError(lineno, "missing quantifier prefix");
  if (positions % 2 != 0)
    throw ParseError(lineno, "prefix must close with an existential block");

  auto take_line = [&](std::string& out) {
    if (pending) {
      out = cur;
      pending = false;
      return true;
    }
    return next_line(out);
  };

  Qbf q;
  q.k = positions / 2;
  for (long ci = 0; ci < nclauses; ++ci) {
    if (!take_line(cur)) throw ParseError(lineno, "fewer clauses than header declares");
    std::istringstream cs(cur);
    std::vector<int> lits;
    long lit;
    bool terminated = false;
    while (cs >> lit) {
      if (lit == 0) {
        terminated = true;
        std::string extra;
        if (cs >> extra) throw ParseError(lineno, "tokens after clause terminator");
        break;
      }
      long v = std::labs(lit);
      if (v > vars) throw ParseError(lineno, "unbound variable in clause");
      int pos = position_of[v];
      if (pos == 0) throw ParseError(lineno, "unbound variable in clause");
      lits.push_back(lit > 0 ? pos : -pos);
    }
    if (!terminated) throw ParseError(lineno, "clause not terminated by 0");
    if (lits.empty()) throw ParseError(lineno, "empty clause");
    q.clauses.push_back(canonical_clause(std::move(lits), positions));
  }
  if (take_line(cur)) throw ParseError(lineno, "more clauses than header declares");
  return q;
}

std::string serialize_qdimacs(const Qbf& q) {
  std::ostringstream out;
  out << "p cnf " << 2 * q.k << ' ' << q.clauses.size() << '\n';
  for (int pos = 1; pos <= 2 * q.k; ++pos)
    out << (Qbf::universal(pos) ? 'a' : 'e') << ' ' << pos << " 0\n";
  for (const auto& c : q.clauses) {
    for (int l : c) out << l << ' ';
    out << "0\n";
  }
  return out.str();
}

namespace {
bool matrix_satisfied(const Qbf& q, const std::vector<int>& values) {
  for (const auto& c : q.clauses) {
    bool sat = false;
    for (int l : c) {
      int v = std::abs(l);
      if ((l > 0) == (values[v - 1] == 1)) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

bool eval_from(const Qbf& q, std::vector<int>& values, size_t pos) {
  if (pos > static_cast<size_t>(2 * q.k)) return matrix_satisfied(q, values);
  if (Qbf::universal(static_cast<int>(pos))) {
    for (int b : {0, 1}) {
      values[pos - 1] = b;
      if (!eval_from(q, values, pos + 1)) {
        values[pos - 1] = -1;
        return false;
      }
    }
    values[pos - 1] = -1;
    return true;
  }
  for (int b : {0, 1}) {
    values[pos - 1] = b;
    if (eval_from(q, values, pos + 1)) {
      values[pos - 1] = -1;
      return true;
    }
  }
  values[pos - 1] = -1;
  return false;
}
}  // namespace

bool eval_qbf(const Qbf& q) { return eval_qbf_partial(q, {}); }

bool eval_qbf_partial(const Qbf& q, std::span<const int> prefix_values) {
  if (q.k > 12)
    throw PreconditionError("brute-force evaluation supports at most 12 blocks");
  if (prefix_values.size() > static_cast<size_t>(2 * q.k))
    throw PreconditionError("more fixed values than variables");
  std::vector<int> values(2 * q.k, -1);
  for (size_t i = 0; i < prefix_values.size(); ++i) {
    if (prefix_values[i] != 0 && prefix_values[i] != 1)
      throw PreconditionError("fixed values must be 0 or 1");
    values[i] = prefix_values[i];
  }
  return eval_from(q, values, prefix_values.size() + 1);
}

std::vector<int> tautology_clause(int var) { return {-var, var}; }

Qbf normalize_qbf(const Qbf& q) {
  Qbf out = q;
  for (int var = 1; var <= 2 * q.k; ++var) {
    std::vector<int> taut = tautology_clause(var);
    bool present = false;
    for (const auto& c : out.clauses)
      if (c == taut) {
        present = true;
        break;
      }
    if (!present) out.clauses.push_back(taut);
  }
  return out;
}

}  // namespace rapn
