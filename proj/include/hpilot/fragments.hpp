#ifndef HPILOT_FRAGMENTS_HPP
#define HPILOT_FRAGMENTS_HPP

#include <string>
#include <utility>
#include <vector>

#include "hpilot/core.hpp"

namespace hpilot {

enum class Fragment { APF, Pointer, DefinitionalCandidate, None };

std::string fragmentStr(Fragment f);

// Per-clause fragment classification of the extension axioms. allLocal holds
// iff every extension clause landed in a fragment with a locality guarantee
// (APF or Pointer); DefinitionalCandidate is advisory only, since mutual
// exclusivity of the guards is not proven here.
struct FragmentReport {
  struct Entry {
    std::size_t clauseIndex = 0;
    Fragment fragment = Fragment::None;
    std::string reason;
  };
  std::vector<Entry> perClause;
  bool allLocal = false;
};

// Array property fragment: clause of shape forall xs. phi_I -> phi_V where
// phi_I is a positive conjunction of t <= u / t = u index atoms (no strict
// comparisons, no disequalities) and in phi_V universal variables occur only
// as direct array-read arguments, with no nested reads. Requires flat input.
std::pair<bool, std::string> checkArrayProperty(const Clause& c, const Signature& sig,
                                                const std::map<std::string, Sort>& varSorts);

// Nullable pointer fragment: every pointer-function argument chain carries its
// p = null disjuncts, and the clause is a disjunction of pointer equalities
// and scalar constraints.
std::pair<bool, std::string> checkNullable(const Clause& c, const Signature& sig,
                                           const std::map<std::string, Sort>& varSorts);

// Recomputes every clause level from the symbols it contains and repartitions
// clauses into query (ground), base axioms (level 0) and extension axioms.
// Clauses mixing non-adjacent extension levels are reported via `warnings`.
Task recalcLevels(const Task& t, std::vector<std::string>* warnings = nullptr);

FragmentReport analyzeFragments(const Task& t);

}  // namespace hpilot

#endif
