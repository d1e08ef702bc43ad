#ifndef HPILOT_REDUCE_HPP
#define HPILOT_REDUCE_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hpilot/core.hpp"

namespace hpilot {

// Fresh-name table introduced by purification: e_i = f(t1..tn), one entry per
// distinct extension ground term, grouped by head symbol, key-ordered within
// a group. Inner terms are purified first, so entry terms reference earlier
// e-constants rather than nested extension terms.
struct DefinitionMap {
  struct Entry {
    std::string name;
    Term term;
  };
  std::vector<Entry> entries;
};

struct ReduceOptions {
  bool arrayMode = false;
  // Stop after instance computation; no purification or congruence axioms.
  bool noSeparation = false;
  // Between chain levels, eliminate antecedent pseudo-definitions x = t.
  bool unPseudofyBetweenLevels = true;
};

struct ReduceResult {
  std::vector<Clause> clauses;      // final ground (or residual) clause set
  std::vector<DefinitionMap> defs;  // one map per processed level, outer first
  bool groundOk = true;             // false iff universal clauses remain
  std::string abortReason;          // nonempty: chain aborted, verdict Unknown
  std::vector<std::string> trace;
};

// Standard-locality instantiation: each universal variable ranges over the
// argument terms the store provides for its argument positions; the product
// is filtered by the membership condition (every extension ground term of an
// instance occurs in the store), simplified and deduplicated. Variables with
// no extension occurrence are left universal (the instance stays non-ground).
std::vector<Clause> computeInstances(const std::vector<Clause>& K, const std::set<Term>& store,
                                     const Signature& sig, int level);

// Ground index terms for array instantiation: array-read arguments and the
// ground sides of index guards, closed under equality/inequality links in the
// ground part, all arithmetic-simplified.
std::set<Term> arrayIndexTerms(const std::vector<Clause>& K, const std::vector<Clause>& G,
                               const Signature& sig,
                               const std::map<std::string, Sort>& varSorts);

// Full cartesian product of the universal variables over the index terms; no
// membership filter (the index set plays the role of the closure operator).
std::vector<Clause> computeArrayInstances(const std::vector<Clause>& K,
                                          const std::set<Term>& indexTerms);

struct PurifyResult {
  DefinitionMap defs;
  std::vector<Clause> instances;
  std::vector<Clause> query;
  bool ok = true;       // false: a non-ground extension term survived
  std::string problem;  // offending clause, for diagnostics
};

// Replaces every ground extension term of the given level by a fresh constant
// (innermost first); `eCounter` carries the e-name numbering across levels.
PurifyResult purify(std::vector<Clause> instances, std::vector<Clause> query, int level,
                    Signature& sig, int& eCounter);

// Congruence axioms standing in for the definitions: for each pair of entries
// with the same head symbol, args equal -> names equal. Exactly
// sum_f k_f (k_f - 1) / 2 clauses.
std::vector<Clause> congruenceInstances(const DefinitionMap& d);

// The chain loop: per level from the top down, instantiate (array or standard
// mode), purify, add congruence axioms, fold the result into the query, and
// renormalize the remaining axioms. A non-ground instance set above level 1
// aborts with a recorded reason.
// Mutates the task: purification introduces fresh constants into its signature.
ReduceResult reduceChain(Task& t, const ReduceOptions& opts);

}  // namespace hpilot

#endif
