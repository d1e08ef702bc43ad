#ifndef HPILOT_PREPROCESS_HPP
#define HPILOT_PREPROCESS_HPP

#include <map>
#include <string>
#include <vector>

#include "hpilot/core.hpp"

namespace hpilot {

// Removes nesting of extension functions and non-variable arguments: each
// offending argument t of an extension application is replaced by a fresh
// universal variable (j, j1, ...) with defining antecedent equality j = t.
// Idempotent; fresh variable sorts are recorded in varSorts.
std::vector<Clause> flatten(const std::vector<Clause>& clauses, const Signature& sig,
                            std::map<std::string, Sort>& varSorts);

// Splits variables shared between distinct extension terms (and repeated
// within one term): later occurrences become x_1, x_2, ... with antecedent
// equalities x_k = x prepended. Requires flat clauses. Idempotent.
std::vector<Clause> linearize(const std::vector<Clause>& clauses, const Signature& sig,
                              std::map<std::string, Sort>& varSorts);

// Replaces write/update terms by fresh array symbols (innermost first):
// write(a, i, x) becomes a_wk with axioms a_wk(i) = x (query) and
// forall j. --> j = i, a_wk(j) = a(j) (extension axiom, split later).
// Throws Error for a write with a non-ground index.
Task eliminateWrites(const Task& t);

// Array mode only: consequent equalities between a universal index variable
// and a ground index term (or another variable) encode disequality guards;
// each such clause splits into two, with i <= t-1 / t+1 <= i antecedents.
std::vector<Clause> splitDisequalities(const std::vector<Clause>& clauses,
                                       const Signature& sig,
                                       const std::map<std::string, Sort>& varSorts);

// Pointer mode only: for every term f1(f2(...fn(p))) the clause gains the
// null-disjuncts p = null, fn(p) = null, ... as extra consequent atoms.
std::vector<Clause> addNullablePremises(const std::vector<Clause>& clauses,
                                        const Signature& sig,
                                        const std::map<std::string, Sort>& varSorts);

// Eliminates pseudo-quantifiers: an antecedent equation x = t (x universal,
// t ground, possibly after isolating x from x +- k) is applied as a
// substitution and dropped; repeated to fixpoint.
std::vector<Clause> unPseudofy(const std::vector<Clause>& clauses);

// Clauses whose universal variables never occur under an extension term
// (instantiation cannot ground them); returns printable warnings.
std::vector<std::string> groundnessWarnings(const std::vector<Clause>& clauses,
                                            const Signature& sig);

}  // namespace hpilot

#endif
