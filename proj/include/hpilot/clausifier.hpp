#ifndef HPILOT_CLAUSIFIER_HPP
#define HPILOT_CLAUSIFIER_HPP

#include <map>
#include <string>
#include <vector>

#include "hpilot/core.hpp"

namespace hpilot {

struct ClausifyOptions {
  // Structural renaming of subformulas whose distribution would duplicate
  // them (polarity-aware). With renaming off, pure distribution is used.
  bool renameSubformulas = true;
};

// Translates formulas to clauses: NNF, Skolemization (sk_1, sk_2, ...),
// variable renaming (z_1, z_2, ...), structural renaming, CNF distribution.
// Skolem symbols and renaming predicates are added to `sig`; sorts of the
// fresh variables are recorded in `varSorts`. Output clause levels are set;
// ground clauses are the caller's query partition.
std::vector<Clause> clausify(const std::vector<Formula>& formulas, Signature& sig,
                             std::map<std::string, Sort>& varSorts,
                             const ClausifyOptions& opts = {});

}  // namespace hpilot

#endif
