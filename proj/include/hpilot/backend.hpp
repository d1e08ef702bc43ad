#ifndef HPILOT_BACKEND_HPP
#define HPILOT_BACKEND_HPP

#include <map>
#include <string>
#include <vector>

#include "hpilot/core.hpp"
#include "hpilot/reduce.hpp"

namespace hpilot {

enum class RawStatus { Sat, Unsat, Unknown };

struct Verdict {
  enum class Kind { Unsat, Sat, Unknown };
  Kind kind = Kind::Unknown;
  std::string reason;  // Unknown only
};

struct SmtOptions {
  bool getModel = false;
};

// Deterministic SMT-LIB 2 script for a level-0 clause set: sort and symbol
// declarations in signature order, the interval constraint expanded per
// numeric constant, one assertion per clause. Universal clauses are emitted
// quantified (with a warning) — unsat answers stay trustworthy, sat does not.
std::string emitSmtlib(const std::vector<Clause>& clauses, const Signature& sig,
                       const std::map<std::string, Sort>& varSorts, const SmtOptions& opts,
                       std::vector<std::string>* warnings = nullptr);

struct SolverRun {
  RawStatus status = RawStatus::Unknown;
  std::string reason;     // when no status could be obtained
  std::string modelText;  // solver output after the status line
  double seconds = 0.0;
};

// Writes the script to `scriptPath` and runs `command scriptPath`, parsing the
// first sat/unsat/unknown token. timeoutSeconds <= 0 disables the timeout.
SolverRun runSolver(const std::string& script, const std::string& scriptPath,
                    const std::string& command, double timeoutSeconds = 0);

// Verdict policy: unsat is always trustworthy; sat only when locality was
// established (or asserted) and the reduced problem was fully ground.
Verdict interpret(RawStatus raw, const std::string& reason, bool allLocal, bool groundOk);

struct BaseModel {
  std::map<std::string, std::string> assignments;  // constant -> value text
};

// Tolerant reader for (define-fun c () S v) and (= c v) shapes.
BaseModel parseModel(const std::string& modelText);

// Pointwise extension-function model recovered from the definition maps.
struct ExtensionModel {
  std::map<std::string, std::map<std::vector<std::string>, std::string>> tables;
  std::map<std::string, std::string> defaults;   // per function, for undefined points
  std::map<std::string, std::string> constants;  // base model without the e_i names
  std::string error;  // nonempty: contradictory entries (reduction bug)
};

ExtensionModel buildExtensionModel(const BaseModel& m, const std::vector<DefinitionMap>& dStack,
                                   const Signature& sig);

// One "f(args) = value" line per defined point, lexicographically sorted,
// followed by per-function defaults and the base constants.
std::string modelListing(const ExtensionModel& m);

// Successor-map rendering of pointer-sorted functions.
std::string modelDot(const ExtensionModel& m, const Signature& sig);

// Direct evaluation of a ground clause under the extension model; used to
// re-check query clauses behind a sat verdict.
bool evaluateClause(const Clause& c, const ExtensionModel& m);

}  // namespace hpilot

#endif
