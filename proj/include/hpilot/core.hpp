#ifndef HPILOT_CORE_HPP
#define HPILOT_CORE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace hpilot {

// ---------------------------------------------------------------------------
// Sorts and signatures
// ---------------------------------------------------------------------------

enum class SortKind { Int, Real, Bool, Scalar, Pointer, Free };

struct Sort {
  SortKind kind = SortKind::Int;
  int index = 0;  // >= 1 for Pointer/Free, 0 otherwise

  static Sort integer() { return {SortKind::Int, 0}; }
  static Sort real() { return {SortKind::Real, 0}; }
  static Sort boolean() { return {SortKind::Bool, 0}; }
  static Sort scalar() { return {SortKind::Scalar, 0}; }
  static Sort pointer(int i = 1) { return {SortKind::Pointer, i}; }
  static Sort free(int i = 1) { return {SortKind::Free, i}; }

  bool isNumeric() const { return kind == SortKind::Int || kind == SortKind::Real; }
  bool operator==(const Sort& o) const { return kind == o.kind && index == o.index; }
  bool operator!=(const Sort& o) const { return !(*this == o); }
  bool operator<(const Sort& o) const {
    return kind != o.kind ? kind < o.kind : index < o.index;
  }
  std::string str() const;
};

enum class SymbolKind { BaseFun, ExtFun, Relation, Constant };

struct SymbolDecl {
  std::string name;
  int arity = 0;
  int level = 0;  // 0 = base
  Sort domain;    // single domain sort (mixed-sort argument lists unsupported)
  Sort range;
  SymbolKind kind = SymbolKind::Constant;
};

struct IntervalConstraint {
  std::optional<long long> lower, upper;
  bool lowerStrict = false, upperStrict = false;
};

class Signature {
 public:
  const SymbolDecl* find(const std::string& name) const;
  const SymbolDecl& get(const std::string& name) const;
  bool isDeclared(const std::string& name) const { return find(name) != nullptr; }
  void declare(const SymbolDecl& d);
  // Declares if absent; throws on conflicting redeclaration.
  void declareOrCheck(const SymbolDecl& d);

  const std::vector<SymbolDecl>& declarations() const { return decls_; }
  std::vector<SymbolDecl>& declarations() { return decls_; }

  int maxExtensionLevel() const;
  // Level of a function symbol, 0 for anything that is not an ExtFun.
  int levelOf(const std::string& name) const;

  std::optional<IntervalConstraint> interval;
  std::set<int> stableLevels;           // levels flagged as pointer extensions
  Sort defaultNumericSort = Sort::integer();

  // Fresh name helper: returns `stem` or `stem'`... until unused.
  std::string freshName(const std::string& stem) const;

 private:
  std::vector<SymbolDecl> decls_;
  std::map<std::string, std::size_t> byName_;
};

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

struct Term {
  enum class Tag { Var, Const, Numeral, Apply, Arith };

  Tag tag = Tag::Const;
  std::string name;          // Var/Const/Apply symbol name; Arith op ("+","-","*","/")
  long long value = 0;       // Numeral
  std::vector<Term> args;    // Apply arguments; Arith has exactly two

  static Term var(std::string n) { return {Tag::Var, std::move(n), 0, {}}; }
  static Term constant(std::string n) { return {Tag::Const, std::move(n), 0, {}}; }
  static Term numeral(long long v) { return {Tag::Numeral, "", v, {}}; }
  static Term apply(std::string f, std::vector<Term> as) {
    return {Tag::Apply, std::move(f), 0, std::move(as)};
  }
  static Term arith(std::string op, Term l, Term r) {
    return {Tag::Arith, std::move(op), 0, {std::move(l), std::move(r)}};
  }

  bool operator==(const Term& o) const;
  bool operator<(const Term& o) const { return key() < o.key(); }

  bool isGround() const;
  bool contains(const Term& sub) const;
  bool containsVar(const std::string& v) const;

  // Prefix form used in traces: +(u, _1).
  std::string str() const;
  // Infix form used for .loc output and as the deterministic ordering key:
  // "u + 1" sorts after "u" and before "u + 2".
  std::string key() const;
};

enum class RelOp { Le, Lt, Ge, Gt };

std::string relOpStr(RelOp r);

struct Atom {
  enum class Tag { Eq, Ineq, Pred };

  Tag tag = Tag::Eq;
  RelOp rel = RelOp::Le;     // Ineq only
  std::string pred;          // Pred only
  std::vector<Term> args;    // Eq/Ineq: exactly two

  static Atom eq(Term l, Term r) {
    Atom a; a.tag = Tag::Eq; a.args = {std::move(l), std::move(r)}; return a;
  }
  static Atom ineq(RelOp r, Term l, Term r2) {
    Atom a; a.tag = Tag::Ineq; a.rel = r; a.args = {std::move(l), std::move(r2)}; return a;
  }
  static Atom predicate(std::string p, std::vector<Term> as) {
    Atom a; a.tag = Tag::Pred; a.pred = std::move(p); a.args = std::move(as); return a;
  }

  bool operator==(const Atom& o) const;
  bool operator<(const Atom& o) const { return str() < o.str(); }
  bool isGround() const;
  std::string str() const;
};

// ---------------------------------------------------------------------------
// Formulas (full first-order syntax, used by the clausifier and for guards)
// ---------------------------------------------------------------------------

struct Formula {
  enum class Tag { Atom, Not, And, Or, Implies, Iff, Forall, Exists };

  Tag tag = Tag::Atom;
  Atom atom;                       // Tag::Atom
  std::vector<Formula> children;   // connectives: Not has 1, Implies/Iff 2, And/Or >= 2
  std::vector<std::string> vars;   // quantifiers

  static Formula mk(Tag t, std::vector<Formula> cs) {
    Formula f; f.tag = t; f.children = std::move(cs); return f;
  }
  static Formula atomic(Atom a) { Formula f; f.atom = std::move(a); return f; }
  static Formula negate(Formula f) { return mk(Tag::Not, {std::move(f)}); }
  static Formula quantified(Tag t, std::vector<std::string> vs, Formula body) {
    Formula f; f.tag = t; f.vars = std::move(vs); f.children = {std::move(body)}; return f;
  }

  std::string str() const;
  bool operator==(const Formula& o) const { return str() == o.str(); }
};

// ---------------------------------------------------------------------------
// Clauses
// ---------------------------------------------------------------------------

// Sorted clause  forall vars. guard \/ (/\antecedent -> \/consequent).
// The guard, when present, is a base formula free of extension symbols
// above the clause's own base level.
struct Clause {
  std::vector<std::string> vars;
  std::optional<Formula> guard;
  std::vector<Atom> antecedent;
  std::vector<Atom> consequent;
  int level = 0;

  bool isGround() const;
  std::string str() const;
  bool operator==(const Clause& o) const { return str() == o.str(); }
};

struct Task {
  Signature signature;
  std::vector<Clause> baseAxioms;       // level 0
  std::vector<Clause> extensionAxioms;  // levels >= 1
  std::vector<Formula> rawFormulas;     // pre-clausification
  std::vector<Clause> query;            // ground clauses
  bool arrayMode = false;               // write/update keyword seen or -arrays
  bool pointerMode = false;             // a pointer sort occurs
  // Inferred sorts of universal variables, shared across clauses by name.
  std::map<std::string, Sort> varSorts;
};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct SortError : Error {
  explicit SortError(const std::string& msg) : Error(msg) {}
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

using Substitution = std::map<std::string, Term>;

Term substitute(const Term& t, const Substitution& s);
Atom substitute(const Atom& a, const Substitution& s);
Formula substitute(const Formula& f, const Substitution& s);
// Capture-free simultaneous replacement; variables not in the domain are kept.
Clause substitute(const Clause& c, const Substitution& s);

// Constant-folds numerals and cancels additive numeral offsets around a
// single core term: (u + 1) - 1 -> u, (u + 1) + 1 -> u + 2. Idempotent.
Term simplifyGroundArith(const Term& t);
Atom simplifyGroundArith(const Atom& a);
Clause simplifyGroundArith(const Clause& c);

// All ground subterms whose head symbol is an extension function of the given
// level, deduplicated after simplifyGroundArith, in deterministic key order.
std::set<Term> extensionGroundTerms(const std::vector<Clause>& clauses,
                                    const Signature& sig, int level);

// Enumerate every subterm (including the term itself), outermost first.
void forEachSubterm(const Term& t, const std::function<void(const Term&)>& f);
void forEachTerm(const Clause& c, const std::function<void(const Term&)>& f);
void forEachTerm(const Formula& f, const std::function<void(const Term&)>& fn);

// Maximum extension level of symbols occurring in the clause (0 if none).
int clauseLevel(const Clause& c, const Signature& sig);

// Sort of a term under a signature; `varSorts` supplies sorts for variables.
// Throws SortError on arity mismatches or undeclared symbols.
Sort inferSort(const Term& t, const Signature& sig,
               const std::map<std::string, Sort>& varSorts);

// Checks well-sortedness of an atom (argument sorts agree, Ineq numeric
// unless relaxed). Throws SortError on violation.
void checkAtom(const Atom& a, const Signature& sig,
               const std::map<std::string, Sort>& varSorts);

}  // namespace hpilot

#endif
