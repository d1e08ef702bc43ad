#include "hpilot/core.hpp"

#include <algorithm>
#include <sstream>

namespace hpilot {

// ---------------------------------------------------------------------------
// Sort
// ---------------------------------------------------------------------------

std::string Sort::str() const {
  switch (kind) {
    case SortKind::Int: return "int";
    case SortKind::Real: return "real";
    case SortKind::Bool: return "bool";
    case SortKind::Scalar: return "scalar";
    case SortKind::Pointer: return index == 1 ? "pointer" : "pointer#" + std::to_string(index);
    case SortKind::Free: return index == 1 ? "free" : "free#" + std::to_string(index);
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Signature
// ---------------------------------------------------------------------------

const SymbolDecl* Signature::find(const std::string& name) const {
  auto it = byName_.find(name);
  return it == byName_.end() ? nullptr : &decls_[it->second];
}

const SymbolDecl& Signature::get(const std::string& name) const {
  const SymbolDecl* d = find(name);
  if (!d) throw Error("undeclared symbol: " + name);
  return *d;
}

void Signature::declare(const SymbolDecl& d) {
  if (byName_.count(d.name)) throw Error("duplicate declaration: " + d.name);
  byName_[d.name] = decls_.size();
  decls_.push_back(d);
}

void Signature::declareOrCheck(const SymbolDecl& d) {
  const SymbolDecl* old = find(d.name);
  if (!old) { declare(d); return; }
  if (old->arity != d.arity || old->kind != d.kind)
    throw Error("conflicting redeclaration: " + d.name);
}

int Signature::maxExtensionLevel() const {
  int m = 0;
  for (const auto& d : decls_)
    if (d.kind == SymbolKind::ExtFun) m = std::max(m, d.level);
  return m;
}

int Signature::levelOf(const std::string& name) const {
  const SymbolDecl* d = find(name);
  return (d && d->kind == SymbolKind::ExtFun) ? d->level : 0;
}

std::string Signature::freshName(const std::string& stem) const {
  std::string n = stem;
  while (byName_.count(n)) n += "'";
  return n;
}

// ---------------------------------------------------------------------------
// Term
// ---------------------------------------------------------------------------

bool Term::operator==(const Term& o) const {
  return tag == o.tag && name == o.name && value == o.value && args == o.args;
}

bool Term::isGround() const {
  if (tag == Tag::Var) return false;
  for (const auto& a : args)
    if (!a.isGround()) return false;
  return true;
}

bool Term::contains(const Term& sub) const {
  if (*this == sub) return true;
  for (const auto& a : args)
    if (a.contains(sub)) return true;
  return false;
}

bool Term::containsVar(const std::string& v) const {
  if (tag == Tag::Var) return name == v;
  for (const auto& a : args)
    if (a.containsVar(v)) return true;
  return false;
}

std::string Term::str() const {
  switch (tag) {
    case Tag::Var:
    case Tag::Const:
      return name;
    case Tag::Numeral:
      return "_" + std::to_string(value);
    case Tag::Arith:
    case Tag::Apply: {
      std::string s = name + "(";
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) s += ", ";
        s += args[i].str();
      }
      return s + ")";
    }
  }
  return "?";
}

std::string Term::key() const {
  switch (tag) {
    case Tag::Var:
    case Tag::Const:
      return name;
    case Tag::Numeral:
      return std::to_string(value);
    case Tag::Arith: {
      auto wrap = [](const Term& t) {
        std::string s = t.key();
        return t.tag == Tag::Arith ? "(" + s + ")" : s;
      };
      return wrap(args[0]) + " " + name + " " + wrap(args[1]);
    }
    case Tag::Apply: {
      std::string s = name + "(";
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) s += ", ";
        s += args[i].key();
      }
      return s + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Atom
// ---------------------------------------------------------------------------

std::string relOpStr(RelOp r) {
  switch (r) {
    case RelOp::Le: return "<=";
    case RelOp::Lt: return "<";
    case RelOp::Ge: return ">=";
    case RelOp::Gt: return ">";
  }
  return "?";
}

bool Atom::operator==(const Atom& o) const {
  return tag == o.tag && rel == o.rel && pred == o.pred && args == o.args;
}

bool Atom::isGround() const {
  for (const auto& t : args)
    if (!t.isGround()) return false;
  return true;
}

std::string Atom::str() const {
  switch (tag) {
    case Tag::Eq:
      return args[0].str() + " = " + args[1].str();
    case Tag::Ineq:
      return args[0].str() + " " + relOpStr(rel) + " " + args[1].str();
    case Tag::Pred: {
      std::string s = pred + "[";
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) s += ", ";
        s += args[i].str();
      }
      return s + "]";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Formula
// ---------------------------------------------------------------------------

std::string Formula::str() const {
  auto joined = [this](const char* op) {
    std::string s = std::string(op) + "(";
    for (std::size_t i = 0; i < children.size(); ++i) {
      if (i) s += ", ";
      s += children[i].str();
    }
    return s + ")";
  };
  switch (tag) {
    case Tag::Atom: return atom.str();
    case Tag::Not: return joined("NOT");
    case Tag::And: return joined("AND");
    case Tag::Or: return joined("OR");
    case Tag::Implies: return joined("IMPLIES");
    case Tag::Iff: return joined("IFF");
    case Tag::Forall:
    case Tag::Exists: {
      std::string s = tag == Tag::Forall ? "(FORALL " : "(EXISTS ";
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (i) s += ", ";
        s += vars[i];
      }
      return s + ").(" + children[0].str() + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Clause
// ---------------------------------------------------------------------------

bool Clause::isGround() const {
  if (!vars.empty()) return false;
  for (const auto& a : antecedent)
    if (!a.isGround()) return false;
  for (const auto& a : consequent)
    if (!a.isGround()) return false;
  return true;
}

std::string Clause::str() const {
  std::string s;
  if (!vars.empty()) {
    s += "[";
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (i) s += ", ";
      s += vars[i];
    }
    s += "] ";
  }
  if (guard) s += "{ " + guard->str() + " } ";
  for (std::size_t i = 0; i < antecedent.size(); ++i) {
    if (i) s += ", ";
    s += antecedent[i].str();
  }
  s += antecedent.empty() ? "---> " : " ---> ";
  for (std::size_t i = 0; i < consequent.size(); ++i) {
    if (i) s += ", ";
    s += consequent[i].str();
  }
  return s;
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

Term substitute(const Term& t, const Substitution& s) {
  if (t.tag == Term::Tag::Var) {
    auto it = s.find(t.name);
    return it == s.end() ? t : it->second;
  }
  Term out = t;
  for (auto& a : out.args) a = substitute(a, s);
  return out;
}

Atom substitute(const Atom& a, const Substitution& s) {
  Atom out = a;
  for (auto& t : out.args) t = substitute(t, s);
  return out;
}

Formula substitute(const Formula& f, const Substitution& s) {
  Formula out = f;
  if (f.tag == Formula::Tag::Atom) {
    out.atom = substitute(f.atom, s);
    return out;
  }
  if (f.tag == Formula::Tag::Forall || f.tag == Formula::Tag::Exists) {
    Substitution inner = s;
    for (const auto& v : f.vars) inner.erase(v);  // bound variables shadow
    out.children[0] = substitute(f.children[0], inner);
    return out;
  }
  for (auto& c : out.children) c = substitute(c, s);
  return out;
}

Clause substitute(const Clause& c, const Substitution& s) {
  Clause out = c;
  out.vars.clear();
  for (const auto& v : c.vars)
    if (!s.count(v)) out.vars.push_back(v);
  if (c.guard) out.guard = substitute(*c.guard, s);
  for (auto& a : out.antecedent) a = substitute(a, s);
  for (auto& a : out.consequent) a = substitute(a, s);
  return out;
}

// ---------------------------------------------------------------------------
// Ground arithmetic simplification
// ---------------------------------------------------------------------------

namespace {

// Splits a term into (core, additive numeral offset); core absent for pure
// numeral terms.
struct Decomp {
  std::optional<Term> core;
  long long offset = 0;
};

std::optional<Decomp> decompose(const Term& t) {
  if (t.tag == Term::Tag::Numeral) return Decomp{std::nullopt, t.value};
  if (t.tag != Term::Tag::Arith) return Decomp{t, 0};
  if (t.name == "+" || t.name == "-") {
    auto l = decompose(t.args[0]);
    auto r = decompose(t.args[1]);
    if (!l || !r) return std::nullopt;
    long long sign = t.name == "-" ? -1 : 1;
    if (!r->core) return Decomp{l->core, l->offset + sign * r->offset};
    if (!l->core && t.name == "+") return Decomp{r->core, l->offset + r->offset};
    return std::nullopt;  // two cores or subtraction of a core: leave as-is
  }
  if (t.name == "*" || t.name == "/") return std::nullopt;
  return std::nullopt;
}

Term recompose(const Decomp& d) {
  if (!d.core) return Term::numeral(d.offset);
  if (d.offset == 0) return *d.core;
  if (d.offset > 0) return Term::arith("+", *d.core, Term::numeral(d.offset));
  return Term::arith("-", *d.core, Term::numeral(-d.offset));
}

}  // namespace

Term simplifyGroundArith(const Term& t) {
  Term out = t;
  for (auto& a : out.args) a = simplifyGroundArith(a);
  if (out.tag != Term::Tag::Arith) return out;
  if ((out.name == "*" || out.name == "/") &&
      out.args[0].tag == Term::Tag::Numeral && out.args[1].tag == Term::Tag::Numeral) {
    long long l = out.args[0].value, r = out.args[1].value;
    if (out.name == "*") return Term::numeral(l * r);
    if (r == 0) throw Error("division by zero numeral");
    return Term::numeral(l / r);
  }
  if (auto d = decompose(out)) return recompose(*d);
  return out;
}

Atom simplifyGroundArith(const Atom& a) {
  Atom out = a;
  for (auto& t : out.args) t = simplifyGroundArith(t);
  return out;
}

Clause simplifyGroundArith(const Clause& c) {
  Clause out = c;
  for (auto& a : out.antecedent) a = simplifyGroundArith(a);
  for (auto& a : out.consequent) a = simplifyGroundArith(a);
  return out;
}

// ---------------------------------------------------------------------------
// Traversal
// ---------------------------------------------------------------------------

void forEachSubterm(const Term& t, const std::function<void(const Term&)>& f) {
  f(t);
  for (const auto& a : t.args) forEachSubterm(a, f);
}

void forEachTerm(const Formula& f, const std::function<void(const Term&)>& fn) {
  if (f.tag == Formula::Tag::Atom) {
    for (const auto& t : f.atom.args) forEachSubterm(t, fn);
    return;
  }
  for (const auto& c : f.children) forEachTerm(c, fn);
}

void forEachTerm(const Clause& c, const std::function<void(const Term&)>& f) {
  if (c.guard) forEachTerm(*c.guard, f);
  for (const auto& a : c.antecedent)
    for (const auto& t : a.args) forEachSubterm(t, f);
  for (const auto& a : c.consequent)
    for (const auto& t : a.args) forEachSubterm(t, f);
}

std::set<Term> extensionGroundTerms(const std::vector<Clause>& clauses,
                                    const Signature& sig, int level) {
  std::set<Term> out;
  for (const auto& c : clauses) {
    forEachTerm(c, [&](const Term& t) {
      if (t.tag != Term::Tag::Apply || !t.isGround()) return;
      if (sig.levelOf(t.name) == level && level > 0)
        out.insert(simplifyGroundArith(t));
    });
  }
  return out;
}

int clauseLevel(const Clause& c, const Signature& sig) {
  int m = 0;
  forEachTerm(c, [&](const Term& t) {
    if (t.tag == Term::Tag::Apply) m = std::max(m, sig.levelOf(t.name));
  });
  return m;
}

// ---------------------------------------------------------------------------
// Sort inference
// ---------------------------------------------------------------------------

Sort inferSort(const Term& t, const Signature& sig,
               const std::map<std::string, Sort>& varSorts) {
  switch (t.tag) {
    case Term::Tag::Var: {
      auto it = varSorts.find(t.name);
      if (it == varSorts.end()) throw SortError("variable of unknown sort: " + t.name);
      return it->second;
    }
    case Term::Tag::Const: {
      const SymbolDecl* d = sig.find(t.name);
      if (!d) throw SortError("undeclared constant: " + t.name);
      return d->range;
    }
    case Term::Tag::Numeral:
      return sig.defaultNumericSort;
    case Term::Tag::Arith: {
      Sort l = inferSort(t.args[0], sig, varSorts);
      Sort r = inferSort(t.args[1], sig, varSorts);
      if (!l.isNumeric() || !r.isNumeric())
        throw SortError("arithmetic on non-numeric operands in " + t.str());
      return l.kind == SortKind::Real || r.kind == SortKind::Real ? Sort::real() : l;
    }
    case Term::Tag::Apply: {
      const SymbolDecl* d = sig.find(t.name);
      if (!d) throw SortError("undeclared function: " + t.name);
      if (static_cast<std::size_t>(d->arity) != t.args.size())
        throw SortError("arity mismatch for " + t.name + ": expected " +
                        std::to_string(d->arity) + ", got " + std::to_string(t.args.size()));
      for (const auto& a : t.args) {
        Sort s = inferSort(a, sig, varSorts);
        if (s != d->domain && !(s.isNumeric() && d->domain.isNumeric()))
          throw SortError("argument of sort " + s.str() + " for " + t.name +
                          " expecting " + d->domain.str());
      }
      return d->range;
    }
  }
  throw SortError("malformed term");
}

void checkAtom(const Atom& a, const Signature& sig,
               const std::map<std::string, Sort>& varSorts) {
  switch (a.tag) {
    case Atom::Tag::Eq: {
      Sort l = inferSort(a.args[0], sig, varSorts);
      Sort r = inferSort(a.args[1], sig, varSorts);
      if (l != r && !(l.isNumeric() && r.isNumeric()))
        throw SortError("equality between sorts " + l.str() + " and " + r.str());
      return;
    }
    case Atom::Tag::Ineq: {
      Sort l = inferSort(a.args[0], sig, varSorts);
      Sort r = inferSort(a.args[1], sig, varSorts);
      if (!l.isNumeric() || !r.isNumeric())
        throw SortError("inequality over non-numeric sorts in " + a.str());
      return;
    }
    case Atom::Tag::Pred: {
      const SymbolDecl* d = sig.find(a.pred);
      if (!d || d->kind != SymbolKind::Relation)
        throw SortError("undeclared relation: " + a.pred);
      if (static_cast<std::size_t>(d->arity) != a.args.size())
        throw SortError("arity mismatch for relation " + a.pred);
      for (const auto& t : a.args) inferSort(t, sig, varSorts);
      return;
    }
  }
}

}  // namespace hpilot
