#include "hpilot/clausifier.hpp"

#include <algorithm>
#include <cctype>

namespace hpilot {

namespace {

struct Lit {
  Atom atom;
  bool positive = true;
};

using CnfClause = std::vector<Lit>;
using Cnf = std::vector<CnfClause>;

// Quantifier-free NNF tree: Atom/Not(Atom) leaves, And/Or nodes.
struct Clausifier {
  Signature& sig;
  std::map<std::string, Sort>& varSorts;
  ClausifyOptions opts;
  int zCounter = 0;
  int skCounter = 0;
  int defCounter = 0;

  std::string freshVar(const std::string& original) {
    std::string n;
    do { n = "z_" + std::to_string(++zCounter); } while (varSorts.count(n) || sig.isDeclared(n));
    auto it = varSorts.find(original);
    varSorts[n] = it != varSorts.end() ? it->second : sig.defaultNumericSort;
    return n;
  }

  // NNF with on-the-fly Skolemization. `neg` flips polarity; `scope` holds
  // the universal variables currently in force (renamed names).
  Formula nnf(const Formula& f, bool neg, std::vector<std::string>& scope,
              Substitution& ren) {
    switch (f.tag) {
      case Formula::Tag::Atom: {
        Formula lit = Formula::atomic(substitute(f.atom, ren));
        return neg ? Formula::negate(std::move(lit)) : lit;
      }
      case Formula::Tag::Not:
        return nnf(f.children[0], !neg, scope, ren);
      case Formula::Tag::And:
      case Formula::Tag::Or: {
        bool isAnd = (f.tag == Formula::Tag::And) != neg;
        std::vector<Formula> cs;
        for (const auto& c : f.children) cs.push_back(nnf(c, neg, scope, ren));
        return Formula::mk(isAnd ? Formula::Tag::And : Formula::Tag::Or, std::move(cs));
      }
      case Formula::Tag::Implies: {
        // a -> b  ==  ~a \/ b
        std::vector<Formula> cs = {nnf(f.children[0], !neg, scope, ren),
                                   nnf(f.children[1], neg, scope, ren)};
        return Formula::mk(neg ? Formula::Tag::And : Formula::Tag::Or, std::move(cs));
      }
      case Formula::Tag::Iff: {
        Formula fwd = Formula::mk(Formula::Tag::Implies, {f.children[0], f.children[1]});
        Formula bwd = Formula::mk(Formula::Tag::Implies, {f.children[1], f.children[0]});
        Formula both = Formula::mk(Formula::Tag::And, {std::move(fwd), std::move(bwd)});
        return nnf(both, neg, scope, ren);
      }
      case Formula::Tag::Forall:
      case Formula::Tag::Exists: {
        bool universal = (f.tag == Formula::Tag::Forall) != neg;
        Substitution inner = ren;
        std::size_t pushed = 0;
        if (universal) {
          for (const auto& v : f.vars) {
            std::string z = freshVar(v);
            inner[v] = Term::var(z);
            scope.push_back(z);
            ++pushed;
          }
        } else {
          for (const auto& v : f.vars) {
            std::string skName = sig.freshName("sk_" + std::to_string(++skCounter));
            Sort s = varSorts.count(v) ? varSorts[v] : sig.defaultNumericSort;
            SymbolDecl d;
            d.name = skName;
            d.arity = static_cast<int>(scope.size());
            d.kind = scope.empty() ? SymbolKind::Constant : SymbolKind::BaseFun;
            d.range = s;
            d.domain = scope.empty() ? s : varSorts[scope.front()];
            sig.declare(d);
            if (scope.empty()) {
              inner[v] = Term::constant(skName);
            } else {
              std::vector<Term> args;
              for (const auto& u : scope) args.push_back(Term::var(u));
              inner[v] = Term::apply(skName, std::move(args));
            }
          }
        }
        Formula body = nnf(f.children[0], neg, scope, inner);
        scope.resize(scope.size() - pushed);
        return body;
      }
    }
    throw Error("malformed formula");
  }

  bool extensionFree(const Formula& f) {
    bool ok = true;
    forEachTerm(f, [&](const Term& t) {
      if (t.tag == Term::Tag::Apply && sig.levelOf(t.name) > 0) ok = false;
    });
    return ok;
  }

  void freeVars(const Formula& f, std::vector<std::string>& out) {
    forEachTerm(f, [&](const Term& t) {
      if (t.tag == Term::Tag::Var &&
          std::find(out.begin(), out.end(), t.name) == out.end())
        out.push_back(t.name);
    });
  }

  Cnf toCnf(const Formula& f) {
    if (f.tag == Formula::Tag::Atom) return {{Lit{f.atom, true}}};
    if (f.tag == Formula::Tag::Not) return {{Lit{f.children[0].atom, false}}};
    if (f.tag == Formula::Tag::And) {
      Cnf out;
      for (const auto& c : f.children) {
        Cnf part = toCnf(c);
        out.insert(out.end(), part.begin(), part.end());
      }
      return out;
    }
    // Or: distribute, renaming conjunctive children past the first when that
    // avoids duplication (Plaisted-Greenbaum: only the positive direction of
    // the definition is needed here since renamed subformulas occur positively).
    Cnf acc = {{}};
    bool firstConjunctive = true;
    for (const auto& c : f.children) {
      Cnf part = toCnf(c);
      bool rename = opts.renameSubformulas && part.size() > 1 && acc.size() > 1 &&
                    !firstConjunctive && extensionFree(c);
      if (part.size() > 1) firstConjunctive = false;
      if (rename) {
        std::vector<std::string> vs;
        freeVars(c, vs);
        bool uniformSort = true;
        for (const auto& v : vs)
          if (varSorts[v] != varSorts[vs.front()]) uniformSort = false;
        if (uniformSort) {
          std::string defName = sig.freshName("def_" + std::to_string(++defCounter));
          SymbolDecl d;
          d.name = defName;
          d.arity = static_cast<int>(vs.size());
          d.kind = SymbolKind::Relation;
          d.domain = vs.empty() ? sig.defaultNumericSort : varSorts[vs.front()];
          d.range = Sort::boolean();
          sig.declare(d);
          std::vector<Term> args;
          for (const auto& v : vs) args.push_back(Term::var(v));
          Atom q = Atom::predicate(defName, args);
          // def -> subformula clauses become extra top-level clauses.
          for (auto cl : part) {
            cl.push_back(Lit{q, false});
            extraClauses.push_back(std::move(cl));
          }
          part = {{Lit{q, true}}};
        }
      }
      Cnf merged;
      for (const auto& a : acc)
        for (const auto& p : part) {
          CnfClause m = a;
          m.insert(m.end(), p.begin(), p.end());
          merged.push_back(std::move(m));
        }
      acc = std::move(merged);
    }
    return acc;
  }

  Cnf extraClauses;
};

Clause toClause(const CnfClause& lits, const Signature& sig) {
  Clause c;
  std::set<std::string> vars;
  for (const auto& l : lits) {
    for (const auto& t : l.atom.args)
      forEachSubterm(t, [&](const Term& s) {
        if (s.tag == Term::Tag::Var) vars.insert(s.name);
      });
    (l.positive ? c.consequent : c.antecedent).push_back(l.atom);
  }
  // Universal variables listed in z-index order where applicable.
  c.vars.assign(vars.begin(), vars.end());
  std::sort(c.vars.begin(), c.vars.end(), [](const std::string& a, const std::string& b) {
    auto num = [](const std::string& s) -> long long {
      auto p = s.rfind('_');
      if (p == std::string::npos || p + 1 >= s.size()) return -1;
      for (std::size_t i = p + 1; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return -1;
      return std::stoll(s.substr(p + 1));
    };
    long long na = num(a), nb = num(b);
    if (na >= 0 && nb >= 0 && a.substr(0, a.rfind('_')) == b.substr(0, b.rfind('_')))
      return na < nb;
    return a < b;
  });
  c.level = clauseLevel(c, sig);
  return c;
}

}  // namespace

std::vector<Clause> clausify(const std::vector<Formula>& formulas, Signature& sig,
                             std::map<std::string, Sort>& varSorts,
                             const ClausifyOptions& opts) {
  Clausifier cl{sig, varSorts, opts};
  std::vector<Clause> out;
  for (const auto& f : formulas) {
    std::vector<std::string> scope;
    Substitution ren;
    Formula n = cl.nnf(f, false, scope, ren);
    Cnf cnf = cl.toCnf(n);
    cnf.insert(cnf.end(), cl.extraClauses.begin(), cl.extraClauses.end());
    cl.extraClauses.clear();
    for (const auto& c : cnf) out.push_back(toClause(c, sig));
  }
  return out;
}

}  // namespace hpilot
