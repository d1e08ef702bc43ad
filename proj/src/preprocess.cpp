#include "hpilot/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace hpilot {

namespace {

bool isExtensionFree(const Term& t, const Signature& sig) {
  bool ok = true;
  forEachSubterm(t, [&](const Term& s) {
    if (s.tag == Term::Tag::Apply && sig.levelOf(s.name) > 0) ok = false;
  });
  return ok;
}

// Symbols of lower levels count as base symbols while a clause is being
// normalized: in a chain, by the time level i is instantiated everything
// below it is already base.

// A legal argument of a level-`lvl` extension application after flattening.
bool isFlatArg(const Term& t, const Signature& sig, int lvl) {
  if (t.tag == Term::Tag::Var) return true;
  if (!t.isGround()) return false;
  bool clean = true;
  forEachSubterm(t, [&](const Term& s) {
    if (s.tag == Term::Tag::Apply && sig.levelOf(s.name) >= lvl) clean = false;
  });
  return clean;
}

std::string freshFlattenVar(const Clause& c, const Signature& sig, int& counter) {
  while (true) {
    std::string n = counter == 0 ? "j" : "j" + std::to_string(counter);
    ++counter;
    if (sig.isDeclared(n)) continue;
    if (std::find(c.vars.begin(), c.vars.end(), n) != c.vars.end()) continue;
    bool used = false;
    forEachTerm(c, [&](const Term& t) {
      if (t.tag == Term::Tag::Var && t.name == n) used = true;
    });
    if (!used) return n;
  }
}

Term replaceTermEverywhere(const Term& t, const Term& from, const Term& to) {
  if (t == from) return to;
  Term out = t;
  for (auto& a : out.args) a = replaceTermEverywhere(a, from, to);
  return out;
}

Clause replaceInClause(const Clause& c, const Term& from, const Term& to) {
  Clause out = c;
  for (auto& a : out.antecedent)
    for (auto& t : a.args) t = replaceTermEverywhere(t, from, to);
  for (auto& a : out.consequent)
    for (auto& t : a.args) t = replaceTermEverywhere(t, from, to);
  return out;
}

// Innermost extension-application argument violating flatness, if any.
// Innermost-first so nested extension terms unwind from the inside out.
std::optional<Term> findFlattenTarget(const Clause& c, const Signature& sig) {
  int lvl = clauseLevel(c, sig);
  std::optional<Term> found;
  std::function<void(const Term&)> visit = [&](const Term& t) {
    if (found) return;
    for (const auto& a : t.args) visit(a);
    if (found) return;
    if (t.tag != Term::Tag::Apply || sig.levelOf(t.name) != lvl) return;
    for (const auto& a : t.args)
      if (!isFlatArg(a, sig, lvl)) { found = a; return; }
  };
  forEachTerm(c, [&](const Term& t) { visit(t); });
  return found;
}

}  // namespace

std::vector<Clause> flatten(const std::vector<Clause>& clauses, const Signature& sig,
                            std::map<std::string, Sort>& varSorts) {
  std::vector<Clause> out;
  for (const auto& orig : clauses) {
    Clause c = orig;
    int counter = 0;
    while (auto target = findFlattenTarget(c, sig)) {
      std::string v = freshFlattenVar(c, sig, counter);
      Term var = Term::var(v);
      Clause replaced = replaceInClause(c, *target, var);
      // The defining equality keeps the original term.
      replaced.antecedent.insert(replaced.antecedent.begin(), Atom::eq(var, *target));
      replaced.vars.push_back(v);
      try {
        varSorts[v] = inferSort(*target, sig, varSorts);
      } catch (const SortError&) {
        varSorts[v] = sig.defaultNumericSort;
      }
      c = std::move(replaced);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Clause> linearize(const std::vector<Clause>& clauses, const Signature& sig,
                              std::map<std::string, Sort>& varSorts) {
  std::vector<Clause> out;
  for (const auto& orig : clauses) {
    Clause c = orig;
    int lvl = clauseLevel(c, sig);
    int counter = 0;
    std::map<std::string, Term> firstHost;  // variable -> first extension term using it
    std::vector<Atom> newEqs;
    std::vector<std::string> newVars;

    std::function<Term(const Term&)> rewrite = [&](const Term& t) -> Term {
      Term outT = t;
      if (t.tag == Term::Tag::Apply && sig.levelOf(t.name) == lvl && lvl > 0) {
        const Term& host = t;  // original occurrence form
        std::set<std::string> seenHere;
        for (auto& a : outT.args) {
          if (a.tag != Term::Tag::Var) { a = rewrite(a); continue; }
          std::string v = a.name;
          bool dupInTerm = seenHere.count(v) > 0;
          auto it = firstHost.find(v);
          bool dupAcrossTerms = it != firstHost.end() && !(it->second == host);
          if (dupInTerm || dupAcrossTerms) {
            std::string nv;
            do {
              nv = "x_" + std::to_string(++counter);
            } while (sig.isDeclared(nv) ||
                     std::find(c.vars.begin(), c.vars.end(), nv) != c.vars.end());
            newEqs.push_back(Atom::eq(Term::var(nv), Term::var(v)));
            newVars.push_back(nv);
            varSorts[nv] = varSorts.count(v) ? varSorts[v] : sig.defaultNumericSort;
            a = Term::var(nv);
          } else {
            if (it == firstHost.end()) firstHost[v] = host;
            seenHere.insert(v);
          }
        }
        return outT;
      }
      for (auto& a : outT.args) a = rewrite(a);
      return outT;
    };

    for (auto& a : c.antecedent)
      for (auto& t : a.args) t = rewrite(t);
    for (auto& a : c.consequent)
      for (auto& t : a.args) t = rewrite(t);
    c.antecedent.insert(c.antecedent.begin(), newEqs.begin(), newEqs.end());
    c.vars.insert(c.vars.end(), newVars.begin(), newVars.end());
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Write elimination
// ---------------------------------------------------------------------------

namespace {

// Innermost write term (its array argument is a plain constant), if any.
std::optional<Term> findInnermostWrite(const Task& t) {
  std::optional<Term> found;
  auto scan = [&](const Clause& c) {
    forEachTerm(c, [&](const Term& s) {
      if (found) return;
      if (s.tag == Term::Tag::Apply && (s.name == "write" || s.name == "update") &&
          s.args[0].tag == Term::Tag::Const)
        found = s;
    });
  };
  for (const auto& c : t.extensionAxioms) scan(c);
  for (const auto& c : t.query) scan(c);
  for (const auto& c : t.baseAxioms) scan(c);
  return found;
}

// __read over a plain array constant collapses to an ordinary application.
Term collapseReads(const Term& t) {
  Term out = t;
  for (auto& a : out.args) a = collapseReads(a);
  if (out.tag == Term::Tag::Apply && out.name == "__read" &&
      out.args[0].tag == Term::Tag::Const)
    return Term::apply(out.args[0].name, {out.args[1]});
  return out;
}

void collapseReadsInPlace(Task& t) {
  auto fix = [&](std::vector<Clause>& cs) {
    for (auto& c : cs) {
      for (auto& a : c.antecedent)
        for (auto& x : a.args) x = collapseReads(x);
      for (auto& a : c.consequent)
        for (auto& x : a.args) x = collapseReads(x);
    }
  };
  fix(t.extensionAxioms);
  fix(t.query);
  fix(t.baseAxioms);
}

std::string rootArrayName(std::string n) {
  auto p = n.rfind("_w");
  if (p == std::string::npos) return n;
  for (std::size_t i = p + 2; i < n.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(n[i]))) return n;
  return p == 0 ? n : n.substr(0, p);
}

}  // namespace

Task eliminateWrites(const Task& input) {
  Task t = input;
  collapseReadsInPlace(t);
  std::map<std::string, int> counters;
  while (auto w = findInnermostWrite(t)) {
    const Term& arr = w->args[0];
    const Term& idx = w->args[1];
    const Term& val = w->args[2];
    if (!idx.isGround() || !val.isGround())
      throw Error("write with non-ground index or value: " + w->str());
    const SymbolDecl* base = t.signature.find(arr.name);
    if (!base) throw Error("write over undeclared array: " + arr.name);
    std::string root = rootArrayName(arr.name);
    std::string fresh;
    do {
      fresh = root + "_w" + std::to_string(++counters[root]);
    } while (t.signature.isDeclared(fresh));
    SymbolDecl d = *base;
    d.name = fresh;
    t.signature.declare(d);

    Term freshConst = Term::constant(fresh);
    auto fix = [&](std::vector<Clause>& cs) {
      for (auto& c : cs) {
        for (auto& a : c.antecedent)
          for (auto& x : a.args) x = collapseReads(replaceTermEverywhere(x, *w, freshConst));
        for (auto& a : c.consequent)
          for (auto& x : a.args) x = collapseReads(replaceTermEverywhere(x, *w, freshConst));
      }
    };
    fix(t.extensionAxioms);
    fix(t.query);
    fix(t.baseAxioms);

    // a_wk(i) = x
    Clause unit;
    unit.consequent.push_back(Atom::eq(Term::apply(fresh, {idx}), val));
    unit.level = d.level;
    t.query.push_back(std::move(unit));
    // forall j. j != i -> a_wk(j) = a(j), encoded with the consequent equality
    std::string jv = "i";
    int jc = 0;
    while (t.signature.isDeclared(jv) || t.varSorts.count(jv))
      jv = "i" + std::to_string(++jc);
    Clause frame;
    frame.vars.push_back(jv);
    frame.consequent.push_back(Atom::eq(Term::var(jv), idx));
    frame.consequent.push_back(
        Atom::eq(Term::apply(fresh, {Term::var(jv)}), Term::apply(arr.name, {Term::var(jv)})));
    frame.level = d.level;
    t.varSorts[jv] = d.domain;
    t.extensionAxioms.push_back(std::move(frame));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Disequality splitting
// ---------------------------------------------------------------------------

std::vector<Clause> splitDisequalities(const std::vector<Clause>& clauses,
                                       const Signature& sig,
                                       const std::map<std::string, Sort>& varSorts) {
  auto indexSide = [&](const Term& t, const Clause& c) -> bool {
    // A side usable in a guard: extension-free, of integer sort, and either
    // a universal variable or ground.
    if (!isExtensionFree(t, sig)) return false;
    if (t.tag == Term::Tag::Var) {
      if (std::find(c.vars.begin(), c.vars.end(), t.name) == c.vars.end()) return false;
      auto it = varSorts.find(t.name);
      return it == varSorts.end() || it->second.kind == SortKind::Int;
    }
    if (!t.isGround()) return false;
    try {
      return inferSort(t, sig, varSorts).kind == SortKind::Int;
    } catch (const SortError&) {
      return false;
    }
  };

  std::vector<Clause> work(clauses);
  std::vector<Clause> out;
  while (!work.empty()) {
    Clause c = std::move(work.back());
    work.pop_back();
    bool split = false;
    for (std::size_t i = 0; i < c.consequent.size(); ++i) {
      const Atom& a = c.consequent[i];
      if (a.tag != Atom::Tag::Eq) continue;
      const Term& l = a.args[0];
      const Term& r = a.args[1];
      bool lVar = l.tag == Term::Tag::Var, rVar = r.tag == Term::Tag::Var;
      if (!lVar && !rVar) continue;
      if (!indexSide(l, c) || !indexSide(r, c)) continue;
      const Term& v = lVar ? l : r;
      const Term& u = lVar ? r : l;
      Clause below = c, above = c;
      below.consequent.erase(below.consequent.begin() + i);
      above.consequent.erase(above.consequent.begin() + i);
      below.antecedent.push_back(Atom::ineq(
          RelOp::Le, v, simplifyGroundArith(Term::arith("-", u, Term::numeral(1)))));
      above.antecedent.push_back(Atom::ineq(
          RelOp::Le, simplifyGroundArith(Term::arith("+", u, Term::numeral(1))), v));
      work.push_back(std::move(below));
      work.push_back(std::move(above));
      split = true;
      break;
    }
    if (!split) out.push_back(std::move(c));
  }
  // Restore a stable order (work is a LIFO).
  std::reverse(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Nullable premises
// ---------------------------------------------------------------------------

std::vector<Clause> addNullablePremises(const std::vector<Clause>& clauses,
                                        const Signature& sig,
                                        const std::map<std::string, Sort>& varSorts) {
  (void)varSorts;
  std::vector<Clause> out;
  for (const auto& orig : clauses) {
    Clause c = orig;
    std::vector<Term> needed;  // pointer-sorted arguments needing a null guard
    std::function<void(const Term&)> visit = [&](const Term& t) {
      for (const auto& a : t.args) visit(a);  // innermost first
      if (t.tag != Term::Tag::Apply) return;
      const SymbolDecl* d = sig.find(t.name);
      if (!d || d->domain.kind != SortKind::Pointer) return;
      for (const auto& a : t.args) {
        if (a.tag == Term::Tag::Numeral) continue;
        if (a.tag == Term::Tag::Const && a.name == "null") continue;
        if (std::find(needed.begin(), needed.end(), a) == needed.end())
          needed.push_back(a);
      }
    };
    for (const auto& a : c.antecedent)
      for (const auto& t : a.args) visit(t);
    for (const auto& a : c.consequent)
      for (const auto& t : a.args) visit(t);

    std::vector<Atom> guards;
    Term null = Term::constant("null");
    for (const auto& t : needed) {
      bool present = false;
      for (const auto& a : c.consequent) {
        if (a.tag != Atom::Tag::Eq) continue;
        if ((a.args[0] == t && a.args[1] == null) || (a.args[1] == t && a.args[0] == null))
          present = true;
      }
      if (!present) guards.push_back(Atom::eq(t, null));
    }
    c.consequent.insert(c.consequent.begin(), guards.begin(), guards.end());
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pseudo-quantifier elimination
// ---------------------------------------------------------------------------

namespace {

// Solve an equation side pair for a universal variable: x = t, t = x,
// x + k = t, x - k = t (and mirrored). Returns (var, value).
std::optional<std::pair<std::string, Term>> solvePseudo(const Atom& a, const Clause& c) {
  if (a.tag != Atom::Tag::Eq) return std::nullopt;
  auto isUVar = [&](const Term& t) {
    return t.tag == Term::Tag::Var &&
           std::find(c.vars.begin(), c.vars.end(), t.name) != c.vars.end();
  };
  for (int side = 0; side < 2; ++side) {
    const Term& l = a.args[side];
    const Term& r = a.args[1 - side];
    if (!r.isGround()) continue;
    if (isUVar(l)) return std::make_pair(l.name, simplifyGroundArith(r));
    if (l.tag == Term::Tag::Arith && (l.name == "+" || l.name == "-") &&
        isUVar(l.args[0]) && l.args[1].tag == Term::Tag::Numeral) {
      Term v = simplifyGroundArith(
          Term::arith(l.name == "+" ? "-" : "+", r, l.args[1]));
      return std::make_pair(l.args[0].name, std::move(v));
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<Clause> unPseudofy(const std::vector<Clause>& clauses) {
  std::vector<Clause> out;
  for (const auto& orig : clauses) {
    Clause c = orig;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < c.antecedent.size(); ++i) {
        auto solved = solvePseudo(c.antecedent[i], c);
        if (!solved) continue;
        c.antecedent.erase(c.antecedent.begin() + i);
        Substitution s{{solved->first, solved->second}};
        c = simplifyGroundArith(substitute(c, s));
        changed = true;
        break;
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<std::string> groundnessWarnings(const std::vector<Clause>& clauses,
                                            const Signature& sig) {
  std::vector<std::string> out;
  for (const auto& c : clauses) {
    for (const auto& v : c.vars) {
      bool covered = false;
      forEachTerm(c, [&](const Term& t) {
        if (t.tag != Term::Tag::Apply || sig.levelOf(t.name) == 0) return;
        for (const auto& a : t.args)
          if (a.tag == Term::Tag::Var && a.name == v) covered = true;
      });
      if (!covered)
        out.push_back("variable " + v + " never occurs under an extension term in: " + c.str());
    }
  }
  return out;
}

}  // namespace hpilot
