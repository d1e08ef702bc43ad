#include "hpilot/fragments.hpp"

#include <algorithm>
#include <functional>

namespace hpilot {

std::string fragmentStr(Fragment f) {
  switch (f) {
    case Fragment::APF: return "array property";
    case Fragment::Pointer: return "nullable pointer";
    case Fragment::DefinitionalCandidate: return "definitional (unverified)";
    case Fragment::None: return "none";
  }
  return "none";
}

namespace {

bool hasExtensionApp(const Atom& a, const Signature& sig) {
  for (const auto& t : a.args) {
    bool found = false;
    forEachSubterm(t, [&](const Term& s) {
      if (s.tag == Term::Tag::Apply && sig.levelOf(s.name) > 0) found = true;
    });
    if (found) return true;
  }
  return false;
}

bool isUniversal(const Term& t, const Clause& c) {
  return t.tag == Term::Tag::Var &&
         std::find(c.vars.begin(), c.vars.end(), t.name) != c.vars.end();
}

bool containsUniversalVar(const Atom& a, const Clause& c) {
  for (const auto& t : a.args) {
    bool found = false;
    forEachSubterm(t, [&](const Term& s) {
      if (isUniversal(s, c)) found = true;
    });
    if (found) return true;
  }
  return false;
}

// Index-guard side: a universal variable or a ground extension-free term.
bool isGuardSide(const Term& t, const Clause& c, const Signature& sig) {
  if (isUniversal(t, c)) return true;
  if (!t.isGround()) return false;
  bool extFree = true;
  forEachSubterm(t, [&](const Term& s) {
    if (s.tag == Term::Tag::Apply && sig.levelOf(s.name) > 0) extFree = false;
  });
  return extFree;
}

}  // namespace

std::pair<bool, std::string> checkArrayProperty(const Clause& c, const Signature& sig,
                                                const std::map<std::string, Sort>& varSorts) {
  (void)varSorts;
  if (c.isGround()) return {true, "ground"};
  if (c.guard) return {false, "unprocessed clause guard"};

  for (const auto& a : c.antecedent) {
    if (hasExtensionApp(a, sig)) continue;  // value literal, checked below
    if (!containsUniversalVar(a, c)) continue;  // ground side condition
    if (a.tag == Atom::Tag::Pred)
      return {false, "index guard uses a predicate: " + a.str()};
    if (a.tag == Atom::Tag::Ineq && (a.rel == RelOp::Lt || a.rel == RelOp::Gt))
      return {false, "index guards must not be strict: " + a.str()};
    for (const auto& s : a.args)
      if (!isGuardSide(s, c, sig))
        return {false, "index guard over a non-index term: " + a.str()};
  }

  // A positive index atom in the consequent is a negated guard literal,
  // i.e. the original guard contained a disequality or strict bound.
  for (const auto& a : c.consequent) {
    if (hasExtensionApp(a, sig)) continue;
    if (containsUniversalVar(a, c))
      return {false, "index guards must be positive!"};
  }

  // Value part: universal variables only as direct read arguments; no
  // nested reads.
  for (const auto* part : {&c.antecedent, &c.consequent}) {
    for (const auto& a : *part) {
      if (!hasExtensionApp(a, sig)) continue;
      for (const auto& top : a.args) {
        bool bad = false;
        std::string why;
        std::function<void(const Term&, bool)> visit = [&](const Term& t, bool underRead) {
          if (bad) return;
          if (isUniversal(t, c) && !underRead) {
            bad = true;
            why = "universal variable outside an array read: " + a.str();
            return;
          }
          if (t.tag == Term::Tag::Apply && sig.levelOf(t.name) > 0) {
            if (underRead) {
              bad = true;
              why = "nested array read: " + t.str();
              return;
            }
            for (const auto& arg : t.args) {
              // Direct argument position: variables allowed, deeper reads not.
              if (isUniversal(arg, c)) continue;
              visit(arg, true);
            }
            return;
          }
          for (const auto& arg : t.args) visit(arg, underRead);
        };
        visit(top, false);
        if (bad) return {false, why};
      }
    }
  }
  return {true, "array property"};
}

std::pair<bool, std::string> checkNullable(const Clause& c, const Signature& sig,
                                           const std::map<std::string, Sort>& varSorts) {
  if (c.isGround()) return {true, "ground"};
  if (c.guard) return {false, "unprocessed clause guard"};

  Term null = Term::constant("null");
  auto hasNullDisjunct = [&](const Term& t) {
    for (const auto& a : c.consequent) {
      if (a.tag != Atom::Tag::Eq) continue;
      if ((a.args[0] == t && a.args[1] == null) || (a.args[1] == t && a.args[0] == null))
        return true;
    }
    return false;
  };

  std::string missing;
  std::function<void(const Term&)> visit = [&](const Term& t) {
    for (const auto& a : t.args) visit(a);
    if (t.tag != Term::Tag::Apply) return;
    const SymbolDecl* d = sig.find(t.name);
    if (!d || d->domain.kind != SortKind::Pointer) return;
    for (const auto& a : t.args) {
      if (a.tag == Term::Tag::Numeral) continue;
      if (a.tag == Term::Tag::Const && a.name == "null") continue;
      if (!hasNullDisjunct(a) && missing.empty())
        missing = "missing null disjunct for " + a.str();
    }
  };
  for (const auto& a : c.antecedent)
    for (const auto& t : a.args) visit(t);
  for (const auto& a : c.consequent)
    for (const auto& t : a.args) visit(t);
  if (!missing.empty()) return {false, missing};

  // Shape: disjunction of pointer equalities and scalar constraints.
  auto atomSort = [&](const Atom& a) -> std::optional<Sort> {
    try {
      return inferSort(a.args[0], sig, varSorts);
    } catch (const SortError&) {
      return std::nullopt;
    }
  };
  for (const auto* part : {&c.antecedent, &c.consequent}) {
    for (const auto& a : *part) {
      if (a.tag == Atom::Tag::Pred) continue;  // relations count as constraints
      auto s = atomSort(a);
      if (!s) continue;
      if (s->kind == SortKind::Pointer) {
        if (a.tag != Atom::Tag::Eq)
          return {false, "pointer atom is not an equality: " + a.str()};
      } else if (!s->isNumeric() && s->kind != SortKind::Scalar) {
        return {false, "atom outside pointer equalities and scalar constraints: " + a.str()};
      }
    }
  }
  return {true, "nullable"};
}

Task recalcLevels(const Task& input, std::vector<std::string>* warnings) {
  Task t = input;
  std::vector<Clause> all;
  auto take = [&](std::vector<Clause>& cs) {
    for (auto& c : cs) all.push_back(std::move(c));
    cs.clear();
  };
  take(t.baseAxioms);
  take(t.extensionAxioms);
  take(t.query);

  for (auto& c : all) {
    std::set<int> levels;
    forEachTerm(c, [&](const Term& s) {
      if (s.tag == Term::Tag::Apply) {
        int l = t.signature.levelOf(s.name);
        if (l > 0) levels.insert(l);
      }
    });
    c.level = levels.empty() ? 0 : *levels.rbegin();
    if (warnings && levels.size() > 1) {
      int prev = -1;
      for (int l : levels) {
        if (prev > 0 && l != prev + 1)
          warnings->push_back("clause mixes non-adjacent extension levels " +
                              std::to_string(prev) + " and " + std::to_string(l) + ": " +
                              c.str());
        prev = l;
      }
    }
    if (c.isGround())
      t.query.push_back(std::move(c));
    else if (c.level == 0)
      t.baseAxioms.push_back(std::move(c));
    else
      t.extensionAxioms.push_back(std::move(c));
  }
  return t;
}

namespace {

// Definitional shape: extension symbols occur in exactly one consequent atom
// f(xs) = t with extension-free t and extension-free antecedent guard.
bool isDefinitionalCandidate(const Clause& c, const Signature& sig) {
  for (const auto& a : c.antecedent)
    if (hasExtensionApp(a, sig)) return false;
  int defAtoms = 0;
  for (const auto& a : c.consequent) {
    if (!hasExtensionApp(a, sig)) continue;
    if (a.tag != Atom::Tag::Eq) return false;
    for (int side = 0; side < 2; ++side) {
      const Term& l = a.args[side];
      const Term& r = a.args[1 - side];
      bool lIsDef = l.tag == Term::Tag::Apply && sig.levelOf(l.name) > 0;
      if (!lIsDef) continue;
      bool argsOk = true;
      for (const auto& arg : l.args)
        if (arg.tag != Term::Tag::Var && !arg.isGround()) argsOk = false;
      bool rExtFree = true;
      forEachSubterm(r, [&](const Term& s) {
        if (s.tag == Term::Tag::Apply && sig.levelOf(s.name) > 0) rExtFree = false;
      });
      if (argsOk && rExtFree) {
        ++defAtoms;
        break;
      }
      return false;
    }
  }
  return defAtoms == 1;
}

}  // namespace

FragmentReport analyzeFragments(const Task& t) {
  FragmentReport rep;
  rep.allLocal = true;
  for (std::size_t i = 0; i < t.extensionAxioms.size(); ++i) {
    const Clause& c = t.extensionAxioms[i];
    FragmentReport::Entry e;
    e.clauseIndex = i;
    if (t.arrayMode) {
      auto [ok, why] = checkArrayProperty(c, t.signature, t.varSorts);
      if (ok) {
        e.fragment = Fragment::APF;
        e.reason = why;
        rep.perClause.push_back(std::move(e));
        continue;
      }
      e.reason = why;
    }
    if (t.pointerMode) {
      auto [ok, why] = checkNullable(c, t.signature, t.varSorts);
      if (ok) {
        e.fragment = Fragment::Pointer;
        e.reason = why;
        rep.perClause.push_back(std::move(e));
        continue;
      }
      if (e.reason.empty()) e.reason = why;
    }
    if (isDefinitionalCandidate(c, t.signature)) {
      e.fragment = Fragment::DefinitionalCandidate;
      if (e.reason.empty()) e.reason = "definitional shape; guard exclusivity unverified";
      rep.allLocal = false;  // advisory only
    } else {
      e.fragment = Fragment::None;
      if (e.reason.empty()) e.reason = "no recognized fragment";
      rep.allLocal = false;
    }
    rep.perClause.push_back(std::move(e));
  }
  return rep;
}

}  // namespace hpilot
