#include "hpilot/reduce.hpp"

#include <algorithm>
#include <functional>

#include "hpilot/clausifier.hpp"
#include "hpilot/preprocess.hpp"

namespace hpilot {

namespace {

std::vector<std::string> sortedVars(const Clause& c) {
  std::vector<std::string> v = c.vars;
  std::sort(v.begin(), v.end());
  return v;
}

// Enumerates assignments odometer-style: the alphabetically first variable
// cycles fastest (this reproduces the reference instance order).
void forEachAssignment(const std::vector<std::string>& vars,
                       const std::vector<std::vector<Term>>& candidates,
                       const std::function<void(const Substitution&)>& f) {
  for (const auto& cs : candidates)
    if (cs.empty()) return;
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    Substitution s;
    for (std::size_t i = 0; i < vars.size(); ++i) s[vars[i]] = candidates[i][idx[i]];
    f(s);
    std::size_t p = 0;
    while (p < vars.size()) {
      if (++idx[p] < candidates[p].size()) break;
      idx[p] = 0;
      ++p;
    }
    if (p == vars.size()) break;
  }
}

void pushUnique(std::vector<Clause>& out, std::set<std::string>& seen, Clause c) {
  std::string k = c.str();
  if (seen.insert(std::move(k)).second) out.push_back(std::move(c));
}

bool isExtensionFreeTerm(const Term& t, const Signature& sig) {
  bool ok = true;
  forEachSubterm(t, [&](const Term& s) {
    if (s.tag == Term::Tag::Apply && sig.levelOf(s.name) > 0) ok = false;
  });
  return ok;
}

}  // namespace

std::vector<Clause> computeInstances(const std::vector<Clause>& K, const std::set<Term>& store,
                                     const Signature& sig, int level) {
  std::vector<Clause> out;
  std::set<std::string> seen;
  for (const auto& c : K) {
    // Candidate terms per variable, from matching argument positions of
    // store terms with the same head symbol.
    std::map<std::string, std::set<Term>> cand;
    std::set<std::string> needed;
    forEachTerm(c, [&](const Term& t) {
      if (t.tag != Term::Tag::Apply || sig.levelOf(t.name) != level) return;
      for (std::size_t p = 0; p < t.args.size(); ++p) {
        const Term& a = t.args[p];
        if (a.tag != Term::Tag::Var) continue;
        if (std::find(c.vars.begin(), c.vars.end(), a.name) == c.vars.end()) continue;
        needed.insert(a.name);
        for (const auto& s : store)
          if (s.name == t.name && s.args.size() == t.args.size()) cand[a.name].insert(s.args[p]);
      }
    });
    std::vector<std::string> vars;
    std::vector<std::vector<Term>> cands;
    bool empty = false;
    for (const auto& v : sortedVars(c)) {
      auto it = cand.find(v);
      if (it == cand.end() || it->second.empty()) {
        // A variable under a level-i term with no matching store terms means
        // the clause has no instances in K[G] at all.
        if (needed.count(v)) empty = true;
        continue;
      }
      vars.push_back(v);
      cands.emplace_back(it->second.begin(), it->second.end());
    }
    if (empty) continue;
    if (vars.empty()) {
      pushUnique(out, seen, c);
      continue;
    }
    forEachAssignment(vars, cands, [&](const Substitution& s) {
      Clause inst = simplifyGroundArith(substitute(c, s));
      // Membership condition: every extension ground term of the instance
      // must already be in the store.
      bool member = true;
      forEachTerm(inst, [&](const Term& t) {
        if (t.tag == Term::Tag::Apply && sig.levelOf(t.name) == level && t.isGround() &&
            !store.count(simplifyGroundArith(t)))
          member = false;
      });
      if (!member) return;
      inst.level = inst.isGround() ? 0 : clauseLevel(inst, sig);
      pushUnique(out, seen, std::move(inst));
    });
  }
  return out;
}

std::set<Term> arrayIndexTerms(const std::vector<Clause>& K, const std::vector<Clause>& G,
                               const Signature& sig,
                               const std::map<std::string, Sort>& varSorts) {
  std::set<Sort> indexSorts;
  for (const auto& d : sig.declarations())
    if (d.level > 0 && d.arity >= 1) indexSorts.insert(d.domain);

  auto hasIndexSort = [&](const Term& t) {
    try {
      return indexSorts.count(inferSort(t, sig, varSorts)) > 0;
    } catch (const SortError&) {
      return false;
    }
  };

  std::set<Term> idx;
  auto add = [&](const Term& t) {
    Term s = simplifyGroundArith(t);
    if (hasIndexSort(s)) idx.insert(std::move(s));
  };

  // Seeds: ground arguments of array reads anywhere.
  auto scanReads = [&](const Clause& c) {
    forEachTerm(c, [&](const Term& t) {
      if (t.tag != Term::Tag::Apply || sig.levelOf(t.name) == 0) return;
      for (const auto& a : t.args)
        if (a.isGround()) add(a);
    });
  };
  for (const auto& c : K) scanReads(c);
  for (const auto& c : G) scanReads(c);

  // Seeds: ground sides of index guards constraining a universal variable.
  for (const auto& c : K) {
    for (const auto& a : c.antecedent) {
      if (a.tag == Atom::Tag::Pred) continue;
      bool extFree = true, hasUVar = false;
      for (const auto& s : a.args) {
        if (!isExtensionFreeTerm(s, sig)) extFree = false;
        forEachSubterm(s, [&](const Term& x) {
          if (x.tag == Term::Tag::Var &&
              std::find(c.vars.begin(), c.vars.end(), x.name) != c.vars.end())
            hasUVar = true;
        });
      }
      if (!extFree || !hasUVar) continue;
      for (const auto& s : a.args)
        if (s.isGround()) add(s);
    }
  }

  return idx;
}

std::vector<Clause> computeArrayInstances(const std::vector<Clause>& K,
                                          const std::set<Term>& indexTerms) {
  std::vector<Term> terms(indexTerms.begin(), indexTerms.end());
  std::vector<Clause> out;
  std::set<std::string> seen;
  for (const auto& c : K) {
    if (c.vars.empty()) {
      pushUnique(out, seen, c);
      continue;
    }
    std::vector<std::string> vars = sortedVars(c);
    std::vector<std::vector<Term>> cands(vars.size(), terms);
    forEachAssignment(vars, cands, [&](const Substitution& s) {
      Clause inst = substitute(c, s);
      inst.level = 0;
      pushUnique(out, seen, std::move(inst));
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Purification
// ---------------------------------------------------------------------------

namespace {

Term replaceMatching(const Term& t, const Term& target, const Term& to) {
  Term out = t;
  for (auto& a : out.args) a = replaceMatching(a, target, to);
  if (out.tag == Term::Tag::Apply && simplifyGroundArith(out) == target) return to;
  return out;
}

void replaceInClauses(std::vector<Clause>& cs, const Term& target, const Term& to) {
  for (auto& c : cs) {
    for (auto& a : c.antecedent)
      for (auto& t : a.args) t = replaceMatching(t, target, to);
    for (auto& a : c.consequent)
      for (auto& t : a.args) t = replaceMatching(t, target, to);
  }
}

}  // namespace

PurifyResult purify(std::vector<Clause> instances, std::vector<Clause> query, int level,
                    Signature& sig, int& eCounter) {
  PurifyResult res;
  res.instances = std::move(instances);
  res.query = std::move(query);

  while (true) {
    // Ready terms: ground, at this level, with no extension subterm of the
    // same level left inside (innermost first).
    std::vector<Term> ready;
    std::set<std::string> seenKeys;
    auto collect = [&](const Clause& c) {
      forEachTerm(c, [&](const Term& top) {
        forEachSubterm(top, [&](const Term& t) {
          if (t.tag != Term::Tag::Apply || sig.levelOf(t.name) != level || !t.isGround())
            return;
          bool inner = false;
          for (const auto& a : t.args)
            forEachSubterm(a, [&](const Term& s) {
              if (s.tag == Term::Tag::Apply && sig.levelOf(s.name) == level) inner = true;
            });
          if (inner) return;
          Term simp = simplifyGroundArith(t);
          if (seenKeys.insert(simp.key()).second) ready.push_back(std::move(simp));
        });
      });
    };
    for (const auto& c : res.instances) collect(c);
    for (const auto& c : res.query) collect(c);
    if (ready.empty()) break;

    std::sort(ready.begin(), ready.end(), [](const Term& a, const Term& b) {
      if (a.name != b.name) return a.name < b.name;
      return a.key() < b.key();
    });
    for (const auto& t : ready) {
      std::string name;
      do {
        name = "e_" + std::to_string(++eCounter);
      } while (sig.isDeclared(name));
      const SymbolDecl& head = sig.get(t.name);
      SymbolDecl d;
      d.name = name;
      d.kind = SymbolKind::Constant;
      d.range = head.range;
      d.domain = head.range;
      sig.declare(d);
      res.defs.entries.push_back({name, t});
      Term to = Term::constant(name);
      replaceInClauses(res.instances, t, to);
      replaceInClauses(res.query, t, to);
    }
  }

  for (auto* part : {&res.instances, &res.query}) {
    for (auto& c : *part) {
      bool leftover = false;
      forEachTerm(c, [&](const Term& t) {
        if (t.tag == Term::Tag::Apply && sig.levelOf(t.name) == level) leftover = true;
      });
      if (leftover && res.ok) {
        res.ok = false;
        res.problem = c.str();
      }
      c.level = clauseLevel(c, sig);
    }
  }
  return res;
}

std::vector<Clause> congruenceInstances(const DefinitionMap& d) {
  // Entries arrive grouped by head symbol; emit groups and pairs in the
  // reference order (last group first, indices descending).
  std::vector<std::pair<std::string, std::vector<const DefinitionMap::Entry*>>> groups;
  for (const auto& e : d.entries) {
    if (groups.empty() || groups.back().first != e.term.name)
      groups.push_back({e.term.name, {}});
    groups.back().second.push_back(&e);
  }
  std::vector<Clause> out;
  for (auto g = groups.rbegin(); g != groups.rend(); ++g) {
    const auto& es = g->second;
    for (std::size_t i = es.size(); i-- > 0;) {
      for (std::size_t j = es.size(); j-- > i + 1;) {
        Clause c;
        for (std::size_t p = 0; p < es[i]->term.args.size(); ++p)
          c.antecedent.push_back(Atom::eq(es[i]->term.args[p], es[j]->term.args[p]));
        c.consequent.push_back(
            Atom::eq(Term::constant(es[i]->name), Term::constant(es[j]->name)));
        c.level = 0;
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Chain driver
// ---------------------------------------------------------------------------

namespace {

Formula clauseMatrixFormula(const Clause& c) {
  std::vector<Formula> ante, cons;
  for (const auto& a : c.antecedent) ante.push_back(Formula::atomic(a));
  for (const auto& a : c.consequent) cons.push_back(Formula::atomic(a));
  Formula matrix;
  if (ante.empty()) {
    matrix = cons.size() == 1 ? cons[0] : Formula::mk(Formula::Tag::Or, std::move(cons));
  } else {
    Formula lhs = ante.size() == 1 ? ante[0] : Formula::mk(Formula::Tag::And, std::move(ante));
    if (cons.empty()) {
      matrix = Formula::negate(std::move(lhs));
    } else {
      Formula rhs = cons.size() == 1 ? cons[0] : Formula::mk(Formula::Tag::Or, std::move(cons));
      matrix = Formula::mk(Formula::Tag::Implies, {std::move(lhs), std::move(rhs)});
    }
  }
  if (!c.guard) return matrix;
  return Formula::mk(Formula::Tag::Or, {*c.guard, std::move(matrix)});
}

std::string traceClause(const Clause& c, bool bracketGround) {
  std::string s = " ";
  if (bracketGround && c.vars.empty()) s += "[] ";
  s += c.str() + "   L: " + std::to_string(c.level) + "; ";
  return s;
}

}  // namespace

ReduceResult reduceChain(Task& t, const ReduceOptions& opts) {
  ReduceResult res;
  auto& tr = res.trace;

  std::vector<Clause> G = t.query;
  std::vector<Clause> K = t.extensionAxioms;
  std::vector<Clause> base = t.baseAxioms;

  int n = 0;
  for (const auto& c : K) n = std::max(n, c.level);
  for (const auto& c : G) n = std::max(n, clauseLevel(c, t.signature));
  tr.push_back("We have " + std::to_string(n) + " levels.");

  int eCounter = 0;
  for (int i = n; i >= 1; --i) {
    std::vector<Clause> Ki, rest;
    for (auto& c : K) (c.level == i ? Ki : rest).push_back(std::move(c));
    K = std::move(rest);

    std::vector<Clause> instances;
    if (opts.arrayMode) {
      std::set<Term> idx = arrayIndexTerms(Ki, G, t.signature, t.varSorts);
      std::string line =
          "We have " + std::to_string(idx.size()) + " index terms for minimal locality";
      for (const auto& x : idx) line += (&x == &*idx.begin() ? " " : ", ") + x.str();
      tr.push_back(std::move(line));
      tr.push_back("K has " + std::to_string(Ki.size()) + " members.");
      for (const auto& c : Ki) tr.push_back(traceClause(c, false));
      instances = computeArrayInstances(Ki, idx);
    } else {
      std::vector<Clause> src = Ki;
      src.insert(src.end(), G.begin(), G.end());
      std::set<Term> store = extensionGroundTerms(src, t.signature, i);
      tr.push_back("K has " + std::to_string(Ki.size()) + " members.");
      for (const auto& c : Ki) tr.push_back(traceClause(c, false));
      instances = computeInstances(Ki, store, t.signature, i);
    }

    // Purification only needs the level-i terms themselves to be ground; a
    // clause may keep universal variables over base or lower-level symbols
    // (the forall-exists instances of augmented clauses do).
    auto hasNonGroundLevelTerm = [&](const Clause& c) {
      bool bad = false;
      forEachTerm(c, [&](const Term& s) {
        forEachSubterm(s, [&](const Term& u) {
          if (u.tag == Term::Tag::Apply && t.signature.levelOf(u.name) == i && !u.isGround())
            bad = true;
        });
      });
      return bad;
    };

    // Guard-bearing instances are full formulas; clausify them. Results that
    // still mention level i stay for purification, lower-level universal
    // results rejoin the remaining axioms at their level.
    {
      std::vector<Clause> plain;
      std::set<std::string> seen;
      for (auto& c : instances) {
        if (!c.guard) {
          pushUnique(plain, seen, std::move(c));
          continue;
        }
        Formula f = clauseMatrixFormula(c);
        std::vector<Clause> cls = clausify({f}, t.signature, t.varSorts);
        for (auto& nc : cls) {
          nc.level = clauseLevel(nc, t.signature);
          if (hasNonGroundLevelTerm(nc)) {
            res.abortReason = "guard instance retained non-ground level " +
                              std::to_string(i) + " terms: " + nc.str();
          } else if (nc.isGround() || nc.level >= i) {
            pushUnique(plain, seen, std::move(nc));
          } else if (nc.level == 0) {
            base.push_back(std::move(nc));
          } else {
            K.push_back(std::move(nc));
          }
        }
      }
      instances = std::move(plain);
      if (!res.abortReason.empty()) {
        res.clauses = instances;
        return res;
      }
    }

    // Substitution can leave solvable equations (m = i + 1) behind; discharge
    // them so chain levels come out ground where they should.
    {
      std::vector<Clause> solved = unPseudofy(instances);
      std::vector<Clause> deduped;
      std::set<std::string> seen;
      for (auto& c : solved) pushUnique(deduped, seen, std::move(c));
      instances = std::move(deduped);
    }

    tr.push_back("Computing K<G>... ");
    tr.push_back("K<G> looks as follows: ");
    tr.push_back("K_G has " + std::to_string(instances.size()) + " members.");
    for (const auto& c : instances) tr.push_back(traceClause(c, true));

    if (opts.noSeparation) {
      res.clauses = std::move(instances);
      res.clauses.insert(res.clauses.end(), G.begin(), G.end());
      res.clauses.insert(res.clauses.end(), K.begin(), K.end());
      res.clauses.insert(res.clauses.end(), base.begin(), base.end());
      for (const auto& c : res.clauses)
        if (!c.isGround()) res.groundOk = false;
      return res;
    }

    std::vector<Clause> toPurify, residual;
    for (auto& c : instances)
      (hasNonGroundLevelTerm(c) ? residual : toPurify).push_back(std::move(c));
    if (!residual.empty() && i > 1) {
      res.abortReason = "instances at level " + std::to_string(i) +
                        " are not ground: " + residual.front().str();
      res.clauses = std::move(toPurify);
      return res;
    }

    PurifyResult pr = purify(std::move(toPurify), std::move(G), i, t.signature, eCounter);
    tr.push_back("computing defs ...");
    tr.push_back(" We have the following definitions: ");
    for (const auto& e : pr.defs.entries)
      tr.push_back("  ---> " + e.name + " = " + e.term.str() +
                   "   L: 0; Extension ground terms: " + e.term.str());
    tr.push_back(" Purified: ");
    tr.push_back(" K_G has " + std::to_string(pr.instances.size()) + " members.");
    for (const auto& c : pr.instances) tr.push_back(traceClause(c, true));
    for (const auto& c : pr.query) tr.push_back(traceClause(c, false));

    std::vector<Clause> con = congruenceInstances(pr.defs);
    tr.push_back("Replacing D by N0: ");
    tr.push_back(" This yields " + std::to_string(con.size()) + " clauses.");
    for (const auto& c : con) tr.push_back(traceClause(c, false));
    res.defs.push_back(std::move(pr.defs));

    G.clear();
    // Universal purified instances (lower-level symbols only now) rejoin the
    // axiom sets; the ground remainder is the new G.
    for (auto& c : pr.instances) {
      if (c.isGround()) {
        G.push_back(std::move(c));
        continue;
      }
      c.level = clauseLevel(c, t.signature);
      if (c.level == 0)
        base.push_back(std::move(c));
      else
        K.push_back(std::move(c));
    }
    G.insert(G.end(), pr.query.begin(), pr.query.end());
    G.insert(G.end(), con.begin(), con.end());
    for (auto& c : residual) {
      res.groundOk = false;
      base.push_back(std::move(c));
    }

    if (!K.empty()) {
      if (opts.unPseudofyBetweenLevels) K = unPseudofy(K);
      K = flatten(K, t.signature, t.varSorts);
      K = linearize(K, t.signature, t.varSorts);
      std::vector<Clause> still;
      for (auto& c : K) {
        c.level = clauseLevel(c, t.signature);
        if (c.isGround())
          G.push_back(std::move(c));
        else if (c.level == 0)
          base.push_back(std::move(c));
        else
          still.push_back(std::move(c));
      }
      K = std::move(still);
    }
  }

  // Universal base axioms (e.g. a partial-order theory given in the Base
  // section) are instantiated over the ground terms of the final problem.
  // Refutations stay sound; a sat answer is no longer conclusive, so the
  // ground flag is cleared.
  {
    std::vector<Clause> ground, universal;
    for (auto& c : base) (c.isGround() ? ground : universal).push_back(std::move(c));
    base = std::move(ground);
    if (!universal.empty()) {
      res.groundOk = false;
      std::map<Sort, std::set<Term>> bySort;
      auto collect = [&](const Clause& c) {
        forEachTerm(c, [&](const Term& s) {
          forEachSubterm(s, [&](const Term& u) {
            if (!u.isGround()) return;
            try {
              bySort[inferSort(u, t.signature, t.varSorts)].insert(u);
            } catch (const SortError&) {
            }
          });
        });
      };
      for (const auto& c : G) collect(c);
      for (const auto& c : base) collect(c);
      std::set<std::string> seen;
      std::vector<Clause> out;
      for (const auto& c : base) pushUnique(out, seen, Clause(c));
      for (const auto& c : universal) {
        std::vector<std::string> vars = sortedVars(c);
        std::vector<std::vector<Term>> cands;
        bool ok = true;
        for (const auto& v : vars) {
          Sort s = t.varSorts.count(v) ? t.varSorts.at(v) : Sort::integer();
          auto it = bySort.find(s);
          if (it == bySort.end() || it->second.empty()) {
            ok = false;
            break;
          }
          cands.emplace_back(it->second.begin(), it->second.end());
        }
        if (!ok) continue;
        forEachAssignment(vars, cands, [&](const Substitution& sub) {
          Clause inst = simplifyGroundArith(substitute(c, sub));
          inst.level = 0;
          pushUnique(out, seen, std::move(inst));
        });
      }
      base = std::move(out);
    }
  }

  res.clauses = std::move(base);
  res.clauses.insert(res.clauses.end(), G.begin(), G.end());
  for (const auto& c : res.clauses)
    if (!c.isGround()) res.groundOk = false;
  tr.push_back("Total number of clauses: " + std::to_string(res.clauses.size()) + ".");
  return res;
}

}  // namespace hpilot
