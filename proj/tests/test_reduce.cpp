#include <functional>
#include <random>

#include "doctest.h"
#include "hpilot/parser.hpp"
#include "hpilot/preprocess.hpp"
#include "hpilot/reduce.hpp"

using namespace hpilot;

namespace {

Task monoTask() {
  return parseTask(
      "Base_functions:={}\n"
      "Extension_functions:={(f, 1), (g, 1)}\n"
      "Relations:={(<=, 2)}\n"
      "Clauses := (FORALL x,y). x <= y --> f(x) <= f(y);\n"
      "           (FORALL x,y). x <= y --> g(x) <= g(y);\n"
      "Query := c1 <= d1; f(d1) <= g(d2); NOT(f(c0) <= g(c4));\n");
}

}  // namespace

TEST_CASE("computeInstances ranges over store argument positions") {
  Task t = monoTask();
  std::vector<Clause> src = t.extensionAxioms;
  src.insert(src.end(), t.query.begin(), t.query.end());
  std::set<Term> store = extensionGroundTerms(src, t.signature, 1);
  // f(d1), f(c0), g(d2), g(c4)
  CHECK(store.size() == 4);
  std::vector<Clause> inst = computeInstances(t.extensionAxioms, store, t.signature, 1);
  // both f-variables over {d1, c0}, both g-variables over {d2, c4}
  CHECK(inst.size() == 8);
  for (const auto& c : inst) CHECK(c.isGround());
}

TEST_CASE("computeInstances respects the membership condition") {
  Task t = parseTask(
      "Base_functions:={(+, 2)}\n"
      "Extension_functions:={(f, 1)}\n"
      "Relations:={(<=, 2)}\n"
      "Clauses := (FORALL x). --> f(x) <= f(x + _1);\n"
      "Query := f(c) <= d;\n");
  t.extensionAxioms = flatten(t.extensionAxioms, t.signature, t.varSorts);
  t.extensionAxioms = linearize(t.extensionAxioms, t.signature, t.varSorts);
  std::vector<Clause> src = t.extensionAxioms;
  src.insert(src.end(), t.query.begin(), t.query.end());
  std::set<Term> store = extensionGroundTerms(src, t.signature, 1);
  CHECK(store.size() == 1);
  std::vector<Clause> inst = computeInstances(t.extensionAxioms, store, t.signature, 1);
  // x := c would produce f(c+1), which is not in the store: rejected
  for (const auto& c : inst)
    for (const auto& at : c.consequent)
      for (const auto& tm : at.args)
        if (tm.tag == Term::Tag::Apply)
          CHECK(store.count(simplifyGroundArith(tm)) == 1);
}

TEST_CASE("clauses whose level terms have no store candidates give no instances") {
  Task t = parseTask(
      "Base_functions:={}\n"
      "Extension_functions:={(f, 1), (g, 1)}\n"
      "Relations:={(<=, 2)}\n"
      "Clauses := (FORALL x). --> g(x) = _0;\n"
      "Query := f(c) = _1;\n");
  std::vector<Clause> src = t.extensionAxioms;
  src.insert(src.end(), t.query.begin(), t.query.end());
  std::set<Term> store = extensionGroundTerms(src, t.signature, 1);
  std::vector<Clause> inst = computeInstances(t.extensionAxioms, store, t.signature, 1);
  CHECK(inst.empty());
}

TEST_CASE("empty K yields no instances") {
  Signature sig;
  CHECK(computeInstances({}, {}, sig, 1).empty());
}

TEST_CASE("computeArrayInstances is a full product over the index terms") {
  Task t = parseTask(
      "Base_functions:={}\n"
      "Extension_functions:={(a, 1)}\n"
      "Relations:={(<=, 2)}\n"
      "Clauses := (FORALL i). --> a(i) <= x;\n"
      "Query := a(m) <= x;\n");
  std::set<Term> idx = {Term::constant("m"), Term::constant("l"), Term::constant("u")};
  std::vector<Clause> inst = computeArrayInstances(t.extensionAxioms, idx);
  CHECK(inst.size() == idx.size());
  std::vector<Clause> none = computeArrayInstances({}, idx);
  CHECK(none.empty());
}

TEST_CASE("purify replaces extension terms bottom-up and round-trips") {
  Task t = monoTask();
  std::vector<Clause> query = t.query;
  int eCounter = 0;
  PurifyResult pr = purify({}, query, 1, t.signature, eCounter);
  REQUIRE(pr.ok);
  CHECK(pr.defs.entries.size() == 4);
  // no extension symbol survives in the purified query
  for (const auto& c : pr.query)
    forEachTerm(c, [&](const Term& tm) {
      if (tm.tag == Term::Tag::Apply) CHECK(t.signature.levelOf(tm.name) == 0);
    });
  // substituting the definitions back restores the original clauses
  std::map<std::string, Term> back;
  for (const auto& e : pr.defs.entries) back[e.name] = e.term;
  std::function<Term(const Term&)> unname = [&](const Term& tm) -> Term {
    if (tm.tag == Term::Tag::Const && back.count(tm.name)) return back.at(tm.name);
    Term out = tm;
    for (auto& a : out.args) a = unname(a);
    return out;
  };
  for (std::size_t i = 0; i < pr.query.size(); ++i) {
    Clause restored = pr.query[i];
    for (auto& at : restored.antecedent)
      for (auto& tm : at.args) tm = unname(tm);
    for (auto& at : restored.consequent)
      for (auto& tm : at.args) tm = unname(tm);
    CHECK(simplifyGroundArith(restored) == simplifyGroundArith(query[i]));
  }
}

TEST_CASE("congruence instance count follows the pair law") {
  std::mt19937 rng(7);
  for (int round = 0; round < 100; ++round) {
    DefinitionMap d;
    std::size_t expected = 0;
    int funs = 1 + static_cast<int>(rng() % 4);
    int e = 0;
    for (int f = 0; f < funs; ++f) {
      std::size_t k = rng() % 5;
      expected += k * (k - (k ? 1 : 0)) / 2;
      for (std::size_t j = 0; j < k; ++j)
        d.entries.push_back({"e_" + std::to_string(++e),
                             Term::apply("f" + std::to_string(f),
                                         {Term::constant("c" + std::to_string(j))})});
    }
    CHECK(congruenceInstances(d).size() == expected);
  }
}

TEST_CASE("congruence instances relate equal arguments to equal names") {
  DefinitionMap d;
  d.entries.push_back({"e_1", Term::apply("f", {Term::constant("a")})});
  d.entries.push_back({"e_2", Term::apply("f", {Term::constant("b")})});
  std::vector<Clause> con = congruenceInstances(d);
  REQUIRE(con.size() == 1);
  CHECK(con[0].antecedent.size() == 1);
  CHECK(con[0].antecedent[0] == Atom::eq(Term::constant("a"), Term::constant("b")));
  CHECK(con[0].consequent[0] ==
        Atom::eq(Term::constant("e_1"), Term::constant("e_2")));
}

TEST_CASE("reduceChain on the monotonicity problem") {
  Task t = monoTask();
  ReduceResult r = reduceChain(t, {});
  CHECK(r.abortReason.empty());
  CHECK(r.groundOk);
  REQUIRE(r.defs.size() == 1);
  CHECK(r.defs[0].entries.size() == 4);
  // 8 instances + 2 congruence + 3 query
  CHECK(r.clauses.size() == 13);
  for (const auto& c : r.clauses) CHECK(c.isGround());
}

TEST_CASE("reduceChain instantiates leftover universal base axioms") {
  Task t = parseTask(
      "Base_functions:={}\n"
      "Extension_functions:={(f, 1)}\n"
      "Relations:={(R, 2)}\n"
      "Base := (FORALL x). R[x, x];\n"
      "Clauses := (FORALL x,y). R[x, y] --> R[f(x), f(y)];\n"
      "Query := NOT(R[f(c), f(c)]);\n");
  ReduceResult r = reduceChain(t, {});
  CHECK(r.abortReason.empty());
  CHECK(!r.groundOk);  // the instantiation is a sound approximation only
  for (const auto& c : r.clauses) CHECK(c.isGround());
  bool reflexAtE = false;
  for (const auto& c : r.clauses)
    if (c.antecedent.empty() && c.consequent.size() == 1 &&
        c.consequent[0].tag == Atom::Tag::Pred &&
        c.consequent[0].args[0] == c.consequent[0].args[1])
      reflexAtE = true;
  CHECK(reflexAtE);
}
