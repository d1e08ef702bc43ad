#include "doctest.h"
#include "hpilot/fragments.hpp"
#include "hpilot/parser.hpp"
#include "hpilot/preprocess.hpp"

using namespace hpilot;

namespace {

// The rewritten ten-clause set for two successive array updates: positive
// index guards only, reads directly at the universal variables.
const char* kRewrittenArrayText =
    "Base_functions:={(+, 2), (-, 2)}\n"
    "Extension_functions:={(a, 1), (b, 1), (c, 1), (d, 1), (e, 1)}\n"
    "Relations:={(<=, 2)}\n"
    "Clauses := (FORALL i,j). _0 <= i, i <= j, j <= n - _1 --> c(i) <= c(j);\n"
    "           (FORALL i,j). _0 <= i, i <= j, j <= n - _1 --> e(i) <= e(j);\n"
    "           (FORALL i). i <= l - _1 --> b(i) = c(i);\n"
    "           (FORALL i). l + _1 <= i --> b(i) = c(i);\n"
    "           (FORALL i). i <= k - _1 --> a(i) = b(i);\n"
    "           (FORALL i). k + _1 <= i --> a(i) = b(i);\n"
    "           (FORALL i). i <= l - _1 --> d(i) = e(i);\n"
    "           (FORALL i). l + _1 <= i --> d(i) = e(i);\n"
    "           (FORALL i). i <= k - _1 --> a(i) = d(i);\n"
    "           (FORALL i). k + _1 <= i --> a(i) = d(i);\n"
    "Query := b(k) = w;\n";

}  // namespace

TEST_CASE("the rewritten double-update clauses are all array properties") {
  Task t = parseTask(kRewrittenArrayText);
  REQUIRE(t.extensionAxioms.size() == 10);
  for (const auto& c : t.extensionAxioms) {
    auto [ok, reason] = checkArrayProperty(c, t.signature, t.varSorts);
    CHECK_MESSAGE(ok, c.str(), ": ", reason);
  }
}

TEST_CASE("disequality guards fail with the positivity reason") {
  // pre-rewrite shape: i = l in the consequent encodes i != l -> b(i) = c(i)
  Task t = parseTask(
      "Base_functions:={(+, 2), (-, 2)}\n"
      "Extension_functions:={(b, 1), (c, 1)}\n"
      "Relations:={(<=, 2)}\n"
      "Clauses := (FORALL i). --> i = l, b(i) = c(i);\n"
      "Query := b(k) = w;\n");
  auto [ok, reason] = checkArrayProperty(t.extensionAxioms[0], t.signature, t.varSorts);
  CHECK(!ok);
  CHECK(reason.find("positive") != std::string::npos);
}

TEST_CASE("strict guards and nested reads are rejected") {
  Task t = parseTask(
      "Base_functions:={}\n"
      "Extension_functions:={(a, 1), (b, 1)}\n"
      "Relations:={(<, 2), (<=, 2)}\n"
      "Clauses := (FORALL i). l < i --> a(i) = _0;\n"
      "           (FORALL i). l <= i --> a(b(i)) = _0;\n"
      "Query := a(m) = x;\n");
  auto [strictOk, r1] = checkArrayProperty(t.extensionAxioms[0], t.signature, t.varSorts);
  CHECK(!strictOk);
  auto [nestedOk, r2] = checkArrayProperty(t.extensionAxioms[1], t.signature, t.varSorts);
  CHECK(!nestedOk);
  CHECK(r2.find("nested") != std::string::npos);
}

TEST_CASE("checkNullable holds only after the null premises are added") {
  Task t = parseTask(
      "Base_functions:={}\n"
      "Extension_functions:={(next, 1, 1, pointer), (prev, 1, 1, pointer),\n"
      "                      (priority, 1, 1, pointer, real)}\n"
      "Relations:={(>=, 2)}\n"
      "Constants:={(a, pointer)}\n"
      "Clauses := (FORALL p). prev(next(p)) = p;\n"
      "           (FORALL p). priority(p) >= priority(next(p));\n"
      "Query := NOT(a = null);\n");
  for (const auto& c : t.extensionAxioms) {
    auto [ok, reason] = checkNullable(c, t.signature, t.varSorts);
    CHECK(!ok);
  }
  std::vector<Clause> guarded =
      addNullablePremises(t.extensionAxioms, t.signature, t.varSorts);
  for (const auto& c : guarded) {
    auto [ok, reason] = checkNullable(c, t.signature, t.varSorts);
    CHECK_MESSAGE(ok, c.str(), ": ", reason);
  }
}

TEST_CASE("recalcLevels repartitions by computed level") {
  Task t = parseTask(
      "Base_functions:={}\n"
      "Extension_functions:={(a', 1, 2), (a, 1, 1)}\n"
      "Relations:={(<=, 2)}\n"
      "Clauses := (FORALL i). a(i) <= a(i);\n"
      "           (FORALL i). a'(i) = a(i);\n"
      "Query := a(m) <= x;\n");
  Task out = recalcLevels(t);
  REQUIRE(out.extensionAxioms.size() == 2);
  int lvl1 = 0, lvl2 = 0;
  for (const auto& c : out.extensionAxioms) (c.level == 2 ? lvl2 : lvl1)++;
  CHECK(lvl1 == 1);
  CHECK(lvl2 == 1);
  // ground clauses go to the query no matter where they were written
  CHECK(out.query.size() == 1);
}

TEST_CASE("monotonicity alone does not certify locality") {
  Task t = parseTask(
      "Base_functions:={}\n"
      "Extension_functions:={(f, 1)}\n"
      "Relations:={(<=, 2)}\n"
      "Clauses := (FORALL x,y). x <= y --> f(x) <= f(y);\n"
      "Query := NOT(f(c) <= f(d));\n");
  FragmentReport rep = analyzeFragments(t);
  CHECK(!rep.allLocal);
  REQUIRE(rep.perClause.size() == 1);
  CHECK(rep.perClause[0].fragment == Fragment::None);
}

TEST_CASE("definitional shape is reported but stays advisory") {
  Task t = parseTask(
      "Base_functions:={}\n"
      "Extension_functions:={(f, 1)}\n"
      "Relations:={(<=, 2)}\n"
      "Clauses := (FORALL i). { AND(_0 <= i, i <= m) } --> f(i) = _1;\n"
      "Query := f(c) = _1;\n");
  FragmentReport rep = analyzeFragments(t);
  REQUIRE(rep.perClause.size() == 1);
  CHECK(rep.perClause[0].fragment == Fragment::DefinitionalCandidate);
  CHECK(!rep.allLocal);
}
