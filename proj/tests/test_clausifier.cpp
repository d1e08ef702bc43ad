#include "doctest.h"
#include "hpilot/clausifier.hpp"
#include "hpilot/parser.hpp"

using namespace hpilot;

namespace {

// Runs the clausifier the way the driver does: parse, then clausify the
// formula part in place.
std::vector<Clause> clausifyText(const std::string& text, Task* out = nullptr,
                                 ClausifyOptions opts = {}) {
  Task t = parseTask(text);
  std::vector<Clause> cs = clausify(t.rawFormulas, t.signature, t.varSorts, opts);
  if (out) *out = std::move(t);
  return cs;
}

const char* kContinuity =
    "Base_functions:={(delta, 2), (abs, 1), (-, 2)}\n"
    "Extension_functions:={(f, 1)}\n"
    "Relations:={}\n"
    "Formulas :=\n"
    "    (FORALL eps, a, x). (_0 < eps -->\n"
    "             AND( _0 < delta(eps, a),\n"
    "                     (abs(x - a) < delta(eps, a)\n"
    "                              --> abs(f(x) - f(a)) < eps)));\n"
    "Query :=\n";

}  // namespace

TEST_CASE("continuity formula yields exactly two clauses") {
  std::vector<Clause> cs = clausifyText(kContinuity);
  REQUIRE(cs.size() == 2);
  // one base clause (delta positivity), one extension clause (the f bound)
  int baseCount = 0, extCount = 0;
  for (const auto& c : cs) (c.level == 0 ? baseCount : extCount)++;
  CHECK(baseCount == 1);
  CHECK(extCount == 1);
  for (const auto& c : cs) CHECK(!c.vars.empty());
}

TEST_CASE("negated universal skolemizes to fresh constants") {
  Task t;
  std::vector<Clause> cs = clausifyText(
      "Base_functions:={}\n"
      "Extension_functions:={(f, 1)}\n"
      "Relations:={(<=, 2)}\n"
      "Formulas := NOT((FORALL x). f(x) <= x);\n",
      &t);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].isGround());
  CHECK(t.signature.find("sk_1") != nullptr);
}

TEST_CASE("exists under forall skolemizes to a function of the universals") {
  Task t;
  std::vector<Clause> cs = clausifyText(
      "Base_functions:={}\n"
      "Extension_functions:={(f, 1)}\n"
      "Relations:={(<=, 2)}\n"
      "Formulas := (FORALL x). (EXISTS y). f(x) <= y;\n",
      &t);
  REQUIRE(cs.size() == 1);
  const SymbolDecl* sk = t.signature.find("sk_1");
  REQUIRE(sk != nullptr);
  CHECK(sk->arity == 1);
}

TEST_CASE("iff expands to both directions") {
  std::vector<Clause> cs = clausifyText(
      "Base_functions:={}\n"
      "Extension_functions:={(f, 1)}\n"
      "Relations:={(<=, 2)}\n"
      "Formulas := (FORALL x). (f(x) <= x <--> x <= f(x));\n");
  CHECK(cs.size() == 2);
}

TEST_CASE("ground formulas come out as ground clauses") {
  std::vector<Clause> cs = clausifyText(
      "Base_functions:={}\n"
      "Extension_functions:={(f, 1)}\n"
      "Relations:={(<=, 2)}\n"
      "Formulas := AND(f(c) <= d, NOT(d <= c));\n");
  REQUIRE(cs.size() == 2);
  for (const auto& c : cs) CHECK(c.isGround());
}

TEST_CASE("clausification is equisatisfiable with and without renaming") {
  // a disjunction of conjunctions forces distribution; with renaming the
  // clause count stays linear, without it the clauses multiply out
  const char* text =
      "Base_functions:={}\n"
      "Extension_functions:={(f, 1)}\n"
      "Relations:={(<=, 2)}\n"
      "Formulas := (FORALL x). OR(AND(f(x) <= a, f(x) <= b),\n"
      "                           AND(a <= f(x), b <= f(x)));\n";
  ClausifyOptions rename, noRename;
  noRename.renameSubformulas = false;
  std::vector<Clause> with = clausifyText(text, nullptr, rename);
  std::vector<Clause> without = clausifyText(text, nullptr, noRename);
  CHECK(!with.empty());
  CHECK(without.size() == 4);  // 2x2 distribution
  for (const auto& c : without) CHECK(!c.guard);
}

TEST_CASE("clausifier renames bound variables apart") {
  std::vector<Clause> cs = clausifyText(
      "Base_functions:={}\n"
      "Extension_functions:={(f, 1)}\n"
      "Relations:={(<=, 2)}\n"
      "Formulas := AND((FORALL x). f(x) <= a, (FORALL x). b <= f(x));\n");
  REQUIRE(cs.size() == 2);
  CHECK(cs[0].vars != cs[1].vars);
}
