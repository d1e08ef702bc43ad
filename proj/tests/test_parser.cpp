#include "doctest.h"
#include "hpilot/parser.hpp"

using namespace hpilot;

TEST_CASE("declaration shorthand fills level and sorts") {
  Task t = parseTask(
      "Base_functions:={(+,2)}\n"
      "Extension_functions:={(f, 1), (g, 2, 2), (h, 1, 1, int, real)}\n"
      "Relations:={(<=, 2)}\n"
      "Clauses := (FORALL x). --> f(x) = x;\n"
      "Query := f(c) = c;\n");
  const SymbolDecl& f = t.signature.get("f");
  CHECK(f.arity == 1);
  CHECK(f.level == 1);
  CHECK(f.domain == Sort::integer());
  const SymbolDecl& g = t.signature.get("g");
  CHECK(g.arity == 2);
  CHECK(g.level == 2);
  const SymbolDecl& h = t.signature.get("h");
  CHECK(h.level == 1);
  CHECK(h.domain == Sort::integer());
  CHECK(h.range == Sort::real());
  // undeclared query name became a constant
  CHECK(t.signature.get("c").kind == SymbolKind::Constant);
}

TEST_CASE("clauses split into antecedent and consequent") {
  Task t = parseTask(
      "Base_functions:={}\n"
      "Extension_functions:={(f, 1)}\n"
      "Relations:={(<=, 2)}\n"
      "Clauses := (FORALL x,y). x <= y --> f(x) <= f(y);\n"
      "Query := NOT(f(c) <= f(d));\n");
  REQUIRE(t.extensionAxioms.size() == 1);
  const Clause& c = t.extensionAxioms[0];
  CHECK(c.vars == std::vector<std::string>{"x", "y"});
  CHECK(c.antecedent.size() == 1);
  CHECK(c.consequent.size() == 1);
  CHECK(c.level == 1);
  // a negated query atom lands in the antecedent of a ground clause
  REQUIRE(t.query.size() == 1);
  CHECK(t.query[0].antecedent.size() == 1);
  CHECK(t.query[0].consequent.empty());
}

TEST_CASE("bracket syntax gives predicate atoms") {
  Task t = parseTask(
      "Base_functions:={}\n"
      "Extension_functions:={(f, 1)}\n"
      "Relations:={(R, 2)}\n"
      "Clauses := (FORALL x,y). R[x, y] --> R[f(x), f(y)];\n"
      "Query := R[c0, c1];\n");
  CHECK(t.extensionAxioms[0].antecedent[0].tag == Atom::Tag::Pred);
  CHECK(t.extensionAxioms[0].antecedent[0].pred == "R");
}

TEST_CASE("prefix plus and minus are the infix operators") {
  Task t = parseTask(
      "Base_functions:={(plus,2), (minus, 2)}\n"
      "Extension_functions:={(a, 1)}\n"
      "Relations:={(<=, 2)}\n"
      "Clauses := (FORALL i). _0 <= i --> a(i) <= a(plus(i, _1));\n"
      "Query := plus(k, _1) <= minus(l, _2);\n");
  const Atom& q = t.query[0].consequent[0];
  CHECK(q.args[0] == Term::arith("+", Term::constant("k"), Term::numeral(1)));
  CHECK(q.args[1] == Term::arith("-", Term::constant("l"), Term::numeral(2)));
}

TEST_CASE("write terms switch on array mode") {
  Task t = parseTask(
      "Base_functions:={(+, 2)}\n"
      "Extension_functions:={(a, 1)}\n"
      "Relations:={(<=, 2)}\n"
      "Formulas := NOT((FORALL i). write(a, k, x)(i) = a(i));\n");
  CHECK(t.arrayMode);
}

TEST_CASE("pointer sorts auto-declare null and set pointer mode") {
  Task t = parseTask(
      "Base_functions:={}\n"
      "Extension_functions:={(next, 1, 1, pointer)}\n"
      "Relations:={}\n"
      "Constants:={(p, pointer)}\n"
      "Clauses := (FORALL q). next(q) = q;\n"
      "Query := NOT(p = null);\n");
  CHECK(t.pointerMode);
  REQUIRE(t.signature.find("null") != nullptr);
  CHECK(t.signature.get("null").range == Sort::pointer());
}

TEST_CASE("interval section is recorded") {
  Task t = parseTask(
      "Base_functions:={(+, 2)}\n"
      "Extension_functions:={(o, 2)}\n"
      "Relations:={(<=, 2)}\n"
      "Interval := 0 <= x <= 1;\n"
      "Clauses := (FORALL x,y). x <= y --> o(x, y) = x;\n"
      "Query := NOT(o(a, b) = a);\n");
  REQUIRE(t.signature.interval.has_value());
  CHECK(t.signature.interval->lower == 0);
  CHECK(t.signature.interval->upper == 1);
}

TEST_CASE("query section may be omitted") {
  Task t = parseTask(
      "Base_functions:={}\n"
      "Extension_functions:={(f, 1)}\n"
      "Relations:={}\n"
      "Formulas := (FORALL x). f(x) = x;\n");
  CHECK(t.query.empty());
  CHECK(t.rawFormulas.size() == 1);
}

TEST_CASE("parse errors carry positions") {
  try {
    parseTask("Base_functions:={(+,2)}\nExtension_functions:={(f 1)}\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.pos.line == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("conflicting sort use is rejected") {
  CHECK_THROWS_AS(parseTask("Base_functions:={}\n"
                            "Extension_functions:={(f, 1, 1, int, bool)}\n"
                            "Relations:={(<=, 2)}\n"
                            "Clauses := (FORALL x). --> f(x) <= x;\n"
                            "Query := f(c) = c;\n"),
                  Error);
}

TEST_CASE("printTask round-trips structurally") {
  const char* text =
      "Base_functions:={(+, 2), (-, 2)}\n"
      "Extension_functions:={(a', 1, 2), (a, 1, 1)}\n"
      "Relations:={(<=, 2), (<, 2)}\n"
      "Clauses := (FORALL i). i = l, x <= a(i) --> a'(i) = x;\n"
      "           (FORALL i,j). l <= i, i <= j, j <= u --> a(i) <= a(j);\n"
      "Query := l <= m; NOT(a'(m) <= a'(n));\n";
  Task t1 = parseTask(text);
  Task t2 = parseTask(printTask(t1));
  REQUIRE(t1.extensionAxioms.size() == t2.extensionAxioms.size());
  for (std::size_t i = 0; i < t1.extensionAxioms.size(); ++i)
    CHECK(t1.extensionAxioms[i] == t2.extensionAxioms[i]);
  REQUIRE(t1.query.size() == t2.query.size());
  for (std::size_t i = 0; i < t1.query.size(); ++i) CHECK(t1.query[i] == t2.query[i]);
  CHECK(t1.signature.declarations().size() == t2.signature.declarations().size());
}

TEST_CASE("augmented clauses keep their guard") {
  Task t = parseTask(
      "Base_functions:={(+, 2)}\n"
      "Extension_functions:={(p', 1, 1, int, real)}\n"
      "Relations:={(<=, 2), (>, 2)}\n"
      "Clauses := (FORALL i). { AND(_1 <= i, i <= m,\n"
      "    (FORALL j). (AND(_1 <= j, j <= m) --> i > j))} --> p'(i) = x;\n"
      "Query := p'(c) = x;\n");
  REQUIRE(t.extensionAxioms.size() == 1);
  CHECK(t.extensionAxioms[0].guard.has_value());
}
