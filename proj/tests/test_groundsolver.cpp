#include "doctest.h"
#include "solver.hpp"

using gsolv::solveScript;

TEST_CASE("linear integer chain is unsat") {
  auto r = solveScript(
      "(set-logic QF_UFLIA)\n"
      "(declare-const x Int)(declare-const y Int)\n"
      "(assert (<= x y))(assert (< y x))\n"
      "(check-sat)\n");
  CHECK(r.status == "unsat");
}

TEST_CASE("equality is transitive across uninterpreted constants") {
  auto r = solveScript(
      "(declare-const a Int)(declare-const b Int)(declare-const c Int)\n"
      "(assert (= a b))(assert (= b c))(assert (not (= a c)))\n"
      "(check-sat)\n");
  CHECK(r.status == "unsat");
}

TEST_CASE("function congruence via ackermannization") {
  auto r = solveScript(
      "(declare-fun f (Int) Int)\n"
      "(declare-const a Int)(declare-const b Int)\n"
      "(assert (= a b))(assert (not (= (f a) (f b))))\n"
      "(check-sat)\n");
  CHECK(r.status == "unsat");
}

TEST_CASE("integer interval with unique solution returns the model point") {
  auto r = solveScript(
      "(declare-const x Int)\n"
      "(assert (< 0 x))(assert (< x 2))\n"
      "(check-sat)\n(get-model)\n");
  CHECK(r.status == "sat");
  CHECK(r.model.find("x") != std::string::npos);
  CHECK(r.model.find("1") != std::string::npos);
}

TEST_CASE("integrality separates rationals from integers") {
  // 0 < 2x < 2 has the rational solution x = 1/2 but no integer one
  auto rInt = solveScript(
      "(declare-const x Int)\n"
      "(assert (< 0 (* 2 x)))(assert (< (* 2 x) 2))\n"
      "(check-sat)\n");
  CHECK(rInt.status == "unsat");
  auto rReal = solveScript(
      "(declare-const x Real)\n"
      "(assert (< 0 (* 2 x)))(assert (< (* 2 x) 2))\n"
      "(check-sat)\n");
  CHECK(rReal.status == "sat");
}

TEST_CASE("disjunctions branch") {
  auto r = solveScript(
      "(declare-const x Int)\n"
      "(assert (or (= x 1) (= x 2)))\n"
      "(assert (not (= x 1)))\n"
      "(assert (not (= x 2)))\n"
      "(check-sat)\n");
  CHECK(r.status == "unsat");
  auto s = solveScript(
      "(declare-const x Int)\n"
      "(assert (or (= x 1) (= x 2)))\n"
      "(assert (not (= x 1)))\n"
      "(check-sat)\n");
  CHECK(s.status == "sat");
}

TEST_CASE("strict rational bounds admit interior points") {
  auto r = solveScript(
      "(declare-const x Real)(declare-const y Real)\n"
      "(assert (< x y))(assert (< y (+ x 1)))\n"
      "(check-sat)\n");
  CHECK(r.status == "sat");
}

TEST_CASE("quantified assertions yield unknown") {
  auto r = solveScript(
      "(declare-fun f (Int) Int)\n"
      "(assert (forall ((x Int)) (= (f x) x)))\n"
      "(check-sat)\n");
  CHECK(r.status == "unknown");
}

TEST_CASE("implication chains with uninterpreted predicates as bools") {
  auto r = solveScript(
      "(declare-const p Bool)(declare-const q Bool)\n"
      "(assert (=> p q))(assert p)(assert (not q))\n"
      "(check-sat)\n");
  CHECK(r.status == "unsat");
}

TEST_CASE("mixed euf and arithmetic propagates through equalities") {
  auto r = solveScript(
      "(declare-fun f (Int) Int)\n"
      "(declare-const a Int)(declare-const b Int)\n"
      "(assert (= (f a) (+ b 1)))\n"
      "(assert (= a 3))(assert (= b 2))\n"
      "(assert (not (= (f 3) 3)))\n"
      "(check-sat)\n");
  CHECK(r.status == "unsat");
}
