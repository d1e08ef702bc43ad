#ifndef GROUNDSOLVER_SOLVER_HPP
#define GROUNDSOLVER_SOLVER_HPP

#include <string>

namespace gsolv {

struct Result {
  std::string status;  // "sat", "unsat" or "unknown"
  std::string model;   // (define-fun ...) lines when sat and get-model was given
};

// Decides a ground SMT-LIB 2 script over uninterpreted functions, equality
// and linear integer/real arithmetic. Function applications are removed up
// front by Ackermann's reduction; the boolean structure is decided by DPLL
// with a union-find equality check and an exact rational simplex (plus
// branch-and-bound for integer variables) as the theory oracle. Quantified
// assertions and non-linear terms yield "unknown".
Result solveScript(const std::string& text);

}  // namespace gsolv

#endif
