#ifndef HPILOT_PARSER_HPP
#define HPILOT_PARSER_HPP

#include <string>

#include "hpilot/core.hpp"

namespace hpilot {

struct SourcePosition {
  int line = 1;    // 1-based
  int column = 1;  // 1-based
};

struct ParseError : Error {
  SourcePosition pos;
  ParseError(SourcePosition p, const std::string& msg)
      : Error("line " + std::to_string(p.line) + ", column " + std::to_string(p.column) +
              ": " + msg),
        pos(p) {}
};

struct ParserOptions {
  // Bare numerals (without the `_` prefix) are accepted when the arithmetic
  // backend is active, which is the only backend here.
  bool acceptBareNumbers = true;
};

// Parses the .loc input language into a Task. Undeclared unquantified names
// become constants with inferred sorts; `null` is auto-declared when a
// pointer sort occurs; write/update terms switch the task into array mode.
Task parseTask(const std::string& text, const ParserOptions& opts = {});

// Emits .loc syntax such that parseTask(printTask(t)) equals t structurally.
std::string printTask(const Task& t);

// Printing helpers shared with printTask (used by traces and tests).
std::string printTerm(const Term& t);
std::string printAtom(const Atom& a);
std::string printFormula(const Formula& f);
std::string printClause(const Clause& c);

}  // namespace hpilot

#endif
