#include "hpilot/backend.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <sys/wait.h>

namespace hpilot {

namespace {

std::string smtSort(const Sort& s) {
  switch (s.kind) {
    case SortKind::Int: return "Int";
    case SortKind::Real: return "Real";
    case SortKind::Bool: return "Bool";
    case SortKind::Scalar: return "Scalar";
    case SortKind::Pointer: return "Pointer" + std::to_string(s.index);
    case SortKind::Free: return "Free" + std::to_string(s.index);
  }
  return "Int";
}

bool plainSmtName(const std::string& n) {
  if (n.empty() || std::isdigit(static_cast<unsigned char>(n[0]))) return false;
  for (char c : n)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

std::string smtName(const std::string& n) {
  return plainSmtName(n) ? n : "|" + n + "|";
}

std::string smtTerm(const Term& t) {
  switch (t.tag) {
    case Term::Tag::Var:
    case Term::Tag::Const:
      return smtName(t.name);
    case Term::Tag::Numeral:
      return t.value < 0 ? "(- " + std::to_string(-t.value) + ")" : std::to_string(t.value);
    case Term::Tag::Arith:
    case Term::Tag::Apply: {
      std::string s = "(" + (t.tag == Term::Tag::Arith ? t.name : smtName(t.name));
      for (const auto& a : t.args) s += " " + smtTerm(a);
      return s + ")";
    }
  }
  return "?";
}

std::string smtAtom(const Atom& a) {
  switch (a.tag) {
    case Atom::Tag::Eq:
      return "(= " + smtTerm(a.args[0]) + " " + smtTerm(a.args[1]) + ")";
    case Atom::Tag::Ineq:
      return "(" + relOpStr(a.rel) + " " + smtTerm(a.args[0]) + " " + smtTerm(a.args[1]) + ")";
    case Atom::Tag::Pred: {
      if (a.args.empty()) return smtName(a.pred);
      std::string s = "(" + smtName(a.pred);
      for (const auto& t : a.args) s += " " + smtTerm(t);
      return s + ")";
    }
  }
  return "true";
}

std::string smtClauseBody(const Clause& c, const std::vector<Atom>& extraAnte) {
  std::vector<std::string> neg, pos;
  for (const auto& a : extraAnte) neg.push_back(smtAtom(a));
  for (const auto& a : c.antecedent) neg.push_back(smtAtom(a));
  for (const auto& a : c.consequent) pos.push_back(smtAtom(a));
  auto join = [](const std::string& op, const std::vector<std::string>& xs) {
    if (xs.size() == 1) return xs[0];
    std::string s = "(" + op;
    for (const auto& x : xs) s += " " + x;
    return s + ")";
  };
  if (neg.empty() && pos.empty()) return "false";
  if (neg.empty()) return join("or", pos);
  if (pos.empty()) return "(not " + join("and", neg) + ")";
  return "(=> " + join("and", neg) + " " + join("or", pos) + ")";
}

bool occursInClauses(const std::string& name, const std::vector<Clause>& cs) {
  for (const auto& c : cs) {
    bool found = false;
    forEachTerm(c, [&](const Term& t) {
      if ((t.tag == Term::Tag::Const || t.tag == Term::Tag::Apply) && t.name == name)
        found = true;
    });
    if (found) return true;
    for (const auto* part : {&c.antecedent, &c.consequent})
      for (const auto& a : *part)
        if (a.tag == Atom::Tag::Pred && a.pred == name) return true;
  }
  return false;
}

}  // namespace

std::string emitSmtlib(const std::vector<Clause>& clauses, const Signature& sig,
                       const std::map<std::string, Sort>& varSorts, const SmtOptions& opts,
                       std::vector<std::string>* warnings) {
  std::ostringstream out;

  bool hasQuant = false, hasInt = false, hasReal = false, hasUF = false;
  std::set<std::string> usedSorts;
  std::vector<const SymbolDecl*> used;
  for (const auto& d : sig.declarations()) {
    if (!occursInClauses(d.name, clauses)) continue;
    used.push_back(&d);
    for (const Sort* s : {&d.domain, &d.range}) {
      if (s->kind == SortKind::Int) hasInt = true;
      if (s->kind == SortKind::Real) hasReal = true;
      if (s->kind == SortKind::Scalar || s->kind == SortKind::Pointer ||
          s->kind == SortKind::Free)
        usedSorts.insert(smtSort(*s));
    }
    if (d.arity > 0) hasUF = true;
  }
  for (const auto& c : clauses) {
    if (!c.vars.empty()) hasQuant = true;
    forEachTerm(c, [&](const Term& t) {
      if (t.tag == Term::Tag::Numeral || t.tag == Term::Tag::Arith) hasInt = true;
    });
  }
  if (sig.defaultNumericSort.kind == SortKind::Real && hasInt) {
    hasReal = true;
    hasInt = false;
  }

  std::string logic;
  if (hasInt || hasReal)
    logic = std::string(hasUF || !usedSorts.empty() ? "UF" : "") +
            (hasInt && hasReal ? "LIRA" : hasReal ? "LRA" : "LIA");
  else
    logic = "UF";
  if (!hasQuant) logic = "QF_" + logic;
  out << "(set-logic " << logic << ")\n";

  for (const auto& s : usedSorts) out << "(declare-sort " << s << " 0)\n";
  for (const auto* d : used) {
    out << "(declare-fun " << smtName(d->name) << " (";
    for (int i = 0; i < d->arity; ++i) out << (i ? " " : "") << smtSort(d->domain);
    out << ") " << smtSort(d->kind == SymbolKind::Relation ? Sort::boolean() : d->range)
        << ")\n";
  }

  // Interval constraint, expanded per constant of the default numeric sort.
  if (sig.interval) {
    for (const auto* d : used) {
      if (d->arity != 0 || d->kind == SymbolKind::Relation) continue;
      if (d->range != sig.defaultNumericSort) continue;
      const auto& iv = *sig.interval;
      if (iv.lower)
        out << "(assert (" << (iv.lowerStrict ? "<" : "<=") << " " << *iv.lower << " "
            << smtName(d->name) << "))\n";
      if (iv.upper)
        out << "(assert (" << (iv.upperStrict ? "<" : "<=") << " " << smtName(d->name) << " "
            << *iv.upper << "))\n";
    }
  }

  for (const auto& c : clauses) {
    if (c.vars.empty()) {
      out << "(assert " << smtClauseBody(c, {}) << ")\n";
      continue;
    }
    if (warnings)
      warnings->push_back("emitting quantified clause (sat answers unreliable): " + c.str());
    // Interval bounds apply to quantified numeric variables as antecedents.
    std::vector<Atom> bounds;
    out << "(assert (forall (";
    bool first = true;
    for (const auto& v : c.vars) {
      auto it = varSorts.find(v);
      Sort s = it != varSorts.end() ? it->second : sig.defaultNumericSort;
      out << (first ? "" : " ") << "(" << smtName(v) << " " << smtSort(s) << ")";
      first = false;
      if (sig.interval && s == sig.defaultNumericSort) {
        if (sig.interval->lower)
          bounds.push_back(Atom::ineq(sig.interval->lowerStrict ? RelOp::Lt : RelOp::Le,
                                      Term::numeral(*sig.interval->lower), Term::var(v)));
        if (sig.interval->upper)
          bounds.push_back(Atom::ineq(sig.interval->upperStrict ? RelOp::Lt : RelOp::Le,
                                      Term::var(v), Term::numeral(*sig.interval->upper)));
      }
    }
    out << ") " << smtClauseBody(c, bounds) << "))\n";
  }

  out << "(check-sat)\n";
  if (opts.getModel) out << "(get-model)\n";
  return out.str();
}

SolverRun runSolver(const std::string& script, const std::string& scriptPath,
                    const std::string& command, double timeoutSeconds) {
  SolverRun run;
  {
    std::ofstream f(scriptPath, std::ios::binary);
    if (!f) {
      run.reason = "cannot write " + scriptPath;
      return run;
    }
    f << script;
  }
  std::string cmd;
  if (timeoutSeconds > 0) cmd += "timeout " + std::to_string(timeoutSeconds) + " ";
  cmd += command + " '" + scriptPath + "' 2>/dev/null";

  auto t0 = std::chrono::steady_clock::now();
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    run.reason = "cannot launch solver: " + command;
    return run;
  }
  std::string output;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) output.append(buf, got);
  int rc = pclose(p);
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::istringstream in(output);
  std::string line;
  bool statusSeen = false;
  std::string rest;
  while (std::getline(in, line)) {
    std::string token = line;
    token.erase(0, token.find_first_not_of(" \t\r"));
    token.erase(token.find_last_not_of(" \t\r") + 1);
    if (!statusSeen) {
      if (token == "sat") {
        run.status = RawStatus::Sat;
        statusSeen = true;
      } else if (token == "unsat") {
        run.status = RawStatus::Unsat;
        statusSeen = true;
      } else if (token == "unknown") {
        run.status = RawStatus::Unknown;
        run.reason = "solver answered unknown";
        statusSeen = true;
      }
      continue;
    }
    rest += line + "\n";
  }
  run.modelText = rest;
  if (!statusSeen) {
    if (rc != 0 && (rc == 124 || WEXITSTATUS(rc) == 124))
      run.reason = "solver timeout";
    else if (rc != 0)
      run.reason = "solver not found or failed: " + command;
    else
      run.reason = "solver produced no status";
  }
  return run;
}

Verdict interpret(RawStatus raw, const std::string& reason, bool allLocal, bool groundOk) {
  Verdict v;
  switch (raw) {
    case RawStatus::Unsat:
      v.kind = Verdict::Kind::Unsat;
      return v;
    case RawStatus::Sat:
      if (allLocal && groundOk) {
        v.kind = Verdict::Kind::Sat;
      } else {
        v.kind = Verdict::Kind::Unknown;
        v.reason = "locality not established";
      }
      return v;
    case RawStatus::Unknown:
      v.kind = Verdict::Kind::Unknown;
      v.reason = reason.empty() ? "solver answered unknown" : reason;
      return v;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Model reading and back-translation
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> sexprTokens(const std::string& s) {
  std::vector<std::string> toks;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(' || c == ')') {
      toks.push_back(std::string(1, c));
      ++i;
    } else if (c == '|') {
      std::size_t j = s.find('|', i + 1);
      if (j == std::string::npos) break;
      toks.push_back(s.substr(i + 1, j - i - 1));
      i = j + 1;
    } else {
      std::size_t j = i;
      while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '(' &&
             s[j] != ')' && s[j] != '|')
        ++j;
      toks.push_back(s.substr(i, j - i));
      i = j;
    }
  }
  return toks;
}

// Reads one balanced value starting at toks[i]; returns flattened text.
std::string readValue(const std::vector<std::string>& toks, std::size_t& i) {
  if (i >= toks.size()) return "";
  if (toks[i] != "(") return toks[i++];
  int depth = 0;
  std::vector<std::string> parts;
  do {
    if (toks[i] == "(") ++depth;
    if (toks[i] == ")") --depth;
    parts.push_back(toks[i++]);
  } while (i < toks.size() && depth > 0);
  // Normalize (- 3) to -3; anything else keeps its s-expr text.
  if (parts.size() == 4 && parts[1] == "-" && parts[3] == ")") return "-" + parts[2];
  std::string s;
  for (const auto& p : parts) s += (s.empty() || p == ")" || s.back() == '(' ? "" : " ") + p;
  return s;
}

bool numericValue(const std::string& v, long long& num, long long& den) {
  den = 1;
  std::string s = v;
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      num = std::stoll(s.substr(0, slash));
      den = std::stoll(s.substr(slash + 1));
      return den != 0;
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      std::string frac = s.substr(dot + 1);
      num = std::stoll(s.substr(0, dot).empty() ? "0" : s.substr(0, dot));
      long long scale = 1;
      for (char c : frac) {
        (void)c;
        scale *= 10;
      }
      bool negative = !s.empty() && s[0] == '-';
      long long f = frac.empty() ? 0 : std::stoll(frac);
      num = num * scale + (negative ? -f : f);
      den = scale;
      return true;
    }
    std::size_t pos = 0;
    num = std::stoll(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

}  // namespace

BaseModel parseModel(const std::string& modelText) {
  BaseModel m;
  std::vector<std::string> toks = sexprTokens(modelText);
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (toks[i] == "define-fun" && i + 4 < toks.size() && toks[i + 2] == "(" &&
        toks[i + 3] == ")") {
      std::string name = toks[i + 1];
      std::size_t j = i + 5;  // skip sort token
      std::string value = readValue(toks, j);
      m.assignments[name] = value;
      i = j - 1;
    } else if (toks[i] == "=" && i > 0 && toks[i - 1] == "(" && i + 1 < toks.size() &&
               toks[i + 1] != "(") {
      std::string name = toks[i + 1];
      std::size_t j = i + 2;
      std::string value = readValue(toks, j);
      if (m.assignments.find(name) == m.assignments.end()) m.assignments[name] = value;
    }
  }
  return m;
}

namespace {

std::string evalGroundTerm(const Term& t, const ExtensionModel& m,
                           const std::map<std::string, std::string>& eValues) {
  switch (t.tag) {
    case Term::Tag::Numeral:
      return std::to_string(t.value);
    case Term::Tag::Var:
      return t.name;  // should not happen for ground inputs
    case Term::Tag::Const: {
      auto it = eValues.find(t.name);
      if (it != eValues.end()) return it->second;
      auto c = m.constants.find(t.name);
      return c != m.constants.end() ? c->second : t.name;
    }
    case Term::Tag::Arith: {
      long long ln, ld, rn, rd;
      std::string l = evalGroundTerm(t.args[0], m, eValues);
      std::string r = evalGroundTerm(t.args[1], m, eValues);
      if (!numericValue(l, ln, ld) || !numericValue(r, rn, rd)) return l + t.name + r;
      long long num = 0, den = 1;
      if (t.name == "+") {
        num = ln * rd + rn * ld;
        den = ld * rd;
      } else if (t.name == "-") {
        num = ln * rd - rn * ld;
        den = ld * rd;
      } else if (t.name == "*") {
        num = ln * rn;
        den = ld * rd;
      } else if (t.name == "/") {
        if (rn == 0) return "undef";
        num = ln * rd;
        den = ld * rn;
      }
      if (den < 0) {
        den = -den;
        num = -num;
      }
      if (den != 1 && num % den == 0) {
        num /= den;
        den = 1;
      }
      return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }
    case Term::Tag::Apply: {
      std::vector<std::string> args;
      for (const auto& a : t.args) args.push_back(evalGroundTerm(a, m, eValues));
      auto f = m.tables.find(t.name);
      if (f != m.tables.end()) {
        auto row = f->second.find(args);
        if (row != f->second.end()) return row->second;
      }
      auto d = m.defaults.find(t.name);
      return d != m.defaults.end() ? d->second : "undef";
    }
  }
  return "undef";
}

std::string defaultElement(const Sort& s, const Signature& sig) {
  if (s.kind == SortKind::Pointer) return "null";
  if (s.isNumeric()) return "0";
  for (const auto& d : sig.declarations())
    if (d.arity == 0 && d.kind == SymbolKind::Constant && d.range == s) return d.name;
  return smtSort(s) + "!default";
}

}  // namespace

ExtensionModel buildExtensionModel(const BaseModel& m, const std::vector<DefinitionMap>& dStack,
                                   const Signature& sig) {
  ExtensionModel out;
  std::set<std::string> eNames;
  for (const auto& d : dStack)
    for (const auto& e : d.entries) eNames.insert(e.name);
  std::map<std::string, std::string> eValues;
  for (const auto& [name, value] : m.assignments) {
    if (eNames.count(name))
      eValues[name] = value;
    else
      out.constants[name] = value;
  }

  // Innermost levels were purified last, so their definitions reference
  // earlier e-names; process the stack in reverse so arguments resolve.
  for (auto d = dStack.rbegin(); d != dStack.rend(); ++d) {
    for (const auto& e : d->entries) {
      std::vector<std::string> args;
      for (const auto& a : e.term.args) args.push_back(evalGroundTerm(a, out, eValues));
      auto it = eValues.find(e.name);
      std::string value =
          it != eValues.end() ? it->second
                              : defaultElement(sig.get(e.term.name).range, sig);
      auto& table = out.tables[e.term.name];
      auto row = table.find(args);
      if (row != table.end() && row->second != value) {
        out.error = "contradictory model entries for " + e.term.name;
        continue;
      }
      table[args] = value;
    }
  }
  for (const auto& d : sig.declarations()) {
    if (out.tables.find(d.name) == out.tables.end()) continue;
    out.defaults[d.name] = defaultElement(d.range, sig);
  }
  return out;
}

std::string modelListing(const ExtensionModel& m) {
  std::vector<std::string> lines;
  for (const auto& [fn, table] : m.tables) {
    for (const auto& [args, value] : table) {
      std::string s = fn + "(";
      for (std::size_t i = 0; i < args.size(); ++i) s += (i ? ", " : "") + args[i];
      lines.push_back(s + ") = " + value);
    }
    auto d = m.defaults.find(fn);
    if (d != m.defaults.end()) lines.push_back(fn + "(_) = " + d->second);
  }
  for (const auto& [name, value] : m.constants) lines.push_back(name + " = " + value);
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

std::string modelDot(const ExtensionModel& m, const Signature& sig) {
  std::string out = "digraph model {\n";
  for (const auto& [fn, table] : m.tables) {
    const SymbolDecl* d = sig.find(fn);
    if (!d || d->range.kind != SortKind::Pointer) continue;
    for (const auto& [args, value] : table) {
      if (args.size() != 1) continue;
      out += "  \"" + args[0] + "\" -> \"" + value + "\" [label=\"" + fn + "\"];\n";
    }
  }
  return out + "}\n";
}

bool evaluateClause(const Clause& c, const ExtensionModel& m) {
  std::map<std::string, std::string> none;
  auto evalAtom = [&](const Atom& a) -> bool {
    if (a.tag == Atom::Tag::Pred) return false;  // no predicate tables recovered
    std::string l = evalGroundTerm(a.args[0], m, none);
    std::string r = evalGroundTerm(a.args[1], m, none);
    long long ln, ld, rn, rd;
    bool numeric = numericValue(l, ln, ld) && numericValue(r, rn, rd);
    if (a.tag == Atom::Tag::Eq)
      return numeric ? ln * rd == rn * ld : l == r;
    if (!numeric) return false;
    switch (a.rel) {
      case RelOp::Le: return ln * rd <= rn * ld;
      case RelOp::Lt: return ln * rd < rn * ld;
      case RelOp::Ge: return ln * rd >= rn * ld;
      case RelOp::Gt: return ln * rd > rn * ld;
    }
    return false;
  };
  for (const auto& a : c.antecedent)
    if (!evalAtom(a)) return true;  // premise false, clause holds
  for (const auto& a : c.consequent)
    if (evalAtom(a)) return true;
  return false;
}

}  // namespace hpilot
