#include "solver.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace gsolv {

namespace {

struct Unsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseFail : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Exact rationals (long long with __int128 intermediates)
// ---------------------------------------------------------------------------

long long checkedNarrow(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw Unsupported("rational overflow");
  return static_cast<long long>(v);
}

struct Rat {
  long long n = 0, d = 1;

  Rat() = default;
  Rat(long long num) : n(num) {}
  Rat(long long num, long long den) : n(num), d(den) { norm(); }

  void norm() {
    if (d == 0) throw Unsupported("division by zero");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    long long g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
  }

  static Rat make(__int128 num, __int128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    __int128 a = num < 0 ? -num : num, b = den;
    while (b) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
    Rat r;
    r.n = checkedNarrow(num);
    r.d = checkedNarrow(den);
    if (r.d == 0) throw Unsupported("division by zero");
    return r;
  }

  Rat operator+(const Rat& o) const {
    return make(static_cast<__int128>(n) * o.d + static_cast<__int128>(o.n) * d,
                static_cast<__int128>(d) * o.d);
  }
  Rat operator-(const Rat& o) const {
    return make(static_cast<__int128>(n) * o.d - static_cast<__int128>(o.n) * d,
                static_cast<__int128>(d) * o.d);
  }
  Rat operator*(const Rat& o) const {
    return make(static_cast<__int128>(n) * o.n, static_cast<__int128>(d) * o.d);
  }
  Rat operator/(const Rat& o) const {
    return make(static_cast<__int128>(n) * o.d, static_cast<__int128>(d) * o.n);
  }
  Rat operator-() const {
    Rat r = *this;
    r.n = -r.n;
    return r;
  }
  bool operator==(const Rat& o) const { return n == o.n && d == o.d; }
  bool operator!=(const Rat& o) const { return !(*this == o); }
  bool operator<(const Rat& o) const {
    return static_cast<__int128>(n) * o.d < static_cast<__int128>(o.n) * d;
  }
  bool operator<=(const Rat& o) const { return *this < o || *this == o; }
  bool isInt() const { return d == 1; }
  Rat floor() const {
    long long q = n / d;
    if (n < 0 && n % d != 0) --q;
    return Rat(q);
  }
  Rat ceil() const { return -((-*this).floor()); }
  std::string str() const {
    return d == 1 ? std::to_string(n) : std::to_string(n) + "/" + std::to_string(d);
  }
};

// Rational plus an infinitesimal, for strict bounds.
struct QD {
  Rat r, k;
  bool operator<(const QD& o) const { return r < o.r || (r == o.r && k < o.k); }
  bool operator==(const QD& o) const { return r == o.r && k == o.k; }
  bool operator<=(const QD& o) const { return *this < o || *this == o; }
};

// ---------------------------------------------------------------------------
// S-expressions
// ---------------------------------------------------------------------------

struct Sx {
  bool atom = true;
  std::string text;
  std::vector<Sx> kids;
};

std::vector<Sx> parseSexprs(const std::string& s) {
  std::vector<Sx> roots;
  std::vector<Sx*> stack;
  std::size_t i = 0;
  auto add = [&](Sx x) -> Sx* {
    if (stack.empty()) {
      roots.push_back(std::move(x));
      return &roots.back();
    }
    stack.back()->kids.push_back(std::move(x));
    return &stack.back()->kids.back();
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == ';') {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (c == '(') {
      Sx x;
      x.atom = false;
      stack.push_back(add(std::move(x)));
      ++i;
    } else if (c == ')') {
      if (stack.empty()) throw ParseFail("unbalanced )");
      stack.pop_back();
      ++i;
    } else if (c == '|') {
      std::size_t j = s.find('|', i + 1);
      if (j == std::string::npos) throw ParseFail("unterminated |");
      Sx x;
      x.text = s.substr(i + 1, j - i - 1);
      add(std::move(x));
      i = j + 1;
    } else if (c == '"') {
      std::size_t j = s.find('"', i + 1);
      if (j == std::string::npos) throw ParseFail("unterminated string");
      Sx x;
      x.text = s.substr(i + 1, j - i - 1);
      add(std::move(x));
      i = j + 1;
    } else {
      std::size_t j = i;
      while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '(' &&
             s[j] != ')' && s[j] != ';')
        ++j;
      Sx x;
      x.text = s.substr(i, j - i);
      add(std::move(x));
      i = j;
    }
  }
  if (!stack.empty()) throw ParseFail("unbalanced (");
  return roots;
}

// ---------------------------------------------------------------------------
// Problem representation after Ackermannization
// ---------------------------------------------------------------------------

// Linear expression over numeric constants (by id).
struct Lin {
  std::map<int, Rat> coeff;
  Rat cst;

  void add(const Lin& o, const Rat& f) {
    for (const auto& [v, c] : o.coeff) {
      Rat nc = coeff.count(v) ? coeff[v] + c * f : c * f;
      if (nc == Rat(0))
        coeff.erase(v);
      else
        coeff[v] = nc;
    }
    cst = cst + o.cst * f;
  }
};

struct Atom {
  enum Kind { Prop, EufEq, ArithLe } kind = Prop;
  int sym = -1;             // Prop: 0-ary Bool symbol id (or fresh), -1 for aux
  int lhs = -1, rhs = -1;   // EufEq: constant ids
  Lin expr;                 // ArithLe: expr <= 0 (strict if `strict`)
  bool strict = false;
};

struct Formula {
  enum Kind { True, False, AtomRef, Not, And, Or } kind = True;
  int atom = -1;
  std::vector<Formula> kids;

  static Formula mk(Kind k, std::vector<Formula> cs) {
    Formula f;
    f.kind = k;
    f.kids = std::move(cs);
    return f;
  }
  static Formula atomRef(int a) {
    Formula f;
    f.kind = AtomRef;
    f.atom = a;
    return f;
  }
  static Formula constant(bool b) {
    Formula f;
    f.kind = b ? True : False;
    return f;
  }
};

struct SortInfo {
  enum Kind { Int, Real, Bool, Uninterp } kind = Int;
  std::string name;
};

struct Symbol {
  std::string name;
  std::vector<int> domain;  // sort ids
  int range = 0;            // sort id
  bool declared = true;     // false for Ackermann constants
};

struct Problem {
  std::vector<SortInfo> sorts;
  std::map<std::string, int> sortByName;
  std::vector<Symbol> symbols;
  std::map<std::string, int> symByName;
  std::vector<Atom> atoms;
  std::map<std::string, int> atomByKey;
  std::vector<Formula> asserts;
  bool wantModel = false;

  int sortId(const std::string& n) {
    auto it = sortByName.find(n);
    if (it != sortByName.end()) return it->second;
    SortInfo s;
    s.name = n;
    if (n == "Int")
      s.kind = SortInfo::Int;
    else if (n == "Real")
      s.kind = SortInfo::Real;
    else if (n == "Bool")
      s.kind = SortInfo::Bool;
    else
      s.kind = SortInfo::Uninterp;
    sorts.push_back(s);
    sortByName[n] = static_cast<int>(sorts.size()) - 1;
    return sortByName[n];
  }

  bool numericSort(int s) const {
    return sorts[s].kind == SortInfo::Int || sorts[s].kind == SortInfo::Real;
  }

  int addSymbol(Symbol s) {
    symbols.push_back(std::move(s));
    symByName[symbols.back().name] = static_cast<int>(symbols.size()) - 1;
    return static_cast<int>(symbols.size()) - 1;
  }

  int internAtom(Atom a, const std::string& key) {
    auto it = atomByKey.find(key);
    if (it != atomByKey.end()) return it->second;
    atoms.push_back(std::move(a));
    atomByKey[key] = static_cast<int>(atoms.size()) - 1;
    return atomByKey[key];
  }
};

// ---------------------------------------------------------------------------
// Term evaluation: every term becomes either a linear expression (numeric)
// or a constant symbol id (everything else, after Ackermannization).
// ---------------------------------------------------------------------------

struct TermVal {
  bool numeric = false;
  Lin lin;      // numeric
  int sym = -1; // non-numeric constant id
  int sort = 0;
};

struct Builder {
  Problem& p;
  // One fresh constant per distinct application, plus the argument values
  // for the functionality axioms.
  struct AppInst {
    int fn;
    std::vector<TermVal> args;
    int constId;
  };
  std::vector<AppInst> apps;
  std::map<std::string, int> appByKey;  // key -> index into apps
  int freshCounter = 0;

  explicit Builder(Problem& prob) : p(prob) {}

  std::string keyOf(const TermVal& v) {
    if (!v.numeric) return "c" + std::to_string(v.sym);
    std::string k = "n:" + v.lin.cst.str();
    for (const auto& [var, c] : v.lin.coeff)
      k += "+" + c.str() + "*x" + std::to_string(var);
    return k;
  }

  TermVal constVal(int sym) {
    TermVal v;
    v.sort = p.symbols[sym].range;
    if (p.numericSort(v.sort)) {
      v.numeric = true;
      v.lin.coeff[sym] = Rat(1);
    } else {
      v.sym = sym;
    }
    return v;
  }

  TermVal term(const Sx& x) {
    if (x.atom) {
      const std::string& t = x.text;
      if (!t.empty() && (std::isdigit(static_cast<unsigned char>(t[0])) ||
                         (t[0] == '-' && t.size() > 1))) {
        // numeral (possibly a decimal)
        TermVal v;
        v.numeric = true;
        auto dot = t.find('.');
        if (dot == std::string::npos) {
          v.lin.cst = Rat(std::stoll(t));
        } else {
          std::string frac = t.substr(dot + 1);
          long long scale = 1;
          for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
          long long whole = std::stoll(t.substr(0, dot));
          long long f = frac.empty() ? 0 : std::stoll(frac);
          v.lin.cst = Rat(whole * scale + (t[0] == '-' ? -f : f), scale);
        }
        v.sort = p.sortId("Int");
        return v;
      }
      auto it = p.symByName.find(t);
      if (it == p.symByName.end()) throw ParseFail("undeclared symbol " + t);
      if (!p.symbols[it->second].domain.empty())
        throw ParseFail("function used without arguments: " + t);
      return constVal(it->second);
    }
    if (x.kids.empty()) throw ParseFail("empty application");
    const std::string& op = x.kids[0].text;
    if (op == "+" || op == "-" || op == "*" || op == "/" || op == "div") {
      std::vector<TermVal> args;
      for (std::size_t i = 1; i < x.kids.size(); ++i) args.push_back(term(x.kids[i]));
      for (const auto& a : args)
        if (!a.numeric) throw Unsupported("arithmetic over non-numeric term");
      TermVal v;
      v.numeric = true;
      v.sort = args[0].sort;
      if (op == "+") {
        for (const auto& a : args) v.lin.add(a.lin, Rat(1));
      } else if (op == "-") {
        if (args.size() == 1) {
          v.lin.add(args[0].lin, Rat(-1));
        } else {
          v.lin.add(args[0].lin, Rat(1));
          for (std::size_t i = 1; i < args.size(); ++i) v.lin.add(args[i].lin, Rat(-1));
        }
      } else if (op == "*") {
        if (args.size() != 2) throw Unsupported("n-ary *");
        const Lin *a = &args[0].lin, *b = &args[1].lin;
        if (!a->coeff.empty() && !b->coeff.empty()) throw Unsupported("non-linear term");
        if (!a->coeff.empty()) std::swap(a, b);
        v.lin.add(*b, a->cst);
      } else {  // "/" or "div"
        if (args.size() != 2 || !args[1].lin.coeff.empty())
          throw Unsupported("division by a non-constant");
        v.lin.add(args[0].lin, Rat(1) / args[1].lin.cst);
      }
      return v;
    }
    // uninterpreted application -> Ackermann constant
    auto it = p.symByName.find(op);
    if (it == p.symByName.end()) throw ParseFail("undeclared symbol " + op);
    int fn = it->second;
    const Symbol& f = p.symbols[fn];
    if (f.domain.size() != x.kids.size() - 1) throw ParseFail("arity mismatch for " + op);
    std::vector<TermVal> args;
    for (std::size_t i = 1; i < x.kids.size(); ++i) args.push_back(term(x.kids[i]));
    std::string key = "f" + std::to_string(fn);
    for (const auto& a : args) key += "|" + keyOf(a);
    auto a = appByKey.find(key);
    int constId;
    if (a != appByKey.end()) {
      constId = apps[a->second].constId;
    } else {
      Symbol c;
      c.name = f.name + "!" + std::to_string(++freshCounter);
      c.range = f.range;
      c.declared = false;
      constId = p.addSymbol(std::move(c));
      appByKey[key] = static_cast<int>(apps.size());
      apps.push_back({fn, args, constId});
    }
    return constVal(constId);
  }

  // expr(l) - expr(r) <= 0, optionally strict.
  int leAtom(TermVal l, TermVal r, bool strict) {
    if (!l.numeric || !r.numeric) throw Unsupported("ordering over non-numeric terms");
    Atom a;
    a.kind = Atom::ArithLe;
    a.expr = l.lin;
    a.expr.add(r.lin, Rat(-1));
    a.strict = strict;
    std::string key = "le" + std::string(strict ? "!" : "") + keyOf([&] {
                        TermVal v;
                        v.numeric = true;
                        v.lin = a.expr;
                        return v;
                      }());
    return p.internAtom(std::move(a), key);
  }

  Formula eqFormula(const TermVal& l, const TermVal& r) {
    if (l.numeric != r.numeric) throw ParseFail("equality between different sorts");
    if (l.numeric) {
      // two inequalities; integer/real distinction handled at solve time
      return Formula::mk(Formula::And, {Formula::atomRef(leAtom(l, r, false)),
                                        Formula::atomRef(leAtom(r, l, false))});
    }
    if (l.sym == r.sym) return Formula::constant(true);
    Atom a;
    a.kind = Atom::EufEq;
    a.lhs = std::min(l.sym, r.sym);
    a.rhs = std::max(l.sym, r.sym);
    std::string key = "eq" + std::to_string(a.lhs) + "," + std::to_string(a.rhs);
    return Formula::atomRef(p.internAtom(std::move(a), key));
  }

  Formula boolTerm(const Sx& x) {
    if (x.atom) {
      if (x.text == "true") return Formula::constant(true);
      if (x.text == "false") return Formula::constant(false);
      auto it = p.symByName.find(x.text);
      if (it == p.symByName.end()) throw ParseFail("undeclared symbol " + x.text);
      Atom a;
      a.kind = Atom::Prop;
      a.sym = it->second;
      return Formula::atomRef(p.internAtom(std::move(a), "p" + std::to_string(it->second)));
    }
    if (x.kids.empty()) throw ParseFail("empty formula");
    const std::string& op = x.kids[0].text;
    auto nary = [&](Formula::Kind k) {
      std::vector<Formula> cs;
      for (std::size_t i = 1; i < x.kids.size(); ++i) cs.push_back(boolTerm(x.kids[i]));
      return Formula::mk(k, std::move(cs));
    };
    if (op == "and") return nary(Formula::And);
    if (op == "or") return nary(Formula::Or);
    if (op == "not") return Formula::mk(Formula::Not, {boolTerm(x.kids[1])});
    if (op == "=>") {
      // right-associative chain
      Formula acc = boolTerm(x.kids.back());
      for (std::size_t i = x.kids.size() - 1; i-- > 1;)
        acc = Formula::mk(Formula::Or,
                          {Formula::mk(Formula::Not, {boolTerm(x.kids[i])}), std::move(acc)});
      return acc;
    }
    if (op == "forall" || op == "exists") throw Unsupported("quantified assertion");
    if (op == "ite") throw Unsupported("ite");
    if (op == "=" || op == "distinct") {
      // chainable equality; sides may be Bool formulas
      bool boolish = false;
      for (std::size_t i = 1; i < x.kids.size(); ++i) {
        const Sx& k = x.kids[i];
        if (!k.atom && !k.kids.empty()) {
          const std::string& o = k.kids[0].text;
          if (o == "and" || o == "or" || o == "not" || o == "=>" || o == "<=" || o == "<" ||
              o == ">=" || o == ">")
            boolish = true;
        }
        if (k.atom && (k.text == "true" || k.text == "false")) boolish = true;
        if (k.atom) {
          auto it = p.symByName.find(k.text);
          if (it != p.symByName.end() &&
              p.sorts[p.symbols[it->second].range].kind == SortInfo::Bool &&
              p.symbols[it->second].domain.empty())
            boolish = true;
        }
      }
      if (boolish) {
        if (op == "distinct") throw Unsupported("distinct over Bool");
        Formula a = boolTerm(x.kids[1]), b = boolTerm(x.kids[2]);
        Formula na = Formula::mk(Formula::Not, {a}), nb = Formula::mk(Formula::Not, {b});
        return Formula::mk(Formula::And,
                           {Formula::mk(Formula::Or, {a, nb}),
                            Formula::mk(Formula::Or, {na, b})});
      }
      std::vector<TermVal> vals;
      for (std::size_t i = 1; i < x.kids.size(); ++i) vals.push_back(term(x.kids[i]));
      std::vector<Formula> cs;
      for (std::size_t i = 0; i + 1 < vals.size(); ++i)
        for (std::size_t j = i + 1; j < vals.size(); ++j) {
          Formula e = eqFormula(vals[i], vals[j]);
          cs.push_back(op == "=" ? std::move(e) : Formula::mk(Formula::Not, {std::move(e)}));
          if (op == "=") break;  // chain: only adjacent pairs needed
        }
      if (op == "=") {
        cs.clear();
        for (std::size_t i = 0; i + 1 < vals.size(); ++i)
          cs.push_back(eqFormula(vals[i], vals[i + 1]));
      }
      if (cs.size() == 1) return cs[0];
      return Formula::mk(Formula::And, std::move(cs));
    }
    if (op == "<=" || op == "<" || op == ">=" || op == ">") {
      std::vector<TermVal> vals;
      for (std::size_t i = 1; i < x.kids.size(); ++i) vals.push_back(term(x.kids[i]));
      std::vector<Formula> cs;
      for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        const TermVal& l = (op == "<=" || op == "<") ? vals[i] : vals[i + 1];
        const TermVal& r = (op == "<=" || op == "<") ? vals[i + 1] : vals[i];
        cs.push_back(Formula::atomRef(leAtom(l, r, op == "<" || op == ">")));
      }
      if (cs.size() == 1) return cs[0];
      return Formula::mk(Formula::And, std::move(cs));
    }
    // predicate application -> Ackermannized Bool constant
    auto it = p.symByName.find(op);
    if (it == p.symByName.end()) throw ParseFail("undeclared symbol " + op);
    TermVal v = term(x);
    Atom a;
    a.kind = Atom::Prop;
    a.sym = v.sym;
    return Formula::atomRef(p.internAtom(std::move(a), "p" + std::to_string(v.sym)));
  }

  // Functionality axioms: equal arguments force equal results.
  void addFunctionality() {
    for (std::size_t i = 0; i < apps.size(); ++i)
      for (std::size_t j = i + 1; j < apps.size(); ++j) {
        if (apps[i].fn != apps[j].fn) continue;
        std::vector<Formula> ante;
        bool trivial = false;
        for (std::size_t k = 0; k < apps[i].args.size(); ++k) {
          Formula e = eqFormula(apps[i].args[k], apps[j].args[k]);
          if (e.kind == Formula::True) continue;
          ante.push_back(std::move(e));
        }
        if (trivial) continue;
        Formula conc = eqFormula(constVal(apps[i].constId), constVal(apps[j].constId));
        if (p.sorts[p.symbols[apps[i].constId].range].kind == SortInfo::Bool) {
          Atom ai, aj;
          ai.kind = aj.kind = Atom::Prop;
          ai.sym = apps[i].constId;
          aj.sym = apps[j].constId;
          Formula fi = Formula::atomRef(
              p.internAtom(std::move(ai), "p" + std::to_string(apps[i].constId)));
          Formula fj = Formula::atomRef(
              p.internAtom(std::move(aj), "p" + std::to_string(apps[j].constId)));
          conc = Formula::mk(Formula::And,
                             {Formula::mk(Formula::Or, {fi, Formula::mk(Formula::Not, {fj})}),
                              Formula::mk(Formula::Or, {Formula::mk(Formula::Not, {fi}), fj})});
        }
        std::vector<Formula> cl;
        for (auto& a : ante) cl.push_back(Formula::mk(Formula::Not, {std::move(a)}));
        cl.push_back(std::move(conc));
        p.asserts.push_back(cl.size() == 1 ? std::move(cl[0])
                                           : Formula::mk(Formula::Or, std::move(cl)));
      }
  }
};

// Bool-ranged Ackermann constants need special handling in eqFormula; the
// builder routes them through Prop atoms above.

// ---------------------------------------------------------------------------
// CNF (Tseitin)
// ---------------------------------------------------------------------------

struct Cnf {
  int nVars = 0;  // var 0..n-1; literal = 2*var + sign(neg=1)
  std::vector<std::vector<int>> clauses;

  int freshVar() { return nVars++; }
  static int lit(int var, bool neg) { return 2 * var + (neg ? 1 : 0); }
  void unit(int l) { clauses.push_back({l}); }
};

int tseitin(const Formula& f, Cnf& cnf, std::vector<int>& atomVar, bool neg = false) {
  switch (f.kind) {
    case Formula::True:
    case Formula::False: {
      bool val = (f.kind == Formula::True) != neg;
      int v = cnf.freshVar();
      cnf.unit(Cnf::lit(v, false));  // force v true
      return Cnf::lit(v, !val);      // v when val, (not v) otherwise
    }
    case Formula::AtomRef: {
      if (atomVar[f.atom] < 0) atomVar[f.atom] = cnf.freshVar();
      return Cnf::lit(atomVar[f.atom], neg);
    }
    case Formula::Not:
      return tseitin(f.kids[0], cnf, atomVar, !neg);
    case Formula::And:
    case Formula::Or: {
      bool isAnd = (f.kind == Formula::And) != neg;
      std::vector<int> ls;
      for (const auto& k : f.kids) ls.push_back(tseitin(k, cnf, atomVar, neg));
      int v = cnf.freshVar();
      int pv = Cnf::lit(v, false), nv = Cnf::lit(v, true);
      if (isAnd) {
        std::vector<int> big{pv};
        for (int l : ls) {
          cnf.clauses.push_back({nv, l});
          big.push_back(l ^ 1);
        }
        cnf.clauses.push_back(std::move(big));
      } else {
        std::vector<int> big{nv};
        for (int l : ls) {
          cnf.clauses.push_back({pv, l ^ 1});
          big.push_back(l);
        }
        cnf.clauses.push_back(std::move(big));
      }
      return pv;
    }
  }
  throw ParseFail("malformed formula");
}

// Shallow formulas (the usual case: implications between conjunctions of
// literals) become clauses over the interned atoms directly; auxiliary
// variables only blur the search. Falls back to Tseitin past the cap.
std::optional<std::vector<std::vector<int>>> directCnf(const Formula& f, Cnf& cnf,
                                                       std::vector<int>& atomVar,
                                                       bool neg = false) {
  constexpr std::size_t kCap = 64;
  using Clauses = std::vector<std::vector<int>>;
  switch (f.kind) {
    case Formula::True:
      return (f.kind == Formula::True) != neg ? Clauses{} : Clauses{{}};
    case Formula::False:
      return neg ? Clauses{} : Clauses{{}};
    case Formula::AtomRef: {
      if (atomVar[f.atom] < 0) atomVar[f.atom] = cnf.freshVar();
      return Clauses{{Cnf::lit(atomVar[f.atom], neg)}};
    }
    case Formula::Not:
      return directCnf(f.kids[0], cnf, atomVar, !neg);
    case Formula::And:
    case Formula::Or: {
      bool conj = (f.kind == Formula::And) != neg;
      if (conj) {
        Clauses acc;
        for (const auto& k : f.kids) {
          auto sub = directCnf(k, cnf, atomVar, neg);
          if (!sub) return std::nullopt;
          for (auto& c : *sub) acc.push_back(std::move(c));
          if (acc.size() > kCap) return std::nullopt;
        }
        return acc;
      }
      Clauses acc{{}};
      for (const auto& k : f.kids) {
        auto sub = directCnf(k, cnf, atomVar, neg);
        if (!sub) return std::nullopt;
        Clauses next;
        for (const auto& a : acc)
          for (const auto& c : *sub) {
            std::vector<int> merged = a;
            merged.insert(merged.end(), c.begin(), c.end());
            next.push_back(std::move(merged));
          }
        if (next.size() > kCap) return std::nullopt;
        acc = std::move(next);
      }
      return acc;
    }
  }
  throw ParseFail("malformed formula");
}

// ---------------------------------------------------------------------------
// Theory solver: union-find for equalities, simplex for arithmetic
// ---------------------------------------------------------------------------

struct UnionFind {
  std::vector<int> parent;
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// exprs: list of (Lin, strict) meaning expr <= 0 / expr < 0, plus
// equalities expr = 0. Feasibility by bounded variable elimination would
// explode; instead a dense phase-1 style search over vertex candidates is
// avoided in favor of Fourier-Motzkin with a size cap, falling back to
// "unknown" when the cap is hit.
struct ArithConstraint {
  Lin expr;
  bool strict = false;
  bool equality = false;
};

// Fourier-Motzkin elimination on exact rationals. Returns feasibility of the
// rational relaxation and a sample point. Constraint counts in this tool's
// inputs are small; a cap guards the worst case.
struct FM {
  static constexpr std::size_t kCap = 20000;

  // Scale so the leading coefficient is +1. Returns +1 when the constraint
  // kept its orientation, -1 when it flipped to a lower bound.
  static int canonDir(Lin& e) {
    Rat lead = e.coeff.begin()->second;
    int dir = Rat(0) < lead ? 1 : -1;
    for (auto& [v, c] : e.coeff) c = c / lead;
    e.cst = e.cst / lead;
    return dir;
  }

  static std::string coeffKey(const Lin& e) {
    std::string s;
    for (const auto& [v, c] : e.coeff)
      s += std::to_string(v) + ":" + std::to_string(c.n) + "/" + std::to_string(c.d) + ",";
    return s;
  }

  // Keeps only the tightest bound per coefficient vector and direction, and
  // turns matching upper/lower pairs back into equalities (numeric "=" reaches
  // us as two inequalities, and equalities are cheap to eliminate).
  // Returns false on an immediate conflict, true otherwise.
  static bool compact(std::vector<ArithConstraint>& cs) {
    struct Bound {
      bool has = false;
      Rat cst;        // canonical form: coeffs*x + cst (<= or >=) 0
      bool strict = false;
      Lin expr;       // canonical expr for the kept constraint
    };
    struct Slot { Bound up, lo; };
    std::map<std::string, Slot> slots;
    std::vector<ArithConstraint> out;
    for (auto& c : cs) {
      if (c.equality || c.expr.coeff.empty()) {
        out.push_back(std::move(c));
        continue;
      }
      Lin e = c.expr;
      int dir = canonDir(e);
      Bound& b = dir > 0 ? slots[coeffKey(e)].up : slots[coeffKey(e)].lo;
      // dir>0: coeffs*x <= -cst, tighter means larger cst.
      // dir<0: coeffs*x >= -cst, tighter means smaller cst.
      bool tighter = !b.has || (dir > 0 ? b.cst < e.cst : e.cst < b.cst) ||
                     (b.cst == e.cst && c.strict && !b.strict);
      if (tighter) b = Bound{true, e.cst, c.strict, e};
    }
    for (auto& [k, s] : slots) {
      if (s.up.has && s.lo.has) {
        if (s.lo.cst < s.up.cst) return false;  // lower bound above upper bound
        if (s.lo.cst == s.up.cst) {
          if (s.up.strict || s.lo.strict) return false;
          out.push_back({s.up.expr, false, true});  // equality recovered
          continue;
        }
      }
      if (s.up.has) out.push_back({s.up.expr, s.up.strict, false});
      if (s.lo.has) {
        Lin e;
        e.add(s.lo.expr, Rat(-1));
        out.push_back({e, s.lo.strict, false});
      }
    }
    cs = std::move(out);
    return true;
  }

  // feasible? model filled for the eliminated variables.
  static std::optional<bool> feasible(std::vector<ArithConstraint> cs,
                                      std::map<int, Rat>* model) {
    std::vector<std::pair<int, Lin>> subs;  // var -> expr (var = expr)
    for (bool again = true; again;) {
      again = false;
      // Equalities: substitute out via Gaussian elimination.
      for (std::size_t i = 0; i < cs.size(); ++i) {
        if (!cs[i].equality) continue;
        if (cs[i].expr.coeff.empty()) {
          if (cs[i].expr.cst != Rat(0)) return false;
          cs[i].equality = false;  // 0 = 0, spent
          continue;
        }
        auto [v, c] = *cs[i].expr.coeff.begin();
        Lin rhs;  // v = rhs
        rhs.cst = -(cs[i].expr.cst / c);
        for (const auto& [w, cw] : cs[i].expr.coeff)
          if (w != v) rhs.coeff[w] = -(cw / c);
        for (std::size_t j = 0; j < cs.size(); ++j) {
          if (j == i) continue;
          auto it = cs[j].expr.coeff.find(v);
          if (it == cs[j].expr.coeff.end()) continue;
          Rat f = it->second;
          cs[j].expr.coeff.erase(it);
          cs[j].expr.add(rhs, f);
        }
        for (auto& [w, e] : subs) {
          auto it = e.coeff.find(v);
          if (it == e.coeff.end()) continue;
          Rat f = it->second;
          e.coeff.erase(it);
          e.add(rhs, f);
        }
        subs.push_back({v, rhs});
        cs[i].expr = Lin{};
        cs[i].equality = false;
      }
      std::size_t before = cs.size();
      if (!compact(cs)) return false;
      for (const auto& c : cs)
        if (c.equality) again = true;   // pairs merged; eliminate those too
      (void)before;
    }

    // Collect remaining variables.
    std::set<int> vars;
    for (const auto& c : cs)
      for (const auto& [v, r] : c.expr.coeff) vars.insert(v);

    std::vector<std::pair<int, std::vector<ArithConstraint>>> layers;
    std::vector<ArithConstraint> cur = std::move(cs);
    while (!vars.empty()) {
      // Greedy order: eliminate the variable producing the fewest combinations.
      std::map<int, std::pair<std::size_t, std::size_t>> count;  // var -> (lo, up)
      for (const auto& c : cur)
        for (const auto& [w, r] : c.expr.coeff)
          (Rat(0) < r ? count[w].second : count[w].first)++;
      int v = *vars.begin();
      std::size_t best = SIZE_MAX;
      for (int w : vars) {
        std::size_t cost = count[w].first * count[w].second;
        if (cost < best) {
          best = cost;
          v = w;
        }
      }
      vars.erase(v);
      std::vector<ArithConstraint> lower, upper, rest;
      for (auto& c : cur) {
        auto it = c.expr.coeff.find(v);
        if (it == c.expr.coeff.end()) {
          rest.push_back(std::move(c));
        } else if (Rat(0) < it->second) {
          upper.push_back(std::move(c));
        } else {
          lower.push_back(std::move(c));
        }
      }
      layers.push_back({v, {}});
      auto& saved = layers.back().second;
      for (const auto& c : lower) saved.push_back(c);
      for (const auto& c : upper) saved.push_back(c);
      if (lower.size() * upper.size() + rest.size() > kCap) return std::nullopt;
      for (const auto& lo : lower)
        for (const auto& up : upper) {
          Rat cl = lo.expr.coeff.at(v);   // negative
          Rat cu = up.expr.coeff.at(v);   // positive
          ArithConstraint nc;
          nc.strict = lo.strict || up.strict;
          nc.expr = lo.expr;
          // cu * lo - cl * up eliminates v (note cl < 0)
          Lin combo;
          combo.add(lo.expr, cu);
          combo.add(up.expr, -cl);
          combo.coeff.erase(v);
          nc.expr = std::move(combo);
          rest.push_back(std::move(nc));
        }
      if (!compact(rest)) return false;
      // The combiner below only understands inequalities; split any equality
      // compact() recovered back into its two halves.
      std::size_t nRest = rest.size();
      for (std::size_t k = 0; k < nRest; ++k) {
        if (!rest[k].equality) continue;
        rest[k].equality = false;
        Lin neg;
        neg.add(rest[k].expr, Rat(-1));
        rest.push_back({neg, false, false});
      }
      cur = std::move(rest);
    }
    for (const auto& c : cur) {
      if (!c.expr.coeff.empty()) continue;
      if (c.strict ? !(c.expr.cst < Rat(0)) : Rat(0) < c.expr.cst) return false;
    }
    if (!model) return true;

    // Back-substitute a sample point, tightest-bounds midpoint choice.
    for (auto layer = layers.rbegin(); layer != layers.rend(); ++layer) {
      int v = layer->first;
      std::optional<QD> lo, hi;
      for (const auto& c : layer->second) {
        Rat cv = c.expr.coeff.at(v);
        Lin rest = c.expr;
        rest.coeff.erase(v);
        Rat val = rest.cst;
        for (const auto& [w, cw] : rest.coeff) val = val + cw * (*model)[w];
        // cv * v + val <= 0  =>  v <= -val/cv (cv>0) or v >= -val/cv (cv<0)
        QD bound{-(val / cv), c.strict ? (Rat(0) < cv ? Rat(-1) : Rat(1)) : Rat(0)};
        if (Rat(0) < cv) {
          if (!hi || bound < *hi) hi = bound;
        } else {
          if (!lo || *lo < bound) lo = bound;
        }
      }
      // Prefer an integral sample inside the bounds; branch and bound over
      // the relaxation then rarely needs to branch at all.
      Rat value;
      bool chosen = false;
      if (lo || hi) {
        Rat cand = lo ? lo->r.ceil() : hi->r.floor();
        if (lo && QD{cand, Rat(0)} < *lo) cand = cand + Rat(1);
        if (!lo && *hi < QD{cand, Rat(0)}) cand = cand - Rat(1);
        if ((!lo || !(QD{cand, Rat(0)} < *lo)) && (!hi || !(*hi < QD{cand, Rat(0)}))) {
          value = cand;
          chosen = true;
        }
      } else {
        value = Rat(0);
        chosen = true;
      }
      if (!chosen) {
        if (lo && hi)
          value = lo->r == hi->r ? lo->r : (lo->r + hi->r) / Rat(2);
        else if (lo)
          value = lo->k == Rat(0) ? lo->r : lo->r + Rat(1);
        else
          value = hi->k == Rat(0) ? hi->r : hi->r - Rat(1);
        // Nudge off strict bounds.
        if (lo && QD{value, Rat(0)} < *lo) value = lo->r + Rat(1, 2);
        if (hi && *hi < QD{value, Rat(0)}) value = hi->r - Rat(1, 2);
      }
      (*model)[v] = value;
    }
    for (auto s = subs.rbegin(); s != subs.rend(); ++s) {
      Rat val = s->second.cst;
      for (const auto& [w, cw] : s->second.coeff) val = val + cw * (*model)[w];
      (*model)[s->first] = val;
    }
    return true;
  }
};

// Difference-logic fast path: when every constraint normalizes to
// x - y <= c (or a single-variable bound), Bellman-Ford decides feasibility,
// and with integral weights the model it yields is integral, so no branch
// and bound is needed. Outer nullopt: constraints are not in that form.
std::optional<std::optional<bool>> diffFeasible(const std::vector<ArithConstraint>& cs,
                                                const std::set<int>& intVars,
                                                std::map<int, Rat>* model) {
  struct Edge {
    int from, to;
    QD w;  // d(to) <= d(from) + w
  };
  std::map<int, int> node;  // var -> node index; node 0 is the fixed zero
  auto nodeOf = [&](int v) {
    auto it = node.find(v);
    if (it != node.end()) return it->second;
    int id = static_cast<int>(node.size()) + 1;
    node[v] = id;
    return id;
  };
  std::vector<Edge> edges;
  bool anyInt = false, anyReal = false;
  for (const auto& c : cs) {
    if (c.expr.coeff.empty()) {
      if (c.strict ? !(c.expr.cst < Rat(0)) : Rat(0) < c.expr.cst)
        return std::optional<std::optional<bool>>{std::optional<bool>{false}};
      continue;
    }
    if (c.equality || c.expr.coeff.size() > 2) return std::nullopt;
    Rat scale = c.expr.coeff.begin()->second;
    if (scale < Rat(0)) scale = -scale;
    int pos = -1, neg = -1;
    bool ok = true;
    for (const auto& [v, r] : c.expr.coeff) {
      if (r == scale && pos < 0)
        pos = v;
      else if (r == -scale && neg < 0)
        neg = v;
      else
        ok = false;
      (intVars.count(v) ? anyInt : anyReal) = true;
    }
    if (!ok) return std::nullopt;
    // pos - neg <= w, with w = -cst/scale; missing side is the zero node.
    Rat w = -(c.expr.cst / scale);
    bool strict = c.strict;
    int from = neg < 0 ? 0 : nodeOf(neg);
    int to = pos < 0 ? 0 : nodeOf(pos);
    if (anyInt && anyReal) return std::nullopt;  // mixed sorts: generic path
    if (anyInt) {
      // Integer solutions: x - y <= w tightens to floor(w); strict to ceil(w)-1.
      w = strict ? w.ceil() - Rat(1) : w.floor();
      strict = false;
    }
    edges.push_back({from, to, QD{w, strict ? Rat(-1) : Rat(0)}});
  }
  int n = static_cast<int>(node.size()) + 1;
  std::vector<QD> dist(n, QD{Rat(0), Rat(0)});
  bool changed = true;
  for (int pass = 0; changed && pass <= n; ++pass) {
    changed = false;
    for (const auto& e : edges) {
      QD cand{dist[e.from].r + e.w.r, dist[e.from].k + e.w.k};
      if (cand < dist[e.to]) {
        dist[e.to] = cand;
        changed = true;
      }
    }
    if (pass == n && changed)
      return std::optional<std::optional<bool>>{std::optional<bool>{false}};
  }
  if (model) {
    // Realize the infinitesimal: largest delta keeping every edge satisfied.
    Rat delta(1);
    for (const auto& e : edges) {
      Rat a = dist[e.to].r - dist[e.from].r - e.w.r;
      Rat b = dist[e.to].k - dist[e.from].k - e.w.k;
      if (Rat(0) < b && a < Rat(0)) {
        Rat cap = -(a / b);
        if (cap < delta) delta = cap / Rat(2);
      }
    }
    for (const auto& [v, id] : node)
      (*model)[v] = (dist[id].r + delta * dist[id].k) - (dist[0].r + delta * dist[0].k);
  }
  return std::optional<std::optional<bool>>{std::optional<bool>{true}};
}

// Integer feasibility by branch and bound over the rational relaxation.
std::optional<bool> intFeasible(const std::vector<ArithConstraint>& cs,
                                const std::set<int>& intVars, std::map<int, Rat>* model,
                                int budget) {
  if (auto d = diffFeasible(cs, intVars, model)) return *d;
  std::map<int, Rat> local;
  auto r = FM::feasible(cs, &local);
  if (!r) return std::nullopt;
  if (!*r) return false;
  for (int v : intVars) {
    auto it = local.find(v);
    if (it == local.end() || it->second.isInt()) continue;
    if (budget <= 0) return std::nullopt;
    for (int side = 0; side < 2; ++side) {
      ArithConstraint c;
      if (side == 0) {  // v <= floor(val)
        c.expr.coeff[v] = Rat(1);
        c.expr.cst = -it->second.floor();
      } else {  // v >= ceil(val)
        c.expr.coeff[v] = Rat(-1);
        c.expr.cst = it->second.ceil();
      }
      auto branch = cs;
      branch.push_back(std::move(c));
      auto br = intFeasible(branch, intVars, model, budget - 1);
      if (!br) return std::nullopt;
      if (*br) return true;
    }
    return false;
  }
  if (model) *model = std::move(local);
  return true;
}

// ---------------------------------------------------------------------------
// DPLL
// ---------------------------------------------------------------------------

struct Solver {
  Problem& p;
  Cnf cnf;
  std::vector<int> atomVar;    // atom id -> cnf var (-1: unused)
  std::vector<int> varAtom;    // cnf var -> atom id (-1: aux)
  std::vector<int8_t> value;   // 0 unassigned, 1 true, -1 false
  std::set<int> intVars;       // numeric constants of Int sort
  long long theoryChecks = 0;

  explicit Solver(Problem& prob) : p(prob) {}

  bool propagate(std::vector<int>& trail) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& cl : cnf.clauses) {
        int unassigned = -1, count = 0;
        bool satisfied = false;
        for (int l : cl) {
          int v = l >> 1;
          bool wantTrue = !(l & 1);
          if (value[v] == 0) {
            unassigned = l;
            ++count;
          } else if ((value[v] == 1) == wantTrue) {
            satisfied = true;
            break;
          }
        }
        if (satisfied) continue;
        if (count == 0) return false;
        if (count == 1) {
          int v = unassigned >> 1;
          value[v] = (unassigned & 1) ? -1 : 1;
          trail.push_back(v);
          changed = true;
        }
      }
    }
    return true;
  }

  // Theory consistency of the current assignment; nullopt = give up.
  std::optional<bool> theoryOk(std::map<int, Rat>* arithModel, UnionFind* ufOut) {
    ++theoryChecks;
    UnionFind uf;
    uf.parent.resize(p.symbols.size());
    for (std::size_t i = 0; i < uf.parent.size(); ++i) uf.parent[i] = static_cast<int>(i);
    std::vector<std::pair<int, int>> diseqs;
    std::vector<ArithConstraint> cs;
    for (std::size_t a = 0; a < p.atoms.size(); ++a) {
      int var = atomVar[a];
      if (var < 0 || value[var] == 0) continue;
      bool pos = value[var] == 1;
      const Atom& at = p.atoms[a];
      if (at.kind == Atom::EufEq) {
        if (pos)
          uf.unite(at.lhs, at.rhs);
        else
          diseqs.push_back({at.lhs, at.rhs});
      } else if (at.kind == Atom::ArithLe) {
        ArithConstraint c;
        if (pos) {
          c.expr = at.expr;
          c.strict = at.strict;
        } else {  // not(e <= 0)  =>  -e < 0 ; not(e < 0) => -e <= 0
          c.expr.add(at.expr, Rat(-1));
          c.strict = !at.strict;
        }
        // Integer tightening: e < 0 with integral coefficients -> e <= -1.
        if (c.strict) {
          bool allInt = c.expr.cst.isInt();
          for (const auto& [v, r] : c.expr.coeff) {
            if (!r.isInt() || !intVars.count(v)) allInt = false;
          }
          if (allInt && !c.expr.coeff.empty()) {
            c.expr.cst = c.expr.cst + Rat(1);
            c.strict = false;
          }
        }
        cs.push_back(std::move(c));
      }
    }
    for (const auto& [a, b] : diseqs)
      if (uf.find(a) == uf.find(b)) return false;
    std::optional<bool> ar = intFeasible(cs, intVars, arithModel, 4096);
    if (!ar) return std::nullopt;
    if (!*ar) return false;
    if (ufOut) *ufOut = uf;
    return true;
  }

  // Chronological DPLL with a theory check at every node.
  std::optional<bool> search() {
    std::vector<int> trail;
    if (!propagate(trail)) {
      for (int v : trail) value[v] = 0;
      return false;
    }
    auto t = theoryOk(nullptr, nullptr);
    if (!t) return std::nullopt;
    if (!*t) {
      for (int v : trail) value[v] = 0;
      return false;
    }
    // Decide only variables of clauses not yet satisfied; the rest are
    // don't-cares and branching on them doubles the tree for nothing. Try the
    // polarity that satisfies the clause first.
    int pick = -1;
    int8_t first = 1;
    for (const auto& cl : cnf.clauses) {
      bool satisfied = false;
      int cand = -1;
      for (int l : cl) {
        int v = l >> 1;
        if (value[v] == 0) {
          if (cand < 0) cand = l;
        } else if ((value[v] == 1) == !(l & 1)) {
          satisfied = true;
          break;
        }
      }
      if (!satisfied && cand >= 0) {
        pick = cand >> 1;
        first = (cand & 1) ? -1 : 1;
        break;
      }
    }
    if (pick < 0) return true;  // trail stays assigned for model extraction
    for (int phase = 0; phase < 2; ++phase) {
      value[pick] = phase == 0 ? first : -first;
      std::optional<bool> r = search();
      if (!r) return std::nullopt;
      if (*r) return true;
      value[pick] = 0;
    }
    for (int v : trail) value[v] = 0;
    return false;
  }
};

std::string printModel(Problem& p, Solver& s) {
  std::map<int, Rat> arith;
  UnionFind uf;
  auto ok = s.theoryOk(&arith, &uf);
  (void)ok;

  // Distinct tokens per equality class.
  std::map<int, std::string> classToken;
  std::map<std::string, int> perSortCounter;
  auto tokenFor = [&](int sym) {
    int root = uf.find(sym);
    auto it = classToken.find(root);
    if (it != classToken.end()) return it->second;
    const std::string& sortName = p.sorts[p.symbols[sym].range].name;
    std::string tok = sortName + "!" + std::to_string(perSortCounter[sortName]++);
    classToken[root] = tok;
    return tok;
  };

  std::ostringstream out;
  out << "(\n";
  for (std::size_t i = 0; i < p.symbols.size(); ++i) {
    const Symbol& sym = p.symbols[i];
    if (!sym.declared || !sym.domain.empty()) continue;
    const SortInfo& sort = p.sorts[sym.range];
    std::string value;
    if (sort.kind == SortInfo::Int || sort.kind == SortInfo::Real) {
      auto it = arith.find(static_cast<int>(i));
      value = it != arith.end() ? it->second.str() : "0";
    } else if (sort.kind == SortInfo::Bool) {
      auto a = p.atomByKey.find("p" + std::to_string(i));
      bool b = false;
      if (a != p.atomByKey.end() && s.atomVar[a->second] >= 0)
        b = s.value[s.atomVar[a->second]] == 1;
      value = b ? "true" : "false";
    } else {
      value = tokenFor(static_cast<int>(i));
    }
    out << "  (define-fun " << sym.name << " () " << sort.name << " " << value << ")\n";
  }
  out << ")\n";
  return out.str();
}

}  // namespace

Result solveScript(const std::string& text) {
  try {
    Problem p;
    Builder b(p);
    std::vector<Sx> cmds = parseSexprs(text);
    std::vector<Sx> assertBodies;
    for (const auto& c : cmds) {
      if (c.atom || c.kids.empty()) continue;
      const std::string& head = c.kids[0].text;
      if (head == "declare-sort") {
        p.sortId(c.kids[1].text);
      } else if (head == "declare-fun" || head == "declare-const") {
        Symbol s;
        s.name = c.kids[1].text;
        if (head == "declare-fun") {
          for (const auto& d : c.kids[2].kids) s.domain.push_back(p.sortId(d.text));
          s.range = p.sortId(c.kids[3].text);
        } else {
          s.range = p.sortId(c.kids[2].text);
        }
        p.addSymbol(std::move(s));
      } else if (head == "assert") {
        assertBodies.push_back(c.kids[1]);
      } else if (head == "get-model") {
        p.wantModel = true;
      }
      // set-logic, set-info, check-sat: nothing to do
    }
    for (const auto& a : assertBodies) p.asserts.push_back(b.boolTerm(a));
    b.addFunctionality();

    Solver s(p);
    s.atomVar.assign(p.atoms.size(), -1);
    for (const auto& f : p.asserts) {
      if (auto direct = directCnf(f, s.cnf, s.atomVar)) {
        for (auto& c : *direct) {
          std::sort(c.begin(), c.end());
          c.erase(std::unique(c.begin(), c.end()), c.end());
          bool taut = false;
          for (std::size_t i = 0; i + 1 < c.size(); ++i)
            if ((c[i] ^ 1) == c[i + 1]) taut = true;
          if (!taut) s.cnf.clauses.push_back(std::move(c));
        }
      } else {
        s.cnf.unit(tseitin(f, s.cnf, s.atomVar));
      }
    }
    s.value.assign(s.cnf.nVars, 0);
    for (std::size_t i = 0; i < p.symbols.size(); ++i)
      if (p.sorts[p.symbols[i].range].kind == SortInfo::Int && p.symbols[i].domain.empty())
        s.intVars.insert(static_cast<int>(i));

    std::optional<bool> r = s.search();
    if (!r) return {"unknown", ""};
    if (!*r) return {"unsat", ""};
    Result res{"sat", ""};
    if (p.wantModel) res.model = printModel(p, s);
    return res;
  } catch (const Unsupported&) {
    return {"unknown", ""};
  } catch (const std::exception&) {
    return {"unknown", ""};
  }
}

}  // namespace gsolv
