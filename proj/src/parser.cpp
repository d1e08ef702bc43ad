#include "hpilot/parser.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace hpilot {

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok {
  Ident, Number, Numeral,  // Numeral = underscore form _3
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Comma, Semi, Dot, Assign,
  Eq, Le, Lt, Ge, Gt, Arrow, DblArrow,  // --> and <-->
  Plus, Minus, Star, Slash, Hash,
  End
};

struct Token {
  Tok kind;
  std::string text;
  long long num = 0;
  SourcePosition pos;
};

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string s, long long n, SourcePosition p) {
    out.push_back({k, std::move(s), n, p});
  };
  while (i < text.size()) {
    char c = text[i];
    SourcePosition pos{line, col};
    auto advance = [&](std::size_t n) {
      for (std::size_t k = 0; k < n; ++k) {
        if (text[i + k] == '\n') { ++line; col = 1; } else { ++col; }
      }
      i += n;
    };
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { advance(1); continue; }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      if (i + 2 < text.size() && text[i + 2] == '>') {
        push(Tok::Arrow, "-->", 0, pos); advance(3); continue;
      }
      while (i < text.size() && text[i] != '\n') advance(1);  // comment line
      continue;
    }
    if (c == '<') {
      if (text.compare(i, 4, "<-->") == 0) { push(Tok::DblArrow, "<-->", 0, pos); advance(4); continue; }
      if (i + 1 < text.size() && text[i + 1] == '=') { push(Tok::Le, "<=", 0, pos); advance(2); continue; }
      push(Tok::Lt, "<", 0, pos); advance(1); continue;
    }
    if (c == '>') {
      if (i + 1 < text.size() && text[i + 1] == '=') { push(Tok::Ge, ">=", 0, pos); advance(2); continue; }
      push(Tok::Gt, ">", 0, pos); advance(1); continue;
    }
    if (c == ':' && i + 1 < text.size() && text[i + 1] == '=') {
      push(Tok::Assign, ":=", 0, pos); advance(2); continue;
    }
    if (c == '_' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
      std::size_t j = i + 1;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      push(Tok::Numeral, text.substr(i, j - i), std::stoll(text.substr(i + 1, j - i - 1)), pos);
      advance(j - i); continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      push(Tok::Number, text.substr(i, j - i), std::stoll(text.substr(i, j - i)), pos);
      advance(j - i); continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      if (j < text.size() && text[j] == '\'') ++j;  // identifiers may end with '
      push(Tok::Ident, text.substr(i, j - i), 0, pos);
      advance(j - i); continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, "(", 0, pos); break;
      case ')': push(Tok::RParen, ")", 0, pos); break;
      case '{': push(Tok::LBrace, "{", 0, pos); break;
      case '}': push(Tok::RBrace, "}", 0, pos); break;
      case '[': push(Tok::LBracket, "[", 0, pos); break;
      case ']': push(Tok::RBracket, "]", 0, pos); break;
      case ',': push(Tok::Comma, ",", 0, pos); break;
      case ';': push(Tok::Semi, ";", 0, pos); break;
      case '.': push(Tok::Dot, ".", 0, pos); break;
      case '=': push(Tok::Eq, "=", 0, pos); break;
      case '+': push(Tok::Plus, "+", 0, pos); break;
      case '-': push(Tok::Minus, "-", 0, pos); break;
      case '*': push(Tok::Star, "*", 0, pos); break;
      case '/': push(Tok::Slash, "/", 0, pos); break;
      case '#': push(Tok::Hash, "#", 0, pos); break;
      default:
        throw ParseError(pos, std::string("unexpected character '") + c + "'");
    }
    advance(1);
  }
  push(Tok::End, "", 0, {line, col});
  return out;
}

bool isArithTok(Tok k) {
  return k == Tok::Plus || k == Tok::Minus || k == Tok::Star || k == Tok::Slash;
}

bool isRelTok(Tok k) {
  return k == Tok::Le || k == Tok::Lt || k == Tok::Ge || k == Tok::Gt;
}

RelOp relOpOf(Tok k) {
  switch (k) {
    case Tok::Le: return RelOp::Le;
    case Tok::Lt: return RelOp::Lt;
    case Tok::Ge: return RelOp::Ge;
    default: return RelOp::Gt;
  }
}

bool isFormulaKeyword(const std::string& s) {
  return s == "NOT" || s == "AND" || s == "OR" || s == "FORALL" || s == "EXISTS";
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
 public:
  Parser(const std::string& text, const ParserOptions& opts)
      : toks_(lex(text)), opts_(opts) {}

  Task run() {
    parseFunctionSection("Base_functions", SymbolKind::BaseFun);
    parseFunctionSection("Extension_functions", SymbolKind::ExtFun);
    parseRelations();
    while (true) {
      if (atKeyword("Constants")) parseConstants();
      else if (atKeyword("Interval")) parseInterval();
      else if (atKeyword("Stable")) parseStable();
      else break;
    }
    if (atKeyword("Base")) {
      expectKeyword("Base"); expect(Tok::Assign, ":=");
      task_.baseAxioms = parseClauseList(/*allowGuard=*/false);
    }
    for (int round = 0; round < 2; ++round) {
      if (atKeyword("Clauses")) {
        expectKeyword("Clauses"); expect(Tok::Assign, ":=");
        auto cs = parseClauseList(/*allowGuard=*/true);
        task_.extensionAxioms.insert(task_.extensionAxioms.end(), cs.begin(), cs.end());
      } else if (atKeyword("Formulas")) {
        expectKeyword("Formulas"); expect(Tok::Assign, ":=");
        auto fs = parseFormulaList();
        task_.rawFormulas.insert(task_.rawFormulas.end(), fs.begin(), fs.end());
      } else {
        break;
      }
    }
    if (atKeyword("Ground_Formulas")) {
      expectKeyword("Ground_Formulas"); expect(Tok::Assign, ":=");
      auto fs = parseFormulaList();
      task_.rawFormulas.insert(task_.rawFormulas.end(), fs.begin(), fs.end());
    }
    if (atKeyword("Query")) {
      expectKeyword("Query"); expect(Tok::Assign, ":=");
      task_.query = parseGroundClauses();
    }
    if (peek().kind != Tok::End) fail("trailing input after Query section");
    finalize();
    return task_;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ParserOptions opts_;
  Task task_;
  std::vector<std::string> boundVars_;  // active quantifier scope

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(peek().pos, msg + " (found '" + peek().text + "')");
  }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    ++pos_;
  }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  bool atKeyword(const char* kw) const {
    return peek().kind == Tok::Ident && peek().text == kw;
  }
  void expectKeyword(const char* kw) {
    if (!atKeyword(kw)) fail(std::string("expected keyword ") + kw);
    ++pos_;
  }
  bool isBound(const std::string& n) const {
    return std::find(boundVars_.begin(), boundVars_.end(), n) != boundVars_.end();
  }

  // ---- declarations -------------------------------------------------------

  Sort parseSortToken(bool* isNumericKeyword = nullptr) {
    if (peek().kind != Tok::Ident) fail("expected sort");
    std::string n = next().text;
    int idx = 1;
    if (accept(Tok::Hash)) {
      if (peek().kind != Tok::Number) fail("expected sort index after #");
      idx = static_cast<int>(next().num);
      if (idx < 1) fail("sort index must be >= 1");
    }
    if (isNumericKeyword) *isNumericKeyword = (n == "int" || n == "real");
    if (n == "bool") return Sort::boolean();
    if (n == "int") return Sort::integer();
    if (n == "real") return Sort::real();
    if (n == "scalar") return Sort::scalar();
    if (n == "pointer") return Sort::pointer(idx);
    if (n == "free") return Sort::free(idx);
    fail("unknown sort " + n);
  }

  std::string parseSymbolName() {
    if (peek().kind == Tok::Ident || isArithTok(peek().kind) || isRelTok(peek().kind))
      return next().text;
    fail("expected symbol name");
  }

  void parseFunctionSection(const char* kw, SymbolKind kind) {
    expectKeyword(kw); expect(Tok::Assign, ":="); expect(Tok::LBrace, "{");
    if (accept(Tok::RBrace)) return;
    do {
      expect(Tok::LParen, "(");
      SymbolDecl d;
      d.name = parseSymbolName();
      d.kind = kind;
      expect(Tok::Comma, ",");
      if (peek().kind != Tok::Number) fail("expected arity");
      d.arity = static_cast<int>(next().num);
      d.level = kind == SymbolKind::ExtFun ? 1 : 0;
      d.domain = d.range = task_.signature.defaultNumericSort;
      bool sawSort = false;
      if (accept(Tok::Comma)) {
        // forms (3)-(7): level, then optional sort(s)
        if (peek().kind != Tok::Number) fail("expected level");
        int lvl = static_cast<int>(next().num);
        if (kind == SymbolKind::ExtFun) d.level = lvl;
        if (accept(Tok::Comma)) {
          d.domain = d.range = parseSortToken();
          sawSort = true;
          if (accept(Tok::Comma)) d.range = parseSortToken();
        }
      }
      expect(Tok::RParen, ")");
      // Arithmetic operators declared with an explicit numeric sort fix the
      // default numeric sort of the whole task (forms (3)/(4)).
      bool isArithName = d.name == "+" || d.name == "-" || d.name == "*" || d.name == "/";
      if (isArithName && sawSort && d.range.isNumeric())
        setDefaultNumeric(d.range);
      if (!sawSort) pendingDefaultSort_.push_back(task_.signature.declarations().size());
      task_.signature.declare(d);
    } while (accept(Tok::Comma));
    expect(Tok::RBrace, "}");
  }

  void parseRelations() {
    expectKeyword("Relations"); expect(Tok::Assign, ":="); expect(Tok::LBrace, "{");
    if (accept(Tok::RBrace)) return;
    do {
      expect(Tok::LParen, "(");
      std::string name = parseSymbolName();
      expect(Tok::Comma, ",");
      if (peek().kind != Tok::Number) fail("expected arity");
      int arity = static_cast<int>(next().num);
      expect(Tok::RParen, ")");
      bool predefined = name == "<=" || name == "<" || name == ">=" || name == ">";
      if (!predefined) {
        SymbolDecl d;
        d.name = name;
        d.arity = arity;
        d.kind = SymbolKind::Relation;
        d.domain = task_.signature.defaultNumericSort;
        d.range = Sort::boolean();
        pendingDefaultSort_.push_back(task_.signature.declarations().size());
        task_.signature.declare(d);
      }
    } while (accept(Tok::Comma));
    expect(Tok::RBrace, "}");
  }

  void parseConstants() {
    expectKeyword("Constants"); expect(Tok::Assign, ":="); expect(Tok::LBrace, "{");
    if (accept(Tok::RBrace)) return;
    do {
      expect(Tok::LParen, "(");
      SymbolDecl d;
      d.name = parseSymbolName();
      d.kind = SymbolKind::Constant;
      expect(Tok::Comma, ",");
      d.domain = d.range = parseSortToken();
      expect(Tok::RParen, ")");
      task_.signature.declare(d);
    } while (accept(Tok::Comma));
    expect(Tok::RBrace, "}");
  }

  void parseInterval() {
    expectKeyword("Interval"); expect(Tok::Assign, ":=");
    IntervalConstraint iv;
    auto bound = [&]() -> long long {
      if (peek().kind != Tok::Number && peek().kind != Tok::Numeral) fail("expected bound");
      return next().num;
    };
    if (peek().kind == Tok::Number || peek().kind == Tok::Numeral) {
      iv.lower = bound();
      if (!isRelTok(peek().kind)) fail("expected <= or <");
      iv.lowerStrict = next().kind == Tok::Lt;
      if (peek().kind != Tok::Ident) fail("expected identifier in interval");
      next();  // the bound variable name is notational
      if (isRelTok(peek().kind)) {
        iv.upperStrict = next().kind == Tok::Lt;
        iv.upper = bound();
      }
    } else {
      if (peek().kind != Tok::Ident) fail("expected identifier in interval");
      next();
      if (!isRelTok(peek().kind)) fail("expected <= or <");
      iv.upperStrict = next().kind == Tok::Lt;
      iv.upper = bound();
    }
    expect(Tok::Semi, ";");
    task_.signature.interval = iv;
  }

  void parseStable() {
    expectKeyword("Stable"); expect(Tok::Assign, ":=");
    do {
      if (peek().kind != Tok::Number) fail("expected level number");
      task_.signature.stableLevels.insert(static_cast<int>(next().num));
    } while (accept(Tok::Comma));
    expect(Tok::Semi, ";");
  }

  void setDefaultNumeric(Sort s) {
    task_.signature.defaultNumericSort = s;
    for (std::size_t i : pendingDefaultSort_) {
      SymbolDecl& d = task_.signature.declarations()[i];
      if (d.domain.isNumeric()) d.domain = s;
      if (d.range.isNumeric() && d.kind != SymbolKind::Relation) d.range = s;
    }
  }

  std::vector<std::size_t> pendingDefaultSort_;

  // ---- terms --------------------------------------------------------------

  Term nameTerm(const std::string& n) {
    return isBound(n) ? Term::var(n) : Term::constant(n);
  }

  Term parseWriteTerm(const std::string& head) {
    // write/update(arrayOrName, index, value), possibly applied: (...)(i)
    expect(Tok::LParen, "(");
    Term arr;
    if (peek().kind == Tok::Ident && (peek().text == "write" || peek().text == "update") &&
        peek(1).kind == Tok::LParen) {
      std::string inner = next().text;
      arr = parseWriteTerm(inner);
    } else {
      if (peek().kind != Tok::Ident) fail("expected array identifier in " + head);
      arr = Term::constant(next().text);
    }
    expect(Tok::Comma, ",");
    Term idx = parseTerm();
    expect(Tok::Comma, ",");
    Term val = parseTerm();
    expect(Tok::RParen, ")");
    task_.arrayMode = true;
    return Term::apply(head, {arr, idx, val});
  }

  Term parsePrimary() {
    if (peek().kind == Tok::Numeral || peek().kind == Tok::Number) {
      if (peek().kind == Tok::Number && !opts_.acceptBareNumbers)
        fail("bare number (use the _n numeral form)");
      return Term::numeral(next().num);
    }
    if (isArithTok(peek().kind) && peek(1).kind == Tok::LParen) {
      std::string op = next().text;
      expect(Tok::LParen, "(");
      Term l = parseTerm();
      expect(Tok::Comma, ",");
      Term r = parseTerm();
      expect(Tok::RParen, ")");
      return Term::arith(op, std::move(l), std::move(r));
    }
    if (accept(Tok::LParen)) {
      Term t = parseTerm();
      expect(Tok::RParen, ")");
      return t;
    }
    if (peek().kind != Tok::Ident) fail("expected term");
    std::string name = next().text;
    if ((name == "write" || name == "update") && peek().kind == Tok::LParen) {
      Term w = parseWriteTerm(name);
      while (peek().kind == Tok::LParen) {  // applied write: write(...)(i)
        next();
        Term idx = parseTerm();
        expect(Tok::RParen, ")");
        w = Term::apply("__read", {std::move(w), std::move(idx)});
      }
      return w;
    }
    if (peek().kind == Tok::LParen) {
      next();
      std::vector<Term> args;
      if (peek().kind != Tok::RParen) {
        do { args.push_back(parseTerm()); } while (accept(Tok::Comma));
      }
      expect(Tok::RParen, ")");
      // plus/minus are the prefix spellings of the reserved infix operators.
      if (name == "plus" && args.size() == 2)
        return Term::arith("+", std::move(args[0]), std::move(args[1]));
      if (name == "minus" && args.size() == 2)
        return Term::arith("-", std::move(args[0]), std::move(args[1]));
      return Term::apply(name, std::move(args));
    }
    return nameTerm(name);
  }

  Term parseTerm() {
    Term t = parsePrimary();
    while (isArithTok(peek().kind)) {
      std::string op = next().text;
      Term r = parsePrimary();
      t = Term::arith(op, std::move(t), std::move(r));
    }
    return t;
  }

  // ---- atoms, literals, clauses -------------------------------------------

  Atom parseAtom() {
    if (peek().kind == Tok::Ident && peek(1).kind == Tok::LBracket) {
      std::string p = next().text;
      next();  // [
      std::vector<Term> args;
      do { args.push_back(parseTerm()); } while (accept(Tok::Comma));
      expect(Tok::RBracket, "]");
      return Atom::predicate(p, std::move(args));
    }
    Term l = parseTerm();
    if (accept(Tok::Eq)) return Atom::eq(std::move(l), parseTerm());
    if (isRelTok(peek().kind)) {
      RelOp r = relOpOf(next().kind);
      return Atom::ineq(r, std::move(l), parseTerm());
    }
    fail("expected =, <=, <, >= or > after term");
  }

  // literal := atom | NOT(atom); returns (atom, positive?)
  std::pair<Atom, bool> parseLiteral() {
    if (atKeyword("NOT")) {
      next();
      expect(Tok::LParen, "(");
      Atom a = parseAtom();
      expect(Tok::RParen, ")");
      return {a, false};
    }
    return {parseAtom(), true};
  }

  // clausematrix without quantifier/guard; stops before ';'
  Clause parseClauseMatrix() {
    Clause c;
    if (atKeyword("OR") && peek(1).kind == Tok::LParen) {
      next(); next();
      do {
        auto [a, pos] = parseLiteral();
        (pos ? c.consequent : c.antecedent).push_back(std::move(a));
      } while (accept(Tok::Comma));
      expect(Tok::RParen, ")");
      return c;
    }
    if (atKeyword("NOT")) {
      auto [a, pos] = parseLiteral();
      (pos ? c.consequent : c.antecedent).push_back(std::move(a));
      if (peek().kind == Tok::Arrow) fail("NOT literal cannot start a sorted clause");
      return c;
    }
    if (accept(Tok::Arrow)) {  // empty antecedent
      if (peek().kind != Tok::Semi && peek().kind != Tok::End) {
        do { c.consequent.push_back(parseAtom()); } while (accept(Tok::Comma));
      }
      return c;
    }
    std::vector<Atom> first;
    do { first.push_back(parseAtom()); } while (accept(Tok::Comma));
    if (accept(Tok::Arrow)) {
      c.antecedent = std::move(first);
      if (peek().kind != Tok::Semi && peek().kind != Tok::End) {
        do { c.consequent.push_back(parseAtom()); } while (accept(Tok::Comma));
      }
    } else {
      if (first.size() != 1) fail("expected --> after atom list");
      c.consequent = std::move(first);
    }
    return c;
  }

  std::vector<std::string> parseVarList() {
    std::vector<std::string> vs;
    do {
      if (peek().kind != Tok::Ident) fail("expected variable name");
      vs.push_back(next().text);
    } while (accept(Tok::Comma));
    return vs;
  }

  Clause parseClause(bool allowGuard) {
    Clause c;
    std::size_t pushed = 0;
    if (peek().kind == Tok::LParen && peek(1).kind == Tok::Ident &&
        peek(1).text == "FORALL") {
      next(); next();
      c.vars = parseVarList();
      expect(Tok::RParen, ")");
      expect(Tok::Dot, ".");
      for (const auto& v : c.vars) { boundVars_.push_back(v); ++pushed; }
    }
    if (allowGuard && peek().kind == Tok::LBrace) {
      next();
      Formula phi = parseFormula();
      expect(Tok::RBrace, "}");
      if (accept(Tok::Arrow)) {
        c.guard = Formula::negate(std::move(phi));  // {Phi} --> C  ==  NOT(Phi) \/ C
      } else if (atKeyword("OR")) {
        next();
        c.guard = std::move(phi);  // {Phi} OR C
      } else {
        fail("expected --> or OR after guard");
      }
    }
    Clause m = parseClauseMatrix();
    c.antecedent = std::move(m.antecedent);
    c.consequent = std::move(m.consequent);
    boundVars_.resize(boundVars_.size() - pushed);
    return c;
  }

  std::vector<Clause> parseClauseList(bool allowGuard) {
    std::vector<Clause> out;
    while (true) {
      out.push_back(parseClause(allowGuard));
      expect(Tok::Semi, ";");
      // A clause list ends where the next section keyword begins.
      if (atSectionKeyword() || peek().kind == Tok::End) break;
    }
    return out;
  }

  bool atSectionKeyword() const {
    if (peek().kind != Tok::Ident) return false;
    const std::string& s = peek().text;
    return (s == "Base" || s == "Clauses" || s == "Formulas" || s == "Ground_Formulas" ||
            s == "Query") && peek(1).kind == Tok::Assign;
  }

  std::vector<Clause> parseGroundClauses() {
    std::vector<Clause> out;
    while (peek().kind != Tok::End && !atSectionKeyword()) {
      out.push_back(parseClause(/*allowGuard=*/false));
      expect(Tok::Semi, ";");
    }
    return out;
  }

  // ---- formulas -----------------------------------------------------------

  Formula parseFormula() {
    if (atKeyword("NOT") && peek(1).kind == Tok::LParen) {
      next(); next();
      Formula f = parseFormula();
      expect(Tok::RParen, ")");
      return Formula::negate(std::move(f));
    }
    if ((atKeyword("AND") || atKeyword("OR")) && peek(1).kind == Tok::LParen) {
      Formula::Tag t = peek().text == "AND" ? Formula::Tag::And : Formula::Tag::Or;
      next(); next();
      std::vector<Formula> cs;
      do { cs.push_back(parseFormula()); } while (accept(Tok::Comma));
      expect(Tok::RParen, ")");
      if (cs.size() == 1) return cs[0];
      return Formula::mk(t, std::move(cs));
    }
    if (peek().kind == Tok::LParen && peek(1).kind == Tok::Ident &&
        (peek(1).text == "FORALL" || peek(1).text == "EXISTS")) {
      next();
      Formula::Tag t = next().text == "FORALL" ? Formula::Tag::Forall : Formula::Tag::Exists;
      std::vector<std::string> vs = parseVarList();
      expect(Tok::RParen, ")");
      expect(Tok::Dot, ".");
      for (const auto& v : vs) boundVars_.push_back(v);
      Formula body = parseFormula();
      boundVars_.resize(boundVars_.size() - vs.size());
      return Formula::quantified(t, std::move(vs), std::move(body));
    }
    if (peek().kind == Tok::LParen) {
      // Either (formula --> formula), (formula <--> formula), or a
      // parenthesized arithmetic term opening an atom. Try the formula
      // reading first and fall back on failure.
      std::size_t save = pos_;
      std::size_t scopeSave = boundVars_.size();
      try {
        next();
        Formula l = parseFormula();
        if (peek().kind == Tok::Arrow || peek().kind == Tok::DblArrow) {
          Formula::Tag t = next().kind == Tok::Arrow ? Formula::Tag::Implies : Formula::Tag::Iff;
          Formula r = parseFormula();
          expect(Tok::RParen, ")");
          return Formula::mk(t, {std::move(l), std::move(r)});
        }
        throw ParseError(peek().pos, "not an implication");
      } catch (const ParseError&) {
        pos_ = save;
        boundVars_.resize(scopeSave);
      }
    }
    return Formula::atomic(parseAtom());
  }

  std::vector<Formula> parseFormulaList() {
    std::vector<Formula> out;
    while (true) {
      out.push_back(parseFormula());
      expect(Tok::Semi, ";");
      if (atSectionKeyword() || peek().kind == Tok::End) break;
    }
    return out;
  }

  // ---- post-parse analysis --------------------------------------------------

  void eachAtom(const Formula& f, const std::function<void(const Atom&)>& fn) {
    if (f.tag == Formula::Tag::Atom) { fn(f.atom); return; }
    for (const auto& c : f.children) eachAtom(c, fn);
  }

  void forAllAtoms(const std::function<void(const Atom&)>& fn) {
    auto clauseAtoms = [&](const Clause& c) {
      if (c.guard) eachAtom(*c.guard, fn);
      for (const auto& a : c.antecedent) fn(a);
      for (const auto& a : c.consequent) fn(a);
    };
    for (const auto& c : task_.baseAxioms) clauseAtoms(c);
    for (const auto& c : task_.extensionAxioms) clauseAtoms(c);
    for (const auto& c : task_.query) clauseAtoms(c);
    for (const auto& f : task_.rawFormulas) eachAtom(f, fn);
  }

  // Try to compute the sort of a term from declared symbols and already-known
  // names; returns nullopt when an unknown name blocks the computation.
  std::optional<Sort> trySort(const Term& t, const std::map<std::string, Sort>& known) {
    switch (t.tag) {
      case Term::Tag::Numeral:
        return task_.signature.defaultNumericSort;
      case Term::Tag::Var:
      case Term::Tag::Const: {
        if (const SymbolDecl* d = task_.signature.find(t.name)) return d->range;
        auto it = known.find(t.name);
        if (it != known.end()) return it->second;
        return std::nullopt;
      }
      case Term::Tag::Arith:
        return task_.signature.defaultNumericSort;
      case Term::Tag::Apply: {
        if (t.name == "write" || t.name == "update") return trySort(t.args[0], known);
        if (t.name == "__read") {
          const Term* arr = &t.args[0];
          while (arr->tag == Term::Tag::Apply) arr = &arr->args[0];
          if (const SymbolDecl* d = task_.signature.find(arr->name)) return d->range;
          return std::nullopt;
        }
        if (const SymbolDecl* d = task_.signature.find(t.name)) return d->range;
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  // Propagate sorts into unknown leaf names from the declared context.
  void proposeSorts(const Term& t, std::optional<Sort> expected,
                    std::map<std::string, Sort>& known) {
    switch (t.tag) {
      case Term::Tag::Var:
      case Term::Tag::Const: {
        if (task_.signature.find(t.name)) return;
        if (!expected) return;
        auto it = known.find(t.name);
        if (it == known.end()) {
          known[t.name] = *expected;
        } else if (it->second != *expected &&
                   !(it->second.isNumeric() && expected->isNumeric())) {
          throw SortError("name " + t.name + " used under conflicting sorts " +
                          it->second.str() + " and " + expected->str());
        }
        return;
      }
      case Term::Tag::Arith:
        proposeSorts(t.args[0], task_.signature.defaultNumericSort, known);
        proposeSorts(t.args[1], task_.signature.defaultNumericSort, known);
        return;
      case Term::Tag::Apply: {
        if (t.name == "write" || t.name == "update") {
          const Term* arr = &t.args[0];
          while (arr->tag == Term::Tag::Apply && arr->name != "__read") arr = &arr->args[0];
          const SymbolDecl* d = task_.signature.find(arr->name);
          proposeSorts(t.args[0], std::nullopt, known);
          proposeSorts(t.args[1], d ? std::optional<Sort>(d->domain) : std::nullopt, known);
          proposeSorts(t.args[2], d ? std::optional<Sort>(d->range) : std::nullopt, known);
          return;
        }
        if (t.name == "__read") {
          const Term* arr = &t.args[0];
          while (arr->tag == Term::Tag::Apply) arr = &arr->args[0];
          const SymbolDecl* d = task_.signature.find(arr->name);
          proposeSorts(t.args[0], std::nullopt, known);
          proposeSorts(t.args[1], d ? std::optional<Sort>(d->domain) : std::nullopt, known);
          return;
        }
        const SymbolDecl* d = task_.signature.find(t.name);
        if (d && static_cast<std::size_t>(d->arity) != t.args.size())
          throw SortError("arity mismatch for " + t.name);
        for (const auto& a : t.args)
          proposeSorts(a, d ? std::optional<Sort>(d->domain) : std::nullopt, known);
        return;
      }
      default:
        return;
    }
  }

  void finalize() {
    // Auto-declare null once a pointer sort occurs anywhere.
    std::optional<Sort> ptr;
    for (const auto& d : task_.signature.declarations()) {
      if (d.domain.kind == SortKind::Pointer) { ptr = d.domain; break; }
      if (d.range.kind == SortKind::Pointer) { ptr = d.range; break; }
    }
    if (ptr) {
      task_.pointerMode = true;
      if (!task_.signature.isDeclared("null")) {
        SymbolDecl d;
        d.name = "null";
        d.kind = SymbolKind::Constant;
        d.domain = d.range = *ptr;
        task_.signature.declare(d);
      }
    }

    // Infer sorts of variables and undeclared constants.
    std::map<std::string, Sort> known;
    for (int round = 0; round < 3; ++round) {
      forAllAtoms([&](const Atom& a) {
        if (a.tag == Atom::Tag::Pred) {
          const SymbolDecl* d = task_.signature.find(a.pred);
          for (const auto& t : a.args)
            proposeSorts(t, d ? std::optional<Sort>(d->domain) : std::nullopt, known);
          return;
        }
        std::optional<Sort> l = trySort(a.args[0], known);
        std::optional<Sort> r = trySort(a.args[1], known);
        if (a.tag == Atom::Tag::Ineq) {
          if (!l) l = task_.signature.defaultNumericSort;
          if (!r) r = task_.signature.defaultNumericSort;
        }
        proposeSorts(a.args[0], r ? r : l, known);
        proposeSorts(a.args[1], l ? l : r, known);
      });
    }
    // Collect every name in use; default leftovers to the numeric sort.
    std::set<std::string> varNames;
    auto collectClause = [&](const Clause& c) {
      for (const auto& v : c.vars) varNames.insert(v);
      forEachTerm(c, [&](const Term& t) {
        if (t.tag == Term::Tag::Var) varNames.insert(t.name);
        if (t.tag == Term::Tag::Const && !task_.signature.find(t.name) && !known.count(t.name))
          known[t.name] = task_.signature.defaultNumericSort;
      });
    };
    for (const auto& c : task_.baseAxioms) collectClause(c);
    for (const auto& c : task_.extensionAxioms) collectClause(c);
    for (const auto& c : task_.query) collectClause(c);
    for (const auto& f : task_.rawFormulas) {
      forEachTerm(f, [&](const Term& t) {
        if (t.tag == Term::Tag::Var) varNames.insert(t.name);
        if (t.tag == Term::Tag::Const && !task_.signature.find(t.name) && !known.count(t.name))
          known[t.name] = task_.signature.defaultNumericSort;
      });
    }
    for (auto& [name, sort] : known) {
      if (varNames.count(name)) {
        task_.varSorts[name] = sort;
      } else {
        SymbolDecl d;
        d.name = name;
        d.kind = SymbolKind::Constant;
        d.domain = d.range = sort;
        task_.signature.declare(d);
      }
    }
    for (const auto& v : varNames)
      if (!task_.varSorts.count(v))
        task_.varSorts[v] = task_.signature.defaultNumericSort;

    // Assign clause levels.
    for (auto& c : task_.extensionAxioms) c.level = clauseLevel(c, task_.signature);
    for (auto& c : task_.baseAxioms) c.level = 0;
    for (auto& c : task_.query) c.level = clauseLevel(c, task_.signature);
  }
};

}  // namespace

Task parseTask(const std::string& text, const ParserOptions& opts) {
  return Parser(text, opts).run();
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

std::string printWriteApplied(const Term& t);

}  // namespace

std::string printTerm(const Term& t) {
  if (t.tag == Term::Tag::Apply && (t.name == "__read" || t.name == "write" || t.name == "update"))
    return printWriteApplied(t);
  if (t.tag == Term::Tag::Arith) {
    auto side = [](const Term& s) {
      std::string r = printTerm(s);
      return s.tag == Term::Tag::Arith ? "(" + r + ")" : r;
    };
    return side(t.args[0]) + " " + t.name + " " + side(t.args[1]);
  }
  if (t.tag == Term::Tag::Apply) {
    std::string s = t.name + "(";
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) s += ", ";
      s += printTerm(t.args[i]);
    }
    return s + ")";
  }
  return t.str();
}

namespace {

std::string printWriteApplied(const Term& t) {
  if (t.name == "__read")
    return printWriteApplied(t.args[0]) + "(" + printTerm(t.args[1]) + ")";
  if (t.name == "write" || t.name == "update")
    return t.name + "(" + (t.args[0].tag == Term::Tag::Apply
                               ? printWriteApplied(t.args[0])
                               : printTerm(t.args[0])) +
           ", " + printTerm(t.args[1]) + ", " + printTerm(t.args[2]) + ")";
  return printTerm(t);
}

}  // namespace

std::string printAtom(const Atom& a) {
  switch (a.tag) {
    case Atom::Tag::Eq:
      return printTerm(a.args[0]) + " = " + printTerm(a.args[1]);
    case Atom::Tag::Ineq:
      return printTerm(a.args[0]) + " " + relOpStr(a.rel) + " " + printTerm(a.args[1]);
    case Atom::Tag::Pred: {
      std::string s = a.pred + "[";
      for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) s += ", ";
        s += printTerm(a.args[i]);
      }
      return s + "]";
    }
  }
  return "?";
}

std::string printFormula(const Formula& f) {
  switch (f.tag) {
    case Formula::Tag::Atom:
      return printAtom(f.atom);
    case Formula::Tag::Not:
      return "NOT(" + printFormula(f.children[0]) + ")";
    case Formula::Tag::And:
    case Formula::Tag::Or: {
      std::string s = f.tag == Formula::Tag::And ? "AND(" : "OR(";
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        if (i) s += ", ";
        s += printFormula(f.children[i]);
      }
      return s + ")";
    }
    case Formula::Tag::Implies:
      return "(" + printFormula(f.children[0]) + " --> " + printFormula(f.children[1]) + ")";
    case Formula::Tag::Iff:
      return "(" + printFormula(f.children[0]) + " <--> " + printFormula(f.children[1]) + ")";
    case Formula::Tag::Forall:
    case Formula::Tag::Exists: {
      std::string s = f.tag == Formula::Tag::Forall ? "(FORALL " : "(EXISTS ";
      for (std::size_t i = 0; i < f.vars.size(); ++i) {
        if (i) s += ", ";
        s += f.vars[i];
      }
      return s + "). " + printFormula(f.children[0]);
    }
  }
  return "?";
}

std::string printClause(const Clause& c) {
  std::string s;
  if (!c.vars.empty()) {
    s += "(FORALL ";
    for (std::size_t i = 0; i < c.vars.size(); ++i) {
      if (i) s += ", ";
      s += c.vars[i];
    }
    s += "). ";
  }
  if (c.guard) {
    const Formula& g = *c.guard;
    if (g.tag == Formula::Tag::Not)
      s += "{ " + printFormula(g.children[0]) + " } --> ";
    else
      s += "{ " + printFormula(g) + " } OR ";
  }
  if (c.antecedent.empty() && c.consequent.size() == 1)
    return s + printAtom(c.consequent[0]);  // literal matrix
  for (std::size_t i = 0; i < c.antecedent.size(); ++i) {
    if (i) s += ", ";
    s += printAtom(c.antecedent[i]);
  }
  s += c.antecedent.empty() ? "--> " : " --> ";
  for (std::size_t i = 0; i < c.consequent.size(); ++i) {
    if (i) s += ", ";
    s += printAtom(c.consequent[i]);
  }
  return s;
}

std::string printTask(const Task& t) {
  std::ostringstream os;
  auto declTuple = [&](const SymbolDecl& d) {
    std::string s = "(" + d.name + ", " + std::to_string(d.arity);
    Sort dflt = t.signature.defaultNumericSort;
    bool needSorts = d.domain != dflt || d.range != dflt;
    if (d.kind == SymbolKind::ExtFun || needSorts) {
      s += ", " + std::to_string(d.kind == SymbolKind::ExtFun ? d.level : 0);
      if (needSorts) {
        s += ", " + d.domain.str();
        if (d.range != d.domain) s += ", " + d.range.str();
      }
    }
    return s + ")";
  };
  auto section = [&](const char* name, SymbolKind kind) {
    os << name << " := {";
    bool first = true;
    for (const auto& d : t.signature.declarations()) {
      if (d.kind != kind) continue;
      os << (first ? "" : ", ") << declTuple(d);
      first = false;
    }
    os << "}\n";
  };
  section("Base_functions", SymbolKind::BaseFun);
  section("Extension_functions", SymbolKind::ExtFun);
  os << "Relations := {";
  {
    bool first = true;
    for (const auto& d : t.signature.declarations()) {
      if (d.kind != SymbolKind::Relation) continue;
      os << (first ? "" : ", ") << "(" << d.name << ", " << d.arity << ")";
      first = false;
    }
    os << "}\n";
  }
  {
    bool any = false;
    for (const auto& d : t.signature.declarations())
      if (d.kind == SymbolKind::Constant) { any = true; break; }
    if (any) {
      os << "Constants := {";
      bool first = true;
      for (const auto& d : t.signature.declarations()) {
        if (d.kind != SymbolKind::Constant) continue;
        os << (first ? "" : ", ") << "(" << d.name << ", " << d.range.str() << ")";
        first = false;
      }
      os << "}\n";
    }
  }
  if (t.signature.interval) {
    const auto& iv = *t.signature.interval;
    os << "Interval := ";
    if (iv.lower) os << *iv.lower << (iv.lowerStrict ? " < " : " <= ");
    os << "x";
    if (iv.upper) os << (iv.upperStrict ? " < " : " <= ") << *iv.upper;
    os << ";\n";
  }
  if (!t.signature.stableLevels.empty()) {
    os << "Stable := ";
    bool first = true;
    for (int l : t.signature.stableLevels) {
      os << (first ? "" : ", ") << l;
      first = false;
    }
    os << ";\n";
  }
  if (!t.baseAxioms.empty()) {
    os << "Base :=\n";
    for (const auto& c : t.baseAxioms) os << printClause(c) << ";\n";
  }
  if (!t.extensionAxioms.empty()) {
    os << "Clauses :=\n";
    for (const auto& c : t.extensionAxioms) os << printClause(c) << ";\n";
  }
  if (!t.rawFormulas.empty()) {
    os << "Formulas :=\n";
    for (const auto& f : t.rawFormulas) os << printFormula(f) << ";\n";
  }
  os << "Query :=";
  if (t.query.empty()) {
    os << "\n";
  } else {
    os << "\n";
    for (const auto& c : t.query) os << printClause(c) << ";\n";
  }
  return os.str();
}

}  // namespace hpilot
