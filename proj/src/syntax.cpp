#include "flp/syntax.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>

namespace flp {

namespace {

// ---- lexer ----

enum class Tok {
  Ident,   // [A-Za-z][A-Za-z0-9_]*
  Int,     // [0-9]+
  String,  // "..."
  Char,    // 'c'
  LParen,
  RParen,
  LBrack,
  RBrack,
  Comma,
  Arrow,   // ->
  Pipe,    // |
  Concat,  // ++
  CaretRt, // ^rt
  Dot,     // .
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

std::vector<Token> lex_line(const std::string& s, int lineno) {
  std::vector<Token> out;
  size_t i = 0;
  auto push = [&](Tok k, std::string t, size_t at) {
    out.push_back({k, std::move(t), lineno, static_cast<int>(at) + 1});
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == '%') break;  // comment to end of line
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    size_t at = i;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      push(Tok::Ident, s.substr(i, j - i), at);
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      push(Tok::Int, s.substr(i, j - i), at);
      i = j;
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, "(", at); ++i; continue;
      case ')': push(Tok::RParen, ")", at); ++i; continue;
      case '[': push(Tok::LBrack, "[", at); ++i; continue;
      case ']': push(Tok::RBrack, "]", at); ++i; continue;
      case ',': push(Tok::Comma, ",", at); ++i; continue;
      case '|': push(Tok::Pipe, "|", at); ++i; continue;
      case '.': push(Tok::Dot, ".", at); ++i; continue;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          push(Tok::Arrow, "->", at);
          i += 2;
          continue;
        }
        throw ParseError("expected '->' after '-'", lineno, static_cast<int>(i) + 1);
      case '+':
        if (i + 1 < s.size() && s[i + 1] == '+') {
          push(Tok::Concat, "++", at);
          i += 2;
          continue;
        }
        throw ParseError("single '+' is not an operator (use ++ or add)", lineno,
                         static_cast<int>(i) + 1);
      case '^':
        if (i + 2 < s.size() && s[i + 1] == 'r' && s[i + 2] == 't') {
          push(Tok::CaretRt, "^rt", at);
          i += 3;
          continue;
        }
        throw ParseError("expected 'rt' after '^'", lineno, static_cast<int>(i) + 1);
      case '"': {
        size_t j = i + 1;
        while (j < s.size() && s[j] != '"') ++j;
        if (j >= s.size())
          throw ParseError("unterminated string literal", lineno, static_cast<int>(i) + 1);
        push(Tok::String, s.substr(i + 1, j - i - 1), at);
        i = j + 1;
        continue;
      }
      case '\'': {
        if (i + 2 >= s.size() || s[i + 2] != '\'')
          throw ParseError("character literal must be 'c'", lineno, static_cast<int>(i) + 1);
        push(Tok::Char, s.substr(i + 1, 1), at);
        i += 3;
        continue;
      }
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", lineno,
                         static_cast<int>(i) + 1);
    }
  }
  push(Tok::End, "", s.size());
  return out;
}

bool is_upper_ident(const std::string& s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

bool reserved_word(const std::string& s) {
  return s == "rt" || s == "rrt" || s == "let" || s == "in";
}

// ---- sugar constructors ----

ExprPtr peano(unsigned long n) {
  ExprPtr e = Expr::capp("z");
  for (unsigned long i = 0; i < n; ++i) e = Expr::capp("s", {e});
  return e;
}

std::string char_ctor_name(char c) { return std::string("'") + c + "'"; }

ExprPtr char_list(const std::string& s) {
  ExprPtr e = Expr::capp("nil");
  for (auto it = s.rbegin(); it != s.rend(); ++it)
    e = Expr::capp("cons", {Expr::capp(char_ctor_name(*it)), e});
  return e;
}

std::string tuple_ctor_name(size_t n) { return "$tup" + std::to_string(n); }

// Sugar symbols are registered lazily so that goals may mention numerals,
// strings or tuples the program never used.
void declare_builtin(SymbolTable& t, const ExprPtr& e) {
  if (e->kind != ExprKind::CApp) return;
  t.declare(e->name, SymbolKind::Constructor, static_cast<int>(e->args.size()));
  for (const auto& a : e->args) declare_builtin(t, a);
}

// ---- parser ----

// Grammar, loosest binding first:
//   expr   := concat ('|' expr)?          alt, right associative
//   concat := app ('++' concat)?          concat, right associative
//   app    := atom
class ExprParser {
 public:
  ExprParser(const std::vector<Token>& toks, SymbolTable& symbols,
             const std::set<std::string>& functions, bool allow_new_ctors)
      : toks_(toks),
        symbols_(symbols),
        functions_(functions),
        allow_new_ctors_(allow_new_ctors) {}

  size_t pos = 0;

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_concat();
    if (peek().kind == Tok::Pipe) {
      next();
      ExprPtr rhs = parse_expr();
      symbols_.declare("alt", SymbolKind::Function, 2);
      return Expr::fapp("alt", false, {lhs, rhs});
    }
    return lhs;
  }

  const Token& peek() const { return toks_[pos]; }
  const Token& next() { return toks_[pos++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(msg, t.line, t.col);
  }

  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    next();
  }

 private:
  ExprPtr parse_concat() {
    ExprPtr lhs = parse_atom();
    if (peek().kind == Tok::Concat) {
      next();
      ExprPtr rhs = parse_concat();
      symbols_.declare("concat", SymbolKind::Function, 2);
      return Expr::fapp("concat", false, {lhs, rhs});
    }
    return lhs;
  }

  std::vector<ExprPtr> parse_args() {
    std::vector<ExprPtr> args;
    expect(Tok::LParen, "'('");
    if (peek().kind != Tok::RParen) {
      args.push_back(parse_expr());
      while (peek().kind == Tok::Comma) {
        next();
        args.push_back(parse_expr());
      }
    }
    expect(Tok::RParen, "')'");
    return args;
  }

  ExprPtr parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int: {
        next();
        unsigned long n = 0;
        try {
          n = std::stoul(t.text);
        } catch (const std::exception&) {
          throw ParseError("numeral out of range", t.line, t.col);
        }
        if (n > 1000000) throw ParseError("numeral too large for a Peano term", t.line, t.col);
        ExprPtr e = peano(n);
        declare_builtin(symbols_, e);
        return e;
      }
      case Tok::String: {
        next();
        ExprPtr e = char_list(t.text);
        declare_builtin(symbols_, e);
        return e;
      }
      case Tok::Char: {
        next();
        ExprPtr e = Expr::capp(char_ctor_name(t.text[0]));
        declare_builtin(symbols_, e);
        return e;
      }
      case Tok::LBrack: {
        next();
        std::vector<ExprPtr> elems;
        if (peek().kind != Tok::RBrack) {
          elems.push_back(parse_expr());
          while (peek().kind == Tok::Comma) {
            next();
            elems.push_back(parse_expr());
          }
        }
        expect(Tok::RBrack, "']'");
        ExprPtr e = Expr::capp("nil");
        symbols_.declare("nil", SymbolKind::Constructor, 0);
        symbols_.declare("cons", SymbolKind::Constructor, 2);
        for (auto it = elems.rbegin(); it != elems.rend(); ++it)
          e = Expr::capp("cons", {*it, e});
        return e;
      }
      case Tok::LParen: {
        next();
        std::vector<ExprPtr> elems;
        elems.push_back(parse_expr());
        while (peek().kind == Tok::Comma) {
          next();
          elems.push_back(parse_expr());
        }
        expect(Tok::RParen, "')'");
        if (elems.size() == 1) return elems[0];
        std::string tup = tuple_ctor_name(elems.size());
        symbols_.declare(tup, SymbolKind::Constructor, static_cast<int>(elems.size()));
        return Expr::capp(tup, std::move(elems));
      }
      case Tok::Ident:
        return parse_ident();
      default:
        fail("expected an expression");
    }
  }

  ExprPtr parse_ident() {
    Token t = next();
    if (t.text == "rt" || t.text == "rrt") {
      bool is_rt = t.text == "rt";
      expect(Tok::LParen, "'(' after annotation");
      ExprPtr inner = parse_expr();
      expect(Tok::RParen, "')'");
      return is_rt ? Expr::rt_wrap(inner) : Expr::rrt_wrap(inner);
    }
    if (reserved_word(t.text))
      throw ParseError("'" + t.text + "' is a reserved word", t.line, t.col);
    if (is_upper_ident(t.text)) return Expr::var(t.text);

    bool flagged = false;
    if (peek().kind == Tok::CaretRt) {
      next();
      flagged = true;
    }
    std::vector<ExprPtr> args;
    if (peek().kind == Tok::LParen) args = parse_args();

    if (functions_.count(t.text)) {
      symbols_.declare(t.text, SymbolKind::Function, static_cast<int>(args.size()));
      return Expr::fapp(t.text, flagged, std::move(args));
    }
    if (flagged)
      throw ParseError("'^rt' may only follow a function symbol ('" + t.text + "')", t.line,
                       t.col);
    if (!allow_new_ctors_ && !symbols_.lookup(t.text))
      throw ParseError("unknown symbol '" + t.text + "'", t.line, t.col);
    symbols_.declare(t.text, SymbolKind::Constructor, static_cast<int>(args.size()));
    return Expr::capp(t.text, std::move(args));
  }

  const std::vector<Token>& toks_;
  SymbolTable& symbols_;
  const std::set<std::string>& functions_;
  bool allow_new_ctors_;
};

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  lines.push_back(cur);
  return lines;
}

void check_pattern(const ExprPtr& p, const SourceLoc& loc, std::set<std::string>& seen) {
  switch (p->kind) {
    case ExprKind::Var:
      if (!seen.insert(p->name).second)
        throw ParseError("non-linear pattern: variable '" + p->name + "' repeats", loc.line,
                         loc.col);
      return;
    case ExprKind::CApp:
      for (const auto& a : p->args) check_pattern(a, loc, seen);
      return;
    case ExprKind::FApp:
      throw ParseError("function symbol '" + p->name + "' used in a pattern", loc.line, loc.col);
    case ExprKind::RtWrap:
    case ExprKind::RrtWrap:
      throw ParseError("annotations are not allowed in patterns", loc.line, loc.col);
    default:
      throw ParseError("invalid pattern", loc.line, loc.col);
  }
}

}  // namespace

SourceProgram parse_program(const std::string& text) {
  std::vector<std::string> lines = split_lines(text);

  // First pass: collect rule heads, so identifiers can be classified as
  // functions or constructors while parsing bodies.
  std::vector<std::pair<int, std::vector<Token>>> rule_lines;
  std::set<std::string> functions;
  for (size_t ln = 0; ln < lines.size(); ++ln) {
    std::vector<Token> toks = lex_line(lines[ln], static_cast<int>(ln) + 1);
    if (toks.size() <= 1) continue;  // blank or comment-only
    const Token& head = toks[0];
    if (head.kind != Tok::Ident || is_upper_ident(head.text))
      throw ParseError("a rule must start with a lowercase function name", head.line, head.col);
    if (reserved_word(head.text))
      throw ParseError("'" + head.text + "' cannot be defined", head.line, head.col);
    functions.insert(head.text);
    rule_lines.emplace_back(static_cast<int>(ln) + 1, std::move(toks));
  }

  SourceProgram prog;
  for (auto& [lineno, toks] : rule_lines) {
    ExprParser p(toks, prog.symbols, functions, /*allow_new_ctors=*/true);
    Token head = p.next();

    std::vector<ExprPtr> params;
    if (p.peek().kind == Tok::LParen) {
      p.next();
      if (p.peek().kind != Tok::RParen) {
        params.push_back(p.parse_expr());
        while (p.peek().kind == Tok::Comma) {
          p.next();
          params.push_back(p.parse_expr());
        }
      }
      p.expect(Tok::RParen, "')'");
    }
    p.expect(Tok::Arrow, "'->'");
    ExprPtr rhs = p.parse_expr();
    if (p.peek().kind == Tok::Dot) p.next();
    if (p.peek().kind != Tok::End) p.fail("trailing tokens after rule");

    SourceLoc loc{lineno, head.col};
    std::set<std::string> pattern_vars;
    for (const auto& prm : params) check_pattern(prm, loc, pattern_vars);

    for (const std::string& v : free_vars(rhs))
      if (!pattern_vars.count(v))
        throw ParseError("variable '" + v + "' occurs only on the right-hand side", loc.line,
                         loc.col);

    prog.symbols.declare(head.text, SymbolKind::Function, static_cast<int>(params.size()));
    prog.rules.push_back({head.text, std::move(params), std::move(rhs), loc});
  }
  return prog;
}

ExprPtr parse_expr(const std::string& text, const SymbolTable& symbols) {
  std::vector<std::string> lines = split_lines(text);
  std::vector<Token> toks;
  for (size_t ln = 0; ln < lines.size(); ++ln) {
    std::vector<Token> t = lex_line(lines[ln], static_cast<int>(ln) + 1);
    if (t.size() <= 1) continue;
    if (!toks.empty())
      throw ParseError("a goal must be a single expression", t[0].line, t[0].col);
    toks = std::move(t);
  }
  if (toks.empty()) throw ParseError("empty goal", 1, 1);

  std::set<std::string> functions;
  for (const auto& [name, info] : symbols.all())
    if (info.kind == SymbolKind::Function) functions.insert(name);

  SymbolTable scratch = symbols;  // builtin sugar may extend a copy
  ExprParser p(toks, scratch, functions, /*allow_new_ctors=*/false);
  ExprPtr e = p.parse_expr();
  if (p.peek().kind == Tok::Dot) p.next();
  if (p.peek().kind != Tok::End) p.fail("trailing tokens after goal");
  if (!is_ground(e)) {
    std::string v = *free_vars(e).begin();
    throw ParseError("free variable '" + v + "' in goal (goals must be ground)", toks[0].line,
                     toks[0].col);
  }
  return e;
}

// ---- printing ----

namespace {

bool is_char_ctor(const ExprPtr& e) {
  return e->kind == ExprKind::CApp && e->args.empty() && e->name.size() == 3 &&
         e->name.front() == '\'' && e->name.back() == '\'';
}

// Recognizes s(s(...(z))) chains; returns the count or nullopt.
std::optional<unsigned long> peano_value(const ExprPtr& e) {
  unsigned long n = 0;
  const Expr* cur = e.get();
  for (;;) {
    if (cur->kind != ExprKind::CApp) return std::nullopt;
    if (cur->name == "z" && cur->args.empty()) return n;
    if (cur->name == "s" && cur->args.size() == 1) {
      ++n;
      cur = cur->args[0].get();
      continue;
    }
    return std::nullopt;
  }
}

// Proper cons/nil spines only; anything else falls back to raw printing.
std::optional<std::vector<ExprPtr>> list_elems(const ExprPtr& e) {
  std::vector<ExprPtr> out;
  const Expr* cur = e.get();
  for (;;) {
    if (cur->kind != ExprKind::CApp) return std::nullopt;
    if (cur->name == "nil" && cur->args.empty()) return out;
    if (cur->name == "cons" && cur->args.size() == 2) {
      out.push_back(cur->args[0]);
      cur = cur->args[1].get();
      continue;
    }
    return std::nullopt;
  }
}

// Hat copies are spelled f$rrt internally; display puts a circumflex on the
// first character, e.g. coin$rrt prints as ĉoin.
std::string display_name(const std::string& name) {
  static const std::string suffix = "$rrt";
  if (name.size() > suffix.size() &&
      name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
    std::string base = name.substr(0, name.size() - suffix.size());
    return base.substr(0, 1) + "̂" + base.substr(1);
  }
  return name;
}

void print_rec(const ExprPtr& e, std::string& out) {
  switch (e->kind) {
    case ExprKind::Var:
      out += e->name;
      return;
    case ExprKind::Bottom:
      out += "_|_";
      return;
    case ExprKind::RtWrap:
      out += "rt(";
      print_rec(e->inner(), out);
      out += ')';
      return;
    case ExprKind::RrtWrap:
      out += "rrt(";
      print_rec(e->inner(), out);
      out += ')';
      return;
    case ExprKind::Let:
      out += "let " + e->name + " = ";
      print_rec(e->bound(), out);
      out += " in ";
      print_rec(e->body(), out);
      return;
    case ExprKind::FApp: {
      out += display_name(e->name);
      if (e->rt_flag) out += "^rt";
      if (!e->args.empty()) {
        out += '(';
        for (size_t i = 0; i < e->args.size(); ++i) {
          if (i) out += ", ";
          print_rec(e->args[i], out);
        }
        out += ')';
      }
      return;
    }
    case ExprKind::CApp: {
      if (auto n = peano_value(e)) {
        out += std::to_string(*n);
        return;
      }
      if (e->name.rfind("$tup", 0) == 0) {
        out += '(';
        for (size_t i = 0; i < e->args.size(); ++i) {
          if (i) out += ", ";
          print_rec(e->args[i], out);
        }
        out += ')';
        return;
      }
      if (e->name == "cons" || e->name == "nil") {
        if (auto elems = list_elems(e)) {
          bool all_chars = !elems->empty();
          for (const auto& el : *elems) all_chars &= is_char_ctor(el);
          if (all_chars) {
            out += '"';
            for (const auto& el : *elems) out += el->name[1];
            out += '"';
            return;
          }
          out += '[';
          for (size_t i = 0; i < elems->size(); ++i) {
            if (i) out += ", ";
            print_rec((*elems)[i], out);
          }
          out += ']';
          return;
        }
      }
      out += e->name;
      if (!e->args.empty()) {
        out += '(';
        for (size_t i = 0; i < e->args.size(); ++i) {
          if (i) out += ", ";
          print_rec(e->args[i], out);
        }
        out += ')';
      }
      return;
    }
  }
}

}  // namespace

std::string print_expr(const ExprPtr& e) {
  std::string out;
  print_rec(e, out);
  return out;
}

// ---- prelude ----

const std::string& prelude_text() {
  static const std::string text = R"(% prelude: lists, Peano naturals, choice combinators
alt(X, Y) -> X
alt(X, Y) -> Y
concat(nil, Ys) -> Ys
concat(cons(X, Xs), Ys) -> cons(X, concat(Xs, Ys))
reverse(nil) -> nil
reverse(cons(X, Xs)) -> concat(reverse(Xs), cons(X, nil))
take(z, L) -> nil
take(s(N), cons(X, L)) -> cons(X, take(N, L))
repeat(X) -> cons(X, repeat(X))
add(z, Y) -> Y
add(s(X), Y) -> s(add(X, Y))
double(X) -> add(X, X)
star(X) -> []
star(X) -> X ++ star(X)
)";
  return text;
}

SourceProgram load_prelude() { return parse_program(prelude_text()); }

}  // namespace flp
