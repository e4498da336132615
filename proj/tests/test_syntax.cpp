#include "doctest.h"
#include "helpers.hpp"

using namespace flp;

namespace {

// Symbols of the prelude are enough for most goal-parsing tests.
const SymbolTable& prelude_symbols() {
  static const SymbolTable t = [] {
    SourceProgram sp = load_prelude();
    return sp.symbols;
  }();
  return t;
}

ExprPtr pe(const std::string& s) { return parse_expr(s, prelude_symbols()); }

void check_roundtrip(const std::string& s) {
  ExprPtr e = pe(s);
  CHECK(print_expr(e) == s);
  CHECK(expr_equal(pe(print_expr(e)), e));
}

}  // namespace

TEST_CASE("numerals are Peano sugar") {
  ExprPtr three = pe("3");
  REQUIRE(three->kind == ExprKind::CApp);
  CHECK(expr_equal(three, Expr::capp("s", {Expr::capp("s", {Expr::capp("s", {Expr::capp("z")})})})));
  CHECK(print_expr(three) == "3");
  CHECK(expr_equal(pe("0"), Expr::capp("z")));
  CHECK_THROWS_AS(pe("999999999999999999999"), ParseError);
}

TEST_CASE("strings are lists of quoted character constructors") {
  ExprPtr ab = pe("\"ab\"");
  REQUIRE(ab->kind == ExprKind::CApp);
  CHECK(ab->name == "cons");
  CHECK(ab->args[0]->name == "'a'");
  CHECK(print_expr(ab) == "\"ab\"");
  CHECK(expr_equal(pe("\"ab\""), pe("['a', 'b']")));
  CHECK(expr_equal(pe("\"ab\""), pe("cons('a', cons('b', nil))")));
  // the empty list has no element type to display
  CHECK(print_expr(pe("\"\"")) == "[]");
}

TEST_CASE("value printing round-trips") {
  check_roundtrip("0");
  check_roundtrip("42");
  check_roundtrip("\"abc\"");
  check_roundtrip("'x'");
  check_roundtrip("[]");
  check_roundtrip("[1, 2, 3]");
  check_roundtrip("(0, 1)");
  check_roundtrip("[(0, \"a\"), (1, \"b\")]");
  check_roundtrip("[[], [0]]");
}

TEST_CASE("bracket lists desugar to cons cells") {
  CHECK(expr_equal(pe("[0, 1]"), pe("cons(0, cons(1, nil))")));
  CHECK(expr_equal(pe("[]"), pe("nil")));
  // no infix cons in the surface syntax
  CHECK_THROWS_AS(pe("0 : [1]"), ParseError);
}

TEST_CASE("alt and concat sugar") {
  ExprPtr e = pe("0 | 1");
  REQUIRE(e->kind == ExprKind::FApp);
  CHECK(e->name == "alt");
  CHECK_FALSE(e->rt_flag);
  // right-associative, and | binds weaker than ++
  CHECK(expr_equal(pe("0 | 1 | 2"), pe("alt(0, alt(1, 2))")));
  CHECK(expr_equal(pe("\"a\" ++ \"b\" | \"c\""), pe("alt(concat(\"a\", \"b\"), \"c\")")));
  CHECK(expr_equal(pe("\"a\" ++ \"b\" ++ \"c\""), pe("concat(\"a\", concat(\"b\", \"c\"))")));
}

TEST_CASE("rt and rrt parse as surface wrappers") {
  ExprPtr e = pe("rt(double(0))");
  REQUIRE(e->kind == ExprKind::RtWrap);
  CHECK(e->inner()->kind == ExprKind::FApp);
  CHECK(pe("rrt(double(0))")->kind == ExprKind::RrtWrap);
  // ^rt is a per-application flag
  ExprPtr f = pe("double^rt(0)");
  REQUIRE(f->kind == ExprKind::FApp);
  CHECK(f->rt_flag);
  CHECK(print_expr(f) == "double^rt(0)");
  // ^rt cannot follow a constructor
  CHECK_THROWS_AS(pe("z^rt"), ParseError);
  // a 0-ary function parses bare and prints bare
  ExprPtr g = parse_expr("coin", flpt::corpus("coin.flp").program.symbols);
  REQUIRE(g->kind == ExprKind::FApp);
  CHECK(print_expr(g) == "coin");
}

TEST_CASE("goals must be ground, single expressions") {
  CHECK_THROWS_AS(pe("X"), ParseError);
  CHECK_THROWS_AS(pe("pair(0, Y)"), ParseError);
  CHECK_THROWS_AS(pe(""), ParseError);
  CHECK_THROWS_AS(pe("0\n1"), ParseError);
  CHECK_THROWS_AS(pe("0 1"), ParseError);
  CHECK_THROWS_AS(pe("take(3,"), ParseError);
  // reserved words are not identifiers
  CHECK_THROWS_AS(pe("let"), ParseError);
  // a trailing period is tolerated
  CHECK(expr_equal(pe("0."), pe("0")));
}

TEST_CASE("unknown constructors are not invented in goals") {
  // goals may not declare new symbols; rules may
  CHECK_THROWS_AS(pe("mystery(0)"), ParseError);
}

TEST_CASE("parse errors carry positions") {
  try {
    pe("take(3,");
    FAIL("expected a parse error");
  } catch (const ParseError& ex) {
    CHECK(ex.line == 1);
    CHECK(ex.col >= 7);
    CHECK(std::string(ex.what()).find("line 1") != std::string::npos);
  }
}

TEST_CASE("programs: comments, blank lines, locations") {
  SourceProgram sp = parse_program(
      "% a comment\n"
      "\n"
      "one -> 1   % trailing comment\n"
      "two -> 2.\n");
  REQUIRE(sp.rules.size() == 2);
  CHECK(sp.rules[0].fn == "one");
  CHECK(sp.rules[0].loc.line == 3);
  CHECK(sp.rules[1].loc.line == 4);
  CHECK(sp.symbols.is_function("one"));
}

TEST_CASE("two-pass loading resolves forward calls and 0-ary functions") {
  SourceProgram sp = parse_program(
      "main -> helper\n"
      "helper -> 0\n");
  REQUIRE(sp.rules.size() == 2);
  CHECK(sp.rules[0].rhs->kind == ExprKind::FApp);  // helper, not a constructor
  CHECK(sp.rules[0].rhs->name == "helper");
}

TEST_CASE("rule shape violations are load errors") {
  // non-linear pattern
  CHECK_THROWS_AS(parse_program("eq(X, X) -> 1\n"), LoadError);
  // function symbol inside a pattern
  CHECK_THROWS_AS(parse_program("f -> 0\ng(f) -> 1\n"), LoadError);
  // rt annotation inside a pattern
  CHECK_THROWS_AS(parse_program("f(rt(X)) -> X\n"), LoadError);
  // right-hand-side variable not bound by the pattern
  CHECK_THROWS_AS(parse_program("f(X) -> Y\n"), LoadError);
  // arity clash between alternatives
  CHECK_THROWS_AS(parse_program("f(X) -> X\nf(X, Y) -> X\n"), LoadError);
  // constructor/function clash: z is already the zero numeral
  CHECK_THROWS_AS(parse_program("z -> 0\n"), LoadError);
  // a lowercase symbol only ever applied in rule bodies is a fine forward
  // reference, though -- both of these are functions
  CHECK_NOTHROW(parse_program("f -> c(0)\nc(X) -> X\n"));
}

TEST_CASE("the prelude defines the workbench vocabulary") {
  SourceProgram sp = load_prelude();
  const char* fns[] = {"alt", "concat", "reverse", "take", "repeat", "add", "double", "star"};
  for (const char* f : fns) {
    CAPTURE(f);
    CHECK(sp.symbols.is_function(f));
  }
  CHECK(sp.symbols.lookup("alt")->arity == 2);
  CHECK(sp.symbols.lookup("star")->arity == 1);
  CHECK(sp.symbols.is_constructor("cons"));
  CHECK(sp.symbols.lookup("cons")->arity == 2);
}

TEST_CASE("printing covers the internal forms") {
  CHECK(print_expr(Expr::bottom()) == "_|_");
  CHECK(print_expr(Expr::let_in("X", Expr::capp("z"), Expr::var("X"))) == "let X = 0 in X");
  CHECK(print_expr(Expr::rt_wrap(Expr::capp("z"))) == "rt(0)");
  CHECK(print_expr(Expr::fapp("f", true, {Expr::var("X")})) == "f^rt(X)");
  // hat copies display with a circumflex over the first letter
  CHECK(print_expr(Expr::fapp("coin$rrt", true, {})) == "ĉoin^rt");
}
