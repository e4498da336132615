#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "flp/desugar.hpp"
#include "flp/let.hpp"
#include "helpers.hpp"

using namespace flp;
using namespace flpt;

namespace {

std::map<std::string, int> rule_counts(const std::vector<LetStep>& ss) {
  std::map<std::string, int> m;
  for (const LetStep& s : ss) ++m[s.rule];
  return m;
}

void collect_binders(const ExprPtr& e, std::vector<std::string>& out) {
  if (e->kind == ExprKind::Let) {
    out.push_back(e->name);
    collect_binders(e->bound(), out);
    collect_binders(e->body(), out);
    return;
  }
  for (const ExprPtr& a : e->args) collect_binders(a, out);
}

std::vector<std::string> results_of(const std::vector<LetStep>& ss) {
  std::vector<std::string> out;
  out.reserve(ss.size());
  for (const LetStep& s : ss) out.push_back(print_expr(s.result));
  return out;
}

}  // namespace

TEST_CASE("step: annotated arguments are copied, never named") {
  auto lp = corpus("coin.flp");
  auto ss = step_let(goal(lp, "rt(f(coin))"), lp.program);
  REQUIRE(ss.size() == 3);  // two coin alternatives, then the root rule
  for (const LetStep& s : ss) CHECK(s.rule == "Fapp");
  CHECK(ss[0].pos == Path{0});
  CHECK(ss[1].pos == Path{0});
  CHECK(ss[2].pos == Path{});
  CHECK(results_of(ss) ==
        std::vector<std::string>{"f^rt(0)", "f^rt(1)", "g(coin^rt, coin)"});
}

TEST_CASE("step: a plain argument is extracted by LetIn") {
  auto lp = corpus("coin.flp");
  ExprPtr e = goal(lp, "g(rt(coin), coin)");
  auto ss = step_let(e, lp.program);
  REQUIRE(ss.size() == 5);
  CHECK(rule_counts(ss) == std::map<std::string, int>{{"Fapp", 4}, {"LetIn", 1}});
  const LetStep& li = ss.back();
  CHECK(li.rule == "LetIn");
  CHECK(li.pos == Path{});
  CHECK(print_expr(li.result) == "let X = coin in g(coin^rt, X)");
}

TEST_CASE("step: extraction also happens under a flagged head") {
  auto lp = corpus("coin.flp");
  // f^rt(coin): the head flag does not make the argument copyable
  ExprPtr e = Expr::fapp("f", true, {Expr::fapp("coin", false)});
  auto ss = step_let(e, lp.program);
  REQUIRE(ss.size() == 3);
  CHECK(rule_counts(ss) == std::map<std::string, int>{{"Fapp", 2}, {"LetIn", 1}});
  CHECK(print_expr(ss.back().result) == "let X = coin in f^rt(X)");
}

TEST_CASE("step: Bind requires a copyable binding") {
  auto lp = corpus("coin.flp");
  ExprPtr zero = Expr::capp("z");

  SUBCASE("a plain application stays put") {
    ExprPtr e = Expr::let_in("X", Expr::fapp("coin", false), Expr::var("X"));
    auto ss = step_let(e, lp.program);
    REQUIRE(ss.size() == 2);
    for (const LetStep& s : ss) {
      CHECK(s.rule == "Fapp");
      CHECK(s.pos == Path{0});
    }
    CHECK(printed(std::vector<ExprPtr>{ss[0].result, ss[1].result}) ==
          std::set<std::string>{"let X = 0 in X", "let X = 1 in X"});
  }

  SUBCASE("a value is substituted") {
    ExprPtr e = Expr::let_in("X", zero, Expr::fapp("double", false, {Expr::var("X")}));
    auto ss = step_let(e, lp.program);
    REQUIRE(ss.size() == 2);
    // the rule body may fire on the variable; Bind is the other option
    CHECK(ss[0].rule == "Fapp");
    CHECK(print_expr(ss[0].result) == "let X = 0 in add(X, X)");
    CHECK(ss[1].rule == "Bind");
    CHECK(ss[1].pos == Path{});
    CHECK(print_expr(ss[1].result) == "double(0)");
  }

  SUBCASE("a flagged application is copyable as it stands") {
    ExprPtr e = Expr::let_in("X", Expr::fapp("coin", true),
                             Expr::capp("$tup2", {Expr::var("X"), Expr::var("X")}));
    auto ss = step_let(e, lp.program);
    REQUIRE(ss.size() == 3);
    CHECK(rule_counts(ss) == std::map<std::string, int>{{"Fapp", 2}, {"Bind", 1}});
    CHECK(print_expr(ss.back().result) == "(coin^rt, coin^rt)");
  }
}

TEST_CASE("step: Elim drops an unused binding") {
  auto lp = corpus("coin.flp");
  ExprPtr e = Expr::let_in("X", Expr::fapp("coin", false), Expr::capp("z"));
  auto ss = step_let(e, lp.program);
  REQUIRE(ss.size() == 3);
  CHECK(rule_counts(ss) == std::map<std::string, int>{{"Fapp", 2}, {"Elim", 1}});
  CHECK(ss.back().rule == "Elim");
  CHECK(print_expr(ss.back().result) == "0");
}

TEST_CASE("step: Flat reassociates nested bindings") {
  auto lp = corpus("coin.flp");
  ExprPtr zero = Expr::capp("z");
  ExprPtr inner = Expr::let_in("Y", zero, Expr::var("Y"));

  SUBCASE("no capture risk") {
    ExprPtr e = Expr::let_in("X", inner, Expr::var("X"));
    auto ss = step_let(e, lp.program);
    REQUIRE(ss.size() == 2);
    CHECK(rule_counts(ss) == std::map<std::string, int>{{"Bind", 1}, {"Flat", 1}});
    CHECK(printed(std::vector<ExprPtr>{ss[0].result, ss[1].result}) ==
          std::set<std::string>{"let X = 0 in X", "let Y = 0 in let X = Y in X"});
  }

  SUBCASE("the inner binder is renamed when it would capture") {
    ExprPtr e = Expr::let_in(
        "X", inner, Expr::capp("pair", {Expr::var("X"), Expr::var("Y")}));
    auto ss = step_let(e, lp.program);
    bool found = false;
    for (const LetStep& s : ss)
      if (s.rule == "Flat") {
        found = true;
        CHECK(print_expr(s.result) == "let Y1 = 0 in let X = Y1 in pair(X, Y)");
        CHECK(free_vars(s.result) == std::set<std::string>{"Y"});
      }
    CHECK(found);
  }
}

TEST_CASE("step: malformed states are rejected") {
  auto lp = corpus("coin.flp");
  CHECK_THROWS_AS(step_let(Expr::bottom(), lp.program), MalformedError);
  CHECK_THROWS_AS(step_let(Expr::rt_wrap(Expr::capp("z")), lp.program), MalformedError);
}

TEST_CASE("hygiene is preserved along random walks") {
  auto lp = corpus("coin.flp");
  std::mt19937 rng(23);
  int stepped = 0;
  for (int walk = 0; walk < 250 && stepped < 10000; ++walk) {
    ExprPtr st = goal(lp, walk % 2 ? "g(rt(coin), coin)" : "rt(f(coin))");
    for (int i = 0; i < 40; ++i) {
      auto ss = step_let(st, lp.program);
      if (ss.empty()) break;
      const LetStep& s = ss[std::uniform_int_distribution<size_t>(0, ss.size() - 1)(rng)];
      // the reported position exists in the pre-state
      CHECK_NOTHROW(subterm_at(st, s.pos));
      st = s.result;
      ++stepped;
      CHECK(is_ground(st));
      std::vector<std::string> binders;
      collect_binders(st, binders);
      std::set<std::string> uniq(binders.begin(), binders.end());
      CHECK(uniq.size() == binders.size());
    }
  }
  CHECK(stepped > 1000);  // the walks actually exercised the relation
}

TEST_CASE("enumerate: sharing by default, copies under rt") {
  auto lp = corpus("coin.flp");

  auto shared = enumerate_values_let(goal(lp, "f(coin)"), lp.program, {});
  CHECK(shared.complete);
  CHECK(printed(shared.values) ==
        std::set<std::string>{"(0, 0, 0, 0)", "(0, 0, 1, 1)", "(1, 1, 0, 0)",
                              "(1, 1, 1, 1)"});

  auto mixed = enumerate_values_let(goal(lp, "rt(f(coin))"), lp.program, {});
  CHECK(mixed.complete);
  auto vs = printed(mixed.values);
  CHECK(vs.size() == 8);
  CHECK(vs.count("(0, 1, 0, 0)") == 1);
  CHECK(vs.count("(0, 1, 0, 1)") == 0);
  for (const ExprPtr& v : mixed.values) {
    CHECK(is_cterm(v));
    CHECK_FALSE(contains_bottom(v));
  }
}

TEST_CASE("enumerate: the toy examples") {
  auto lp = corpus("toy_tests.flp");

  auto t1 = enumerate_values_let(goal(lp, "test1"), lp.program, {});
  CHECK(t1.complete);
  CHECK(printed(t1.values) == std::set<std::string>{"0", "2"});

  auto t2 = enumerate_values_let(goal(lp, "test2"), lp.program, {});
  CHECK(t2.complete);
  CHECK(printed(t2.values) == std::set<std::string>{"0", "1", "2"});
}

TEST_CASE("enumerate: memoization does not change the value set") {
  auto toy = corpus("toy_tests.flp");
  auto coin = corpus("coin.flp");
  const std::pair<const LoadedProgram*, const char*> goals[] = {
      {&toy, "test2"}, {&coin, "rt(f(coin))"}, {&coin, "g(rt(coin), coin)"}};
  for (const auto& [lp, g] : goals) {
    CAPTURE(g);
    auto memo = enumerate_values_let(goal(*lp, g), lp->program, {}, true);
    auto raw = enumerate_values_let(goal(*lp, g), lp->program, {}, false);
    CHECK(memo.complete);
    CHECK(raw.complete);
    CHECK(printed(memo.values) == printed(raw.values));
  }
}

TEST_CASE("enumerate: goal validation") {
  auto lp = corpus("coin.flp");
  CHECK_THROWS_AS(enumerate_values_let(Expr::capp("s", {Expr::bottom()}), lp.program, {}),
                  MalformedError);
  CHECK_THROWS_AS(
      enumerate_values_let(Expr::fapp("double", false, {Expr::var("X")}), lp.program, {}),
      MalformedError);
  CHECK_THROWS_AS(enumerate_values_let(Expr::rt_wrap(Expr::capp("z")), lp.program, {}),
                  MalformedError);
}

TEST_CASE("enumerate: bounds truncate and are reported") {
  auto lp = corpus("coin.flp");
  SearchBounds tight;
  tight.max_steps = 2;
  auto r = enumerate_values_let(goal(lp, "rt(f(coin))"), lp.program, tight);
  CHECK_FALSE(r.complete);
}

TEST_CASE("trace: the demonstration derivation for rt(double(coin))") {
  auto lp = corpus("coin.flp");
  auto d = trace_derivation(goal(lp, "rt(double(coin))"), lp.program, {});
  REQUIRE(d.has_value());
  CHECK(format_derivation(*d) ==
        "0. double^rt(coin^rt)\n"
        "1. [Fapp@1] double^rt(0)\n"
        "2. [Fapp@e] add(0, 0)\n"
        "3. [Fapp@e] 0\n");
}

TEST_CASE("trace: Bind outranks the other rules") {
  auto lp = corpus("coin.flp");
  ExprPtr e = Expr::let_in("X", Expr::capp("z"),
                           Expr::fapp("double", false, {Expr::var("X")}));
  auto d = trace_derivation(e, lp.program, {});
  REQUIRE(d.has_value());
  REQUIRE(!d->steps.empty());
  CHECK(d->steps[0].rule == "Bind");
  CHECK(print_expr(d->steps.back().result) == "0");
}

TEST_CASE("trace: a targeted derivation to a mixed tuple") {
  auto lp = corpus("coin.flp");
  ExprPtr g0 = goal(lp, "rt(f(coin))");
  ExprPtr target = goal(lp, "(0, 1, 0, 0)");
  auto d = trace_derivation(g0, lp.program, {}, target);
  REQUIRE(d.has_value());
  CHECK(d->steps.size() == 7);
  CHECK(rule_counts(d->steps) ==
        std::map<std::string, int>{{"Fapp", 5}, {"LetIn", 1}, {"Bind", 1}});
  CHECK(print_expr(d->steps.back().result) == "(0, 1, 0, 0)");
  CHECK(expr_key(d->initial) == expr_key(g0));
}

TEST_CASE("trace: the shared pair blocks the mixed tuple") {
  auto lp = corpus("coin.flp");
  auto d = trace_derivation(goal(lp, "rt(f(coin))"), lp.program, {},
                            goal(lp, "(0, 1, 0, 1)"));
  CHECK_FALSE(d.has_value());
}

TEST_CASE("trace: the doubled program reaches the mixed tuple") {
  auto lp = corpus("coin.flp");
  auto [g2, p2] = desugar_rrt(parse_expr("rrt(f(coin))", lp.program.symbols), lp.program);
  auto d = trace_derivation(g2, p2, {}, goal(lp, "(0, 1, 0, 1)"));
  REQUIRE(d.has_value());
  CHECK(print_expr(d->steps.back().result) == "(0, 1, 0, 1)");
}
