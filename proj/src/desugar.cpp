#include "flp/desugar.hpp"

namespace flp {

namespace {

const std::string kHatSuffix = "$rrt";

bool has_hat_suffix(const std::string& name) {
  return name.size() > kHatSuffix.size() &&
         name.compare(name.size() - kHatSuffix.size(), kHatSuffix.size(), kHatSuffix) == 0;
}

// in_scope is true inside some rt(...) annotation.
ExprPtr desugar_rt_rec(const ExprPtr& e, bool in_scope) {
  switch (e->kind) {
    case ExprKind::Var:
    case ExprKind::Bottom:
      return e;
    case ExprKind::RtWrap:
      return desugar_rt_rec(e->inner(), true);
    case ExprKind::RrtWrap:
      throw MalformedError("desugar_rt: unexpected rrt node");
    case ExprKind::Let:
      throw MalformedError("desugar_rt: unexpected let node");
    case ExprKind::CApp: {
      std::vector<ExprPtr> as;
      as.reserve(e->args.size());
      for (const auto& a : e->args) as.push_back(desugar_rt_rec(a, in_scope));
      return Expr::capp(e->name, std::move(as));
    }
    case ExprKind::FApp: {
      std::vector<ExprPtr> as;
      as.reserve(e->args.size());
      for (const auto& a : e->args) as.push_back(desugar_rt_rec(a, in_scope));
      return Expr::fapp(e->name, e->rt_flag || in_scope, std::move(as));
    }
  }
  throw MalformedError("desugar_rt: unreachable");
}

// Resolves both annotations in one pass, innermost first: the body of an
// rrt is fully desugared, then hat-copied.
ExprPtr desugar_all_rec(const ExprPtr& e, bool in_rt_scope, bool& saw_rrt) {
  switch (e->kind) {
    case ExprKind::Var:
    case ExprKind::Bottom:
      return e;
    case ExprKind::RtWrap:
      return desugar_all_rec(e->inner(), true, saw_rrt);
    case ExprKind::RrtWrap: {
      saw_rrt = true;
      ExprPtr body = desugar_all_rec(e->inner(), false, saw_rrt);
      return rrtT(body);
    }
    case ExprKind::Let:
      throw MalformedError("desugar: unexpected let node in a goal");
    case ExprKind::CApp: {
      std::vector<ExprPtr> as;
      as.reserve(e->args.size());
      for (const auto& a : e->args) as.push_back(desugar_all_rec(a, in_rt_scope, saw_rrt));
      return Expr::capp(e->name, std::move(as));
    }
    case ExprKind::FApp: {
      std::vector<ExprPtr> as;
      as.reserve(e->args.size());
      for (const auto& a : e->args) as.push_back(desugar_all_rec(a, in_rt_scope, saw_rrt));
      return Expr::fapp(e->name, e->rt_flag || in_rt_scope, std::move(as));
    }
  }
  throw MalformedError("desugar: unreachable");
}

}  // namespace

ExprPtr desugar_rt(const ExprPtr& e) { return desugar_rt_rec(e, false); }

Program desugar_program(const SourceProgram& sp) {
  Program p;
  p.symbols = sp.symbols;
  p.rules.reserve(sp.rules.size());
  for (const SourceRule& r : sp.rules) {
    if (contains_rrt(r.rhs))
      throw LoadError("rrt is a goal-only construct; rule for '" + r.fn +
                      "' uses it on the right-hand side (line " + std::to_string(r.loc.line) +
                      ")");
    p.rules.push_back({r.fn, r.params, desugar_rt(r.rhs)});
  }
  return p;
}

std::string hat_name(const std::string& fn) {
  return has_hat_suffix(fn) ? fn : fn + kHatSuffix;
}

ExprPtr rrtT(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Var:
    case ExprKind::Bottom:
      return e;
    case ExprKind::CApp: {
      std::vector<ExprPtr> as;
      as.reserve(e->args.size());
      for (const auto& a : e->args) as.push_back(rrtT(a));
      return Expr::capp(e->name, std::move(as));
    }
    case ExprKind::FApp: {
      std::vector<ExprPtr> as;
      as.reserve(e->args.size());
      for (const auto& a : e->args) as.push_back(rrtT(a));
      return Expr::fapp(hat_name(e->name), true, std::move(as));
    }
    default:
      throw MalformedError("rrtT expects a desugared expression");
  }
}

Program rrt_transform(const Program& p) {
  Program out = p;
  for (const auto& [name, info] : p.symbols.all()) {
    if (info.kind != SymbolKind::Function || has_hat_suffix(name)) continue;
    std::string hat = hat_name(name);
    if (p.symbols.lookup(hat))
      throw TransformError("cannot build hat copy: symbol '" + hat + "' already exists");
    out.symbols.declare(hat, SymbolKind::Function, info.arity);
  }
  for (const Rule& r : p.rules) {
    if (has_hat_suffix(r.fn)) continue;
    out.rules.push_back({hat_name(r.fn), r.params, rrtT(r.rhs)});
  }
  return out;
}

std::pair<ExprPtr, Program> desugar_rrt(const ExprPtr& e, const Program& p) {
  bool saw_rrt = false;
  ExprPtr out = desugar_all_rec(e, false, saw_rrt);
  if (!saw_rrt) return {out, p};
  return {out, rrt_transform(p)};
}

bool contains_rrt(const ExprPtr& e) {
  if (e->kind == ExprKind::RrtWrap) return true;
  for (const auto& a : e->args)
    if (contains_rrt(a)) return true;
  return false;
}

}  // namespace flp
