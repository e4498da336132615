#include "flp/term.hpp"

#include <algorithm>
#include <cassert>

namespace flp {

namespace {

ExprPtr make(ExprKind k, std::string name, bool rt, std::vector<ExprPtr> args) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->name = std::move(name);
  e->rt_flag = rt;
  e->args = std::move(args);
  return e;
}

}  // namespace

ExprPtr Expr::var(std::string n) { return make(ExprKind::Var, std::move(n), false, {}); }

ExprPtr Expr::capp(std::string c, std::vector<ExprPtr> as) {
  return make(ExprKind::CApp, std::move(c), false, std::move(as));
}

ExprPtr Expr::fapp(std::string f, bool rt, std::vector<ExprPtr> as) {
  return make(ExprKind::FApp, std::move(f), rt, std::move(as));
}

ExprPtr Expr::let_in(std::string v, ExprPtr bound, ExprPtr body) {
  return make(ExprKind::Let, std::move(v), false, {std::move(bound), std::move(body)});
}

ExprPtr Expr::bottom() {
  static const ExprPtr b = make(ExprKind::Bottom, "", false, {});
  return b;
}

ExprPtr Expr::rt_wrap(ExprPtr e) { return make(ExprKind::RtWrap, "", false, {std::move(e)}); }

ExprPtr Expr::rrt_wrap(ExprPtr e) { return make(ExprKind::RrtWrap, "", false, {std::move(e)}); }

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind || a->name != b->name || a->rt_flag != b->rt_flag ||
      a->args.size() != b->args.size())
    return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!expr_equal(a->args[i], b->args[i])) return false;
  return true;
}

int expr_compare(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  if (int c = a->name.compare(b->name)) return c < 0 ? -1 : 1;
  if (a->rt_flag != b->rt_flag) return a->rt_flag ? 1 : -1;
  if (a->args.size() != b->args.size()) return a->args.size() < b->args.size() ? -1 : 1;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (int c = expr_compare(a->args[i], b->args[i])) return c;
  return 0;
}

namespace {

void key_rec(const ExprPtr& e, std::string& out) {
  // One tag character per kind, names length-prefixed so that arbitrary
  // symbol spellings (quoted characters, $-suffixed copies) stay injective.
  switch (e->kind) {
    case ExprKind::Var: out += 'V'; break;
    case ExprKind::CApp: out += 'C'; break;
    case ExprKind::FApp: out += e->rt_flag ? 'R' : 'F'; break;
    case ExprKind::Let: out += 'L'; break;
    case ExprKind::Bottom: out += '_'; return;
    case ExprKind::RtWrap: out += 'r'; break;
    case ExprKind::RrtWrap: out += 'q'; break;
  }
  out += std::to_string(e->name.size());
  out += ':';
  out += e->name;
  if (!e->args.empty()) {
    out += '(';
    for (const auto& a : e->args) key_rec(a, out);
    out += ')';
  }
}

}  // namespace

std::string expr_key(const ExprPtr& e) {
  std::string out;
  out.reserve(64);
  key_rec(e, out);
  return out;
}

// ---- positions ----

namespace {

void positions_rec(const ExprPtr& e, Path& here, std::vector<Position>& out) {
  for (size_t i = 0; i < e->args.size(); ++i) {
    here.push_back(static_cast<int>(i));
    positions_rec(e->args[i], here, out);
    here.pop_back();
  }
  out.push_back({here, e});
}

}  // namespace

std::vector<Position> positions_postorder(const ExprPtr& e) {
  std::vector<Position> out;
  Path here;
  positions_rec(e, here, out);
  return out;
}

ExprPtr subterm_at(const ExprPtr& e, const Path& p) {
  ExprPtr cur = e;
  for (int i : p) {
    if (i < 0 || static_cast<size_t>(i) >= cur->args.size())
      throw MalformedError("position out of range");
    cur = cur->args[i];
  }
  return cur;
}

namespace {

ExprPtr replace_rec(const ExprPtr& e, const Path& p, size_t depth, const ExprPtr& sub) {
  if (depth == p.size()) return sub;
  int i = p[depth];
  if (i < 0 || static_cast<size_t>(i) >= e->args.size())
    throw MalformedError("position out of range");
  auto copy = std::make_shared<Expr>(*e);
  copy->args[i] = replace_rec(e->args[i], p, depth + 1, sub);
  return copy;
}

}  // namespace

ExprPtr replace_at(const ExprPtr& e, const Path& p, const ExprPtr& sub) {
  return replace_rec(e, p, 0, sub);
}

std::string path_to_string(const Path& p) {
  if (p.empty()) return "e";
  std::string out;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(p[i] + 1);
  }
  return out;
}

// ---- symbols ----

void SymbolTable::declare(const std::string& name, SymbolKind kind, int arity) {
  auto it = table_.find(name);
  if (it == table_.end()) {
    table_.emplace(name, SymbolInfo{name, kind, arity});
    return;
  }
  const SymbolInfo& have = it->second;
  if (have.kind != kind)
    throw LoadError("symbol '" + name + "' used both as a " +
                    (have.kind == SymbolKind::Function ? "function" : "constructor") +
                    " and as a " + (kind == SymbolKind::Function ? "function" : "constructor"));
  if (have.arity != arity)
    throw LoadError("inconsistent arity for '" + name + "': " + std::to_string(have.arity) +
                    " vs " + std::to_string(arity));
}

const SymbolInfo* SymbolTable::lookup(const std::string& name) const {
  auto it = table_.find(name);
  return it == table_.end() ? nullptr : &it->second;
}

bool SymbolTable::is_function(const std::string& name) const {
  const SymbolInfo* s = lookup(name);
  return s && s->kind == SymbolKind::Function;
}

bool SymbolTable::is_constructor(const std::string& name) const {
  const SymbolInfo* s = lookup(name);
  return s && s->kind == SymbolKind::Constructor;
}

std::vector<const Rule*> Program::rules_for(const std::string& fn) const {
  std::vector<const Rule*> out;
  for (const Rule& r : rules)
    if (r.fn == fn) out.push_back(&r);
  return out;
}

// ---- substitutions ----

void Subst::bind(const std::string& var, ExprPtr e) { m_[var] = std::move(e); }

const ExprPtr* Subst::lookup(const std::string& var) const {
  auto it = m_.find(var);
  return it == m_.end() ? nullptr : &it->second;
}

// ---- classification ----

namespace {

bool rtc_rec(const ExprPtr& e, bool allow_bottom, bool strict) {
  switch (e->kind) {
    case ExprKind::Var:
      return true;
    case ExprKind::Bottom:
      return allow_bottom;
    case ExprKind::CApp:
      break;
    case ExprKind::FApp:
      if (!e->rt_flag) return false;
      break;
    case ExprKind::Let:
    case ExprKind::RtWrap:
    case ExprKind::RrtWrap:
      if (strict) throw MalformedError("is_rtcterm: let or annotation node encountered");
      return false;
  }
  for (const auto& a : e->args)
    if (!rtc_rec(a, allow_bottom, strict)) return false;
  return true;
}

}  // namespace

bool is_rtcterm(const ExprPtr& e, bool allow_bottom) { return rtc_rec(e, allow_bottom, true); }

bool is_rtcterm_lenient(const ExprPtr& e, bool allow_bottom) {
  return rtc_rec(e, allow_bottom, false);
}

bool is_cterm(const ExprPtr& e) {
  if (e->kind == ExprKind::Var) return true;
  if (e->kind != ExprKind::CApp) return false;
  for (const auto& a : e->args)
    if (!is_cterm(a)) return false;
  return true;
}

bool is_partial_value(const ExprPtr& e) {
  if (e->kind == ExprKind::Var || e->kind == ExprKind::Bottom) return true;
  if (e->kind != ExprKind::CApp) return false;
  for (const auto& a : e->args)
    if (!is_partial_value(a)) return false;
  return true;
}

bool is_ground(const ExprPtr& e) { return free_vars(e).empty(); }

namespace {

bool contains_kind(const ExprPtr& e, ExprKind k) {
  if (e->kind == k) return true;
  for (const auto& a : e->args)
    if (contains_kind(a, k)) return true;
  return false;
}

}  // namespace

bool contains_bottom(const ExprPtr& e) { return contains_kind(e, ExprKind::Bottom); }
bool contains_let(const ExprPtr& e) { return contains_kind(e, ExprKind::Let); }
bool contains_surface_annotations(const ExprPtr& e) {
  return contains_kind(e, ExprKind::RtWrap) || contains_kind(e, ExprKind::RrtWrap);
}

// ---- matching ----

namespace {

bool match_one(const ExprPtr& pat, const ExprPtr& arg, bool allow_bottom, bool plain, Subst& s) {
  switch (pat->kind) {
    case ExprKind::Var: {
      if (!plain && !is_rtcterm_lenient(arg, allow_bottom)) return false;
      if (const ExprPtr* prev = s.lookup(pat->name)) return expr_equal(*prev, arg);
      s.bind(pat->name, arg);
      return true;
    }
    case ExprKind::CApp: {
      if (arg->kind != ExprKind::CApp || arg->name != pat->name ||
          arg->args.size() != pat->args.size())
        return false;
      for (size_t i = 0; i < pat->args.size(); ++i)
        if (!match_one(pat->args[i], arg->args[i], allow_bottom, plain, s)) return false;
      return true;
    }
    default:
      throw MalformedError("pattern must be a variable or constructor application");
  }
}

std::optional<Subst> match_all(const std::vector<ExprPtr>& params,
                               const std::vector<ExprPtr>& args, bool allow_bottom, bool plain) {
  if (params.size() != args.size())
    throw MalformedError("match: arity mismatch between patterns and arguments");
  Subst s;
  for (size_t i = 0; i < params.size(); ++i)
    if (!match_one(params[i], args[i], allow_bottom, plain, s)) return std::nullopt;
  return s;
}

}  // namespace

std::optional<Subst> match_params(const std::vector<ExprPtr>& params,
                                  const std::vector<ExprPtr>& args, bool allow_bottom) {
  return match_all(params, args, allow_bottom, false);
}

std::optional<Subst> match_plain(const std::vector<ExprPtr>& params,
                                 const std::vector<ExprPtr>& args) {
  return match_all(params, args, false, true);
}

// ---- substitution ----

namespace {

ExprPtr subst_rec(const ExprPtr& e, const std::map<std::string, ExprPtr>& m) {
  if (m.empty()) return e;
  switch (e->kind) {
    case ExprKind::Var: {
      auto it = m.find(e->name);
      return it == m.end() ? e : it->second;
    }
    case ExprKind::Bottom:
      return e;
    case ExprKind::Let: {
      ExprPtr b = subst_rec(e->bound(), m);
      auto m2 = m;
      m2.erase(e->name);
      if (m2.empty()) return Expr::let_in(e->name, b, e->body());

      // The binder captures an image only when some substituted variable is
      // free in the body and its image mentions the binder's name.
      std::set<std::string> body_fv = free_vars(e->body());
      bool capture = false;
      std::set<std::string> avoid;
      for (const auto& [v, img] : m2) {
        if (!body_fv.count(v)) continue;
        std::set<std::string> ifv = free_vars(img);
        if (ifv.count(e->name)) capture = true;
        avoid.insert(ifv.begin(), ifv.end());
      }
      if (!capture) return Expr::let_in(e->name, b, subst_rec(e->body(), m2));

      for (const auto& [v, img] : m2) avoid.insert(v);
      std::set<std::string> av = all_vars(e->body());
      avoid.insert(av.begin(), av.end());
      avoid.insert(e->name);
      std::string fresh = fresh_var(e->name, avoid);
      m2[e->name] = Expr::var(fresh);
      return Expr::let_in(fresh, b, subst_rec(e->body(), m2));
    }
    default: {
      bool changed = false;
      std::vector<ExprPtr> as;
      as.reserve(e->args.size());
      for (const auto& a : e->args) {
        ExprPtr a2 = subst_rec(a, m);
        changed |= a2.get() != a.get();
        as.push_back(std::move(a2));
      }
      if (!changed) return e;
      auto copy = std::make_shared<Expr>(*e);
      copy->args = std::move(as);
      return copy;
    }
  }
}

}  // namespace

ExprPtr apply_subst(const ExprPtr& e, const Subst& s) { return subst_rec(e, s.bindings()); }

// ---- shells and approximation ----

ExprPtr shell(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Var:
      return e;
    case ExprKind::Bottom:
    case ExprKind::FApp:
      return Expr::bottom();
    case ExprKind::CApp: {
      std::vector<ExprPtr> as;
      as.reserve(e->args.size());
      for (const auto& a : e->args) as.push_back(shell(a));
      return Expr::capp(e->name, std::move(as));
    }
    default:
      throw MalformedError("shell: let or annotation node encountered");
  }
}

bool leq_approx(const ExprPtr& t1, const ExprPtr& t2) {
  if (t1->kind == ExprKind::Bottom) return true;
  if (t1->kind != t2->kind || t1->name != t2->name || t1->rt_flag != t2->rt_flag ||
      t1->args.size() != t2->args.size())
    return false;
  for (size_t i = 0; i < t1->args.size(); ++i)
    if (!leq_approx(t1->args[i], t2->args[i])) return false;
  return true;
}

// ---- variables ----

namespace {

void free_vars_rec(const ExprPtr& e, std::set<std::string>& scope_hidden,
                   std::set<std::string>& out) {
  switch (e->kind) {
    case ExprKind::Var:
      if (!scope_hidden.count(e->name)) out.insert(e->name);
      return;
    case ExprKind::Let: {
      free_vars_rec(e->bound(), scope_hidden, out);
      bool added = scope_hidden.insert(e->name).second;
      free_vars_rec(e->body(), scope_hidden, out);
      if (added) scope_hidden.erase(e->name);
      return;
    }
    default:
      for (const auto& a : e->args) free_vars_rec(a, scope_hidden, out);
  }
}

void bound_vars_rec(const ExprPtr& e, std::set<std::string>& out) {
  if (e->kind == ExprKind::Let) out.insert(e->name);
  for (const auto& a : e->args) bound_vars_rec(a, out);
}

}  // namespace

std::set<std::string> free_vars(const ExprPtr& e) {
  std::set<std::string> hidden, out;
  free_vars_rec(e, hidden, out);
  return out;
}

std::set<std::string> bound_vars(const ExprPtr& e) {
  std::set<std::string> out;
  bound_vars_rec(e, out);
  return out;
}

std::set<std::string> all_vars(const ExprPtr& e) {
  std::set<std::string> out = free_vars(e);
  bound_vars_rec(e, out);
  return out;
}

// ---- alpha normalization ----

namespace {

ExprPtr alpha_rec(const ExprPtr& e, const std::map<std::string, std::string>& env, int& counter,
                  const std::set<std::string>& avoid) {
  switch (e->kind) {
    case ExprKind::Var: {
      auto it = env.find(e->name);
      return it == env.end() ? e : Expr::var(it->second);
    }
    case ExprKind::Let: {
      std::string cand;
      do {
        cand = "_" + std::to_string(counter++);
      } while (avoid.count(cand));
      ExprPtr b = alpha_rec(e->bound(), env, counter, avoid);
      auto env2 = env;
      env2[e->name] = cand;
      ExprPtr body = alpha_rec(e->body(), env2, counter, avoid);
      return Expr::let_in(cand, b, body);
    }
    default: {
      if (e->args.empty()) return e;
      std::vector<ExprPtr> as;
      as.reserve(e->args.size());
      for (const auto& a : e->args) as.push_back(alpha_rec(a, env, counter, avoid));
      auto copy = std::make_shared<Expr>(*e);
      copy->args = std::move(as);
      return copy;
    }
  }
}

}  // namespace

ExprPtr alpha_normalize(const ExprPtr& e) {
  std::set<std::string> avoid = free_vars(e);
  int counter = 0;
  return alpha_rec(e, {}, counter, avoid);
}

std::string fresh_var(const std::string& hint, const std::set<std::string>& avoid) {
  if (!avoid.count(hint)) return hint;
  for (int i = 1;; ++i) {
    std::string cand = hint + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

}  // namespace flp
