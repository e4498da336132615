#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "flp/errors.hpp"

namespace flp {

// First-order expressions. One node type covers every phase:
//
//   Var     variable
//   CApp    constructor application c(e1, ..., en)
//   FApp    function application f(e1, ..., en); rt_flag marks f^rt, the
//           run-time-choice variant that parameter passing may copy
//   Let     let X = e1 in e2, the explicit sharing form used by the
//           let-rewriting engine
//   Bottom  the undefined value, written _|_
//   RtWrap  surface annotation rt(e); removed by desugaring
//   RrtWrap surface annotation rrt(e); removed by desugaring
//
// Nodes are immutable and shared; subterm replacement rebuilds the spine.
enum class ExprKind { Var, CApp, FApp, Let, Bottom, RtWrap, RrtWrap };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind;
  std::string name;  // Var: variable; CApp/FApp: symbol; Let: binder
  bool rt_flag = false;
  std::vector<ExprPtr> args;  // CApp/FApp: arguments; Let: {bound, body};
                              // RtWrap/RrtWrap: {inner}

  static ExprPtr var(std::string n);
  static ExprPtr capp(std::string c, std::vector<ExprPtr> as = {});
  static ExprPtr fapp(std::string f, bool rt, std::vector<ExprPtr> as = {});
  static ExprPtr let_in(std::string v, ExprPtr bound, ExprPtr body);
  static ExprPtr bottom();
  static ExprPtr rt_wrap(ExprPtr e);
  static ExprPtr rrt_wrap(ExprPtr e);

  const ExprPtr& bound() const { return args[0]; }  // Let only
  const ExprPtr& body() const { return args[1]; }   // Let only
  const ExprPtr& inner() const { return args[0]; }  // RtWrap/RrtWrap only
};

bool expr_equal(const ExprPtr& a, const ExprPtr& b);
int expr_compare(const ExprPtr& a, const ExprPtr& b);  // total order

// Injective string encoding, used as a hash/memo key.
std::string expr_key(const ExprPtr& e);

struct ExprLess {
  bool operator()(const ExprPtr& a, const ExprPtr& b) const {
    return expr_compare(a, b) < 0;
  }
};
using ExprSet = std::set<ExprPtr, ExprLess>;

// ---- positions ----
//
// A path is a sequence of 0-based child indices; {} addresses the root.
// For Let nodes, index 0 is the bound expression and 1 the body.
using Path = std::vector<int>;

struct Position {
  Path path;
  ExprPtr sub;
};

// All positions, children before parents, left to right (post-order).
std::vector<Position> positions_postorder(const ExprPtr& e);
ExprPtr subterm_at(const ExprPtr& e, const Path& p);
ExprPtr replace_at(const ExprPtr& e, const Path& p, const ExprPtr& sub);
std::string path_to_string(const Path& p);  // "e" for the root, else "1.2"

// ---- signatures and programs ----

enum class SymbolKind { Constructor, Function };

struct SymbolInfo {
  std::string name;
  SymbolKind kind;
  int arity;
};

class SymbolTable {
 public:
  // Registers a symbol, or checks consistency if it is already present.
  // A name is never both a constructor and a function, and arity is fixed.
  void declare(const std::string& name, SymbolKind kind, int arity);
  const SymbolInfo* lookup(const std::string& name) const;
  bool is_function(const std::string& name) const;
  bool is_constructor(const std::string& name) const;
  const std::map<std::string, SymbolInfo>& all() const { return table_; }

 private:
  std::map<std::string, SymbolInfo> table_;
};

// One program rule f(p1, ..., pn) -> r. Parameters are linear c-term
// patterns; the right-hand side contains no let and no variables beyond
// the pattern variables. Loading enforces both.
struct Rule {
  std::string fn;
  std::vector<ExprPtr> params;
  ExprPtr rhs;
};

struct Program {
  std::vector<Rule> rules;  // source order; alternatives of one function
                            // are tried in this order everywhere
  SymbolTable symbols;

  std::vector<const Rule*> rules_for(const std::string& fn) const;
};

// ---- substitutions ----

class Subst {
 public:
  Subst() = default;
  void bind(const std::string& var, ExprPtr e);
  const ExprPtr* lookup(const std::string& var) const;
  bool empty() const { return m_.empty(); }
  size_t size() const { return m_.size(); }
  const std::map<std::string, ExprPtr>& bindings() const { return m_; }

 private:
  std::map<std::string, ExprPtr> m_;
};

// ---- classification ----

// Is e an rt-c-term: a variable, a constructor application of rt-c-terms,
// or an rt-flagged function application of rt-c-terms? With allow_bottom,
// _|_ is also accepted. These are exactly the terms that parameter passing
// may copy. Throws MalformedError on let or surface annotation nodes.
bool is_rtcterm(const ExprPtr& e, bool allow_bottom);

// Same check, but let/annotation nodes simply fail it instead of throwing.
// The let-rewriting engine uses this as the (Bind) guard, where a let-bound
// let is a legitimate non-c-term.
bool is_rtcterm_lenient(const ExprPtr& e, bool allow_bottom);

bool is_cterm(const ExprPtr& e);         // variables and constructors only
bool is_partial_value(const ExprPtr& e); // c-term possibly containing _|_
bool is_ground(const ExprPtr& e);        // no free variables
bool contains_bottom(const ExprPtr& e);
bool contains_let(const ExprPtr& e);
bool contains_surface_annotations(const ExprPtr& e);

// ---- matching and substitution ----

// Matches linear patterns against arguments position-wise. A variable
// pattern only binds an argument that is an rt-c-term (with _|_ permitted
// iff allow_bottom); a constructor pattern requires the same constructor.
// Returns nullopt on mismatch. Length mismatch is a MalformedError.
std::optional<Subst> match_params(const std::vector<ExprPtr>& params,
                                  const std::vector<ExprPtr>& args,
                                  bool allow_bottom);

// Plain syntactic matching with no condition on variable images. This is
// classical rewriting's notion, used only by the ordinary-rewriting oracle.
std::optional<Subst> match_plain(const std::vector<ExprPtr>& params,
                                 const std::vector<ExprPtr>& args);

// Simultaneous, capture-avoiding substitution. Let binders are renamed
// (via fresh_var) only when an image would otherwise be captured.
ExprPtr apply_subst(const ExprPtr& e, const Subst& s);

// ---- shells and the approximation order ----

// |e|: every function-rooted subterm collapses to _|_. The shell is the
// constructor skeleton an expression already exhibits. Throws on let.
ExprPtr shell(const ExprPtr& e);

// t1 is at most as defined as t2: _|_ below everything, variables below
// themselves, constructors compared pointwise.
bool leq_approx(const ExprPtr& t1, const ExprPtr& t2);

// ---- variables ----

std::set<std::string> free_vars(const ExprPtr& e);
std::set<std::string> bound_vars(const ExprPtr& e);
std::set<std::string> all_vars(const ExprPtr& e);

// Canonical renaming of let binders (preorder, _0, _1, ...). Free variables
// are untouched. Idempotent; alpha-equivalent expressions map to equal ones.
ExprPtr alpha_normalize(const ExprPtr& e);

// First of hint, hint1, hint2, ... not in avoid.
std::string fresh_var(const std::string& hint,
                      const std::set<std::string>& avoid);

}  // namespace flp
