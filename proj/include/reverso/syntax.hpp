#pragma once

// Abstract syntax, concrete grammar, and static checks for the while-language
// and its parallel/annotated dialects.
//
// The AST is value-semantic: statements own their sub-programs, expressions
// are immutable trees shared through shared_ptr<const ...>. Everything here
// is a pure function over those values.
//
// Concrete grammar (ASCII rendering of the usual notation):
//
//   program   := { stmt }
//   stmt      := "skip" term
//              | NAME "=" aexp term
//              | NAME ("+=" | "-=") aexp term
//              | "push" "(" "sigma" "(" NAME ")" "," "delta" "(" NAME ")" ")" term
//              | "push" "(" ("T"|"F") "," "delta" "(" ("B"|"W") ")" ")" term
//              | "if" bexp "then" program "else" program "end" [";"]
//              | "while" bexp "do" program "end" [";"]
//              | operand "par" operand { "par" operand } term
//   operand   := "(" program ")" | simple-stmt        (simple = skip/assign/push)
//   aexp      := aterm { ("+" | "-") aterm }
//   aterm     := NAME | INT | "(" aexp ")" | "pop" "(" "delta" "(" NAME ")" ")"
//   bexp      := bterm { ("&&" | "==") bterm }
//   bterm     := "!" bterm | batom
//   batom     := "T" | "F" | "pop" "(" "delta" "(" ("B"|"W") ")" ")"
//              | "(" bexp ")" | aexp ("==" | ">") aexp
//   term      := ";"    (optional immediately before "else", "end", ")", EOF)
//
// The annotated dialect additionally allows an identifier stack suffix
// "[i1,i2,...]" (head leftmost, possibly empty "[]") on skip/assignment
// statements, and restricts statements to skip/assignments/par.
//
// "//" starts a line comment. The parser is grammar-permissive: it accepts
// push/pop and par everywhere; dialect legality is enforced separately so
// that transformed programs can be parsed back in.

#include <cctype>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "reverso/errors.hpp"
#include "reverso/types.hpp"

namespace reverso {

// ---------------------------------------------------------------------------
// AST
// ---------------------------------------------------------------------------

struct SrcLoc {
  int line = 0;
  int col = 0;
};

struct AExp;
using AExpPtr = std::shared_ptr<const AExp>;

enum class ArithOp { Add, Sub };

struct AExp {
  struct Var {
    VarName name;
  };
  struct Lit {
    Int value;
  };
  struct Paren {
    AExpPtr inner;
  };
  struct Bin {
    ArithOp op;
    AExpPtr lhs;
    AExpPtr rhs;
  };
  // pop(delta(X)) in arithmetic position; evaluating it consumes the head of
  // X's auxiliary stack. Occurs only in inverted programs.
  struct Pop {
    VarName stack;
  };
  std::variant<Var, Lit, Paren, Bin, Pop> node;
};

struct BExp;
using BExpPtr = std::shared_ptr<const BExp>;

enum class CmpOp { Eq, Gt };     // between arithmetic expressions
enum class BoolOp { And, Eq };   // between Boolean expressions

struct BExp {
  struct Lit {
    bool value;
  };
  struct Not {
    BExpPtr inner;
  };
  struct Paren {
    BExpPtr inner;
  };
  struct Cmp {
    CmpOp op;
    AExpPtr lhs;
    AExpPtr rhs;
  };
  struct Bin {
    BoolOp op;
    BExpPtr lhs;
    BExpPtr rhs;
  };
  // pop(delta(B)) / pop(delta(W)); occurs only in inverted programs.
  struct Pop {
    FlagStack stack;
  };
  std::variant<Lit, Not, Paren, Cmp, Bin, Pop> node;
};

enum class CopKind { PlusEq, MinusEq };

struct Stmt;

struct Program {
  std::vector<Stmt> stmts;
};

struct Stmt {
  struct Skip {};
  struct DestAssign {
    VarName target;
    AExpPtr rhs;
  };
  struct ConstAssign {
    VarName target;
    CopKind op;
    AExpPtr rhs;
  };
  struct If {
    BExpPtr cond;
    Program then_body;
    Program else_body;
  };
  struct While {
    BExpPtr cond;
    Program body;
  };
  struct Par {
    Program left;
    Program right;
  };
  // push(sigma(X), delta(X)). `value` is Var(name) in source form; during
  // execution it reduces to a literal before the push fires.
  struct PushVar {
    VarName name;
    AExpPtr value;
  };
  // push(T, delta(B)) / push(F, delta(W)).
  struct PushFlag {
    FlagStack stack;
    BExpPtr value;
  };

  std::variant<Skip, DestAssign, ConstAssign, If, While, Par, PushVar, PushFlag>
      node;
  SrcLoc loc;
};

// Annotated dialect: statements carry an identifier stack (head first).
using IdStack = std::vector<Identifier>;

struct AnnStmt;

struct AnnProgram {
  std::vector<AnnStmt> stmts;
};

struct AnnStmt {
  struct Par {
    AnnProgram left;
    AnnProgram right;
  };
  // par carries no stack of its own; `ids` is meaningful for the other three.
  std::variant<Stmt::Skip, Stmt::DestAssign, Stmt::ConstAssign, Par> node;
  IdStack ids;
  SrcLoc loc;
};

// Strong wrappers handed out by the transforms, so that e.g. an augmented
// program cannot be passed where an original is required.
struct AugmentedProgram {
  Program program;
};
struct InvertedProgram {
  Program program;
};
struct AnnInvertedProgram {
  AnnProgram program;
};

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

inline AExpPtr mk_var(VarName n) {
  return std::make_shared<AExp>(AExp{AExp::Var{std::move(n)}});
}
inline AExpPtr mk_int(Int v) {
  return std::make_shared<AExp>(AExp{AExp::Lit{std::move(v)}});
}
inline AExpPtr mk_paren(AExpPtr e) {
  return std::make_shared<AExp>(AExp{AExp::Paren{std::move(e)}});
}
inline AExpPtr mk_bin(ArithOp op, AExpPtr l, AExpPtr r) {
  return std::make_shared<AExp>(AExp{AExp::Bin{op, std::move(l), std::move(r)}});
}
inline AExpPtr mk_pop_var(VarName stack) {
  return std::make_shared<AExp>(AExp{AExp::Pop{std::move(stack)}});
}

inline BExpPtr mk_bool(bool v) {
  return std::make_shared<BExp>(BExp{BExp::Lit{v}});
}
inline BExpPtr mk_not(BExpPtr e) {
  return std::make_shared<BExp>(BExp{BExp::Not{std::move(e)}});
}
inline BExpPtr mk_bparen(BExpPtr e) {
  return std::make_shared<BExp>(BExp{BExp::Paren{std::move(e)}});
}
inline BExpPtr mk_cmp(CmpOp op, AExpPtr l, AExpPtr r) {
  return std::make_shared<BExp>(BExp{BExp::Cmp{op, std::move(l), std::move(r)}});
}
inline BExpPtr mk_bbin(BoolOp op, BExpPtr l, BExpPtr r) {
  return std::make_shared<BExp>(BExp{BExp::Bin{op, std::move(l), std::move(r)}});
}
inline BExpPtr mk_pop_flag(FlagStack s) {
  return std::make_shared<BExp>(BExp{BExp::Pop{s}});
}

inline Stmt st_skip(SrcLoc loc = {}) { return Stmt{Stmt::Skip{}, loc}; }
inline Stmt st_assign(VarName t, AExpPtr rhs, SrcLoc loc = {}) {
  return Stmt{Stmt::DestAssign{std::move(t), std::move(rhs)}, loc};
}
inline Stmt st_cassign(VarName t, CopKind op, AExpPtr rhs, SrcLoc loc = {}) {
  return Stmt{Stmt::ConstAssign{std::move(t), op, std::move(rhs)}, loc};
}
inline Stmt st_if(BExpPtr c, Program t, Program e, SrcLoc loc = {}) {
  return Stmt{Stmt::If{std::move(c), std::move(t), std::move(e)}, loc};
}
inline Stmt st_while(BExpPtr c, Program b, SrcLoc loc = {}) {
  return Stmt{Stmt::While{std::move(c), std::move(b)}, loc};
}
inline Stmt st_par(Program l, Program r, SrcLoc loc = {}) {
  return Stmt{Stmt::Par{std::move(l), std::move(r)}, loc};
}
inline Stmt st_push_var(const VarName& name, SrcLoc loc = {}) {
  return Stmt{Stmt::PushVar{name, mk_var(name)}, loc};
}
inline Stmt st_push_flag(FlagStack s, bool value, SrcLoc loc = {}) {
  return Stmt{Stmt::PushFlag{s, mk_bool(value)}, loc};
}

inline const char* cop_text(CopKind k) {
  return k == CopKind::PlusEq ? "+=" : "-=";
}

// ---------------------------------------------------------------------------
// Structural equality (ignores source locations; compares annotated id stacks)
// ---------------------------------------------------------------------------

bool equal(const AExpPtr& a, const AExpPtr& b);
bool equal(const BExpPtr& a, const BExpPtr& b);
bool operator==(const Program& a, const Program& b);
bool operator==(const Stmt& a, const Stmt& b);
bool operator==(const AnnProgram& a, const AnnProgram& b);
bool operator==(const AnnStmt& a, const AnnStmt& b);

inline bool equal(const AExpPtr& a, const AExpPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, AExp::Var>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, AExp::Lit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, AExp::Paren>) {
          return equal(x.inner, y.inner);
        } else if constexpr (std::is_same_v<T, AExp::Bin>) {
          return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
        } else {
          return x.stack == y.stack;
        }
      },
      a->node);
}

inline bool equal(const BExpPtr& a, const BExpPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, BExp::Lit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, BExp::Not> ||
                             std::is_same_v<T, BExp::Paren>) {
          return equal(x.inner, y.inner);
        } else if constexpr (std::is_same_v<T, BExp::Cmp>) {
          return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, BExp::Bin>) {
          return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
        } else {
          return x.stack == y.stack;
        }
      },
      a->node);
}

inline bool operator==(const Program& a, const Program& b) {
  if (a.stmts.size() != b.stmts.size()) return false;
  for (size_t i = 0; i < a.stmts.size(); ++i)
    if (!(a.stmts[i] == b.stmts[i])) return false;
  return true;
}

inline bool operator==(const Stmt& a, const Stmt& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Stmt::Skip>) {
          return true;
        } else if constexpr (std::is_same_v<T, Stmt::DestAssign>) {
          return x.target == y.target && equal(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, Stmt::ConstAssign>) {
          return x.target == y.target && x.op == y.op && equal(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          return equal(x.cond, y.cond) && x.then_body == y.then_body &&
                 x.else_body == y.else_body;
        } else if constexpr (std::is_same_v<T, Stmt::While>) {
          return equal(x.cond, y.cond) && x.body == y.body;
        } else if constexpr (std::is_same_v<T, Stmt::Par>) {
          return x.left == y.left && x.right == y.right;
        } else if constexpr (std::is_same_v<T, Stmt::PushVar>) {
          return x.name == y.name && equal(x.value, y.value);
        } else {
          return x.stack == y.stack && equal(x.value, y.value);
        }
      },
      a.node);
}

inline bool operator==(const AnnProgram& a, const AnnProgram& b) {
  if (a.stmts.size() != b.stmts.size()) return false;
  for (size_t i = 0; i < a.stmts.size(); ++i)
    if (!(a.stmts[i] == b.stmts[i])) return false;
  return true;
}

inline bool operator==(const AnnStmt& a, const AnnStmt& b) {
  if (a.ids != b.ids) return false;
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Stmt::Skip>) {
          return true;
        } else if constexpr (std::is_same_v<T, Stmt::DestAssign>) {
          return x.target == y.target && equal(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, Stmt::ConstAssign>) {
          return x.target == y.target && x.op == y.op && equal(x.rhs, y.rhs);
        } else {
          return x.left == y.left && x.right == y.right;
        }
      },
      a.node);
}

// ---------------------------------------------------------------------------
// Unannotated view of an annotated program (record entries, oracles)
// ---------------------------------------------------------------------------

inline Program strip_annotations(const AnnProgram& p);

inline Stmt strip_annotations(const AnnStmt& s) {
  return std::visit(
      [&](const auto& x) -> Stmt {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Stmt::Skip>) {
          return st_skip(s.loc);
        } else if constexpr (std::is_same_v<T, Stmt::DestAssign>) {
          return Stmt{Stmt::DestAssign{x.target, x.rhs}, s.loc};
        } else if constexpr (std::is_same_v<T, Stmt::ConstAssign>) {
          return Stmt{Stmt::ConstAssign{x.target, x.op, x.rhs}, s.loc};
        } else {
          return st_par(strip_annotations(x.left), strip_annotations(x.right),
                        s.loc);
        }
      },
      s.node);
}

inline Program strip_annotations(const AnnProgram& p) {
  Program out;
  out.stmts.reserve(p.stmts.size());
  for (const auto& s : p.stmts) out.stmts.push_back(strip_annotations(s));
  return out;
}

// ---------------------------------------------------------------------------
// Traversals: variables, mentions, push/pop scans, counts
// ---------------------------------------------------------------------------

// Does the arithmetic expression read the given variable (through any
// nesting, including a pop of its stack)?
inline bool mentions(const AExpPtr& e, const VarName& v) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, AExp::Var>) return x.name == v;
        else if constexpr (std::is_same_v<T, AExp::Paren>) return mentions(x.inner, v);
        else if constexpr (std::is_same_v<T, AExp::Bin>)
          return mentions(x.lhs, v) || mentions(x.rhs, v);
        else if constexpr (std::is_same_v<T, AExp::Pop>) return x.stack == v;
        else return false;
      },
      e->node);
}

namespace detail {

inline bool aexp_has_pop(const AExpPtr& e) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, AExp::Paren>) return aexp_has_pop(x.inner);
        else if constexpr (std::is_same_v<T, AExp::Bin>)
          return aexp_has_pop(x.lhs) || aexp_has_pop(x.rhs);
        else if constexpr (std::is_same_v<T, AExp::Pop>) return true;
        else return false;
      },
      e->node);
}

inline bool bexp_has_pop(const BExpPtr& e) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BExp::Not> ||
                      std::is_same_v<T, BExp::Paren>)
          return bexp_has_pop(x.inner);
        else if constexpr (std::is_same_v<T, BExp::Cmp>)
          return aexp_has_pop(x.lhs) || aexp_has_pop(x.rhs);
        else if constexpr (std::is_same_v<T, BExp::Bin>)
          return bexp_has_pop(x.lhs) || bexp_has_pop(x.rhs);
        else if constexpr (std::is_same_v<T, BExp::Pop>)
          return true;
        else
          return false;
      },
      e->node);
}

inline void scan_stmts(const Program& p, bool& has_push, bool& has_pop);

inline void scan_stmt(const Stmt& s, bool& has_push, bool& has_pop) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Stmt::DestAssign> ||
                      std::is_same_v<T, Stmt::ConstAssign>) {
          if (aexp_has_pop(x.rhs)) has_pop = true;
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          if (bexp_has_pop(x.cond)) has_pop = true;
          scan_stmts(x.then_body, has_push, has_pop);
          scan_stmts(x.else_body, has_push, has_pop);
        } else if constexpr (std::is_same_v<T, Stmt::While>) {
          if (bexp_has_pop(x.cond)) has_pop = true;
          scan_stmts(x.body, has_push, has_pop);
        } else if constexpr (std::is_same_v<T, Stmt::Par>) {
          scan_stmts(x.left, has_push, has_pop);
          scan_stmts(x.right, has_push, has_pop);
        } else if constexpr (std::is_same_v<T, Stmt::PushVar> ||
                             std::is_same_v<T, Stmt::PushFlag>) {
          has_push = true;
        } else {
          (void)x;
        }
      },
      s.node);
}

inline void scan_stmts(const Program& p, bool& has_push, bool& has_pop) {
  for (const auto& s : p.stmts) scan_stmt(s, has_push, has_pop);
}

}  // namespace detail

inline bool contains_push(const Program& p) {
  bool push = false, pop = false;
  detail::scan_stmts(p, push, pop);
  return push;
}

inline bool contains_pop(const Program& p) {
  bool push = false, pop = false;
  detail::scan_stmts(p, push, pop);
  return pop;
}

inline bool contains_par(const Program& p) {
  for (const auto& s : p.stmts) {
    if (std::holds_alternative<Stmt::Par>(s.node)) return true;
    if (const auto* i = std::get_if<Stmt::If>(&s.node)) {
      if (contains_par(i->then_body) || contains_par(i->else_body)) return true;
    } else if (const auto* w = std::get_if<Stmt::While>(&s.node)) {
      if (contains_par(w->body)) return true;
    }
  }
  return false;
}

// Number of statement nodes, counting compound statements as one plus their
// children (an if with a three-statement branch and a skip branch counts 5).
inline int stmt_count(const Program& p) {
  int n = 0;
  for (const auto& s : p.stmts) {
    n += 1;
    if (const auto* i = std::get_if<Stmt::If>(&s.node))
      n += stmt_count(i->then_body) + stmt_count(i->else_body);
    else if (const auto* w = std::get_if<Stmt::While>(&s.node))
      n += stmt_count(w->body);
    else if (const auto* par = std::get_if<Stmt::Par>(&s.node))
      n += stmt_count(par->left) + stmt_count(par->right);
  }
  return n;
}

inline int stmt_count(const AnnProgram& p) {
  return stmt_count(strip_annotations(p));
}

namespace detail {

inline void vars_of_aexp(const AExpPtr& e, std::vector<VarName>& order,
                         std::set<VarName>& seen);
inline void vars_of_program(const Program& p, std::vector<VarName>& order,
                            std::set<VarName>& seen);

inline void note_var(const VarName& v, std::vector<VarName>& order,
                     std::set<VarName>& seen) {
  if (is_reserved_name(v))
    throw ReservedNameError("reserved name used as a variable: " + v);
  if (seen.insert(v).second) order.push_back(v);
}

inline void vars_of_aexp(const AExpPtr& e, std::vector<VarName>& order,
                         std::set<VarName>& seen) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, AExp::Var>) {
          note_var(x.name, order, seen);
        } else if constexpr (std::is_same_v<T, AExp::Paren>) {
          vars_of_aexp(x.inner, order, seen);
        } else if constexpr (std::is_same_v<T, AExp::Bin>) {
          vars_of_aexp(x.lhs, order, seen);
          vars_of_aexp(x.rhs, order, seen);
        } else if constexpr (std::is_same_v<T, AExp::Pop>) {
          note_var(x.stack, order, seen);
        } else {
          (void)x;
        }
      },
      e->node);
}

inline void vars_of_bexp(const BExpPtr& e, std::vector<VarName>& order,
                         std::set<VarName>& seen) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BExp::Not> ||
                      std::is_same_v<T, BExp::Paren>) {
          vars_of_bexp(x.inner, order, seen);
        } else if constexpr (std::is_same_v<T, BExp::Cmp>) {
          vars_of_aexp(x.lhs, order, seen);
          vars_of_aexp(x.rhs, order, seen);
        } else if constexpr (std::is_same_v<T, BExp::Bin>) {
          vars_of_bexp(x.lhs, order, seen);
          vars_of_bexp(x.rhs, order, seen);
        } else {
          (void)x;
        }
      },
      e->node);
}

inline void vars_of_stmt(const Stmt& s, std::vector<VarName>& order,
                         std::set<VarName>& seen) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Stmt::DestAssign>) {
          note_var(x.target, order, seen);
          vars_of_aexp(x.rhs, order, seen);
        } else if constexpr (std::is_same_v<T, Stmt::ConstAssign>) {
          note_var(x.target, order, seen);
          vars_of_aexp(x.rhs, order, seen);
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          vars_of_bexp(x.cond, order, seen);
          vars_of_program(x.then_body, order, seen);
          vars_of_program(x.else_body, order, seen);
        } else if constexpr (std::is_same_v<T, Stmt::While>) {
          vars_of_bexp(x.cond, order, seen);
          vars_of_program(x.body, order, seen);
        } else if constexpr (std::is_same_v<T, Stmt::Par>) {
          vars_of_program(x.left, order, seen);
          vars_of_program(x.right, order, seen);
        } else if constexpr (std::is_same_v<T, Stmt::PushVar>) {
          note_var(x.name, order, seen);
          vars_of_aexp(x.value, order, seen);
        } else {
          (void)x;
        }
      },
      s.node);
}

inline void vars_of_program(const Program& p, std::vector<VarName>& order,
                            std::set<VarName>& seen) {
  for (const auto& s : p.stmts) vars_of_stmt(s, order, seen);
}

}  // namespace detail

// Variables referenced by the program, in order of first occurrence.
// The reserved stack names B and W may not be used as variables.
inline std::vector<VarName> variables_of(const Program& p) {
  std::vector<VarName> order;
  std::set<VarName> seen;
  detail::vars_of_program(p, order, seen);
  return order;
}

inline std::vector<VarName> variables_of(const AnnProgram& p) {
  return variables_of(strip_annotations(p));
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class TokKind {
  Ident, IntLit,
  KwSkip, KwIf, KwThen, KwElse, KwEnd, KwWhile, KwDo, KwPar,
  KwPush, KwPop, KwSigma, KwDelta, KwTrue, KwFalse,
  Semi, Comma, LParen, RParen, LBrack, RBrack,
  Assign, PlusEq, MinusEq, Plus, Minus, Greater, EqEq, AndAnd, Bang,
  Eof,
};

struct Token {
  TokKind kind;
  std::string text;
  Int value;  // IntLit only
  int line = 0;
  int col = 0;
};

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](TokKind k, std::string text, int l, int c) {
    out.push_back(Token{k, std::move(text), Int(0), l, c});
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++i; ++line; col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i; ++col;
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    int tl = line, tc = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      std::string word(src.substr(i, j - i));
      col += static_cast<int>(j - i);
      i = j;
      TokKind k = TokKind::Ident;
      if (word == "skip") k = TokKind::KwSkip;
      else if (word == "if") k = TokKind::KwIf;
      else if (word == "then") k = TokKind::KwThen;
      else if (word == "else") k = TokKind::KwElse;
      else if (word == "end") k = TokKind::KwEnd;
      else if (word == "while") k = TokKind::KwWhile;
      else if (word == "do") k = TokKind::KwDo;
      else if (word == "par") k = TokKind::KwPar;
      else if (word == "push") k = TokKind::KwPush;
      else if (word == "pop") k = TokKind::KwPop;
      else if (word == "sigma") k = TokKind::KwSigma;
      else if (word == "delta") k = TokKind::KwDelta;
      else if (word == "T") k = TokKind::KwTrue;
      else if (word == "F") k = TokKind::KwFalse;
      push(k, std::move(word), tl, tc);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      std::string digits(src.substr(i, j - i));
      col += static_cast<int>(j - i);
      i = j;
      out.push_back(Token{TokKind::IntLit, digits, Int(digits), tl, tc});
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < src.size() && src[i + 1] == b;
    };
    if (two('+', '=')) { push(TokKind::PlusEq, "+=", tl, tc); i += 2; col += 2; continue; }
    if (two('-', '=')) { push(TokKind::MinusEq, "-=", tl, tc); i += 2; col += 2; continue; }
    if (two('=', '=')) { push(TokKind::EqEq, "==", tl, tc); i += 2; col += 2; continue; }
    if (two('&', '&')) { push(TokKind::AndAnd, "&&", tl, tc); i += 2; col += 2; continue; }
    TokKind k;
    switch (c) {
      case ';': k = TokKind::Semi; break;
      case ',': k = TokKind::Comma; break;
      case '(': k = TokKind::LParen; break;
      case ')': k = TokKind::RParen; break;
      case '[': k = TokKind::LBrack; break;
      case ']': k = TokKind::RBrack; break;
      case '=': k = TokKind::Assign; break;
      case '+': k = TokKind::Plus; break;
      case '-': k = TokKind::Minus; break;
      case '>': k = TokKind::Greater; break;
      case '!': k = TokKind::Bang; break;
      default:
        throw SyntaxError(tl, tc, std::string("unexpected character '") + c + "'");
    }
    push(k, std::string(1, c), tl, tc);
    ++i; ++col;
  }
  out.push_back(Token{TokKind::Eof, "<eof>", Int(0), line, col});
  return out;
}

// Token-stream comparison: the "equal modulo whitespace and comments" notion
// used by golden tests (kinds and spellings must agree).
inline bool same_tokens(std::string_view a, std::string_view b) {
  auto ta = lex(a), tb = lex(b);
  if (ta.size() != tb.size()) return false;
  for (size_t i = 0; i < ta.size(); ++i)
    if (ta[i].kind != tb[i].kind || ta[i].text != tb[i].text) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace detail {

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program parse_program() {
    Program p = stmt_list({TokKind::Eof});
    expect(TokKind::Eof, "end of input");
    return p;
  }

  AnnProgram parse_annotated() {
    AnnProgram p = ann_stmt_list({TokKind::Eof});
    expect(TokKind::Eof, "end of input");
    return p;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;

  const Token& peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool check(TokKind k) const { return peek().kind == k; }
  bool accept(TokKind k) {
    if (check(k)) { ++pos_; return true; }
    return false;
  }
  const Token& expect(TokKind k, const std::string& what) {
    if (!check(k)) fail("expected " + what);
    return toks_[pos_++];
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw SyntaxError(t.line, t.col, msg + ", got '" + t.text + "'");
  }
  SrcLoc loc() const { return SrcLoc{peek().line, peek().col}; }

  static bool in(TokKind k, const std::set<TokKind>& s) { return s.count(k) > 0; }

  // A statement terminator: ";" (optional right before a closer).
  void terminator() {
    if (accept(TokKind::Semi)) return;
    switch (peek().kind) {
      case TokKind::KwElse:
      case TokKind::KwEnd:
      case TokKind::RParen:
      case TokKind::Eof:
        return;
      default:
        fail("expected ';'");
    }
  }

  // --- plain statements ----------------------------------------------------

  Program stmt_list(const std::set<TokKind>& stops) {
    Program p;
    while (!in(peek().kind, stops)) p.stmts.push_back(stmt());
    return p;
  }

  Stmt stmt() {
    SrcLoc l = loc();
    switch (peek().kind) {
      case TokKind::KwIf:    return if_stmt();
      case TokKind::KwWhile: return while_stmt();
      default: break;
    }
    bool was_paren = check(TokKind::LParen);
    Program left = par_operand();
    if (check(TokKind::KwPar)) {
      ++pos_;
      Program right = par_chain();
      Stmt s = st_par(std::move(left), std::move(right), l);
      terminator();
      return s;
    }
    if (was_paren)
      fail("a parenthesized program must be an operand of 'par'");
    Stmt s = std::move(left.stmts.front());
    terminator();
    return s;
  }

  // operand ["par" operand]... parsed right-associatively.
  Program par_chain() {
    SrcLoc l = loc();
    Program op = par_operand();
    if (accept(TokKind::KwPar)) {
      Program rest = par_chain();
      Program wrap;
      wrap.stmts.push_back(st_par(std::move(op), std::move(rest), l));
      return wrap;
    }
    return op;
  }

  Program par_operand() {
    if (accept(TokKind::LParen)) {
      Program p = stmt_list({TokKind::RParen});
      expect(TokKind::RParen, "')'");
      return p;
    }
    Program p;
    p.stmts.push_back(simple_stmt());
    return p;
  }

  // skip / assignment / push, without terminator.
  Stmt simple_stmt() {
    SrcLoc l = loc();
    if (accept(TokKind::KwSkip)) return st_skip(l);
    if (check(TokKind::KwPush)) return push_stmt();
    if (check(TokKind::KwPop))
      fail("'pop' is an expression, not a statement");
    if (check(TokKind::Ident)) {
      std::string target = toks_[pos_++].text;
      if (accept(TokKind::Assign))
        return st_assign(std::move(target), aexp(), l);
      if (accept(TokKind::PlusEq))
        return st_cassign(std::move(target), CopKind::PlusEq, aexp(), l);
      if (accept(TokKind::MinusEq))
        return st_cassign(std::move(target), CopKind::MinusEq, aexp(), l);
      fail("expected '=', '+=' or '-=' after variable");
    }
    fail("expected a statement");
  }

  Stmt push_stmt() {
    SrcLoc l = loc();
    expect(TokKind::KwPush, "'push'");
    expect(TokKind::LParen, "'('");
    if (accept(TokKind::KwSigma)) {
      // push(sigma(X), delta(X)): a variable saved into its own stack.
      expect(TokKind::LParen, "'('");
      std::string v = expect(TokKind::Ident, "variable name").text;
      expect(TokKind::RParen, "')'");
      expect(TokKind::Comma, "','");
      std::string s = delta_name();
      if (s != v)
        throw SyntaxError(l.line, l.col,
                          "push saves a variable into its own stack, got sigma(" +
                              v + ") vs delta(" + s + ")");
      expect(TokKind::RParen, "')'");
      return st_push_var(v, l);
    }
    bool val;
    if (accept(TokKind::KwTrue)) val = true;
    else if (accept(TokKind::KwFalse)) val = false;
    else fail("expected 'sigma(...)', 'T' or 'F' in push");
    expect(TokKind::Comma, "','");
    std::string s = delta_name();
    expect(TokKind::RParen, "')'");
    if (s == "B") return st_push_flag(FlagStack::B, val, l);
    if (s == "W") return st_push_flag(FlagStack::W, val, l);
    throw SyntaxError(l.line, l.col,
                      "Boolean push targets stack B or W, got delta(" + s + ")");
  }

  // delta "(" name ")" -> name (shared by push/pop forms).
  std::string delta_name() {
    expect(TokKind::KwDelta, "'delta'");
    expect(TokKind::LParen, "'('");
    std::string name;
    if (check(TokKind::Ident)) name = toks_[pos_++].text;
    else fail("expected a stack name inside delta(...)");
    expect(TokKind::RParen, "')'");
    return name;
  }

  Stmt if_stmt() {
    SrcLoc l = loc();
    expect(TokKind::KwIf, "'if'");
    BExpPtr c = bexp();
    expect(TokKind::KwThen, "'then'");
    Program t = stmt_list({TokKind::KwElse});
    expect(TokKind::KwElse, "'else'");
    Program e = stmt_list({TokKind::KwEnd});
    expect(TokKind::KwEnd, "'end'");
    accept(TokKind::Semi);
    return st_if(std::move(c), std::move(t), std::move(e), l);
  }

  Stmt while_stmt() {
    SrcLoc l = loc();
    expect(TokKind::KwWhile, "'while'");
    BExpPtr c = bexp();
    expect(TokKind::KwDo, "'do'");
    Program b = stmt_list({TokKind::KwEnd});
    expect(TokKind::KwEnd, "'end'");
    accept(TokKind::Semi);
    return st_while(std::move(c), std::move(b), l);
  }

  // --- annotated statements ------------------------------------------------

  AnnProgram ann_stmt_list(const std::set<TokKind>& stops) {
    AnnProgram p;
    while (!in(peek().kind, stops)) p.stmts.push_back(ann_stmt());
    return p;
  }

  AnnStmt ann_stmt() {
    SrcLoc l = loc();
    if (check(TokKind::KwIf) || check(TokKind::KwWhile))
      fail("the annotated dialect has skip, assignments and par only");
    bool was_paren = check(TokKind::LParen);
    AnnProgram left = ann_par_operand();
    if (check(TokKind::KwPar)) {
      ++pos_;
      AnnProgram right = ann_par_chain();
      AnnStmt s;
      s.node = AnnStmt::Par{std::move(left), std::move(right)};
      s.loc = l;
      terminator();
      return s;
    }
    if (was_paren)
      fail("a parenthesized program must be an operand of 'par'");
    AnnStmt s = std::move(left.stmts.front());
    terminator();
    return s;
  }

  AnnProgram ann_par_chain() {
    SrcLoc l = loc();
    AnnProgram op = ann_par_operand();
    if (accept(TokKind::KwPar)) {
      AnnProgram rest = ann_par_chain();
      AnnStmt s;
      s.node = AnnStmt::Par{std::move(op), std::move(rest)};
      s.loc = l;
      AnnProgram wrap;
      wrap.stmts.push_back(std::move(s));
      return wrap;
    }
    return op;
  }

  AnnProgram ann_par_operand() {
    if (accept(TokKind::LParen)) {
      AnnProgram p = ann_stmt_list({TokKind::RParen});
      expect(TokKind::RParen, "')'");
      return p;
    }
    AnnProgram p;
    p.stmts.push_back(ann_simple_stmt());
    return p;
  }

  AnnStmt ann_simple_stmt() {
    SrcLoc l = loc();
    if (check(TokKind::KwPush) || check(TokKind::KwPop))
      fail("push/pop do not occur in the annotated dialect");
    Stmt base = simple_stmt();
    AnnStmt s;
    s.loc = l;
    if (std::holds_alternative<Stmt::Skip>(base.node))
      s.node = Stmt::Skip{};
    else if (auto* d = std::get_if<Stmt::DestAssign>(&base.node))
      s.node = std::move(*d);
    else if (auto* c = std::get_if<Stmt::ConstAssign>(&base.node))
      s.node = std::move(*c);
    else
      fail("expected skip or an assignment");
    // Optional identifier stack, absent means empty.
    if (accept(TokKind::LBrack)) {
      if (!check(TokKind::RBrack)) {
        for (;;) {
          const Token& t = expect(TokKind::IntLit, "identifier");
          s.ids.push_back(t.value.convert_to<Identifier>());
          if (!accept(TokKind::Comma)) break;
        }
      }
      expect(TokKind::RBrack, "']'");
    }
    return s;
  }

  // --- expressions ----------------------------------------------------------

  AExpPtr aexp() {
    AExpPtr e = aterm();
    for (;;) {
      if (accept(TokKind::Plus)) e = mk_bin(ArithOp::Add, e, aterm());
      else if (accept(TokKind::Minus)) e = mk_bin(ArithOp::Sub, e, aterm());
      else return e;
    }
  }

  AExpPtr aterm() {
    if (check(TokKind::Ident)) return mk_var(toks_[pos_++].text);
    if (check(TokKind::IntLit)) return mk_int(toks_[pos_++].value);
    if (accept(TokKind::LParen)) {
      AExpPtr e = aexp();
      expect(TokKind::RParen, "')'");
      return mk_paren(e);
    }
    if (accept(TokKind::KwPop)) {
      expect(TokKind::LParen, "'('");
      std::string s = delta_name();
      expect(TokKind::RParen, "')'");
      if (s == "B" || s == "W")
        fail("pop(delta(" + s + ")) is a Boolean expression");
      return mk_pop_var(s);
    }
    fail("expected an arithmetic expression");
  }

  BExpPtr bexp() {
    BExpPtr e = bterm();
    for (;;) {
      if (accept(TokKind::AndAnd)) e = mk_bbin(BoolOp::And, e, bterm());
      else if (accept(TokKind::EqEq)) e = mk_bbin(BoolOp::Eq, e, bterm());
      else return e;
    }
  }

  BExpPtr bterm() {
    if (accept(TokKind::Bang)) return mk_not(bterm());
    return batom();
  }

  // Atoms are ambiguous at '(' (grouping a Boolean vs. a comparison operand);
  // resolved by tentative parsing with backtracking.
  BExpPtr batom() {
    if (accept(TokKind::KwTrue)) return mk_bool(true);
    if (accept(TokKind::KwFalse)) return mk_bool(false);
    if (check(TokKind::KwPop)) {
      size_t save = pos_;
      ++pos_;
      expect(TokKind::LParen, "'('");
      std::string s = delta_name();
      expect(TokKind::RParen, "')'");
      if (s == "B") return mk_pop_flag(FlagStack::B);
      if (s == "W") return mk_pop_flag(FlagStack::W);
      // A variable-stack pop is an arithmetic atom, so this must be the left
      // operand of a comparison. Rewind and take the comparison route.
      pos_ = save;
      return cmp();
    }
    if (check(TokKind::LParen)) {
      size_t save = pos_;
      ++pos_;
      try {
        BExpPtr inner = bexp();
        if (check(TokKind::RParen)) {
          // Commit only if the next token cannot continue an arithmetic
          // expression; otherwise "(X) > 1"-style texts would misparse.
          TokKind nk = peek(1).kind;
          if (nk != TokKind::Greater && nk != TokKind::Plus &&
              nk != TokKind::Minus) {
            ++pos_;
            return mk_bparen(inner);
          }
        }
      } catch (const SyntaxError&) {
        // fall through to the comparison route
      }
      pos_ = save;
      return cmp();
    }
    return cmp();
  }

  BExpPtr cmp() {
    AExpPtr l = aexp();
    if (accept(TokKind::EqEq)) return mk_cmp(CmpOp::Eq, l, aexp());
    if (accept(TokKind::Greater)) return mk_cmp(CmpOp::Gt, l, aexp());
    fail("expected '==' or '>' in comparison");
  }
};

// Structural dialect rules, applied after a grammar-permissive parse.

inline void enforce_dialect(const Program& p, Dialect d);

inline void enforce_dialect_stmt(const Stmt& s, Dialect d) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Stmt::Par>) {
          if (d == Dialect::Sequential)
            throw DialectError("par is not part of the sequential dialect");
          enforce_dialect(x.left, d);
          enforce_dialect(x.right, d);
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          if (d == Dialect::Parallel)
            throw DialectError("if is not part of the parallel dialect");
          enforce_dialect(x.then_body, d);
          enforce_dialect(x.else_body, d);
        } else if constexpr (std::is_same_v<T, Stmt::While>) {
          if (d == Dialect::Parallel)
            throw DialectError("while is not part of the parallel dialect");
          enforce_dialect(x.body, d);
        } else if constexpr (std::is_same_v<T, Stmt::PushVar> ||
                             std::is_same_v<T, Stmt::PushFlag>) {
          if (d == Dialect::Parallel)
            throw DialectError("push does not occur in the parallel dialect");
        } else if constexpr (std::is_same_v<T, Stmt::DestAssign> ||
                             std::is_same_v<T, Stmt::ConstAssign>) {
          if (d == Dialect::Parallel && aexp_has_pop(x.rhs))
            throw DialectError("pop does not occur in the parallel dialect");
        } else {
          (void)x;
        }
      },
      s.node);
}

inline void enforce_dialect(const Program& p, Dialect d) {
  for (const auto& s : p.stmts) enforce_dialect_stmt(s, d);
}

}  // namespace detail

// Parse source text. The grammar itself is dialect-agnostic; when `d` is not
// Dialect::Any the parsed program is checked structurally and a DialectError
// is thrown for constructs foreign to the dialect. Annotated text goes
// through parse_annotated instead.
inline Program parse_program(std::string_view text,
                             Dialect d = Dialect::Sequential) {
  if (d == Dialect::Annotated)
    throw DialectError("use parse_annotated for the annotated dialect");
  detail::Parser p(lex(text));
  Program prog = p.parse_program();
  if (d != Dialect::Any) detail::enforce_dialect(prog, d);
  return prog;
}

inline AnnProgram parse_annotated(std::string_view text) {
  detail::Parser p(lex(text));
  AnnProgram prog = p.parse_annotated();
  if (contains_pop(strip_annotations(prog)))
    throw DialectError("pop does not occur in the annotated dialect");
  return prog;
}

// ---------------------------------------------------------------------------
// Renderer
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_bin(const AExpPtr& e) {
  return std::holds_alternative<AExp::Bin>(e->node);
}

inline std::string aexp_str(const AExpPtr& e);

inline std::string aexp_operand_str(const AExpPtr& e, bool right) {
  // Left-associative grammar: a bare Bin as a right operand would reparse
  // differently, so it gets defensive parentheses. ASTs built by the parser
  // or the transforms never need this.
  if (right && is_bin(e)) return "(" + aexp_str(e) + ")";
  return aexp_str(e);
}

inline std::string aexp_str(const AExpPtr& e) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, AExp::Var>) {
          return x.name;
        } else if constexpr (std::is_same_v<T, AExp::Lit>) {
          return x.value.str();
        } else if constexpr (std::is_same_v<T, AExp::Paren>) {
          return "(" + aexp_str(x.inner) + ")";
        } else if constexpr (std::is_same_v<T, AExp::Bin>) {
          const char* op = x.op == ArithOp::Add ? " + " : " - ";
          return aexp_operand_str(x.lhs, false) + op +
                 aexp_operand_str(x.rhs, true);
        } else {
          return "pop(delta(" + x.stack + "))";
        }
      },
      e->node);
}

inline std::string bexp_str(const BExpPtr& e);

inline bool is_batom(const BExpPtr& e) {
  return std::holds_alternative<BExp::Lit>(e->node) ||
         std::holds_alternative<BExp::Paren>(e->node) ||
         std::holds_alternative<BExp::Pop>(e->node) ||
         std::holds_alternative<BExp::Not>(e->node);
}

inline std::string bexp_str(const BExpPtr& e) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BExp::Lit>) {
          return x.value ? "T" : "F";
        } else if constexpr (std::is_same_v<T, BExp::Not>) {
          std::string inner = bexp_str(x.inner);
          if (!is_batom(x.inner)) inner = "(" + inner + ")";
          return "!" + inner;
        } else if constexpr (std::is_same_v<T, BExp::Paren>) {
          return "(" + bexp_str(x.inner) + ")";
        } else if constexpr (std::is_same_v<T, BExp::Cmp>) {
          const char* op = x.op == CmpOp::Eq ? " == " : " > ";
          return aexp_operand_str(x.lhs, false) + op +
                 aexp_operand_str(x.rhs, true);
        } else if constexpr (std::is_same_v<T, BExp::Bin>) {
          const char* op = x.op == BoolOp::And ? " && " : " == ";
          std::string lhs = bexp_str(x.lhs);
          std::string rhs = bexp_str(x.rhs);
          if (std::holds_alternative<BExp::Bin>(x.rhs->node))
            rhs = "(" + rhs + ")";
          return lhs + op + rhs;
        } else {
          return std::string("pop(delta(") + flag_stack_name(x.stack) + "))";
        }
      },
      e->node);
}

inline std::string inline_stmt_str(const Stmt& s);

inline std::string inline_program_str(const Program& p) {
  std::string out;
  for (size_t i = 0; i < p.stmts.size(); ++i) {
    if (i) out += "; ";
    out += inline_stmt_str(p.stmts[i]);
  }
  return out;
}

inline std::string par_operand_str(const Program& p) {
  if (p.stmts.size() == 1 &&
      !std::holds_alternative<Stmt::Par>(p.stmts.front().node) &&
      !std::holds_alternative<Stmt::If>(p.stmts.front().node) &&
      !std::holds_alternative<Stmt::While>(p.stmts.front().node))
    return inline_stmt_str(p.stmts.front());
  return "(" + inline_program_str(p) + ")";
}

inline std::string inline_stmt_str(const Stmt& s) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Stmt::Skip>) {
          return "skip";
        } else if constexpr (std::is_same_v<T, Stmt::DestAssign>) {
          return x.target + " = " + aexp_str(x.rhs);
        } else if constexpr (std::is_same_v<T, Stmt::ConstAssign>) {
          return x.target + " " + cop_text(x.op) + " " + aexp_str(x.rhs);
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          return "if " + bexp_str(x.cond) + " then " +
                 inline_program_str(x.then_body) + " else " +
                 inline_program_str(x.else_body) + " end";
        } else if constexpr (std::is_same_v<T, Stmt::While>) {
          return "while " + bexp_str(x.cond) + " do " +
                 inline_program_str(x.body) + " end";
        } else if constexpr (std::is_same_v<T, Stmt::Par>) {
          return par_operand_str(x.left) + " par " + par_operand_str(x.right);
        } else if constexpr (std::is_same_v<T, Stmt::PushVar>) {
          // Source form saves the variable itself; mid-execution the value
          // expression may already be a literal.
          if (std::holds_alternative<AExp::Var>(x.value->node))
            return "push(sigma(" + x.name + "), delta(" + x.name + "))";
          return "push(" + aexp_str(x.value) + ", delta(" + x.name + "))";
        } else {
          return "push(" + bexp_str(x.value) + ", delta(" +
                 flag_stack_name(x.stack) + "))";
        }
      },
      s.node);
}

inline void render_block(const Program& p, int depth, std::string& out);

inline void render_stmt(const Stmt& s, int depth, std::string& out) {
  std::string pad(static_cast<size_t>(depth) * 2, ' ');
  if (const auto* i = std::get_if<Stmt::If>(&s.node)) {
    out += pad + "if " + bexp_str(i->cond) + " then\n";
    render_block(i->then_body, depth + 1, out);
    out += pad + "else\n";
    render_block(i->else_body, depth + 1, out);
    out += pad + "end\n";
    return;
  }
  if (const auto* w = std::get_if<Stmt::While>(&s.node)) {
    out += pad + "while " + bexp_str(w->cond) + " do\n";
    render_block(w->body, depth + 1, out);
    out += pad + "end\n";
    return;
  }
  out += pad + inline_stmt_str(s) + ";\n";
}

inline void render_block(const Program& p, int depth, std::string& out) {
  for (const auto& s : p.stmts) render_stmt(s, depth, out);
}

// Annotated rendering: the id stack prints head-first, empty as "[]".

inline std::string ids_str(const IdStack& ids) {
  std::string out = "[";
  for (size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(ids[i]);
  }
  return out + "]";
}

inline std::string inline_ann_stmt_str(const AnnStmt& s);

inline std::string inline_ann_program_str(const AnnProgram& p) {
  std::string out;
  for (size_t i = 0; i < p.stmts.size(); ++i) {
    if (i) out += "; ";
    out += inline_ann_stmt_str(p.stmts[i]);
  }
  return out;
}

inline std::string ann_par_operand_str(const AnnProgram& p) {
  if (p.stmts.size() == 1 &&
      !std::holds_alternative<AnnStmt::Par>(p.stmts.front().node))
    return inline_ann_stmt_str(p.stmts.front());
  return "(" + inline_ann_program_str(p) + ")";
}

inline std::string inline_ann_stmt_str(const AnnStmt& s) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Stmt::Skip>) {
          return "skip " + ids_str(s.ids);
        } else if constexpr (std::is_same_v<T, Stmt::DestAssign>) {
          return x.target + " = " + aexp_str(x.rhs) + " " + ids_str(s.ids);
        } else if constexpr (std::is_same_v<T, Stmt::ConstAssign>) {
          return x.target + " " + cop_text(x.op) + " " + aexp_str(x.rhs) + " " +
                 ids_str(s.ids);
        } else {
          return ann_par_operand_str(x.left) + " par " +
                 ann_par_operand_str(x.right);
        }
      },
      s.node);
}

}  // namespace detail

inline std::string render_aexp(const AExpPtr& e) { return detail::aexp_str(e); }
inline std::string render_bexp(const BExpPtr& e) { return detail::bexp_str(e); }

// Canonical multi-line rendering; parse(render(p)) is the identity on every
// AST the parser or the transforms can produce.
inline std::string render(const Program& p) {
  std::string out;
  detail::render_block(p, 0, out);
  return out;
}

inline std::string render(const AnnProgram& p) {
  std::string out;
  for (const auto& s : p.stmts) out += detail::inline_ann_stmt_str(s) + ";\n";
  return out;
}

inline std::string render(const AugmentedProgram& p) { return render(p.program); }
inline std::string render(const InvertedProgram& p) { return render(p.program); }
inline std::string render(const AnnInvertedProgram& p) { return render(p.program); }

// One-line forms, used for trace heads, schedules and records.
inline std::string inline_stmt(const Stmt& s) { return detail::inline_stmt_str(s); }
inline std::string inline_stmt(const AnnStmt& s) {
  return detail::inline_ann_stmt_str(s);
}
inline std::string inline_program(const Program& p) {
  return detail::inline_program_str(p);
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

// Which push/pop population is legitimate for the program being checked.
// User-written source has neither; aug output has pushes only; inv output has
// pops only.
enum class SourcePolicy { UserSource, Augmented, Inverted, Any };

namespace detail {

struct Validator {
  Dialect dialect;
  SourcePolicy policy;
  std::vector<Violation> out;

  void flag(const SrcLoc& l, std::string code, std::string msg) {
    out.push_back(Violation{l.line, l.col, std::move(code), std::move(msg)});
  }

  void check_name(const SrcLoc& l, const VarName& v) {
    if (is_reserved_name(v))
      flag(l, "reserved-name",
           "'" + v + "' names a Boolean stack, not a variable");
  }

  void pop_seen(const SrcLoc& l) {
    if (dialect == Dialect::Parallel || dialect == Dialect::Annotated) {
      flag(l, "dialect", "pop does not occur in the parallel dialect");
      return;
    }
    if (policy == SourcePolicy::UserSource)
      flag(l, "push-pop-in-source", "pop is reserved for inverted programs");
    else if (policy == SourcePolicy::Augmented)
      flag(l, "pop-in-augmented", "augmented programs never contain pop");
  }

  void push_seen(const SrcLoc& l) {
    if (dialect == Dialect::Parallel || dialect == Dialect::Annotated) {
      flag(l, "dialect", "push does not occur in the parallel dialect");
      return;
    }
    if (policy == SourcePolicy::UserSource)
      flag(l, "push-pop-in-source", "push is reserved for augmented programs");
    else if (policy == SourcePolicy::Inverted)
      flag(l, "push-in-inverted", "inverted programs never contain push");
  }

  void check_aexp(const SrcLoc& l, const AExpPtr& e) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, AExp::Var>) {
            check_name(l, x.name);
          } else if constexpr (std::is_same_v<T, AExp::Paren>) {
            check_aexp(l, x.inner);
          } else if constexpr (std::is_same_v<T, AExp::Bin>) {
            check_aexp(l, x.lhs);
            check_aexp(l, x.rhs);
          } else if constexpr (std::is_same_v<T, AExp::Pop>) {
            check_name(l, x.stack);
            pop_seen(l);
          } else {
            (void)x;
          }
        },
        e->node);
  }

  void check_bexp(const SrcLoc& l, const BExpPtr& e) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, BExp::Not> ||
                        std::is_same_v<T, BExp::Paren>) {
            check_bexp(l, x.inner);
          } else if constexpr (std::is_same_v<T, BExp::Cmp>) {
            check_aexp(l, x.lhs);
            check_aexp(l, x.rhs);
          } else if constexpr (std::is_same_v<T, BExp::Bin>) {
            check_bexp(l, x.lhs);
            check_bexp(l, x.rhs);
          } else if constexpr (std::is_same_v<T, BExp::Pop>) {
            pop_seen(l);
          } else {
            (void)x;
          }
        },
        e->node);
  }

  void check(const Program& p) {
    for (const auto& s : p.stmts) check(s);
  }

  void check(const Stmt& s) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Stmt::DestAssign>) {
            check_name(s.loc, x.target);
            check_aexp(s.loc, x.rhs);
          } else if constexpr (std::is_same_v<T, Stmt::ConstAssign>) {
            check_name(s.loc, x.target);
            check_aexp(s.loc, x.rhs);
            if (mentions(x.rhs, x.target))
              flag(s.loc, "constructive-self-reference",
                   "constructive assignment to '" + x.target + "' reads '" +
                       x.target + "'");
          } else if constexpr (std::is_same_v<T, Stmt::If>) {
            if (dialect == Dialect::Parallel || dialect == Dialect::Annotated)
              flag(s.loc, "dialect", "if is not part of the parallel dialect");
            check_bexp(s.loc, x.cond);
            check(x.then_body);
            check(x.else_body);
          } else if constexpr (std::is_same_v<T, Stmt::While>) {
            if (dialect == Dialect::Parallel || dialect == Dialect::Annotated)
              flag(s.loc, "dialect",
                   "while is not part of the parallel dialect");
            check_bexp(s.loc, x.cond);
            check(x.body);
          } else if constexpr (std::is_same_v<T, Stmt::Par>) {
            if (dialect == Dialect::Sequential)
              flag(s.loc, "dialect", "par is not part of the sequential dialect");
            check(x.left);
            check(x.right);
          } else if constexpr (std::is_same_v<T, Stmt::PushVar>) {
            check_name(s.loc, x.name);
            push_seen(s.loc);
            const auto* v = std::get_if<AExp::Var>(&x.value->node);
            bool reduced = std::holds_alternative<AExp::Lit>(x.value->node);
            if (!(v && v->name == x.name) && !reduced)
              flag(s.loc, "malformed-push",
                   "push must save a variable into its own stack");
          } else if constexpr (std::is_same_v<T, Stmt::PushFlag>) {
            push_seen(s.loc);
          } else {
            (void)x;
          }
        },
        s.node);
  }
};

}  // namespace detail

// Static checks for a plain program under the given dialect and push/pop
// policy. Empty result means the program is well-formed.
inline std::vector<Violation> validate(
    const Program& p, Dialect d,
    SourcePolicy policy = SourcePolicy::UserSource) {
  detail::Validator v{d, policy, {}};
  v.check(p);
  return v.out;
}

// Static checks for an annotated program: parallel-dialect shape, the
// constructive restriction, reserved names, and strictly decreasing
// identifier stacks (head first).
inline std::vector<Violation> validate(const AnnProgram& p) {
  detail::Validator v{Dialect::Annotated, SourcePolicy::UserSource, {}};
  struct Walk {
    detail::Validator& v;
    void operator()(const AnnProgram& p) {
      for (const auto& s : p.stmts) {
        for (size_t i = 1; i < s.ids.size(); ++i) {
          if (s.ids[i - 1] <= s.ids[i]) {
            v.flag(s.loc, "id-stack",
                   "identifier stack must be strictly decreasing from head");
            break;
          }
        }
        std::visit(
            [&](const auto& x) {
              using T = std::decay_t<decltype(x)>;
              if constexpr (std::is_same_v<T, Stmt::DestAssign>) {
                v.check_name(s.loc, x.target);
                v.check_aexp(s.loc, x.rhs);
              } else if constexpr (std::is_same_v<T, Stmt::ConstAssign>) {
                v.check_name(s.loc, x.target);
                v.check_aexp(s.loc, x.rhs);
                if (mentions(x.rhs, x.target))
                  v.flag(s.loc, "constructive-self-reference",
                         "constructive assignment to '" + x.target +
                             "' reads '" + x.target + "'");
              } else if constexpr (std::is_same_v<T, AnnStmt::Par>) {
                if (!s.ids.empty())
                  v.flag(s.loc, "id-stack", "par carries no identifier stack");
                (*this)(x.left);
                (*this)(x.right);
              } else {
                (void)x;
              }
            },
            s.node);
      }
    }
  } walk{v};
  walk(p);
  return v.out;
}

// Throw if a validation pass produced violations; used by operations whose
// precondition is a clean validate().
inline void require_valid(std::vector<Violation> vs) {
  if (!vs.empty()) throw ValidationError(std::move(vs));
}

}  // namespace reverso
