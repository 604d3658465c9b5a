#pragma once

// Source-to-source transforms:
//
//   aug            sequential program  -> augmented program (state-saving pushes)
//   inv            sequential program  -> inverted program  (consuming pops)
//   unaugment      augmented program   -> the original it came from
//   ann            parallel program    -> annotated program (empty id stacks)
//   inv_annotated  annotated program   -> inverted annotated program
//
// aug/inv take user-written source (no push/pop); both directions of the
// while-loop flag protocol live here. A loop entered for k iterations leaves
// W holding k Ts over an F (head first): F is pushed on entry, T before each
// iteration after the first, and a final T after the loop exits. The inverse
// loop runs while the popped flag is T, so it executes its body exactly k
// times and consumes the closing F.
//
// TransformFaults switches individual clauses off or breaks them; the
// property harness uses these to confirm that each clause is load-bearing.
// Production callers use the default (all off).

#include <cstddef>
#include <utility>

#include "reverso/errors.hpp"
#include "reverso/syntax.hpp"
#include "reverso/types.hpp"

namespace reverso {

// The inverse of a constructive operator.
inline CopKind icop(CopKind k) {
  return k == CopKind::PlusEq ? CopKind::MinusEq : CopKind::PlusEq;
}

// Deliberate single-clause defects, one flag per clause under test. All false
// means the faithful transform.
struct TransformFaults {
  // aug
  bool drop_destructive_push = false;   // X = e loses its value-saving push
  bool swap_branch_flags = false;       // then records F, else records T
  bool while_first_flag_true = false;   // loop entry records T instead of F
  bool drop_while_exit_flag = false;    // no closing T after the loop
  // inv
  bool keep_statement_order = false;    // sequences are not reversed
  bool keep_constructive_op = false;    // += stays +=
  // inv_annotated
  bool ann_keep_statement_order = false;
  bool ann_keep_constructive_op = false;

  bool any() const {
    return drop_destructive_push || swap_branch_flags ||
           while_first_flag_true || drop_while_exit_flag ||
           keep_statement_order || keep_constructive_op ||
           ann_keep_statement_order || ann_keep_constructive_op;
  }
};

// ---------------------------------------------------------------------------
// aug
// ---------------------------------------------------------------------------

namespace detail {

inline Program aug_program(const Program& p, const TransformFaults& f);

inline void aug_stmt(const Stmt& s, const TransformFaults& f, Program& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Stmt::Skip>) {
          out.stmts.push_back(st_skip(s.loc));
        } else if constexpr (std::is_same_v<T, Stmt::DestAssign>) {
          if (!f.drop_destructive_push)
            out.stmts.push_back(st_push_var(x.target, s.loc));
          out.stmts.push_back(Stmt{Stmt::DestAssign{x.target, x.rhs}, s.loc});
        } else if constexpr (std::is_same_v<T, Stmt::ConstAssign>) {
          // Constructive assignments are self-reversing; nothing to save.
          out.stmts.push_back(
              Stmt{Stmt::ConstAssign{x.target, x.op, x.rhs}, s.loc});
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          Program then_b = aug_program(x.then_body, f);
          then_b.stmts.push_back(
              st_push_flag(FlagStack::B, !f.swap_branch_flags, s.loc));
          Program else_b = aug_program(x.else_body, f);
          else_b.stmts.push_back(
              st_push_flag(FlagStack::B, f.swap_branch_flags, s.loc));
          out.stmts.push_back(
              st_if(x.cond, std::move(then_b), std::move(else_b), s.loc));
        } else if constexpr (std::is_same_v<T, Stmt::While>) {
          // Entered loop: record F, run the first iteration, then loop with a
          // T before every later iteration, and close with a T. Never-entered
          // loop: record a single F.
          Program body = aug_program(x.body, f);
          Program loop_body;
          loop_body.stmts.push_back(st_push_flag(FlagStack::W, true, s.loc));
          loop_body.stmts.insert(loop_body.stmts.end(), body.stmts.begin(),
                                 body.stmts.end());
          Program entered;
          entered.stmts.push_back(
              st_push_flag(FlagStack::W, f.while_first_flag_true, s.loc));
          entered.stmts.insert(entered.stmts.end(), body.stmts.begin(),
                               body.stmts.end());
          entered.stmts.push_back(st_while(x.cond, std::move(loop_body), s.loc));
          if (!f.drop_while_exit_flag)
            entered.stmts.push_back(st_push_flag(FlagStack::W, true, s.loc));
          Program skipped;
          skipped.stmts.push_back(st_push_flag(FlagStack::W, false, s.loc));
          out.stmts.push_back(
              st_if(x.cond, std::move(entered), std::move(skipped), s.loc));
        } else {
          // par / push cannot survive validation of sequential user source.
          throw Error("aug applies to sequential user-written programs only");
        }
      },
      s.node);
}

inline Program aug_program(const Program& p, const TransformFaults& f) {
  Program out;
  for (const auto& s : p.stmts) aug_stmt(s, f, out);
  return out;
}

}  // namespace detail

inline AugmentedProgram aug(const Program& p, const TransformFaults& f = {}) {
  require_valid(validate(p, Dialect::Sequential, SourcePolicy::UserSource));
  return AugmentedProgram{detail::aug_program(p, f)};
}

// ---------------------------------------------------------------------------
// inv
// ---------------------------------------------------------------------------

namespace detail {

inline Program inv_program(const Program& p, const TransformFaults& f);

inline Stmt inv_stmt(const Stmt& s, const TransformFaults& f) {
  return std::visit(
      [&](const auto& x) -> Stmt {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Stmt::Skip>) {
          return st_skip(s.loc);
        } else if constexpr (std::is_same_v<T, Stmt::DestAssign>) {
          // The overwritten value comes back off the variable's own stack.
          return st_assign(x.target, mk_pop_var(x.target), s.loc);
        } else if constexpr (std::is_same_v<T, Stmt::ConstAssign>) {
          CopKind op = f.keep_constructive_op ? x.op : icop(x.op);
          return st_cassign(x.target, op, x.rhs, s.loc);
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          return st_if(mk_pop_flag(FlagStack::B), inv_program(x.then_body, f),
                       inv_program(x.else_body, f), s.loc);
        } else if constexpr (std::is_same_v<T, Stmt::While>) {
          return st_while(mk_pop_flag(FlagStack::W), inv_program(x.body, f),
                          s.loc);
        } else {
          throw Error("inv applies to sequential user-written programs only");
        }
      },
      s.node);
}

inline Program inv_program(const Program& p, const TransformFaults& f) {
  Program out;
  out.stmts.reserve(p.stmts.size());
  if (f.keep_statement_order) {
    for (const auto& s : p.stmts) out.stmts.push_back(inv_stmt(s, f));
  } else {
    for (auto it = p.stmts.rbegin(); it != p.stmts.rend(); ++it)
      out.stmts.push_back(inv_stmt(*it, f));
  }
  return out;
}

}  // namespace detail

inline InvertedProgram inv(const Program& p, const TransformFaults& f = {}) {
  require_valid(validate(p, Dialect::Sequential, SourcePolicy::UserSource));
  return InvertedProgram{detail::inv_program(p, f)};
}

// ---------------------------------------------------------------------------
// unaugment
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_push_flag(const Stmt& s, FlagStack stack, bool value) {
  const auto* pf = std::get_if<Stmt::PushFlag>(&s.node);
  if (!pf || pf->stack != stack) return false;
  const auto* lit = std::get_if<BExp::Lit>(&pf->value->node);
  return lit && lit->value == value;
}

inline bool is_push_flag(const Stmt& s, FlagStack stack) {
  const auto* pf = std::get_if<Stmt::PushFlag>(&s.node);
  return pf && pf->stack == stack;
}

inline bool closes_with(const Program& p, FlagStack stack) {
  return !p.stmts.empty() && is_push_flag(p.stmts.back(), stack);
}

[[noreturn]] inline void not_an_image(const std::string& why) {
  throw Error("not an augmented program image: " + why);
}

inline Program unaug_program(const Program& p);

// A loop augments into: if b then push(F,W); A; while b do push(T,W); A end;
// push(T,W) else push(F,W) end. Recognize that shape and give back
// while b do U(A) end.
inline Stmt unaug_while_complex(const Stmt::If& x, SrcLoc loc) {
  if (x.else_body.stmts.size() != 1 ||
      !is_push_flag(x.else_body.stmts.front(), FlagStack::W, false))
    not_an_image("loop bypass branch must be exactly push(F, delta(W))");
  const auto& then_b = x.then_body.stmts;
  if (then_b.size() < 3 || !is_push_flag(then_b.front(), FlagStack::W, false) ||
      !is_push_flag(then_b.back(), FlagStack::W, true))
    not_an_image("loop entry branch must open with push(F, delta(W)) and "
                 "close with push(T, delta(W))");
  const auto* w = std::get_if<Stmt::While>(&then_b[then_b.size() - 2].node);
  if (!w) not_an_image("loop entry branch must wrap an inner while");
  if (!equal(w->cond, x.cond))
    not_an_image("inner while condition differs from the guard");
  const auto& wb = w->body.stmts;
  if (wb.empty() || !is_push_flag(wb.front(), FlagStack::W, true))
    not_an_image("inner while body must open with push(T, delta(W))");
  // The augmented body appears twice: unrolled in the entry branch and inside
  // the inner while. Both copies must agree.
  Program unrolled{std::vector<Stmt>(then_b.begin() + 1, then_b.end() - 2)};
  Program inner{std::vector<Stmt>(wb.begin() + 1, wb.end())};
  if (!(unrolled == inner))
    not_an_image("unrolled first iteration differs from the loop body");
  return st_while(x.cond, unaug_program(inner), loc);
}

inline Stmt unaug_if_complex(const Stmt::If& x, SrcLoc loc) {
  const auto& then_b = x.then_body.stmts;
  const auto& else_b = x.else_body.stmts;
  if (then_b.empty() || !is_push_flag(then_b.back(), FlagStack::B, true))
    not_an_image("then branch must close with push(T, delta(B))");
  if (else_b.empty() || !is_push_flag(else_b.back(), FlagStack::B, false))
    not_an_image("else branch must close with push(F, delta(B))");
  Program then_body{std::vector<Stmt>(then_b.begin(), then_b.end() - 1)};
  Program else_body{std::vector<Stmt>(else_b.begin(), else_b.end() - 1)};
  return st_if(x.cond, unaug_program(then_body), unaug_program(else_body), loc);
}

inline Program unaug_program(const Program& p) {
  Program out;
  for (size_t i = 0; i < p.stmts.size(); ++i) {
    const Stmt& s = p.stmts[i];
    if (const auto* pv = std::get_if<Stmt::PushVar>(&s.node)) {
      if (i + 1 >= p.stmts.size())
        not_an_image("push(sigma(" + pv->name + "), ...) with no assignment");
      const auto* da = std::get_if<Stmt::DestAssign>(&p.stmts[i + 1].node);
      if (!da || da->target != pv->name)
        not_an_image("push of '" + pv->name +
                     "' is not followed by an assignment to it");
      out.stmts.push_back(p.stmts[i + 1]);
      ++i;
      continue;
    }
    if (std::holds_alternative<Stmt::DestAssign>(s.node))
      not_an_image("destructive assignment without a preceding push");
    if (std::holds_alternative<Stmt::While>(s.node))
      not_an_image("bare while outside a loop entry branch");
    if (std::holds_alternative<Stmt::PushFlag>(s.node))
      not_an_image("stray Boolean push");
    if (const auto* c = std::get_if<Stmt::If>(&s.node)) {
      // The closing flag's stack says which construct this came from: B for a
      // conditional, W for a loop.
      if (closes_with(c->else_body, FlagStack::W))
        out.stmts.push_back(unaug_while_complex(*c, s.loc));
      else
        out.stmts.push_back(unaug_if_complex(*c, s.loc));
      continue;
    }
    out.stmts.push_back(s);  // skip / constructive assignment
  }
  return out;
}

}  // namespace detail

inline Program unaugment(const AugmentedProgram& p) {
  require_valid(
      validate(p.program, Dialect::Sequential, SourcePolicy::Augmented));
  return detail::unaug_program(p.program);
}

// ---------------------------------------------------------------------------
// ann
// ---------------------------------------------------------------------------

namespace detail {

inline AnnProgram ann_program(const Program& p) {
  AnnProgram out;
  out.stmts.reserve(p.stmts.size());
  for (const auto& s : p.stmts) {
    AnnStmt a;
    a.loc = s.loc;
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Stmt::Skip>) {
            a.node = Stmt::Skip{};
          } else if constexpr (std::is_same_v<T, Stmt::DestAssign> ||
                               std::is_same_v<T, Stmt::ConstAssign>) {
            a.node = x;
          } else if constexpr (std::is_same_v<T, Stmt::Par>) {
            a.node = AnnStmt::Par{ann_program(x.left), ann_program(x.right)};
          } else {
            throw Error("ann applies to parallel-dialect programs only");
          }
        },
        s.node);
    out.stmts.push_back(std::move(a));
  }
  return out;
}

}  // namespace detail

inline AnnProgram ann(const Program& p) {
  require_valid(validate(p, Dialect::Parallel, SourcePolicy::UserSource));
  return detail::ann_program(p);
}

// ---------------------------------------------------------------------------
// inv_annotated
// ---------------------------------------------------------------------------

namespace detail {

inline AnnProgram inv_ann_program(const AnnProgram& p,
                                  const TransformFaults& f) {
  AnnProgram out;
  out.stmts.reserve(p.stmts.size());
  auto invert_one = [&](const AnnStmt& s) {
    AnnStmt r;
    r.loc = s.loc;
    r.ids = s.ids;  // identifier stacks travel with their statements
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Stmt::Skip>) {
            r.node = Stmt::Skip{};
          } else if constexpr (std::is_same_v<T, Stmt::DestAssign>) {
            // Verbatim: the old value is recovered from the tagged stack at
            // runtime, not from the expression.
            r.node = x;
          } else if constexpr (std::is_same_v<T, Stmt::ConstAssign>) {
            CopKind op = f.ann_keep_constructive_op ? x.op : icop(x.op);
            r.node = Stmt::ConstAssign{x.target, op, x.rhs};
          } else {
            r.node = AnnStmt::Par{inv_ann_program(x.left, f),
                                  inv_ann_program(x.right, f)};
          }
        },
        s.node);
    out.stmts.push_back(std::move(r));
  };
  if (f.ann_keep_statement_order) {
    for (const auto& s : p.stmts) invert_one(s);
  } else {
    for (auto it = p.stmts.rbegin(); it != p.stmts.rend(); ++it)
      invert_one(*it);
  }
  return out;
}

}  // namespace detail

inline AnnInvertedProgram inv_annotated(const AnnProgram& p,
                                        const TransformFaults& f = {}) {
  require_valid(validate(p));
  return AnnInvertedProgram{detail::inv_ann_program(p, f)};
}

}  // namespace reverso
