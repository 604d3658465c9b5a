#pragma once

// Small-step execution of sequential programs.
//
// A configuration is (remaining program, sigma, delta); step_inplace performs
// exactly one transition on the head statement, reducing expressions one
// rewrite at a time, left to right, with no short-circuiting. The only rules
// that touch the stores are the assignment/push completions and the pop
// rewrite, which consumes a stack head as a side effect of expression
// evaluation. Loops unfold (while b do Q end  =>  if b then Q; while... else
// skip end), so a diverging program never finishes its fuel allowance and is
// reported as FuelExhausted rather than an error.
//
// Inverted programs need no separate machinery here: their pops are ordinary
// expressions, and an exhausted stack surfaces as EmptyStackError.

#include <string>
#include <utility>
#include <vector>

#include "reverso/errors.hpp"
#include "reverso/stores.hpp"
#include "reverso/syntax.hpp"
#include "reverso/types.hpp"

namespace reverso {

// Transition labels, named by the shape of the head statement: assignment
// completions (DA1/CA1) and expression progress (DA2/CA2), conditional
// dispatch (C1/C2) and condition progress (C3), loop unfolding (Wh), and the
// auxiliary-store rules (Pop for a consuming rewrite anywhere inside an
// expression, Push1/Push2 for push completion/progress).
enum class RuleName { Skip, DA1, DA2, CA1, CA2, C1, C2, C3, Wh, Pop, Push1, Push2 };

inline const char* rule_name(RuleName r) {
  switch (r) {
    case RuleName::Skip:  return "Skip";
    case RuleName::DA1:   return "DA1";
    case RuleName::DA2:   return "DA2";
    case RuleName::CA1:   return "CA1";
    case RuleName::CA2:   return "CA2";
    case RuleName::C1:    return "C1";
    case RuleName::C2:    return "C2";
    case RuleName::C3:    return "C3";
    case RuleName::Wh:    return "Wh";
    case RuleName::Pop:   return "Pop";
    case RuleName::Push1: return "Push1";
    case RuleName::Push2: return "Push2";
  }
  return "?";
}

struct Configuration {
  Program program;
  DataStore sigma;
  AuxStore delta;

  bool terminal() const { return program.stmts.empty(); }
};

struct StepInfo {
  RuleName rule;
  std::string head;  // the statement as it looked when the step fired
};

namespace detail {

inline bool is_value(const AExpPtr& e) {
  return std::holds_alternative<AExp::Lit>(e->node);
}
inline bool is_value(const BExpPtr& e) {
  return std::holds_alternative<BExp::Lit>(e->node);
}
inline const Int& value_of(const AExpPtr& e) {
  return std::get<AExp::Lit>(e->node).value;
}
inline bool value_of(const BExpPtr& e) {
  return std::get<BExp::Lit>(e->node).value;
}

struct AStep {
  AExpPtr next;
  bool popped;
};
struct BStep {
  BExpPtr next;
  bool popped;
};

// One rewrite of a non-value arithmetic expression. sigma is read-only; delta
// changes only through a pop.
inline AStep step_aexp(const AExpPtr& e, const DataStore& sigma,
                       AuxStore& delta) {
  return std::visit(
      [&](const auto& x) -> AStep {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, AExp::Var>) {
          return {mk_int(sigma.get(x.name)), false};
        } else if constexpr (std::is_same_v<T, AExp::Lit>) {
          throw StuckError("attempted to step a value");
        } else if constexpr (std::is_same_v<T, AExp::Paren>) {
          if (is_value(x.inner)) return {x.inner, false};
          AStep s = step_aexp(x.inner, sigma, delta);
          return {mk_paren(s.next), s.popped};
        } else if constexpr (std::is_same_v<T, AExp::Bin>) {
          if (!is_value(x.lhs)) {
            AStep s = step_aexp(x.lhs, sigma, delta);
            return {mk_bin(x.op, s.next, x.rhs), s.popped};
          }
          if (!is_value(x.rhs)) {
            AStep s = step_aexp(x.rhs, sigma, delta);
            return {mk_bin(x.op, x.lhs, s.next), s.popped};
          }
          Int v = x.op == ArithOp::Add
                      ? Int(value_of(x.lhs) + value_of(x.rhs))
                      : Int(value_of(x.lhs) - value_of(x.rhs));
          return {mk_int(std::move(v)), false};
        } else {
          return {mk_int(delta.pop_value(x.stack)), true};
        }
      },
      e->node);
}

// One rewrite of a non-value Boolean expression. Both operands of && and ==
// are evaluated; there is no short-circuiting.
inline BStep step_bexp(const BExpPtr& e, const DataStore& sigma,
                       AuxStore& delta) {
  return std::visit(
      [&](const auto& x) -> BStep {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BExp::Lit>) {
          throw StuckError("attempted to step a value");
        } else if constexpr (std::is_same_v<T, BExp::Not>) {
          if (is_value(x.inner)) return {mk_bool(!value_of(x.inner)), false};
          BStep s = step_bexp(x.inner, sigma, delta);
          return {mk_not(s.next), s.popped};
        } else if constexpr (std::is_same_v<T, BExp::Paren>) {
          if (is_value(x.inner)) return {x.inner, false};
          BStep s = step_bexp(x.inner, sigma, delta);
          return {mk_bparen(s.next), s.popped};
        } else if constexpr (std::is_same_v<T, BExp::Cmp>) {
          if (!is_value(x.lhs)) {
            AStep s = step_aexp(x.lhs, sigma, delta);
            return {mk_cmp(x.op, s.next, x.rhs), s.popped};
          }
          if (!is_value(x.rhs)) {
            AStep s = step_aexp(x.rhs, sigma, delta);
            return {mk_cmp(x.op, x.lhs, s.next), s.popped};
          }
          bool v = x.op == CmpOp::Eq ? value_of(x.lhs) == value_of(x.rhs)
                                     : value_of(x.lhs) > value_of(x.rhs);
          return {mk_bool(v), false};
        } else if constexpr (std::is_same_v<T, BExp::Bin>) {
          if (!is_value(x.lhs)) {
            BStep s = step_bexp(x.lhs, sigma, delta);
            return {mk_bbin(x.op, s.next, x.rhs), s.popped};
          }
          if (!is_value(x.rhs)) {
            BStep s = step_bexp(x.rhs, sigma, delta);
            return {mk_bbin(x.op, x.lhs, s.next), s.popped};
          }
          bool l = value_of(x.lhs), r = value_of(x.rhs);
          return {mk_bool(x.op == BoolOp::And ? (l && r) : (l == r)), false};
        } else {
          return {mk_bool(delta.pop_flag(x.stack)), true};
        }
      },
      e->node);
}

}  // namespace detail

// One transition. Throws StuckError on a terminal or non-sequential
// configuration, and propagates store errors (unbound variable, empty stack).
inline StepInfo step_inplace(Configuration& c) {
  if (c.terminal()) throw StuckError("terminal configuration cannot step");
  auto& stmts = c.program.stmts;
  Stmt head = stmts.front();
  std::string head_text = inline_stmt(head);
  auto consume = [&] { stmts.erase(stmts.begin()); };
  auto replace_head_with = [&](std::vector<Stmt> body) {
    stmts.erase(stmts.begin());
    stmts.insert(stmts.begin(), std::make_move_iterator(body.begin()),
                 std::make_move_iterator(body.end()));
  };

  RuleName rule;
  std::visit(
      [&](auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Stmt::Skip>) {
          consume();
          rule = RuleName::Skip;
        } else if constexpr (std::is_same_v<T, Stmt::DestAssign>) {
          if (detail::is_value(x.rhs)) {
            c.sigma.set(x.target, detail::value_of(x.rhs));
            consume();
            rule = RuleName::DA1;
          } else {
            detail::AStep s = detail::step_aexp(x.rhs, c.sigma, c.delta);
            stmts.front() =
                Stmt{Stmt::DestAssign{x.target, s.next}, head.loc};
            rule = s.popped ? RuleName::Pop : RuleName::DA2;
          }
        } else if constexpr (std::is_same_v<T, Stmt::ConstAssign>) {
          if (detail::is_value(x.rhs)) {
            const Int& cur = c.sigma.get(x.target);
            Int v = x.op == CopKind::PlusEq
                        ? Int(cur + detail::value_of(x.rhs))
                        : Int(cur - detail::value_of(x.rhs));
            c.sigma.set(x.target, std::move(v));
            consume();
            rule = RuleName::CA1;
          } else {
            detail::AStep s = detail::step_aexp(x.rhs, c.sigma, c.delta);
            stmts.front() =
                Stmt{Stmt::ConstAssign{x.target, x.op, s.next}, head.loc};
            rule = s.popped ? RuleName::Pop : RuleName::CA2;
          }
        } else if constexpr (std::is_same_v<T, Stmt::If>) {
          if (detail::is_value(x.cond)) {
            bool v = detail::value_of(x.cond);
            std::vector<Stmt> branch =
                v ? x.then_body.stmts : x.else_body.stmts;
            replace_head_with(std::move(branch));
            rule = v ? RuleName::C1 : RuleName::C2;
          } else {
            detail::BStep s = detail::step_bexp(x.cond, c.sigma, c.delta);
            stmts.front() = Stmt{
                Stmt::If{s.next, std::move(x.then_body), std::move(x.else_body)},
                head.loc};
            rule = s.popped ? RuleName::Pop : RuleName::C3;
          }
        } else if constexpr (std::is_same_v<T, Stmt::While>) {
          // while b do Q end  =>  if b then Q; while b do Q end else skip end
          Program then_body = x.body;
          then_body.stmts.push_back(head);
          Program else_body;
          else_body.stmts.push_back(st_skip(head.loc));
          stmts.front() = st_if(x.cond, std::move(then_body),
                                std::move(else_body), head.loc);
          rule = RuleName::Wh;
        } else if constexpr (std::is_same_v<T, Stmt::PushVar>) {
          if (detail::is_value(x.value)) {
            c.delta.push_value(x.name, detail::value_of(x.value));
            consume();
            rule = RuleName::Push1;
          } else {
            detail::AStep s = detail::step_aexp(x.value, c.sigma, c.delta);
            stmts.front() = Stmt{Stmt::PushVar{x.name, s.next}, head.loc};
            rule = s.popped ? RuleName::Pop : RuleName::Push2;
          }
        } else if constexpr (std::is_same_v<T, Stmt::PushFlag>) {
          if (detail::is_value(x.value)) {
            c.delta.push_flag(x.stack, detail::value_of(x.value));
            consume();
            rule = RuleName::Push1;
          } else {
            detail::BStep s = detail::step_bexp(x.value, c.sigma, c.delta);
            stmts.front() = Stmt{Stmt::PushFlag{x.stack, s.next}, head.loc};
            rule = s.popped ? RuleName::Pop : RuleName::Push2;
          }
        } else {
          throw StuckError("par requires the parallel engine");
        }
      },
      stmts.front().node);
  return StepInfo{rule, std::move(head_text)};
}

inline std::pair<Configuration, StepInfo> step(Configuration c) {
  StepInfo info = step_inplace(c);
  return {std::move(c), std::move(info)};
}

// ---------------------------------------------------------------------------
// Whole-program runs
// ---------------------------------------------------------------------------

enum class RunStatus { Done, FuelExhausted };
enum class TraceMode { Off, Fused, Micro };

struct TraceEntry {
  RuleName rule;
  std::string head;
  std::string sigma;
  std::string delta;

  std::string str() const {
    return std::string(rule_name(rule)) + " | " + head + " | sigma=" + sigma +
           " | delta=" + delta;
  }
};
using Trace = std::vector<TraceEntry>;

struct RunResult {
  RunStatus status = RunStatus::Done;
  DataStore sigma;
  AuxStore delta;
  Trace trace;
  Fuel steps = 0;
};

namespace detail {

// Fused tracing keeps only the steps where something observable happens:
// completions and consuming pops.
inline bool fused_visible(RuleName r) {
  switch (r) {
    case RuleName::DA2:
    case RuleName::CA2:
    case RuleName::C3:
    case RuleName::Push2:
      return false;
    default:
      return true;
  }
}

}  // namespace detail

// Execute to termination or fuel exhaustion. Missing auxiliary stacks are
// declared up front (initially empty); sigma is taken as given and unbound
// variables surface as UnboundVariableError when first read.
inline RunResult run(const Program& p, DataStore sigma, AuxStore delta,
                     Fuel fuel = kDefaultFuel, TraceMode tm = TraceMode::Off) {
  for (const auto& v : variables_of(p))
    if (!delta.declared(v)) delta.declare(v);
  Configuration c{p, std::move(sigma), std::move(delta)};
  RunResult out;
  while (!c.terminal()) {
    if (out.steps >= fuel) {
      out.status = RunStatus::FuelExhausted;
      out.sigma = std::move(c.sigma);
      out.delta = std::move(c.delta);
      return out;
    }
    StepInfo info = step_inplace(c);
    ++out.steps;
    if (tm == TraceMode::Micro ||
        (tm == TraceMode::Fused && detail::fused_visible(info.rule))) {
      out.trace.push_back(TraceEntry{info.rule, std::move(info.head),
                                     to_string(c.sigma), to_string(c.delta)});
    }
  }
  out.status = RunStatus::Done;
  out.sigma = std::move(c.sigma);
  out.delta = std::move(c.delta);
  return out;
}

inline RunResult run(const Program& p, DataStore sigma, Fuel fuel = kDefaultFuel,
                     TraceMode tm = TraceMode::Off) {
  return run(p, std::move(sigma), AuxStore::sequential({}), fuel, tm);
}

}  // namespace reverso
