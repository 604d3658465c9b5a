#pragma once

// Property harness: seeded random program generation plus executable forms
// of the four reversibility properties.
//
//   1. Augmentation is conservative: running aug(P) computes the same data
//      store as running P.
//   2. Sequential round trip: running inv(P) from aug(P)'s final stores
//      restores the initial data store exactly and drains every stack.
//   3. A parallel forward run computes what the recorded completion order
//      computes sequentially, and stamps identifiers 1..n exactly once.
//   4. Parallel round trip: reversing the populated program restores the
//      initial stores, rewinds the counter, and mirrors the record.
//
// Every case is reproducible from (seed, config) alone: the program, its
// initial store, and any sampled schedules all derive from the case seed.
// Non-terminating generations are skipped, not failed — the properties
// quantify over terminating runs only.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "reverso/errors.hpp"
#include "reverso/par_engine.hpp"
#include "reverso/seq_engine.hpp"
#include "reverso/stores.hpp"
#include "reverso/syntax.hpp"
#include "reverso/transform.hpp"
#include "reverso/types.hpp"

namespace reverso {

// ---------------------------------------------------------------------------
// Generator configuration
// ---------------------------------------------------------------------------

enum class LoopBoundStyle {
  CounterPattern,  // guard C > 0 (or C - k > 0) with a trailing C -= 1,
                   // counter written nowhere else: termination by construction
  FuelOnly,        // arbitrary guards; runs may hit the fuel limit
};

struct GenConfig {
  std::uint64_t seed = 0;
  int maxDepth = 3;    // nesting depth of if/while/par
  int maxStmts = 20;   // total statement budget, nested statements included
  int varPool = 5;     // distinct variable names to draw from
  Dialect dialect = Dialect::Sequential;
  LoopBoundStyle loopBoundStyle = LoopBoundStyle::CounterPattern;
};

struct GenCase {
  Program program;
  DataStore sigma0;
  std::set<VarName> counters;  // loop counters (initialized from [0, 10])
  std::uint64_t seed = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base ^ splitmix64(index + 1));
}

inline std::uint64_t hash_name(std::uint64_t seed, const VarName& v) {
  std::uint64_t h = 0xCBF29CE484222325ull ^ seed;
  for (char c : v) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001B3ull;
  return splitmix64(h);
}

// In-range value derived from (seed, name) only, so a variable keeps its
// initial value while a failing program is being shrunk.
inline Int initial_value(std::uint64_t seed, const VarName& v, bool counter) {
  std::uint64_t h = hash_name(seed, v);
  if (counter) return Int(h % 11);                          // [0, 10]
  return Int(static_cast<std::int64_t>(h % 201) - 100);     // [-100, 100]
}

// B and W are reserved, T and F are literals; none appear here. Loop
// counters come from a disjoint pool and are never assignment targets, so a
// counter only ever moves by its loop's trailing decrement — which bounds
// every counter-pattern loop by its initial value and makes termination a
// construction invariant rather than a hope.
inline const std::vector<VarName>& var_pool() {
  static const std::vector<VarName> pool = {"X", "Y", "Z", "Q", "R",
                                            "S", "U", "A", "D", "E"};
  return pool;
}

inline const std::vector<VarName>& counter_pool() {
  static const std::vector<VarName> pool = {"N", "M", "K", "C", "G"};
  return pool;
}

struct Gen {
  std::mt19937_64 rng;
  const GenConfig& cfg;
  std::vector<VarName> vars;
  int budget;                      // statements still allowed
  std::set<VarName> counters;      // all counters ever used (for sigma0)

  Gen(const GenConfig& c)
      : rng(c.seed), cfg(c), budget(c.maxStmts) {
    int n = std::max(1, std::min<int>(c.varPool, var_pool().size()));
    vars.assign(var_pool().begin(), var_pool().begin() + n);
  }

  std::uint64_t roll(std::uint64_t n) {  // [0, n)
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
  }
  bool chance(double p) {
    return std::uniform_real_distribution<double>(0, 1)(rng) < p;
  }

  VarName pick_var() { return vars[roll(vars.size())]; }

  VarName pick_counter() {
    for (const auto& c : counter_pool())
      if (!counters.count(c)) {
        counters.insert(c);
        return c;
      }
    // All names in use; reuse one. Safe: counters only ever decrease.
    return counter_pool()[roll(counter_pool().size())];
  }

  // Generated expressions stay inside the canonical family the renderer
  // round-trips exactly: literals are nonnegative (the grammar has no
  // negative numerals; subtraction still reaches negative values at run
  // time), and anywhere the renderer would insert defensive parentheses the
  // generator builds an explicit paren node instead, so parsing the rendered
  // text reproduces the same tree.
  static AExpPtr paren_if_bin(AExpPtr e) {
    if (std::holds_alternative<AExp::Bin>(e->node)) return mk_paren(std::move(e));
    return e;
  }
  static BExpPtr bparen_if_bin(BExpPtr e) {
    if (std::holds_alternative<BExp::Bin>(e->node))
      return mk_bparen(std::move(e));
    return e;
  }
  static BExpPtr bparen_unless_atom(BExpPtr e) {
    bool atom = std::holds_alternative<BExp::Lit>(e->node) ||
                std::holds_alternative<BExp::Paren>(e->node) ||
                std::holds_alternative<BExp::Pop>(e->node) ||
                std::holds_alternative<BExp::Not>(e->node);
    return atom ? std::move(e) : mk_bparen(std::move(e));
  }

  AExpPtr gen_aexp(int depth, const VarName& forbid) {
    if (depth <= 0 || chance(0.45)) {
      if (chance(0.5)) {
        VarName v = pick_var();
        if (v == forbid) return mk_int(Int(roll(11)));
        return mk_var(v);
      }
      return mk_int(Int(roll(11)));
    }
    AExpPtr l = gen_aexp(depth - 1, forbid);
    AExpPtr r = paren_if_bin(gen_aexp(depth - 1, forbid));
    AExpPtr b = mk_bin(chance(0.5) ? ArithOp::Add : ArithOp::Sub, l, r);
    return chance(0.2) ? mk_paren(b) : b;
  }

  BExpPtr gen_bexp(int depth) {
    if (depth <= 0 || chance(0.55)) {
      return mk_cmp(chance(0.5) ? CmpOp::Gt : CmpOp::Eq, gen_aexp(1, ""),
                    paren_if_bin(gen_aexp(1, "")));
    }
    switch (roll(3)) {
      case 0: return mk_not(bparen_unless_atom(gen_bexp(depth - 1)));
      case 1:
        return mk_bbin(BoolOp::And, gen_bexp(depth - 1),
                       bparen_if_bin(gen_bexp(depth - 1)));
      default:
        return mk_bbin(BoolOp::Eq, gen_bexp(depth - 1),
                       bparen_if_bin(gen_bexp(depth - 1)));
    }
  }

  void gen_stmt(Program& out, int depth) {
    if (budget <= 0) return;
    bool can_nest = depth < cfg.maxDepth;
    bool seq = cfg.dialect == Dialect::Sequential;
    std::uint64_t kind = roll(10);
    if (seq && can_nest && budget >= 3 && kind >= 8) {
      gen_if(out, depth);
      return;
    }
    if (seq && can_nest && budget >= 4 && kind >= 6) {
      gen_while(out, depth);
      return;
    }
    if (!seq && can_nest && budget >= 3 && kind >= 7) {
      gen_par(out, depth);
      return;
    }
    --budget;
    if (kind == 0) {
      out.stmts.push_back(st_skip());
      return;
    }
    VarName target = pick_var();
    if (kind <= 5) {
      out.stmts.push_back(st_assign(target, gen_aexp(2, "")));
    } else {
      out.stmts.push_back(st_cassign(
          target, chance(0.5) ? CopKind::PlusEq : CopKind::MinusEq,
          gen_aexp(2, target)));
    }
  }

  void gen_block(Program& out, int depth, int max_here) {
    for (int i = 0; i < max_here && budget > 0; ++i) {
      gen_stmt(out, depth);
      if (chance(0.25)) break;
    }
  }

  void gen_if(Program& out, int depth) {
    --budget;  // the if itself
    Program then_b, else_b;
    gen_block(then_b, depth + 1, 3);
    gen_block(else_b, depth + 1, 3);
    if (then_b.stmts.empty()) {
      --budget;
      then_b.stmts.push_back(st_skip());
    }
    if (else_b.stmts.empty()) {
      --budget;
      else_b.stmts.push_back(st_skip());
    }
    out.stmts.push_back(
        st_if(gen_bexp(2), std::move(then_b), std::move(else_b)));
  }

  void gen_while(Program& out, int depth) {
    if (cfg.loopBoundStyle == LoopBoundStyle::FuelOnly) {
      --budget;  // the while itself
      Program body;
      gen_block(body, depth + 1, 3);
      if (body.stmts.empty()) {
        --budget;
        body.stmts.push_back(st_skip());
      }
      out.stmts.push_back(st_while(gen_bexp(2), std::move(body)));
      return;
    }
    // The decrementing-counter pattern: guard on the counter, body ends with
    // C -= 1, and no assignment anywhere targets a counter.
    VarName c = pick_counter();
    budget -= 2;  // the while and the trailing decrement
    Program body;
    gen_block(body, depth + 1, 3);
    body.stmts.push_back(st_cassign(c, CopKind::MinusEq, mk_int(Int(1))));
    BExpPtr guard;
    std::uint64_t k = roll(4);
    if (k == 0)
      guard = mk_cmp(CmpOp::Gt, mk_var(c), mk_int(Int(0)));
    else
      guard = mk_cmp(CmpOp::Gt,
                     mk_bin(ArithOp::Sub, mk_var(c), mk_int(Int(k))),
                     mk_int(Int(0)));
    out.stmts.push_back(st_while(std::move(guard), std::move(body)));
  }

  void gen_par(Program& out, int depth) {
    --budget;  // the par itself
    Program left, right;
    gen_block(left, depth + 1, 3);
    gen_block(right, depth + 1, 3);
    if (left.stmts.empty()) {
      --budget;
      left.stmts.push_back(st_skip());
    }
    if (right.stmts.empty()) {
      --budget;
      right.stmts.push_back(st_skip());
    }
    out.stmts.push_back(st_par(std::move(left), std::move(right)));
  }
};

}  // namespace detail

inline GenCase gen_case(const GenConfig& cfg) {
  detail::Gen g(cfg);
  GenCase out;
  out.seed = cfg.seed;
  while (g.budget > 0) {
    size_t before = out.program.stmts.size();
    g.gen_stmt(out.program, 0);
    if (out.program.stmts.size() == before) break;
  }
  out.counters = g.counters;
  for (const auto& v : variables_of(out.program))
    out.sigma0.set(v,
                   detail::initial_value(cfg.seed, v, out.counters.count(v)));
  return out;
}

inline Program gen_program(const GenConfig& cfg) {
  return gen_case(cfg).program;
}

// ---------------------------------------------------------------------------
// Property checks
// ---------------------------------------------------------------------------

struct PropOptions {
  Fuel fuel = kDefaultFuel;
  TransformFaults faults;  // injected into the transforms under test
  int bound = 16;          // statement cap for exhaustive schedule enumeration
};

struct Exhaustive {};
struct Sampled {
  std::uint64_t n = 16;
  std::uint64_t seed = 0;
};
using ScheduleMode = std::variant<Exhaustive, Sampled>;

struct Failure {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  std::string program;
  std::string minimized;  // empty when minimization was off or did not run
  std::string detail;
};

struct PropertyReport {
  std::uint64_t cases = 0;
  std::uint64_t passes = 0;
  std::uint64_t skips = 0;  // non-terminating generations (fuel)
  std::vector<Failure> failures;
  double elapsed_ms = 0;

  bool ok() const { return failures.empty(); }
};

namespace detail {

struct CaseVerdict {
  enum class Kind { Pass, Skip, Fail } kind = Kind::Pass;
  std::string detail;

  static CaseVerdict pass() { return {}; }
  static CaseVerdict skip(std::string d) {
    return {Kind::Skip, std::move(d)};
  }
  static CaseVerdict fail(std::string d) {
    return {Kind::Fail, std::move(d)};
  }
};

inline CaseVerdict prop1_case(const Program& p, const DataStore& sigma0,
                              const PropOptions& opts) {
  try {
    RunResult plain = run(p, sigma0, opts.fuel);
    if (plain.status == RunStatus::FuelExhausted)
      return CaseVerdict::skip("plain run hit the fuel limit");
    RunResult augmented = run(aug(p, opts.faults).program, sigma0, opts.fuel);
    if (augmented.status == RunStatus::FuelExhausted)
      return CaseVerdict::skip("augmented run hit the fuel limit");
    if (!plain.delta.empty())
      return CaseVerdict::fail("plain run touched the auxiliary store: " +
                               to_string(plain.delta));
    if (!(plain.sigma == augmented.sigma))
      return CaseVerdict::fail("sigma mismatch: plain=" +
                               to_string(plain.sigma) + " augmented=" +
                               to_string(augmented.sigma));
    return CaseVerdict::pass();
  } catch (const Error& e) {
    return CaseVerdict::fail(e.what());
  }
}

inline CaseVerdict prop2_case(const Program& p, const DataStore& sigma0,
                              const PropOptions& opts) {
  try {
    RunResult fwd = run(aug(p, opts.faults).program, sigma0, opts.fuel);
    if (fwd.status == RunStatus::FuelExhausted)
      return CaseVerdict::skip("forward run hit the fuel limit");
    RunResult rev =
        run(inv(p, opts.faults).program, fwd.sigma, fwd.delta, opts.fuel);
    // The forward run terminated, so a correct inverse must too.
    if (rev.status == RunStatus::FuelExhausted)
      return CaseVerdict::fail("inverse run hit the fuel limit");
    if (!(rev.sigma == sigma0))
      return CaseVerdict::fail("store not restored: got " +
                               to_string(rev.sigma) + " expected " +
                               to_string(sigma0));
    if (!rev.delta.empty())
      return CaseVerdict::fail("auxiliary store not drained: " +
                               to_string(rev.delta));
    return CaseVerdict::pass();
  } catch (const Error& e) {
    return CaseVerdict::fail(e.what());
  }
}

inline void apply_record_stmt(DataStore& sigma, const Stmt& s) {
  if (const auto* d = std::get_if<Stmt::DestAssign>(&s.node)) {
    sigma.set(d->target, eval_aexp(d->rhs, sigma));
  } else if (const auto* c = std::get_if<Stmt::ConstAssign>(&s.node)) {
    Int v = eval_aexp(c->rhs, sigma);
    const Int& cur = sigma.get(c->target);
    sigma.set(c->target,
              c->op == CopKind::PlusEq ? Int(cur + v) : Int(cur - v));
  }
}

inline std::string id_list_str(const std::vector<Identifier>& ids) {
  std::string out = "[";
  for (size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(ids[i]);
  }
  return out + "]";
}

inline CaseVerdict prop34_schedule(const AnnProgram& ap,
                                   const DataStore& sigma0,
                                   const AuxStore& delta0,
                                   const Schedule& schedule,
                                   const PropOptions& opts) {
  ForwardResult fwd;
  try {
    fwd = fwd_run(ap, sigma0, delta0, schedule, opts.fuel);
  } catch (const Error& e) {
    return CaseVerdict::fail(std::string("forward (") + schedule.str() +
                             "): " + e.what());
  }
  if (fwd.status == ParStatus::FuelExhausted)
    return CaseVerdict::skip("forward run hit the fuel limit");

  // The recorded completion order, replayed sequentially, lands on the
  // same data store.
  DataStore replay = sigma0;
  for (const auto& e : fwd.record) apply_record_stmt(replay, e.stmt);
  if (!(replay == fwd.sigma))
    return CaseVerdict::fail(
        "schedule " + schedule.str() + ": record replay gives " +
        to_string(replay) + " but the run gave " + to_string(fwd.sigma));

  // Identifiers 1..n, each exactly once, record in issue order.
  std::uint64_t n = fwd.record.size();
  for (std::uint64_t i = 0; i < n; ++i)
    if (fwd.record[i].id != i + 1)
      return CaseVerdict::fail("schedule " + schedule.str() +
                               ": record identifiers are not 1..n in order");
  std::vector<Identifier> stamped = collect_ids(fwd.program);
  std::sort(stamped.begin(), stamped.end());
  bool ids_ok = stamped.size() == n;
  for (std::uint64_t i = 0; ids_ok && i < n; ++i)
    ids_ok = stamped[i] == i + 1;
  if (!ids_ok)
    return CaseVerdict::fail("schedule " + schedule.str() +
                             ": statements carry identifiers " +
                             id_list_str(stamped) + ", expected 1.." +
                             std::to_string(n));
  if (fwd.counter.previous() != n)
    return CaseVerdict::fail("schedule " + schedule.str() +
                             ": counter is off after the forward run");

  ReverseResult rev;
  try {
    rev = rev_run(inv_annotated(fwd.program, opts.faults), fwd.sigma,
                  fwd.delta, fwd.counter, opts.fuel);
  } catch (const Error& e) {
    return CaseVerdict::fail(std::string("reverse (") + schedule.str() +
                             "): " + e.what());
  }
  if (rev.status == ParStatus::FuelExhausted)
    return CaseVerdict::fail("reverse run hit the fuel limit");
  if (!(rev.sigma == sigma0))
    return CaseVerdict::fail("schedule " + schedule.str() +
                             ": store not restored: got " +
                             to_string(rev.sigma) + " expected " +
                             to_string(sigma0));
  if (!(rev.delta == delta0))
    return CaseVerdict::fail("schedule " + schedule.str() +
                             ": auxiliary store not restored: " +
                             to_string(rev.delta));
  if (!(rev.counter == IdentifierCounter{}))
    return CaseVerdict::fail("schedule " + schedule.str() +
                             ": identifier counter not rewound");
  bool mirror = rev.record.size() == n;
  for (std::uint64_t i = 0; mirror && i < n; ++i)
    mirror = rev.record[i].id == fwd.record[n - 1 - i].id;
  if (!mirror)
    return CaseVerdict::fail("schedule " + schedule.str() +
                             ": reverse record does not mirror the forward "
                             "record");
  return CaseVerdict::pass();
}

inline CaseVerdict prop34_case(const Program& p, const DataStore& sigma0,
                               const ScheduleMode& mode,
                               const PropOptions& opts) {
  AnnProgram ap;
  try {
    ap = ann(p);
  } catch (const Error& e) {
    return CaseVerdict::fail(e.what());
  }
  AuxStore delta0 = AuxStore::parallel(variables_of(p));

  std::vector<Schedule> schedules;
  if (std::holds_alternative<Exhaustive>(mode)) {
    if (stmt_count(p) > opts.bound)
      return CaseVerdict::skip("over the exhaustive enumeration bound");
    schedules = enumerate_schedules(ap);
  } else {
    const auto& s = std::get<Sampled>(mode);
    for (std::uint64_t i = 0; i < s.n; ++i)
      schedules.push_back(Schedule::seeded(mix_seed(s.seed, i)));
  }
  bool skipped = false;
  for (const auto& schedule : schedules) {
    CaseVerdict v = prop34_schedule(ap, sigma0, delta0, schedule, opts);
    if (v.kind == CaseVerdict::Kind::Fail) return v;
    if (v.kind == CaseVerdict::Kind::Skip) skipped = true;
  }
  if (skipped) return CaseVerdict::skip("a schedule hit the fuel limit");
  return CaseVerdict::pass();
}

}  // namespace detail

// Single-input forms: a one-case report.
inline PropertyReport check_prop1(const Program& p, const DataStore& sigma0,
                                  const PropOptions& opts = {}) {
  auto t0 = std::chrono::steady_clock::now();
  detail::CaseVerdict v = detail::prop1_case(p, sigma0, opts);
  PropertyReport r;
  r.cases = 1;
  if (v.kind == detail::CaseVerdict::Kind::Pass) r.passes = 1;
  else if (v.kind == detail::CaseVerdict::Kind::Skip) r.skips = 1;
  else r.failures.push_back(Failure{0, 0, render(p), "", v.detail});
  r.elapsed_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  return r;
}

inline PropertyReport check_prop2(const Program& p, const DataStore& sigma0,
                                  const PropOptions& opts = {}) {
  auto t0 = std::chrono::steady_clock::now();
  detail::CaseVerdict v = detail::prop2_case(p, sigma0, opts);
  PropertyReport r;
  r.cases = 1;
  if (v.kind == detail::CaseVerdict::Kind::Pass) r.passes = 1;
  else if (v.kind == detail::CaseVerdict::Kind::Skip) r.skips = 1;
  else r.failures.push_back(Failure{0, 0, render(p), "", v.detail});
  r.elapsed_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  return r;
}

inline PropertyReport check_prop3_prop4(const Program& p,
                                        const DataStore& sigma0,
                                        const ScheduleMode& mode = Exhaustive{},
                                        const PropOptions& opts = {}) {
  auto t0 = std::chrono::steady_clock::now();
  detail::CaseVerdict v = detail::prop34_case(p, sigma0, mode, opts);
  PropertyReport r;
  r.cases = 1;
  if (v.kind == detail::CaseVerdict::Kind::Pass) r.passes = 1;
  else if (v.kind == detail::CaseVerdict::Kind::Skip) r.skips = 1;
  else r.failures.push_back(Failure{0, 0, render(p), "", v.detail});
  r.elapsed_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  return r;
}

// ---------------------------------------------------------------------------
// Minimization
// ---------------------------------------------------------------------------

namespace detail {

// Candidate simplifications of one statement position: drop it, or replace a
// compound statement by one of its bodies.
inline std::vector<Program> shrink_once(const Program& p);

inline void shrink_positions(const Program& p,
                             std::vector<Program>& out) {
  for (size_t i = 0; i < p.stmts.size(); ++i) {
    {
      Program cand = p;
      cand.stmts.erase(cand.stmts.begin() + i);
      out.push_back(std::move(cand));
    }
    const Stmt& s = p.stmts[i];
    auto splice = [&](const Program& replacement) {
      Program cand = p;
      cand.stmts.erase(cand.stmts.begin() + i);
      cand.stmts.insert(cand.stmts.begin() + i, replacement.stmts.begin(),
                        replacement.stmts.end());
      out.push_back(std::move(cand));
    };
    if (const auto* f = std::get_if<Stmt::If>(&s.node)) {
      splice(f->then_body);
      splice(f->else_body);
    } else if (const auto* w = std::get_if<Stmt::While>(&s.node)) {
      splice(w->body);
    } else if (const auto* par = std::get_if<Stmt::Par>(&s.node)) {
      splice(par->left);
      splice(par->right);
    }
    // Shrink inside compound bodies.
    auto nested = [&](const Program& body,
                      auto rebuild) {
      for (Program& smaller : shrink_once(body)) {
        Program cand = p;
        cand.stmts[i] = rebuild(std::move(smaller));
        out.push_back(std::move(cand));
      }
    };
    if (const auto* f = std::get_if<Stmt::If>(&s.node)) {
      nested(f->then_body, [&](Program b) {
        return st_if(f->cond, std::move(b), f->else_body, s.loc);
      });
      nested(f->else_body, [&](Program b) {
        return st_if(f->cond, f->then_body, std::move(b), s.loc);
      });
    } else if (const auto* w = std::get_if<Stmt::While>(&s.node)) {
      nested(w->body,
             [&](Program b) { return st_while(w->cond, std::move(b), s.loc); });
    } else if (const auto* par = std::get_if<Stmt::Par>(&s.node)) {
      nested(par->left, [&](Program b) {
        return st_par(std::move(b), par->right, s.loc);
      });
      nested(par->right, [&](Program b) {
        return st_par(par->left, std::move(b), s.loc);
      });
    }
  }
}

inline std::vector<Program> shrink_once(const Program& p) {
  std::vector<Program> out;
  shrink_positions(p, out);
  return out;
}

}  // namespace detail

// Greedy shrinking: keep applying the first simplification that still fails
// the oracle. The oracle returns true while the program still demonstrates
// the failure.
inline Program minimize(const Program& failing,
                        const std::function<bool(const Program&)>& oracle) {
  if (!oracle(failing))
    throw NotFailingError("minimize needs a failing input");
  Program current = failing;
  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (Program& cand : detail::shrink_once(current)) {
      if (stmt_count(cand) >= stmt_count(current)) continue;
      try {
        if (!oracle(cand)) continue;
      } catch (const Error&) {
        continue;  // a candidate that errors out is not a cleaner witness
      }
      current = std::move(cand);
      progressed = true;
      break;
    }
  }
  return current;
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

enum class Prop { P1, P2, P34 };

struct SuiteConfig {
  GenConfig gen;
  std::uint64_t cases = 1000;
  PropOptions opts;
  ScheduleMode mode = Exhaustive{};  // P34 only
  unsigned jobs = 1;
  bool minimize_failures = true;
  bool stop_on_failure = false;
};

namespace detail {

inline CaseVerdict run_one_case(Prop prop, const GenCase& g,
                                const SuiteConfig& sc) {
  switch (prop) {
    case Prop::P1: return prop1_case(g.program, g.sigma0, sc.opts);
    case Prop::P2: return prop2_case(g.program, g.sigma0, sc.opts);
    case Prop::P34: {
      ScheduleMode mode = sc.mode;
      if (auto* s = std::get_if<Sampled>(&mode))
        s->seed = mix_seed(s->seed, g.seed);  // schedules replay per case
      return prop34_case(g.program, g.sigma0, mode, sc.opts);
    }
  }
  return CaseVerdict::fail("unknown property");
}

inline std::function<bool(const Program&)> failure_oracle(
    Prop prop, const SuiteConfig& sc, const GenCase& original) {
  // sigma0 for a shrunk candidate: same per-name derivation as gen_case,
  // so values survive statement removal.
  return [prop, sc, counters = original.counters,
          seed = original.seed](const Program& cand) {
    DataStore sigma0;
    for (const auto& v : variables_of(cand))
      sigma0.set(v, initial_value(seed, v, counters.count(v)));
    CaseVerdict v = run_one_case(
        prop, GenCase{cand, std::move(sigma0), counters, seed}, sc);
    return v.kind == CaseVerdict::Kind::Fail;
  };
}

}  // namespace detail

inline PropertyReport run_suite(Prop prop, const SuiteConfig& sc) {
  auto t0 = std::chrono::steady_clock::now();
  PropertyReport report;
  report.cases = sc.cases;

  struct Slot {
    detail::CaseVerdict verdict;
    std::uint64_t seed = 0;
    std::string program;
    bool executed = false;
  };
  std::vector<Slot> slots(sc.cases);
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> bail{false};

  auto worker = [&] {
    for (;;) {
      std::uint64_t i = next.fetch_add(1);
      if (i >= sc.cases || bail.load()) return;
      GenConfig cfg = sc.gen;
      cfg.seed = detail::mix_seed(sc.gen.seed, i);
      GenCase g = gen_case(cfg);
      slots[i].seed = cfg.seed;
      slots[i].program = render(g.program);
      slots[i].verdict = detail::run_one_case(prop, g, sc);
      slots[i].executed = true;
      if (sc.stop_on_failure &&
          slots[i].verdict.kind == detail::CaseVerdict::Kind::Fail)
        bail.store(true);
    }
  };

  unsigned jobs = std::max(1u, sc.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  report.cases = 0;
  for (std::uint64_t i = 0; i < sc.cases; ++i) {
    const Slot& s = slots[i];
    if (!s.executed) continue;
    ++report.cases;
    switch (s.verdict.kind) {
      case detail::CaseVerdict::Kind::Pass: ++report.passes; break;
      case detail::CaseVerdict::Kind::Skip: ++report.skips; break;
      case detail::CaseVerdict::Kind::Fail: {
        Failure f;
        f.index = i;
        f.seed = s.seed;
        f.program = s.program;
        f.detail = s.verdict.detail;
        if (sc.minimize_failures) {
          GenConfig cfg = sc.gen;
          cfg.seed = s.seed;
          GenCase g = gen_case(cfg);
          try {
            f.minimized =
                render(minimize(g.program, detail::failure_oracle(prop, sc, g)));
          } catch (const Error&) {
            // Leave it empty; the full program and seed still replay.
          }
        }
        report.failures.push_back(std::move(f));
        break;
      }
    }
  }
  report.elapsed_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  return report;
}

// ---------------------------------------------------------------------------
// Mutation detection
// ---------------------------------------------------------------------------

// Single-clause corruptions of the transforms, each of which the property
// suites must catch on a generated corpus.
struct MutationSpec {
  std::string name;
  TransformFaults faults;
  Prop prop;  // the suite expected to catch it
};

inline std::vector<MutationSpec> standard_mutations() {
  std::vector<MutationSpec> out;
  TransformFaults f;
  f = {}; f.drop_destructive_push = true;
  out.push_back({"aug drops the save before a destructive assignment", f,
                 Prop::P2});
  f = {}; f.swap_branch_flags = true;
  out.push_back({"aug records the opposite branch flag", f, Prop::P2});
  f = {}; f.while_first_flag_true = true;
  out.push_back({"aug records T for loop entry", f, Prop::P2});
  f = {}; f.drop_while_exit_flag = true;
  out.push_back({"aug drops the loop exit flag", f, Prop::P2});
  f = {}; f.keep_statement_order = true;
  out.push_back({"inv keeps statement order", f, Prop::P2});
  f = {}; f.keep_constructive_op = true;
  out.push_back({"inv keeps the constructive operator", f, Prop::P2});
  f = {}; f.ann_keep_statement_order = true;
  out.push_back({"annotated inv keeps statement order", f, Prop::P34});
  f = {}; f.ann_keep_constructive_op = true;
  out.push_back({"annotated inv keeps the constructive operator", f,
                 Prop::P34});
  return out;
}

struct MutationOutcome {
  std::string name;
  bool detected = false;
  std::uint64_t cases_run = 0;
  std::string witness;  // a minimized failing program, when one was found
};

// Runs the property suite with each fault injected and reports whether the
// suite caught it. Stops each suite at its first failure.
inline std::vector<MutationOutcome> detect_transform_mutations(
    const SuiteConfig& seq_base, const SuiteConfig& par_base,
    const std::vector<MutationSpec>& mutations = standard_mutations()) {
  std::vector<MutationOutcome> out;
  for (const auto& m : mutations) {
    SuiteConfig sc = m.prop == Prop::P34 ? par_base : seq_base;
    sc.opts.faults = m.faults;
    sc.stop_on_failure = true;
    PropertyReport r = run_suite(m.prop, sc);
    MutationOutcome o;
    o.name = m.name;
    o.detected = !r.failures.empty();
    o.cases_run = r.cases;
    if (o.detected) {
      const Failure& f = r.failures.front();
      o.witness = f.minimized.empty() ? f.program : f.minimized;
    }
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace reverso
