#pragma once

// Execution of the parallel dialect.
//
// Forward runs interleave statement completions under a pluggable Schedule:
// each completed assignment is stamped with the next identifier (destructive
// ones also save (id, old value) on the variable's tagged stack), producing
// the populated annotated program, the final stores, and the interleaving
// record. Reverse runs execute the inverted annotated program with no
// schedule at all: a statement may complete only when its head identifier is
// the most recently issued one (and, for a destructive assignment, also
// matches the head of its tagged stack), which makes reverse execution
// deterministic — at most one completion is enabled at any moment, and that
// is asserted.
//
// Parallelism is simulated on one thread of control. Statements are atomic:
// a scheduler decision point is a whole statement completion, and expression
// evaluation never interleaves. Draining a completed/skip statement and
// collapsing a finished par are bookkeeping, consuming neither identifiers
// nor schedule entries, so a schedule lists exactly one entry per assignment
// completion.
//
// Schedule entries address statements by their par-ancestry within the
// currently active statement: "L"/"R" descend a par, longer strings like
// "LR" address nested pars, and "." names a statement with no par ancestor.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "reverso/errors.hpp"
#include "reverso/stores.hpp"
#include "reverso/syntax.hpp"
#include "reverso/transform.hpp"
#include "reverso/types.hpp"

namespace reverso {

// ---------------------------------------------------------------------------
// Schedules
// ---------------------------------------------------------------------------

enum class Branch { Left, Right };

// Descent through the par nodes enclosing a statement; empty means top level.
struct StepPath {
  std::vector<Branch> branches;

  friend bool operator==(const StepPath&, const StepPath&) = default;

  std::string str() const {
    if (branches.empty()) return ".";
    std::string out;
    for (Branch b : branches) out += b == Branch::Left ? 'L' : 'R';
    return out;
  }

  static StepPath parse(const std::string& token) {
    StepPath p;
    if (token == ".") return p;
    if (token.empty())
      throw ScheduleError("empty schedule token: expected '.', or L/R");
    for (char c : token) {
      if (c == 'L' || c == 'l') p.branches.push_back(Branch::Left);
      else if (c == 'R' || c == 'r') p.branches.push_back(Branch::Right);
      else
        throw ScheduleError("bad schedule token '" + token
                            + "': expected '.', or a string of L/R");
    }
    return p;
  }
};

struct Schedule {
  enum class Kind {
    Explicit,      // fixed list of paths, one per completion
    Seeded,        // uniform choice among enabled handles, seeded PRNG
    PresetFirst,   // always the first enabled handle (leftmost)
    PresetLast,    // always the last enabled handle (rightmost)
    PresetRoundRobin,
    Exhaustive,    // only meaningful to enumerate_interleavings
  };

  Kind kind = Kind::PresetFirst;
  std::vector<StepPath> choices;  // Explicit
  std::uint64_t seed = 0;         // Seeded

  static Schedule explicit_paths(std::vector<StepPath> paths) {
    return Schedule{Kind::Explicit, std::move(paths), 0};
  }
  static Schedule seeded(std::uint64_t s) { return Schedule{Kind::Seeded, {}, s}; }
  static Schedule first() { return Schedule{Kind::PresetFirst, {}, 0}; }
  static Schedule last() { return Schedule{Kind::PresetLast, {}, 0}; }
  static Schedule round_robin() { return Schedule{Kind::PresetRoundRobin, {}, 0}; }
  static Schedule exhaustive() { return Schedule{Kind::Exhaustive, {}, 0}; }

  std::string str() const {
    switch (kind) {
      case Kind::Seeded: return "seed:" + std::to_string(seed);
      case Kind::PresetFirst: return "first";
      case Kind::PresetLast: return "last";
      case Kind::PresetRoundRobin: return "rr";
      case Kind::Exhaustive: return "exhaustive";
      case Kind::Explicit: break;
    }
    std::string out;
    for (size_t i = 0; i < choices.size(); ++i) {
      if (i) out += ",";
      out += choices[i].str();
    }
    return out;
  }
};

// "first" | "last" | "rr" | "seed:<n>" | "exhaustive" | comma-separated paths.
inline Schedule parse_schedule(const std::string& text) {
  if (text == "first") return Schedule::first();
  if (text == "last") return Schedule::last();
  if (text == "rr") return Schedule::round_robin();
  if (text == "exhaustive") return Schedule::exhaustive();
  if (text.rfind("seed:", 0) == 0) {
    try {
      return Schedule::seeded(std::stoull(text.substr(5)));
    } catch (const std::exception&) {
      throw ScheduleError("bad schedule seed in '" + text + "'");
    }
  }
  if (text.empty()) throw ScheduleError("empty schedule");
  std::vector<StepPath> paths;
  size_t start = 0;
  while (start <= text.size()) {
    size_t comma = text.find(',', start);
    std::string token = comma == std::string::npos
                            ? text.substr(start)
                            : text.substr(start, comma - start);
    paths.push_back(StepPath::parse(token));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return Schedule::explicit_paths(std::move(paths));
}

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

// One completed statement: its identifier and the (unannotated) statement.
struct RecordEntry {
  Identifier id = 0;
  std::string text;
  Stmt stmt;

  friend bool operator==(const RecordEntry& a, const RecordEntry& b) {
    return a.id == b.id && a.text == b.text;
  }
};
using InterleavingRecord = std::vector<RecordEntry>;

struct ParTraceEntry {
  std::string rule;
  std::string head;
  std::string sigma;
  std::string delta;

  std::string str() const {
    return rule + " | " + head + " | sigma=" + sigma + " | delta=" + delta;
  }
};
using ParTrace = std::vector<ParTraceEntry>;

enum class ParStatus { Done, FuelExhausted };

struct ForwardResult {
  ParStatus status = ParStatus::Done;
  AnnProgram program;  // populated: every completed statement carries its ids
  DataStore sigma;
  AuxStore delta;
  IdentifierCounter counter;
  InterleavingRecord record;
  ParTrace trace;
  Fuel steps = 0;  // completions
};

struct ReverseResult {
  ParStatus status = ParStatus::Done;
  DataStore sigma;
  AuxStore delta;
  IdentifierCounter counter;
  InterleavingRecord record;  // reverse completion order
  ParTrace trace;
  Fuel steps = 0;
};

struct ParConfiguration {
  AnnProgram program;
  DataStore sigma;
  AuxStore delta;
  IdentifierCounter counter;
};

struct StepHandle {
  StepPath path;
  std::string text;  // the statement this handle would complete
};

// ---------------------------------------------------------------------------
// Execution tree
// ---------------------------------------------------------------------------

namespace detail {

// Pure evaluation; parallel-dialect expressions contain no pops.
inline Int eval_aexp(const AExpPtr& e, const DataStore& sigma) {
  return std::visit(
      [&](const auto& x) -> Int {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, AExp::Var>) return sigma.get(x.name);
        else if constexpr (std::is_same_v<T, AExp::Lit>) return x.value;
        else if constexpr (std::is_same_v<T, AExp::Paren>)
          return eval_aexp(x.inner, sigma);
        else if constexpr (std::is_same_v<T, AExp::Bin>) {
          Int l = eval_aexp(x.lhs, sigma), r = eval_aexp(x.rhs, sigma);
          return x.op == ArithOp::Add ? Int(l + r) : Int(l - r);
        } else {
          throw StuckError("pop does not occur in the parallel dialect");
        }
      },
      e->node);
}

// The annotated program with execution marking. Statements are never removed;
// a cursor per sequence plus done flags express the [Skip]/[P1]/[P2]
// bookkeeping, which keeps L/R paths stable for the whole run.
struct ExecNode;

struct ExecSeq {
  std::vector<ExecNode> nodes;
  size_t cursor = 0;
  bool done() const;
};

struct ExecNode {
  enum class Kind { Skip, Dest, Const, Par };
  Kind kind = Kind::Skip;
  VarName target;
  CopKind op = CopKind::PlusEq;
  AExpPtr rhs;
  IdStack ids;  // head first
  SrcLoc loc;
  bool completed = false;        // leaves only
  std::vector<ExecSeq> kids;     // two entries for Par

  bool done() const {
    if (kind == Kind::Par) return kids[0].done() && kids[1].done();
    return completed;
  }

  // The statement as written (ids included), for traces and errors.
  AnnStmt to_ann() const {
    AnnStmt s;
    s.ids = ids;
    s.loc = loc;
    switch (kind) {
      case Kind::Skip: s.node = Stmt::Skip{}; break;
      case Kind::Dest: s.node = Stmt::DestAssign{target, rhs}; break;
      case Kind::Const: s.node = Stmt::ConstAssign{target, op, rhs}; break;
      case Kind::Par: {
        AnnStmt::Par p;
        for (int side = 0; side < 2; ++side) {
          AnnProgram prog;
          for (const auto& n : kids[side].nodes) prog.stmts.push_back(n.to_ann());
          (side == 0 ? p.left : p.right) = std::move(prog);
        }
        s.node = std::move(p);
        break;
      }
    }
    return s;
  }

  Stmt to_plain() const {
    return strip_annotations(to_ann());
  }
};

inline bool ExecSeq::done() const {
  return cursor >= nodes.size();
}

inline ExecSeq build_seq(const AnnProgram& p) {
  ExecSeq seq;
  seq.nodes.reserve(p.stmts.size());
  for (const auto& s : p.stmts) {
    ExecNode n;
    n.ids = s.ids;
    n.loc = s.loc;
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Stmt::Skip>) {
            n.kind = ExecNode::Kind::Skip;
          } else if constexpr (std::is_same_v<T, Stmt::DestAssign>) {
            n.kind = ExecNode::Kind::Dest;
            n.target = x.target;
            n.rhs = x.rhs;
          } else if constexpr (std::is_same_v<T, Stmt::ConstAssign>) {
            n.kind = ExecNode::Kind::Const;
            n.target = x.target;
            n.op = x.op;
            n.rhs = x.rhs;
          } else {
            n.kind = ExecNode::Kind::Par;
            n.kids.push_back(build_seq(x.left));
            n.kids.push_back(build_seq(x.right));
          }
        },
        s.node);
    seq.nodes.push_back(std::move(n));
  }
  return seq;
}

// Bookkeeping transitions: drain skips and completed statements, collapse
// finished pars. Consumes no identifiers and no schedule entries. In reverse
// runs skips carry no identifiers (they never receive one going forward), so
// the same drain applies.
inline void normalize(ExecSeq& seq) {
  while (!seq.done()) {
    ExecNode& n = seq.nodes[seq.cursor];
    if (n.kind == ExecNode::Kind::Par) {
      normalize(n.kids[0]);
      normalize(n.kids[1]);
      if (!n.done()) return;
      ++seq.cursor;
      continue;
    }
    if (n.kind == ExecNode::Kind::Skip) n.completed = true;
    if (!n.completed) return;
    ++seq.cursor;
  }
}

struct Frontier {
  StepPath path;
  ExecNode* node;
};

// Every assignment that could complete next, in leftmost (DFS) order.
// Call normalize first.
inline void frontier_of(ExecSeq& seq, StepPath prefix,
                        std::vector<Frontier>& out) {
  if (seq.done()) return;
  ExecNode& n = seq.nodes[seq.cursor];
  if (n.kind == ExecNode::Kind::Par) {
    for (int side = 0; side < 2; ++side) {
      if (n.kids[side].done()) continue;
      StepPath p = prefix;
      p.branches.push_back(side == 0 ? Branch::Left : Branch::Right);
      frontier_of(n.kids[side], std::move(p), out);
    }
    return;
  }
  out.push_back(Frontier{std::move(prefix), &n});
}

inline AnnProgram rebuild(const ExecSeq& seq) {
  AnnProgram out;
  out.stmts.reserve(seq.nodes.size());
  for (const auto& n : seq.nodes) out.stmts.push_back(n.to_ann());
  return out;
}

inline ExecNode* match_path(std::vector<Frontier>& handles,
                            const StepPath& path) {
  for (auto& h : handles)
    if (h.path == path) return h.node;
  return nullptr;
}

inline std::string enabled_list(const std::vector<Frontier>& handles) {
  std::string out;
  for (size_t i = 0; i < handles.size(); ++i) {
    if (i) out += ", ";
    out += handles[i].path.str() + " -> " +
           inline_stmt(handles[i].node->to_plain());
  }
  return out.empty() ? "none" : out;
}

// Scheduler state shared across one forward run.
struct Chooser {
  const Schedule& schedule;
  size_t next_choice = 0;
  size_t rr = 0;
  std::mt19937_64 rng;

  explicit Chooser(const Schedule& s) : schedule(s), rng(s.seed) {}

  ExecNode* pick(std::vector<Frontier>& handles) {
    switch (schedule.kind) {
      case Schedule::Kind::Explicit: {
        if (next_choice >= schedule.choices.size())
          throw ScheduleError(
              "schedule exhausted after " + std::to_string(next_choice) +
              " choices; enabled: " + enabled_list(handles));
        const StepPath& want = schedule.choices[next_choice++];
        if (ExecNode* n = match_path(handles, want)) return n;
        throw ScheduleError("schedule entry " + std::to_string(next_choice) +
                            " ('" + want.str() +
                            "') selects no enabled statement; enabled: " +
                            enabled_list(handles));
      }
      case Schedule::Kind::Seeded: {
        std::uniform_int_distribution<size_t> d(0, handles.size() - 1);
        return handles[d(rng)].node;
      }
      case Schedule::Kind::PresetFirst:
        return handles.front().node;
      case Schedule::Kind::PresetLast:
        return handles.back().node;
      case Schedule::Kind::PresetRoundRobin:
        return handles[rr++ % handles.size()].node;
      case Schedule::Kind::Exhaustive:
        throw ScheduleError(
            "an exhaustive schedule only drives enumerate_interleavings");
    }
    throw ScheduleError("unhandled schedule kind");
  }
};

inline void push_id(IdStack& ids, Identifier id) {
  ids.insert(ids.begin(), id);  // head first
}

// Complete one assignment forwards: evaluate, stamp the next identifier, and
// for a destructive assignment save (id, old value) on the tagged stack.
inline const char* complete_forward(ExecNode& n, DataStore& sigma,
                                    AuxStore& delta,
                                    IdentifierCounter& counter,
                                    InterleavingRecord& record) {
  Int v = eval_aexp(n.rhs, sigma);
  Identifier m = counter.next();
  const char* rule = "CA1";
  if (n.kind == ExecNode::Kind::Dest) {
    delta.push_tagged(n.target, m, sigma.get(n.target));
    sigma.set(n.target, std::move(v));
    rule = "DA1";
  } else {
    const Int& cur = sigma.get(n.target);
    sigma.set(n.target, n.op == CopKind::PlusEq ? Int(cur + v) : Int(cur - v));
  }
  push_id(n.ids, m);
  n.completed = true;
  Stmt plain = n.to_plain();
  record.push_back(RecordEntry{m, inline_stmt(plain), std::move(plain)});
  return rule;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Forward execution
// ---------------------------------------------------------------------------

// The statements a forward step could complete next, leftmost first.
inline std::vector<StepHandle> fwd_enabled(const ParConfiguration& c) {
  detail::ExecSeq tree = detail::build_seq(c.program);
  detail::normalize(tree);
  std::vector<detail::Frontier> handles;
  detail::frontier_of(tree, StepPath{}, handles);
  std::vector<StepHandle> out;
  out.reserve(handles.size());
  for (auto& h : handles)
    out.push_back(StepHandle{h.path, inline_stmt(h.node->to_plain())});
  return out;
}

namespace detail {
inline void require_parallel_store(const AuxStore& delta) {
  if (delta.mode() != StoreMode::Parallel)
    throw DialectError(
        "parallel execution needs a parallel auxiliary store "
        "(tagged stacks); got a sequential one");
}
}  // namespace detail

inline ForwardResult fwd_run(const AnnProgram& p, DataStore sigma,
                             AuxStore delta, const Schedule& schedule,
                             Fuel fuel = kDefaultFuel,
                             bool want_trace = false) {
  require_valid(validate(p));
  detail::require_parallel_store(delta);
  for (const auto& v : variables_of(p))
    if (!delta.declared(v)) delta.declare(v);

  ForwardResult out;
  out.sigma = std::move(sigma);
  out.delta = std::move(delta);

  detail::ExecSeq tree = detail::build_seq(p);
  detail::Chooser chooser(schedule);
  for (;;) {
    detail::normalize(tree);
    if (tree.done()) break;
    if (out.steps >= fuel) {
      out.status = ParStatus::FuelExhausted;
      break;
    }
    std::vector<detail::Frontier> handles;
    detail::frontier_of(tree, StepPath{}, handles);
    detail::ExecNode* chosen = chooser.pick(handles);
    const char* rule = detail::complete_forward(*chosen, out.sigma, out.delta,
                                                out.counter, out.record);
    ++out.steps;
    if (want_trace)  // after completion, so the freshly stamped id shows
      out.trace.push_back(ParTraceEntry{rule, inline_stmt(chosen->to_ann()),
                                        to_string(out.sigma),
                                        to_string(out.delta)});
  }
  out.program = detail::rebuild(tree);
  return out;
}

// ---------------------------------------------------------------------------
// Reverse execution
// ---------------------------------------------------------------------------

inline ReverseResult rev_run(const AnnInvertedProgram& p, DataStore sigma,
                             AuxStore delta, IdentifierCounter counter,
                             Fuel fuel = kDefaultFuel,
                             bool want_trace = false) {
  require_valid(validate(p.program));
  detail::require_parallel_store(delta);
  for (const auto& v : variables_of(p.program))
    if (!delta.declared(v)) delta.declare(v);

  ReverseResult out;
  out.sigma = std::move(sigma);
  out.delta = std::move(delta);
  out.counter = counter;

  detail::ExecSeq tree = detail::build_seq(p.program);
  for (;;) {
    detail::normalize(tree);
    if (tree.done()) break;
    if (out.steps >= fuel) {
      out.status = ParStatus::FuelExhausted;
      break;
    }
    std::vector<detail::Frontier> handles;
    detail::frontier_of(tree, StepPath{}, handles);

    // Identifier gating: a statement may complete only if its head identifier
    // was the last one issued; a destructive assignment additionally needs
    // that identifier at the head of its tagged stack ([RDA] premises).
    detail::ExecNode* enabled = nullptr;
    for (auto& h : handles) {
      detail::ExecNode& n = *h.node;
      if (n.ids.empty() || !out.counter.matches_previous(n.ids.front()))
        continue;
      if (n.kind == detail::ExecNode::Kind::Dest) {
        const TaggedValue* top = out.delta.peek_tagged(n.target);
        if (!top || top->id != n.ids.front()) continue;
      }
      if (enabled)
        throw Error(
            "reverse determinism violated: two statements share identifier " +
            std::to_string(n.ids.front()));
      enabled = &n;
    }
    if (!enabled)
      throw StuckReverseError(
          "no reverse step enabled: previous identifier is " +
          std::to_string(out.counter.previous()) +
          "; frontier: " + detail::enabled_list(handles));

    detail::ExecNode& n = *enabled;
    std::string head;  // before completion, so the id being consumed shows
    if (want_trace) head = inline_stmt(n.to_ann());
    Identifier m = n.ids.front();
    const char* rule;
    if (n.kind == detail::ExecNode::Kind::Dest) {
      TaggedValue saved = out.delta.pop_tagged(n.target);
      out.sigma.set(n.target, std::move(saved.value));
      rule = "RDA";
    } else {
      // The inverted program already carries the inverse operator; applying
      // it as written undoes the original ([RCA1], expression steps [RCA2]).
      Int v = detail::eval_aexp(n.rhs, out.sigma);
      const Int& cur = out.sigma.get(n.target);
      out.sigma.set(n.target,
                    n.op == CopKind::PlusEq ? Int(cur + v) : Int(cur - v));
      rule = "RCA1";
    }
    out.counter.try_consume_previous(m);
    n.ids.erase(n.ids.begin());
    n.completed = true;
    Stmt plain = n.to_plain();
    out.record.push_back(RecordEntry{m, inline_stmt(plain), std::move(plain)});
    ++out.steps;
    if (want_trace)
      out.trace.push_back(ParTraceEntry{rule, std::move(head),
                                        to_string(out.sigma),
                                        to_string(out.delta)});
  }
  return out;
}

// Reverse under a chosen completion order with no identifier gating at all:
// the demonstration mode showing why the recorded interleaving matters.
// Exactly the given choices are executed; the caller provides one path per
// statement to reverse.
inline std::pair<DataStore, AuxStore> rev_run_unchecked(
    const AnnInvertedProgram& p, DataStore sigma, AuxStore delta,
    const std::vector<StepPath>& order) {
  require_valid(validate(p.program));
  detail::require_parallel_store(delta);
  for (const auto& v : variables_of(p.program))
    if (!delta.declared(v)) delta.declare(v);

  detail::ExecSeq tree = detail::build_seq(p.program);
  for (size_t i = 0; i < order.size(); ++i) {
    detail::normalize(tree);
    if (tree.done())
      throw ScheduleError("reverse order has " + std::to_string(order.size()) +
                          " entries but the program finished after " +
                          std::to_string(i));
    std::vector<detail::Frontier> handles;
    detail::frontier_of(tree, StepPath{}, handles);
    detail::ExecNode* n = detail::match_path(handles, order[i]);
    if (!n)
      throw ScheduleError("reverse order entry " + std::to_string(i + 1) +
                          " ('" + order[i].str() +
                          "') selects no enabled statement; enabled: " +
                          detail::enabled_list(handles));
    if (n->kind == detail::ExecNode::Kind::Dest) {
      TaggedValue saved = delta.pop_tagged(n->target);
      sigma.set(n->target, std::move(saved.value));
    } else {
      Int v = detail::eval_aexp(n->rhs, sigma);
      const Int& cur = sigma.get(n->target);
      sigma.set(n->target,
                n->op == CopKind::PlusEq ? Int(cur + v) : Int(cur - v));
    }
    if (!n->ids.empty()) n->ids.erase(n->ids.begin());
    n->completed = true;
  }
  return {std::move(sigma), std::move(delta)};
}

// ---------------------------------------------------------------------------
// Interleaving enumeration
// ---------------------------------------------------------------------------

struct InterleavingOutcome {
  Schedule schedule;       // Explicit
  DataStore sigma_final;
  bool restored = false;   // full round trip got back to (sigma0, delta0)
};

namespace detail {

inline void enumerate_schedules_rec(const ExecSeq& tree,
                                    std::vector<StepPath>& prefix,
                                    std::vector<Schedule>& out) {
  ExecSeq norm = tree;
  normalize(norm);
  if (norm.done()) {
    out.push_back(Schedule::explicit_paths(prefix));
    return;
  }
  std::vector<Frontier> handles;
  frontier_of(norm, StepPath{}, handles);
  for (const auto& h : handles) {
    ExecSeq next_tree = norm;
    std::vector<Frontier> again;
    frontier_of(next_tree, StepPath{}, again);
    match_path(again, h.path)->completed = true;
    prefix.push_back(h.path);
    enumerate_schedules_rec(next_tree, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace detail

// Every distinct statement-completion schedule of the program. Purely
// structural: which statement may go next never depends on the stores.
inline std::vector<Schedule> enumerate_schedules(const AnnProgram& p) {
  std::vector<Schedule> out;
  std::vector<StepPath> prefix;
  detail::ExecSeq tree = detail::build_seq(p);
  detail::enumerate_schedules_rec(tree, prefix, out);
  return out;
}

namespace detail {

struct EnumContext {
  const DataStore& sigma0;
  const AuxStore& delta0;
  std::vector<InterleavingOutcome>& out;
};

inline void enumerate_rec(EnumContext& ctx, const ExecSeq& tree,
                          const DataStore& sigma, const AuxStore& delta,
                          const IdentifierCounter& counter,
                          std::vector<StepPath>& prefix) {
  ExecSeq norm = tree;  // keep the parent state intact for sibling branches
  normalize(norm);
  if (norm.done()) {
    InterleavingOutcome o;
    o.schedule = Schedule::explicit_paths(prefix);
    o.sigma_final = sigma;
    AnnProgram populated = rebuild(norm);
    try {
      ReverseResult r = rev_run(inv_annotated(populated), sigma, delta, counter);
      o.restored = r.status == ParStatus::Done && r.sigma == ctx.sigma0 &&
                   r.delta == ctx.delta0 &&
                   r.counter == IdentifierCounter{};
    } catch (const Error&) {
      o.restored = false;
    }
    ctx.out.push_back(std::move(o));
    return;
  }
  std::vector<Frontier> handles;
  frontier_of(norm, StepPath{}, handles);
  for (const auto& h : handles) {
    ExecSeq next_tree = norm;
    std::vector<Frontier> again;
    frontier_of(next_tree, StepPath{}, again);
    ExecNode* n = match_path(again, h.path);
    DataStore next_sigma = sigma;
    AuxStore next_delta = delta;
    IdentifierCounter next_counter = counter;
    InterleavingRecord scratch;
    complete_forward(*n, next_sigma, next_delta, next_counter, scratch);
    prefix.push_back(h.path);
    enumerate_rec(ctx, next_tree, next_sigma, next_delta, next_counter, prefix);
    prefix.pop_back();
  }
}

}  // namespace detail

// One outcome per distinct statement-completion schedule. The verdict runs
// the full round trip (invert, reverse, compare against the initial stores).
inline std::vector<InterleavingOutcome> enumerate_interleavings(
    const AnnProgram& p, DataStore sigma, AuxStore delta, int bound) {
  require_valid(validate(p));
  detail::require_parallel_store(delta);
  if (stmt_count(p) > bound)
    throw BoundExceededError("program has " + std::to_string(stmt_count(p)) +
                             " statements, over the enumeration bound of " +
                             std::to_string(bound));
  for (const auto& v : variables_of(p))
    if (!delta.declared(v)) delta.declare(v);

  std::vector<InterleavingOutcome> out;
  detail::EnumContext ctx{sigma, delta, out};
  detail::ExecSeq tree = detail::build_seq(p);
  std::vector<StepPath> prefix;
  detail::enumerate_rec(ctx, tree, sigma, delta, IdentifierCounter{}, prefix);
  return out;
}

// All identifiers stamped on statements, in DFS source order.
inline void collect_ids(const AnnProgram& p, std::vector<Identifier>& out);
inline void collect_ids(const AnnStmt& s, std::vector<Identifier>& out) {
  for (Identifier i : s.ids) out.push_back(i);
  if (const auto* par = std::get_if<AnnStmt::Par>(&s.node)) {
    collect_ids(par->left, out);
    collect_ids(par->right, out);
  }
}
inline void collect_ids(const AnnProgram& p, std::vector<Identifier>& out) {
  for (const auto& s : p.stmts) collect_ids(s, out);
}
inline std::vector<Identifier> collect_ids(const AnnProgram& p) {
  std::vector<Identifier> out;
  collect_ids(p, out);
  return out;
}

}  // namespace reverso
