#pragma once

// Command-line surface. The whole CLI is a pure function of its argument
// vector, run_cli(), so the test suite can drive it in-process; the
// `reverso` executable is a thin wrapper around it.
//
// Subcommands:
//   parse | augment | invert | annotate | run | reverse | roundtrip |
//   interleavings | fuzz
//
// Exit codes:
//   0  success (and, where a verdict is produced, the verdict is PASS)
//   1  bad input: parse/validation/dialect/schedule/bound/document errors
//   2  fuel exhausted
//   3  runtime store errors (unbound variable, unknown/empty stack,
//      reserved name)
//   4  reverse execution stuck (program, store, and counter inconsistent)
//   5  restoration mismatch (a round trip or reversal did not restore)
//
// The step bound defaults to kDefaultFuel; the REVERSO_FUEL environment
// variable overrides the default and --fuel overrides both.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "reverso/harness.hpp"
#include "reverso/io.hpp"

namespace reverso {
namespace cli {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitFuel = 2;
constexpr int kExitStore = 3;
constexpr int kExitStuck = 4;
constexpr int kExitMismatch = 5;

namespace detail {

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

inline Fuel resolve_fuel(const std::optional<std::uint64_t>& flag) {
  if (flag) return static_cast<Fuel>(*flag);
  if (const char* env = std::getenv("REVERSO_FUEL")) {
    const std::string s = env;
    if (s.empty() || s.size() > 18 ||
        s.find_first_not_of("0123456789") != std::string::npos)
      throw Error("REVERSO_FUEL must be a decimal step bound, got \"" + s +
                  "\"");
    return static_cast<Fuel>(std::stoull(s));
  }
  return kDefaultFuel;
}

// A program file, classified by dialect. Parallel sources keep both the
// plain view (annotations stripped) and the annotated view; `annotated_text`
// records whether the file itself carried identifier stacks.
struct Source {
  bool parallel = false;
  bool annotated_text = false;
  Program plain;
  AnnProgram annotated;
};

inline Source load_source(const std::string& text) {
  try {
    Program p = parse_program(text, Dialect::Any);
    Source s;
    s.parallel = contains_par(p);
    if (s.parallel) {
      require_valid(validate(p, Dialect::Parallel, SourcePolicy::UserSource));
      s.annotated = ann(p);
    }
    s.plain = std::move(p);
    return s;
  } catch (const SyntaxError& plain_error) {
    // Identifier-stack suffixes only exist in the annotated grammar.
    try {
      AnnProgram ap = parse_annotated(text);
      require_valid(validate(ap));
      Source s;
      s.parallel = true;
      s.annotated_text = true;
      s.plain = strip_annotations(ap);
      s.annotated = std::move(ap);
      return s;
    } catch (const SyntaxError&) {
      throw plain_error;  // diagnose against the plain grammar
    }
  }
}

inline void require_unexecuted(const AnnProgram& ap) {
  if (!collect_ids(ap).empty())
    throw DialectError(
        "the program already carries identifiers from a forward run; "
        "a checkpoint of that run is what `reverse` consumes");
}

struct Stores {
  DataStore sigma;
  AuxStore delta;
};

// --store file if given; otherwise an all-zeros sigma over the program's
// variables and an empty auxiliary store of the right mode.
inline Stores initial_stores(const std::string& store_path, const Program& p,
                             StoreMode mode) {
  Stores st;
  st.delta = mode == StoreMode::Sequential ? AuxStore::sequential({})
                                           : AuxStore::parallel({});
  if (store_path.empty()) {
    for (const auto& v : variables_of(p)) st.sigma.set(v, 0);
  } else {
    StoreDoc doc = store_doc_from_json(parse_json_file(store_path), mode);
    st.sigma = std::move(doc.sigma);
    st.delta = std::move(doc.delta);
  }
  // Declare the program's stacks up front so a drained final store compares
  // equal to this initial store (the engines declare the same set on entry).
  for (const auto& v : variables_of(p))
    if (!st.delta.declared(v)) st.delta.declare(v);
  return st;
}

inline void emit_text(std::ostream& out, const std::string& out_path,
                      const std::string& text) {
  if (out_path.empty())
    out << text;
  else
    write_text_file(out_path, text);
}

inline void print_stores(std::ostream& out, const DataStore& sigma,
                         const AuxStore& delta) {
  out << "sigma = " << to_string(sigma) << "\n";
  out << "delta = " << to_string(delta) << "\n";
}

inline void print_record(std::ostream& out, const InterleavingRecord& rec,
                         const char* title) {
  out << title << ":\n";
  for (const auto& e : rec) out << "  [" << e.id << "] " << e.text << "\n";
}

inline Json record_to_json(const InterleavingRecord& rec) {
  Json a = Json::array();
  for (const auto& e : rec) a.push_back(Json::array({e.id, e.text}));
  return a;
}

template <class Entry>
inline void print_trace(std::ostream& out, const std::vector<Entry>& trace) {
  for (const auto& e : trace) out << e.str() << "\n";
}

inline Json trace_entry_json(const TraceEntry& e) {
  return Json{{"rule", rule_name(e.rule)},
              {"head", e.head},
              {"sigma", e.sigma},
              {"delta", e.delta}};
}

inline Json trace_entry_json(const ParTraceEntry& e) {
  return Json{{"rule", e.rule},
              {"head", e.head},
              {"sigma", e.sigma},
              {"delta", e.delta}};
}

template <class Entry>
inline Json trace_to_json(const std::vector<Entry>& trace) {
  Json a = Json::array();
  for (const auto& e : trace) a.push_back(trace_entry_json(e));
  return a;
}

inline void emit_json(std::ostream& out, const Json& j) {
  out << j.dump(2) << "\n";
}

// Reverse completions must mirror the forward record: same identifiers,
// opposite order. Statement text legitimately differs (the reverse leg
// records inverted statements).
inline bool mirrors(const InterleavingRecord& forward,
                    const InterleavingRecord& reverse) {
  if (forward.size() != reverse.size()) return false;
  for (size_t i = 0; i < forward.size(); ++i)
    if (reverse[i].id != forward[forward.size() - 1 - i].id) return false;
  return true;
}

inline std::vector<StepPath> parse_step_order(const std::string& text) {
  Schedule s = parse_schedule(text);
  if (s.kind != Schedule::Kind::Explicit)
    throw ScheduleError(
        "--unchecked-order takes an explicit comma-separated list of L/R "
        "paths, not a preset");
  return s.choices;
}

inline int fail(std::ostream& err, int code, const std::string& msg) {
  err << "error: " << msg << "\n";
  return code;
}

template <class F>
inline int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    return fail(err, kExitInput, e.what());
  } catch (const SyntaxError& e) {
    return fail(err, kExitInput, e.what());
  } catch (const DialectError& e) {
    return fail(err, kExitInput, e.what());
  } catch (const ScheduleError& e) {
    return fail(err, kExitInput, e.what());
  } catch (const BoundExceededError& e) {
    return fail(err, kExitInput, e.what());
  } catch (const CheckpointError& e) {
    return fail(err, kExitInput, e.what());
  } catch (const NotFailingError& e) {
    return fail(err, kExitInput, e.what());
  } catch (const StuckReverseError& e) {
    return fail(err, kExitStuck, e.what());
  } catch (const ReservedNameError& e) {
    return fail(err, kExitStore, e.what());
  } catch (const UnknownStackError& e) {
    return fail(err, kExitStore, e.what());
  } catch (const EmptyStackError& e) {
    return fail(err, kExitStore, e.what());
  } catch (const UnboundVariableError& e) {
    return fail(err, kExitStore, e.what());
  } catch (const StuckError& e) {
    return fail(err, kExitStore, e.what());
  } catch (const Error& e) {
    return fail(err, kExitInput, e.what());
  }
}

// ---------------------------------------------------------------------------
// Per-subcommand option bags
// ---------------------------------------------------------------------------

struct ParseOpts {
  std::string input;
  std::string dialect = "auto";
  bool json = false;
};

struct TransformOpts {
  std::string input;
  std::string out_path;
  bool json = false;
};

struct RunOpts {
  std::string input;
  std::string store_path;
  std::string schedule;
  std::string out_path;
  std::optional<std::uint64_t> fuel;
  bool trace = false;
  bool trace_micro = false;
  bool augment = false;
  bool json = false;
};

struct ReverseOpts {
  std::string checkpoint;
  std::optional<std::uint64_t> fuel;
  bool trace = false;
  bool trace_micro = false;
  bool json = false;
};

struct RoundtripOpts {
  std::string input;
  std::string store_path;
  std::string schedule;
  std::string unchecked_order;
  bool all_schedules = false;
  int bound = 16;
  std::optional<std::uint64_t> fuel;
  bool json = false;
};

struct InterleavingsOpts {
  std::string input;
  std::string store_path;
  int bound = 16;
  bool json = false;
};

struct FuzzOpts {
  std::string prop;
  std::uint64_t cases = 100;
  std::uint64_t seed = 0;
  std::string dialect;
  std::optional<int> max_stmts;
  int max_depth = 3;
  std::optional<std::uint64_t> samples;
  int bound = 16;
  unsigned jobs = 1;
  std::optional<std::uint64_t> fuel;
  bool no_minimize = false;
  bool json = false;
};

// ---------------------------------------------------------------------------
// parse
// ---------------------------------------------------------------------------

inline int cmd_parse(const ParseOpts& o, std::ostream& out) {
  const std::string text = read_text_file(o.input);
  std::string dialect_name, canonical;
  int statements = 0;
  std::vector<VarName> vars;

  if (o.dialect == "seq") {
    Program p = parse_program(text, Dialect::Sequential);
    require_valid(validate(p, Dialect::Sequential, SourcePolicy::Any));
    dialect_name = "sequential";
    canonical = render(p);
    statements = stmt_count(p);
    vars = variables_of(p);
  } else if (o.dialect == "par") {
    Program p = parse_program(text, Dialect::Parallel);
    require_valid(validate(p, Dialect::Parallel, SourcePolicy::UserSource));
    dialect_name = "parallel";
    canonical = render(p);
    statements = stmt_count(p);
    vars = variables_of(p);
  } else if (o.dialect == "ann") {
    AnnProgram p = parse_annotated(text);
    require_valid(validate(p));
    dialect_name = "annotated";
    canonical = render(p);
    statements = stmt_count(p);
    vars = variables_of(p);
  } else {  // auto
    Source src = load_source(text);
    if (!src.parallel) {
      require_valid(
          validate(src.plain, Dialect::Sequential, SourcePolicy::Any));
      dialect_name = "sequential";
      canonical = render(src.plain);
    } else if (src.annotated_text) {
      dialect_name = "annotated";
      canonical = render(src.annotated);
    } else {
      dialect_name = "parallel";
      canonical = render(src.plain);
    }
    statements = stmt_count(src.plain);
    vars = variables_of(src.plain);
  }

  if (o.json) {
    emit_json(out, Json{{"ok", true},
                        {"dialect", dialect_name},
                        {"statements", statements},
                        {"variables", vars},
                        {"canonical", canonical}});
  } else {
    out << canonical;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// augment / invert / annotate
// ---------------------------------------------------------------------------

inline int cmd_transform(const TransformOpts& o, const std::string& which,
                         std::ostream& out) {
  const std::string text = read_text_file(o.input);
  std::string result;
  if (which == "annotate") {
    Program p = parse_program(text, Dialect::Parallel);
    require_valid(validate(p, Dialect::Parallel, SourcePolicy::UserSource));
    result = render(ann(p));
  } else {
    Program p = parse_program(text, Dialect::Sequential);
    require_valid(
        validate(p, Dialect::Sequential, SourcePolicy::UserSource));
    result = which == "augment" ? render(aug(p)) : render(inv(p));
  }
  if (o.json)
    emit_json(out, Json{{"ok", true}, {"output", result}});
  else
    emit_text(out, o.out_path, result);
  if (!o.out_path.empty() && o.json) write_text_file(o.out_path, result);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

inline int run_parallel(const RunOpts& o, const Source& src,
                        std::ostream& out) {
  if (o.augment)
    throw DialectError(
        "--augment applies to the sequential dialect; parallel runs record "
        "identifiers instead");
  if (o.trace_micro)
    throw DialectError("--trace-micro applies to the sequential engine");
  require_unexecuted(src.annotated);
  const Fuel fuel = resolve_fuel(o.fuel);
  Stores st = initial_stores(o.store_path, src.plain, StoreMode::Parallel);
  Schedule sched =
      parse_schedule(o.schedule.empty() ? "first" : o.schedule);

  ForwardResult fr = fwd_run(src.annotated, st.sigma, st.delta, sched, fuel,
                             o.trace);
  const bool done = fr.status == ParStatus::Done;

  if (!o.out_path.empty()) {
    Checkpoint c{Dialect::Parallel, render(fr.program), fr.sigma, fr.delta,
                 fr.counter, fr.record};
    write_text_file(o.out_path, checkpoint_to_json(c).dump(2) + "\n");
  }

  if (o.json) {
    Json j{{"status", done ? "done" : "fuel-exhausted"},
           {"dialect", "parallel"},
           {"schedule", sched.str()},
           {"sigma", sigma_to_json(fr.sigma)},
           {"delta", delta_to_json(fr.delta)},
           {"counter", fr.counter.next_value()},
           {"record", record_to_json(fr.record)},
           {"program", render(fr.program)},
           {"steps", fr.steps}};
    if (o.trace) j["trace"] = trace_to_json(fr.trace);
    emit_json(out, j);
  } else {
    if (o.trace) print_trace(out, fr.trace);
    out << "status = " << (done ? "done" : "fuel-exhausted") << "\n";
    print_stores(out, fr.sigma, fr.delta);
    out << "counter next = " << fr.counter.next_value() << "\n";
    print_record(out, fr.record, "record");
  }
  return done ? kExitOk : kExitFuel;
}

inline int run_sequential(const RunOpts& o, const Source& src,
                          std::ostream& out) {
  if (!o.schedule.empty())
    throw ScheduleError("schedules apply to the parallel dialect");
  const Fuel fuel = resolve_fuel(o.fuel);
  const TraceMode tm = o.trace_micro  ? TraceMode::Micro
                       : o.trace      ? TraceMode::Fused
                                      : TraceMode::Off;

  Program exec = src.plain;
  Program original = src.plain;
  bool have_original = true;
  if (o.augment) {
    require_valid(
        validate(src.plain, Dialect::Sequential, SourcePolicy::UserSource));
    exec = aug(src.plain).program;
  } else {
    require_valid(validate(src.plain, Dialect::Sequential, SourcePolicy::Any));
    if (contains_push(src.plain) || contains_pop(src.plain)) {
      try {
        original = unaugment(AugmentedProgram{src.plain});
      } catch (const Error&) {
        have_original = false;  // runnable, but not reversible from here
      }
    }
  }

  Stores st = initial_stores(o.store_path, exec, StoreMode::Sequential);
  RunResult rr = run(exec, st.sigma, st.delta, fuel, tm);
  const bool done = rr.status == RunStatus::Done;

  if (!o.out_path.empty()) {
    if (!have_original)
      throw Error(
          "cannot write a reversal checkpoint: the input is neither a user "
          "program nor an augmentation image (try --augment)");
    Checkpoint c{Dialect::Sequential, render(original), rr.sigma, rr.delta,
                 IdentifierCounter{}, {}};
    write_text_file(o.out_path, checkpoint_to_json(c).dump(2) + "\n");
  }

  if (o.json) {
    Json j{{"status", done ? "done" : "fuel-exhausted"},
           {"dialect", "sequential"},
           {"sigma", sigma_to_json(rr.sigma)},
           {"delta", delta_to_json(rr.delta)},
           {"steps", rr.steps}};
    if (tm != TraceMode::Off) j["trace"] = trace_to_json(rr.trace);
    emit_json(out, j);
  } else {
    if (tm != TraceMode::Off) print_trace(out, rr.trace);
    out << "status = " << (done ? "done" : "fuel-exhausted") << "\n";
    print_stores(out, rr.sigma, rr.delta);
  }
  return done ? kExitOk : kExitFuel;
}

inline int cmd_run(const RunOpts& o, std::ostream& out) {
  Source src = load_source(read_text_file(o.input));
  return src.parallel ? run_parallel(o, src, out) : run_sequential(o, src, out);
}

// ---------------------------------------------------------------------------
// reverse
// ---------------------------------------------------------------------------

inline int reverse_sequential(const ReverseOpts& o, const Checkpoint& c,
                              std::ostream& out) {
  Program p = parse_program(c.program, Dialect::Sequential);
  require_valid(validate(p, Dialect::Sequential, SourcePolicy::UserSource));
  const Fuel fuel = resolve_fuel(o.fuel);
  const TraceMode tm = o.trace_micro  ? TraceMode::Micro
                       : o.trace      ? TraceMode::Fused
                                      : TraceMode::Off;

  RunResult rr = run(inv(p).program, c.sigma, c.delta, fuel, tm);
  const bool done = rr.status == RunStatus::Done;
  const bool restored = done && rr.delta.empty();

  if (o.json) {
    Json j{{"status", done ? "done" : "fuel-exhausted"},
           {"dialect", "sequential"},
           {"restored", restored},
           {"sigma", sigma_to_json(rr.sigma)},
           {"delta", delta_to_json(rr.delta)}};
    if (tm != TraceMode::Off) j["trace"] = trace_to_json(rr.trace);
    emit_json(out, j);
  } else {
    if (tm != TraceMode::Off) print_trace(out, rr.trace);
    print_stores(out, rr.sigma, rr.delta);
    out << "restored: " << (restored ? "yes" : "no") << "\n";
  }
  if (!done) return kExitFuel;
  return restored ? kExitOk : kExitMismatch;
}

inline int reverse_parallel(const ReverseOpts& o, const Checkpoint& c,
                            std::ostream& out) {
  if (o.trace_micro)
    throw DialectError("--trace-micro applies to the sequential engine");
  AnnProgram ap = parse_annotated(c.program);
  require_valid(validate(ap));
  const Fuel fuel = resolve_fuel(o.fuel);

  ReverseResult rv =
      rev_run(inv_annotated(ap), c.sigma, c.delta, c.counter, fuel, o.trace);
  const bool done = rv.status == ParStatus::Done;
  const bool mirror_ok = c.record.empty() || mirrors(c.record, rv.record);
  const bool restored = done && rv.delta.empty() &&
                        rv.counter == IdentifierCounter{} && mirror_ok;

  if (o.json) {
    Json j{{"status", done ? "done" : "fuel-exhausted"},
           {"dialect", "parallel"},
           {"restored", restored},
           {"sigma", sigma_to_json(rv.sigma)},
           {"delta", delta_to_json(rv.delta)},
           {"counter", rv.counter.next_value()},
           {"record", record_to_json(rv.record)}};
    if (o.trace) j["trace"] = trace_to_json(rv.trace);
    emit_json(out, j);
  } else {
    if (o.trace) print_trace(out, rv.trace);
    print_stores(out, rv.sigma, rv.delta);
    out << "counter next = " << rv.counter.next_value() << "\n";
    print_record(out, rv.record, "record (reverse completion order)");
    out << "restored: " << (restored ? "yes" : "no") << "\n";
  }
  if (!done) return kExitFuel;
  return restored ? kExitOk : kExitMismatch;
}

inline int cmd_reverse(const ReverseOpts& o, std::ostream& out) {
  Checkpoint c = checkpoint_from_json(parse_json_file(o.checkpoint));
  return c.dialect == Dialect::Sequential ? reverse_sequential(o, c, out)
                                          : reverse_parallel(o, c, out);
}

// ---------------------------------------------------------------------------
// roundtrip
// ---------------------------------------------------------------------------

inline int roundtrip_sequential(const RoundtripOpts& o, const Source& src,
                                std::ostream& out, std::ostream& err) {
  if (o.all_schedules || !o.schedule.empty() || !o.unchecked_order.empty())
    throw DialectError(
        "--all-schedules, --schedule, and --unchecked-order apply to the "
        "parallel dialect");
  require_valid(
      validate(src.plain, Dialect::Sequential, SourcePolicy::UserSource));
  const Fuel fuel = resolve_fuel(o.fuel);
  Stores st = initial_stores(o.store_path, src.plain, StoreMode::Sequential);

  RunResult fwd = run(aug(src.plain).program, st.sigma, st.delta, fuel);
  if (fwd.status != RunStatus::Done)
    return fail(err, kExitFuel, "forward run exhausted its fuel");
  RunResult bwd = run(inv(src.plain).program, fwd.sigma, fwd.delta, fuel);
  if (bwd.status != RunStatus::Done)
    return fail(err, kExitFuel, "reverse run exhausted its fuel");

  const bool sigma_ok = bwd.sigma == st.sigma;
  const bool delta_ok = bwd.delta == st.delta;
  const bool ok = sigma_ok && delta_ok;

  if (o.json) {
    emit_json(out, Json{{"verdict", ok ? "pass" : "fail"},
                        {"dialect", "sequential"},
                        {"sigma_initial", sigma_to_json(st.sigma)},
                        {"sigma_forward", sigma_to_json(fwd.sigma)},
                        {"sigma_restored", sigma_to_json(bwd.sigma)},
                        {"delta_restored", delta_ok}});
  } else {
    out << "forward: sigma' = " << to_string(fwd.sigma) << "\n";
    out << "reverse: sigma = " << to_string(bwd.sigma) << "\n";
    out << "sigma restored: " << (sigma_ok ? "yes" : "no") << "\n";
    out << "delta restored: " << (delta_ok ? "yes" : "no") << "\n";
    out << (ok ? "PASS" : "FAIL") << "\n";
  }
  return ok ? kExitOk : kExitMismatch;
}

inline int roundtrip_all_schedules(const RoundtripOpts& o, const Source& src,
                                   const Stores& st, std::ostream& out) {
  auto outcomes =
      enumerate_interleavings(src.annotated, st.sigma, st.delta, o.bound);
  size_t passed = 0;
  for (const auto& oc : outcomes)
    if (oc.restored) ++passed;

  if (o.json) {
    Json arr = Json::array();
    for (const auto& oc : outcomes)
      arr.push_back(Json{{"schedule", oc.schedule.str()},
                         {"sigma", sigma_to_json(oc.sigma_final)},
                         {"restored", oc.restored}});
    emit_json(out,
              Json{{"verdict", passed == outcomes.size() ? "pass" : "fail"},
                   {"dialect", "parallel"},
                   {"count", outcomes.size()},
                   {"outcomes", arr}});
  } else {
    for (const auto& oc : outcomes)
      out << (oc.restored ? "PASS" : "FAIL") << "  " << oc.schedule.str()
          << "  sigma' = " << to_string(oc.sigma_final) << "\n";
    out << passed << "/" << outcomes.size() << " PASS\n";
  }
  return passed == outcomes.size() ? kExitOk : kExitMismatch;
}

inline int roundtrip_parallel(const RoundtripOpts& o, const Source& src,
                              std::ostream& out, std::ostream& err) {
  require_unexecuted(src.annotated);
  const Fuel fuel = resolve_fuel(o.fuel);
  Stores st = initial_stores(o.store_path, src.plain, StoreMode::Parallel);

  if (o.all_schedules) {
    if (!o.unchecked_order.empty())
      throw ScheduleError(
          "--all-schedules and --unchecked-order are mutually exclusive");
    return roundtrip_all_schedules(o, src, st, out);
  }

  Schedule sched = parse_schedule(o.schedule.empty() ? "first" : o.schedule);
  ForwardResult fwd =
      fwd_run(src.annotated, st.sigma, st.delta, sched, fuel);
  if (fwd.status != ParStatus::Done)
    return fail(err, kExitFuel, "forward run exhausted its fuel");
  AnnInvertedProgram iv = inv_annotated(fwd.program);

  if (!o.unchecked_order.empty()) {
    std::vector<StepPath> order = parse_step_order(o.unchecked_order);
    auto [usigma, udelta] = rev_run_unchecked(iv, fwd.sigma, fwd.delta, order);
    const bool ok = usigma == st.sigma && udelta == st.delta;
    if (o.json) {
      emit_json(out, Json{{"verdict", ok ? "pass" : "fail"},
                          {"dialect", "parallel"},
                          {"schedule", sched.str()},
                          {"unchecked_order", o.unchecked_order},
                          {"sigma_initial", sigma_to_json(st.sigma)},
                          {"sigma_forward", sigma_to_json(fwd.sigma)},
                          {"sigma_restored", sigma_to_json(usigma)}});
    } else {
      out << "forward (" << sched.str()
          << "): sigma' = " << to_string(fwd.sigma) << "\n";
      out << "unchecked reverse: sigma = " << to_string(usigma) << "\n";
      out << "sigma restored: " << (usigma == st.sigma ? "yes" : "no")
          << "\n";
      out << (ok ? "PASS" : "FAIL") << "\n";
    }
    return ok ? kExitOk : kExitMismatch;
  }

  ReverseResult rv =
      rev_run(iv, fwd.sigma, fwd.delta, fwd.counter, fuel);
  if (rv.status != ParStatus::Done)
    return fail(err, kExitFuel, "reverse run exhausted its fuel");
  const bool ok = rv.sigma == st.sigma && rv.delta == st.delta &&
                  rv.counter == IdentifierCounter{} &&
                  mirrors(fwd.record, rv.record);

  if (o.json) {
    emit_json(out, Json{{"verdict", ok ? "pass" : "fail"},
                        {"dialect", "parallel"},
                        {"schedule", sched.str()},
                        {"sigma_initial", sigma_to_json(st.sigma)},
                        {"sigma_forward", sigma_to_json(fwd.sigma)},
                        {"sigma_restored", sigma_to_json(rv.sigma)},
                        {"record", record_to_json(fwd.record)},
                        {"reverse_record", record_to_json(rv.record)}});
  } else {
    out << "forward (" << sched.str()
        << "): sigma' = " << to_string(fwd.sigma) << "\n";
    out << "reverse: sigma = " << to_string(rv.sigma) << "\n";
    out << (ok ? "PASS" : "FAIL") << "\n";
  }
  return ok ? kExitOk : kExitMismatch;
}

inline int cmd_roundtrip(const RoundtripOpts& o, std::ostream& out,
                         std::ostream& err) {
  Source src = load_source(read_text_file(o.input));
  return src.parallel ? roundtrip_parallel(o, src, out, err)
                      : roundtrip_sequential(o, src, out, err);
}

// ---------------------------------------------------------------------------
// interleavings
// ---------------------------------------------------------------------------

inline int cmd_interleavings(const InterleavingsOpts& o, std::ostream& out) {
  Source src = load_source(read_text_file(o.input));
  if (!src.parallel)
    throw DialectError(
        "interleaving enumeration applies to the parallel dialect");
  require_unexecuted(src.annotated);
  Stores st = initial_stores(o.store_path, src.plain, StoreMode::Parallel);

  auto outcomes =
      enumerate_interleavings(src.annotated, st.sigma, st.delta, o.bound);
  size_t restored = 0;
  for (const auto& oc : outcomes)
    if (oc.restored) ++restored;

  if (o.json) {
    Json arr = Json::array();
    for (const auto& oc : outcomes)
      arr.push_back(Json{{"schedule", oc.schedule.str()},
                         {"sigma", sigma_to_json(oc.sigma_final)},
                         {"restored", oc.restored}});
    emit_json(out, Json{{"count", outcomes.size()},
                        {"restored", restored},
                        {"outcomes", arr}});
  } else {
    for (const auto& oc : outcomes)
      out << oc.schedule.str() << "  sigma' = " << to_string(oc.sigma_final)
          << "  " << (oc.restored ? "restored" : "NOT restored") << "\n";
    out << outcomes.size() << " interleavings, " << restored << " restored\n";
  }
  return restored == outcomes.size() ? kExitOk : kExitMismatch;
}

// ---------------------------------------------------------------------------
// fuzz
// ---------------------------------------------------------------------------

inline int cmd_fuzz(const FuzzOpts& o, std::ostream& out) {
  Prop prop;
  if (o.prop == "1")
    prop = Prop::P1;
  else if (o.prop == "2")
    prop = Prop::P2;
  else if (o.prop == "34")
    prop = Prop::P34;
  else
    throw Error("--prop must be 1, 2, or 34");

  const Dialect wanted = prop == Prop::P34 ? Dialect::Parallel
                                           : Dialect::Sequential;
  if (!o.dialect.empty()) {
    const Dialect given = o.dialect == "par" ? Dialect::Parallel
                                             : Dialect::Sequential;
    if (given != wanted)
      throw DialectError(o.prop == "34"
                             ? "properties 3 and 4 are parallel-dialect"
                             : "properties 1 and 2 are sequential-dialect");
  }

  SuiteConfig sc;
  sc.gen.seed = o.seed;
  sc.gen.dialect = wanted;
  sc.gen.maxStmts = o.max_stmts.value_or(prop == Prop::P34 ? 8 : 20);
  sc.gen.maxDepth = o.max_depth;
  sc.cases = o.cases;
  sc.opts.fuel = resolve_fuel(o.fuel);
  sc.opts.bound = o.bound;
  sc.jobs = o.jobs == 0 ? 1 : o.jobs;
  sc.minimize_failures = !o.no_minimize;
  if (o.samples)
    sc.mode = Sampled{*o.samples, o.seed};
  else
    sc.mode = Exhaustive{};

  PropertyReport rep = run_suite(prop, sc);

  if (o.json) {
    Json fails = Json::array();
    for (const auto& f : rep.failures)
      fails.push_back(Json{{"index", f.index},
                           {"seed", f.seed},
                           {"program", f.program},
                           {"minimized", f.minimized},
                           {"detail", f.detail}});
    emit_json(out, Json{{"prop", o.prop},
                        {"dialect", wanted == Dialect::Parallel
                                        ? "parallel"
                                        : "sequential"},
                        {"cases", rep.cases},
                        {"passes", rep.passes},
                        {"skips", rep.skips},
                        {"failures", fails},
                        {"elapsed_ms", rep.elapsed_ms},
                        {"ok", rep.ok()}});
  } else {
    out << "prop " << o.prop << "  dialect "
        << (wanted == Dialect::Parallel ? "par" : "seq") << "  cases "
        << rep.cases << "  seed " << o.seed << "\n";
    out << "passes " << rep.passes << "  skips " << rep.skips
        << "  failures " << rep.failures.size() << "  (" << rep.elapsed_ms
        << " ms)\n";
    for (const auto& f : rep.failures) {
      out << "FAIL case " << f.index << " (seed " << f.seed << "): "
          << f.detail << "\n";
      out << "  program:\n" << f.program;
      if (!f.minimized.empty()) out << "  minimized:\n" << f.minimized;
    }
  }
  return rep.ok() ? kExitOk : kExitInput;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// run_cli
// ---------------------------------------------------------------------------

inline int run_cli(std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"reversible while-language toolkit"};
  app.require_subcommand(1);

  detail::ParseOpts po;
  auto* c_parse = app.add_subcommand(
      "parse", "Validate a program and print its canonical form");
  c_parse->add_option("input", po.input, "program file")->required();
  c_parse->add_option("--dialect", po.dialect, "auto|seq|par|ann")
      ->check(CLI::IsMember({"auto", "seq", "par", "ann"}));
  c_parse->add_flag("--json", po.json, "machine-readable output");

  detail::TransformOpts ao, io_, no;
  auto* c_aug = app.add_subcommand(
      "augment", "Insert saves so a forward run records reversal data");
  c_aug->add_option("input", ao.input, "sequential program file")->required();
  c_aug->add_option("--out", ao.out_path, "write result to a file");
  c_aug->add_flag("--json", ao.json, "machine-readable output");

  auto* c_inv = app.add_subcommand(
      "invert", "Produce the inverse of a sequential program");
  c_inv->add_option("input", io_.input, "sequential program file")
      ->required();
  c_inv->add_option("--out", io_.out_path, "write result to a file");
  c_inv->add_flag("--json", io_.json, "machine-readable output");

  auto* c_ann = app.add_subcommand(
      "annotate", "Attach empty identifier stacks to a parallel program");
  c_ann->add_option("input", no.input, "parallel program file")->required();
  c_ann->add_option("--out", no.out_path, "write result to a file");
  c_ann->add_flag("--json", no.json, "machine-readable output");

  detail::RunOpts ro;
  auto* c_run = app.add_subcommand("run", "Run a program forward");
  c_run->add_option("input", ro.input, "program file")->required();
  c_run->add_option("--store", ro.store_path,
                    "initial stores (JSON); default: all-zero sigma");
  c_run->add_option("--schedule", ro.schedule,
                    "parallel only: L/R paths, first, last, rr, seed:<n>");
  c_run->add_option("--fuel", ro.fuel, "step bound");
  c_run->add_option("--out", ro.out_path, "write a reversal checkpoint");
  c_run->add_flag("--trace", ro.trace, "print one line per applied rule");
  c_run->add_flag("--trace-micro", ro.trace_micro,
                  "sequential only: also trace store micro-steps");
  c_run->add_flag("--augment", ro.augment,
                  "sequential only: augment before running");
  c_run->add_flag("--json", ro.json, "machine-readable output");

  detail::ReverseOpts vo;
  auto* c_rev = app.add_subcommand(
      "reverse", "Restore the initial state from a run checkpoint");
  c_rev->add_option("checkpoint", vo.checkpoint, "checkpoint file (JSON)")
      ->required();
  c_rev->add_option("--fuel", vo.fuel, "step bound");
  c_rev->add_flag("--trace", vo.trace, "print one line per applied rule");
  c_rev->add_flag("--trace-micro", vo.trace_micro,
                  "sequential only: also trace store micro-steps");
  c_rev->add_flag("--json", vo.json, "machine-readable output");

  detail::RoundtripOpts to;
  auto* c_rt = app.add_subcommand(
      "roundtrip", "Run forward, invert, run back, and diff the stores");
  c_rt->add_option("input", to.input, "program file")->required();
  c_rt->add_option("--store", to.store_path,
                   "initial stores (JSON); default: all-zero sigma");
  c_rt->add_option("--schedule", to.schedule,
                   "parallel only: forward schedule");
  c_rt->add_option("--unchecked-order", to.unchecked_order,
                   "parallel only: reverse in this order without identifier "
                   "checks");
  c_rt->add_flag("--all-schedules", to.all_schedules,
                 "parallel only: try every interleaving");
  c_rt->add_option("--bound", to.bound,
                   "statement bound for --all-schedules");
  c_rt->add_option("--fuel", to.fuel, "step bound");
  c_rt->add_flag("--json", to.json, "machine-readable output");

  detail::InterleavingsOpts lo;
  auto* c_il = app.add_subcommand(
      "interleavings",
      "Enumerate every schedule of a parallel program with its outcome");
  c_il->add_option("input", lo.input, "parallel program file")->required();
  c_il->add_option("--store", lo.store_path,
                   "initial stores (JSON); default: all-zero sigma");
  c_il->add_option("--bound", lo.bound, "statement bound");
  c_il->add_flag("--json", lo.json, "machine-readable output");

  detail::FuzzOpts fo;
  auto* c_fz = app.add_subcommand(
      "fuzz", "Generate random programs and check the reversibility "
              "properties");
  c_fz->add_option("--prop", fo.prop,
                   "1 (forward equivalence), 2 (sequential round trip), "
                   "34 (parallel round trip)")
      ->required();
  c_fz->add_option("--cases", fo.cases, "number of cases");
  c_fz->add_option("--seed", fo.seed, "base seed");
  c_fz->add_option("--dialect", fo.dialect, "seq|par (defaults to the prop)")
      ->check(CLI::IsMember({"seq", "par"}));
  c_fz->add_option("--max-stmts", fo.max_stmts,
                   "statement budget per program");
  c_fz->add_option("--max-depth", fo.max_depth, "nesting depth bound");
  c_fz->add_option("--samples", fo.samples,
                   "sample this many schedules per case instead of "
                   "exhausting them");
  c_fz->add_option("--bound", fo.bound,
                   "statement bound for exhaustive schedules");
  c_fz->add_option("--jobs", fo.jobs, "worker threads");
  c_fz->add_option("--fuel", fo.fuel, "step bound per run");
  c_fz->add_flag("--no-minimize", fo.no_minimize,
                 "report failing programs unshrunk");
  c_fz->add_flag("--json", fo.json, "machine-readable output");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInput;
  }

  return detail::guarded(err, [&]() -> int {
    if (app.got_subcommand(c_parse)) return detail::cmd_parse(po, out);
    if (app.got_subcommand(c_aug))
      return detail::cmd_transform(ao, "augment", out);
    if (app.got_subcommand(c_inv))
      return detail::cmd_transform(io_, "invert", out);
    if (app.got_subcommand(c_ann))
      return detail::cmd_transform(no, "annotate", out);
    if (app.got_subcommand(c_run)) return detail::cmd_run(ro, out);
    if (app.got_subcommand(c_rev)) return detail::cmd_reverse(vo, out);
    if (app.got_subcommand(c_rt)) return detail::cmd_roundtrip(to, out, err);
    if (app.got_subcommand(c_il)) return detail::cmd_interleavings(lo, out);
    if (app.got_subcommand(c_fz)) return detail::cmd_fuzz(fo, out);
    throw Error("no subcommand selected");
  });
}

}  // namespace cli
}  // namespace reverso
