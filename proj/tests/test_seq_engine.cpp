#include <catch2/catch_amalgamated.hpp>

#include "golden.hpp"
#include "reverso/reverso.hpp"

using namespace reverso;

// ---------------------------------------------------------------------------
// Whole-program golden runs
// ---------------------------------------------------------------------------

TEST_CASE("the worked example computes its final state untouched by delta") {
  Program p = parse_program(golden::fib_source);
  RunResult r = run(p, golden::fib_sigma0());
  CHECK(r.status == RunStatus::Done);
  CHECK(r.sigma == golden::fib_sigma_final());
  CHECK(r.delta.empty());
}

TEST_CASE("the augmented run records exactly the golden reversal data") {
  Program a = parse_program(golden::fib_augmented, Dialect::Any);
  RunResult r = run(a, golden::fib_sigma0());
  CHECK(r.status == RunStatus::Done);
  CHECK(r.sigma == golden::fib_sigma_final());
  CHECK(r.delta == golden::fib_delta_final());
}

TEST_CASE("the inverse run consumes the reversal data back to the start") {
  Program iv = parse_program(golden::fib_inverse, Dialect::Any);
  RunResult r =
      run(iv, golden::fib_sigma_final(), golden::fib_delta_final());
  CHECK(r.status == RunStatus::Done);
  CHECK(r.sigma == golden::fib_sigma0());
  CHECK(r.delta.empty());
}

TEST_CASE("empty program and skip are identities") {
  DataStore s = golden::sigma_of({{"X", 9}});
  RunResult empty = run(Program{}, s);
  CHECK(empty.status == RunStatus::Done);
  CHECK(empty.sigma == s);
  CHECK(empty.steps == 0);
  RunResult skip = run(parse_program("skip;"), s);
  CHECK(skip.sigma == s);
}

// ---------------------------------------------------------------------------
// Expression evaluation order
// ---------------------------------------------------------------------------

TEST_CASE("operands evaluate left to right (observable through pops)") {
  Program p = parse_program(
      "X = 3; push(sigma(X), delta(X));"
      "X = 5; push(sigma(X), delta(X));"
      "Y = pop(delta(X)) - pop(delta(X));",
      Dialect::Any);
  RunResult r = run(p, golden::sigma_of({{"X", 0}, {"Y", 0}}));
  CHECK(r.sigma.get("Y") == Int(2));  // 5 - 3, not 3 - 5
  CHECK(r.delta.depth("X") == 0);
}

TEST_CASE("conjunction does not short-circuit") {
  // The right operand's pop must run even when the left operand is F.
  Program p = parse_program(
      "push(T, delta(B));"
      "if F && pop(delta(B)) then X = 1; else X = 2; end",
      Dialect::Any);
  RunResult r = run(p, golden::sigma_of({{"X", 0}}));
  CHECK(r.sigma.get("X") == Int(2));
  CHECK(r.delta.flag_depth(FlagStack::B) == 0);
}

TEST_CASE("comparison and boolean equality evaluate correctly") {
  Program p = parse_program(
      "if (X == 4) == (Y > 0) then Q = 1; else Q = 2; end");
  CHECK(run(p, golden::sigma_of({{"X", 4}, {"Y", 1}, {"Q", 0}}))
            .sigma.get("Q") == Int(1));
  CHECK(run(p, golden::sigma_of({{"X", 4}, {"Y", 0}, {"Q", 0}}))
            .sigma.get("Q") == Int(2));
  CHECK(run(p, golden::sigma_of({{"X", 5}, {"Y", 0}, {"Q", 0}}))
            .sigma.get("Q") == Int(1));
}

TEST_CASE("negative values and subtraction below zero work") {
  Program p = parse_program("X -= 10;");
  RunResult r = run(p, golden::sigma_of({{"X", 3}}));
  CHECK(r.sigma.get("X") == Int(-7));
}

// ---------------------------------------------------------------------------
// Loops and fuel
// ---------------------------------------------------------------------------

TEST_CASE("loops iterate the guard count") {
  Program p = parse_program("while N > 0 do N -= 1; Y += 2; end");
  RunResult r = run(p, golden::sigma_of({{"N", 5}, {"Y", 0}}));
  CHECK(r.status == RunStatus::Done);
  CHECK(r.sigma.get("N") == Int(0));
  CHECK(r.sigma.get("Y") == Int(10));
}

TEST_CASE("fuel exhaustion reports the partial state") {
  Program p = parse_program("while T do X += 1; end");
  RunResult r = run(p, golden::sigma_of({{"X", 0}}), Fuel{100});
  CHECK(r.status == RunStatus::FuelExhausted);
  CHECK(r.steps == 100);
  CHECK(r.sigma.get("X") > Int(0));

  RunResult enough = run(parse_program("X += 1;"),
                         golden::sigma_of({{"X", 0}}), Fuel{100});
  CHECK(enough.status == RunStatus::Done);
}

// ---------------------------------------------------------------------------
// Store interaction and errors
// ---------------------------------------------------------------------------

TEST_CASE("missing stacks are declared at entry; sigma is taken as given") {
  Program p = parse_program("push(sigma(X), delta(X));", Dialect::Any);
  RunResult r = run(p, golden::sigma_of({{"X", 7}}));
  CHECK(r.delta.values_head_first("X") == std::vector<Int>{Int(7)});

  CHECK_THROWS_AS(run(parse_program("Y = X;"), DataStore{}),
                  UnboundVariableError);
}

TEST_CASE("popping an empty stack is a hard error") {
  Program p = parse_program("X = pop(delta(X));", Dialect::Any);
  CHECK_THROWS_AS(run(p, golden::sigma_of({{"X", 0}})), EmptyStackError);
  Program q = parse_program("if pop(delta(B)) then skip else skip end",
                            Dialect::Any);
  CHECK_THROWS_AS(run(q, DataStore{}), EmptyStackError);
}

TEST_CASE("a parallel statement cannot step in the sequential engine") {
  Program p = parse_program(golden::par_source, Dialect::Any);
  CHECK_THROWS_AS(run(p, golden::par_sigma0()), StuckError);
}

// ---------------------------------------------------------------------------
// Configurations and single steps
// ---------------------------------------------------------------------------

TEST_CASE("a configuration is terminal exactly when no statements remain") {
  Configuration done{Program{}, DataStore{}, AuxStore::sequential({})};
  CHECK(done.terminal());
  Configuration busy{parse_program("skip;"), DataStore{},
                     AuxStore::sequential({})};
  CHECK_FALSE(busy.terminal());
  auto [after, info] = step(std::move(busy));
  CHECK(after.terminal());
}

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

TEST_CASE("trace off records nothing") {
  Program p = parse_program(golden::fib_source);
  RunResult r = run(p, golden::fib_sigma0(), kDefaultFuel, TraceMode::Off);
  CHECK(r.trace.empty());
}

TEST_CASE("fused tracing shows completions in execution order") {
  Program p = parse_program(golden::fib_source);
  RunResult r = run(p, golden::fib_sigma0(), kDefaultFuel, TraceMode::Fused);
  REQUIRE(r.trace.size() >= 4);
  CHECK(rule_name(r.trace[0].rule) == std::string("C1"));
  CHECK(r.trace[1].head == "Z = 3");
  CHECK(r.trace[2].head == "Y = 4");
  CHECK(r.trace[3].head == "X = 3");
  // Every entry renders as "rule | head | sigma=... | delta=...".
  CHECK(r.trace[0].str().find(" | sigma={") != std::string::npos);
}

TEST_CASE("micro tracing includes the expression steps fused tracing hides") {
  Program p = parse_program("X = Y + 2;");
  DataStore s = golden::sigma_of({{"X", 0}, {"Y", 1}});
  RunResult fused = run(p, s, kDefaultFuel, TraceMode::Fused);
  RunResult micro = run(p, s, kDefaultFuel, TraceMode::Micro);
  CHECK(micro.trace.size() > fused.trace.size());
  bool has_da2 = false;
  for (const auto& e : micro.trace)
    if (rule_name(e.rule) == std::string("DA2")) has_da2 = true;
  CHECK(has_da2);
}

TEST_CASE("step counts match between traced and untraced runs") {
  Program p = parse_program(golden::fib_source);
  RunResult off = run(p, golden::fib_sigma0());
  RunResult micro = run(p, golden::fib_sigma0(), kDefaultFuel,
                        TraceMode::Micro);
  CHECK(off.steps == micro.steps);
  CHECK(micro.trace.size() == micro.steps);
}
