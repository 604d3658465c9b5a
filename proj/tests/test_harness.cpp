#include <catch2/catch_amalgamated.hpp>

#include "golden.hpp"
#include "reverso/reverso.hpp"

using namespace reverso;

namespace {

// Every counter either never appears as an assignment target or appears only
// as its loop's trailing "C -= 1" decrement.
void collect_bad_counter_writes(const Program& p,
                                const std::set<VarName>& counters,
                                std::vector<std::string>& bad) {
  for (const auto& s : p.stmts) {
    if (const auto* da = std::get_if<Stmt::DestAssign>(&s.node)) {
      if (counters.count(da->target))
        bad.push_back(da->target + " destructively assigned");
    } else if (const auto* ca = std::get_if<Stmt::ConstAssign>(&s.node)) {
      if (counters.count(ca->target) && inline_stmt(s) != ca->target + " -= 1")
        bad.push_back(inline_stmt(s));
    } else if (const auto* i = std::get_if<Stmt::If>(&s.node)) {
      collect_bad_counter_writes(i->then_body, counters, bad);
      collect_bad_counter_writes(i->else_body, counters, bad);
    } else if (const auto* w = std::get_if<Stmt::While>(&s.node)) {
      collect_bad_counter_writes(w->body, counters, bad);
    } else if (const auto* par = std::get_if<Stmt::Par>(&s.node)) {
      collect_bad_counter_writes(par->left, counters, bad);
      collect_bad_counter_writes(par->right, counters, bad);
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Generator
// ---------------------------------------------------------------------------

TEST_CASE("generation is a pure function of its configuration") {
  GenConfig cfg;
  cfg.seed = 123;
  GenCase a = gen_case(cfg);
  GenCase b = gen_case(cfg);
  CHECK(render(a.program) == render(b.program));
  CHECK(a.sigma0 == b.sigma0);

  cfg.seed = 124;
  GenCase c = gen_case(cfg);
  CHECK(render(a.program) != render(c.program));
}

TEST_CASE("generated programs are valid user programs with covered stores") {
  for (Dialect d : {Dialect::Sequential, Dialect::Parallel}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      GenConfig cfg;
      cfg.seed = seed;
      cfg.dialect = d;
      if (d == Dialect::Parallel) cfg.maxStmts = 8;
      GenCase g = gen_case(cfg);

      INFO("dialect " << (d == Dialect::Sequential ? "seq" : "par")
                      << " seed " << seed << "\n"
                      << render(g.program));
      CHECK(validate(g.program, d, SourcePolicy::UserSource).empty());
      CHECK(parse_program(render(g.program), d) == g.program);
      for (const auto& v : variables_of(g.program))
        CHECK_NOTHROW(g.sigma0.get(v));

      std::vector<std::string> bad;
      collect_bad_counter_writes(g.program, g.counters, bad);
      CHECK(bad.empty());
    }
  }
}

TEST_CASE("counter-pattern loops terminate within the statement budget") {
  // Termination by construction: 60 sequential cases all run to Done.
  for (std::uint64_t seed = 500; seed < 560; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    GenCase g = gen_case(cfg);
    RunResult r = run(g.program, g.sigma0);
    INFO("seed " << seed << "\n" << render(g.program));
    CHECK(r.status == RunStatus::Done);
  }
}

// ---------------------------------------------------------------------------
// Single-case property checks
// ---------------------------------------------------------------------------

TEST_CASE("the worked example satisfies both sequential properties") {
  Program p = parse_program(golden::fib_source);
  PropertyReport r1 = check_prop1(p, golden::fib_sigma0());
  CHECK(r1.ok());
  CHECK(r1.passes == 1);
  PropertyReport r2 = check_prop2(p, golden::fib_sigma0());
  CHECK(r2.ok());

  Program empty;
  CHECK(check_prop1(empty, DataStore{}).ok());
  CHECK(check_prop2(empty, DataStore{}).ok());
}

TEST_CASE("the parallel example satisfies the schedule properties") {
  Program p = parse_program(golden::par_source, Dialect::Any);
  PropertyReport r = check_prop3_prop4(p, golden::par_sigma0());
  CHECK(r.ok());
  CHECK(r.passes == 1);
  CHECK(check_prop3_prop4(parse_program("skip;", Dialect::Any), DataStore{})
            .ok());
}

TEST_CASE("sampled schedule coverage also passes on the example") {
  Program p = parse_program(golden::par_source, Dialect::Any);
  PropertyReport r =
      check_prop3_prop4(p, golden::par_sigma0(), Sampled{8, 11});
  CHECK(r.ok());
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

TEST_CASE("a sequential suite passes both properties across 250 cases") {
  SuiteConfig sc;
  sc.gen.seed = 42;
  sc.cases = 250;
  for (Prop prop : {Prop::P1, Prop::P2}) {
    PropertyReport r = run_suite(prop, sc);
    CHECK(r.ok());
    CHECK(r.cases == 250);
    CHECK(r.passes == 250);
    CHECK(r.skips == 0);
  }
}

TEST_CASE("a parallel suite passes the schedule properties exhaustively") {
  SuiteConfig sc;
  sc.gen.seed = 42;
  sc.gen.dialect = Dialect::Parallel;
  sc.gen.maxStmts = 8;
  sc.cases = 100;
  PropertyReport r = run_suite(Prop::P34, sc);
  CHECK(r.ok());
  CHECK(r.passes == 100);
  CHECK(r.skips == 0);
}

TEST_CASE("unbounded loop generation may skip but never fails") {
  SuiteConfig sc;
  sc.gen.seed = 9;
  sc.gen.loopBoundStyle = LoopBoundStyle::FuelOnly;
  sc.cases = 150;
  sc.opts.fuel = Fuel{2000};
  PropertyReport r = run_suite(Prop::P2, sc);
  CHECK(r.ok());
  CHECK(r.cases == r.passes + r.skips);
  CHECK(r.skips > 0);  // some unbounded guards really do spin
}

TEST_CASE("an injected transform fault surfaces as a failure with a witness") {
  SuiteConfig sc;
  sc.gen.seed = 7;
  sc.cases = 200;
  sc.stop_on_failure = true;
  sc.opts.faults.keep_constructive_op = true;
  PropertyReport r = run_suite(Prop::P2, sc);
  REQUIRE_FALSE(r.ok());
  const Failure& f = r.failures.front();
  CHECK_FALSE(f.program.empty());
  CHECK_FALSE(f.detail.empty());
  // Minimization produced a strictly smaller reproducer that still parses.
  REQUIRE_FALSE(f.minimized.empty());
  Program m = parse_program(f.minimized);
  CHECK(stmt_count(m) <= stmt_count(parse_program(f.program)));

  // Replaying the reported seed regenerates the reported program.
  GenConfig cfg = sc.gen;
  cfg.seed = f.seed;
  CHECK(render(gen_program(cfg)) == f.program);
}

// ---------------------------------------------------------------------------
// Mutation detection
// ---------------------------------------------------------------------------

TEST_CASE("every standard transform mutation is caught by its suite") {
  SuiteConfig seq;
  seq.gen.seed = 3;
  seq.cases = 300;
  SuiteConfig par;
  par.gen.seed = 3;
  par.gen.dialect = Dialect::Parallel;
  par.gen.maxStmts = 8;
  par.cases = 100;

  auto outcomes = detect_transform_mutations(seq, par);
  REQUIRE(outcomes.size() == 8);
  for (const auto& o : outcomes) {
    INFO(o.name);
    CHECK(o.detected);
    CHECK_FALSE(o.witness.empty());
  }
}
