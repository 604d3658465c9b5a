// Acceptance gate: one line per criterion, nonzero exit if any fails.
//
// Each criterion frames an end-to-end guarantee of the toolkit: the golden
// sequential and parallel runs with their exact store contents, the four
// transform images, the unchecked-order counterexample, the two randomized
// property suites, and mutation sensitivity of those suites. Every check is
// exact equality; each criterion also carries a wall-clock budget.

#include <chrono>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "golden.hpp"
#include "reverso/reverso.hpp"

using namespace reverso;

namespace {

struct Criterion {
  int number;
  std::string description;
  double budget_ms;
  bool pass = false;
  double elapsed_ms = 0;
  std::string detail;  // failure reason, empty on pass
};

template <class Fn>
Criterion check(int number, const std::string& description, double budget_ms,
                Fn body) {
  Criterion c{number, description, budget_ms, false, 0, {}};
  auto t0 = std::chrono::steady_clock::now();
  try {
    std::string why = body();  // empty string means pass
    c.pass = why.empty();
    c.detail = why;
  } catch (const std::exception& e) {
    c.pass = false;
    c.detail = std::string("exception: ") + e.what();
  }
  c.elapsed_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  if (c.pass && c.elapsed_ms > c.budget_ms) {
    c.pass = false;
    c.detail = "over the time budget";
  }
  return c;
}

std::string fail(const std::string& why) { return why; }
std::string pass() { return {}; }

// --------------------------------------------------------------------------
// 1. Sequential golden run: the augmented program reaches the exact final
//    stores, and the inverse program consumes them back to the start.
// --------------------------------------------------------------------------
std::string criterion_sequential_golden() {
  Program source = parse_program(golden::fib_source);
  RunResult fwd = run(aug(source).program, golden::fib_sigma0());
  if (fwd.status != RunStatus::Done) return fail("forward run did not finish");
  if (fwd.sigma != golden::fib_sigma_final())
    return fail("final sigma is " + to_string(fwd.sigma));
  if (fwd.delta != golden::fib_delta_final())
    return fail("final delta is " + to_string(fwd.delta));

  RunResult bwd = run(inv(source).program, fwd.sigma, fwd.delta);
  if (bwd.status != RunStatus::Done) return fail("reverse run did not finish");
  if (bwd.sigma != golden::fib_sigma0())
    return fail("restored sigma is " + to_string(bwd.sigma));
  if (!bwd.delta.empty())
    return fail("reversal data left over: " + to_string(bwd.delta));
  return pass();
}

// --------------------------------------------------------------------------
// 2. Transform images: augment, invert, annotate, and annotated invert all
//    produce programs structurally equal to their fixed expected texts.
// --------------------------------------------------------------------------
std::string criterion_transform_images() {
  Program source = parse_program(golden::fib_source);
  if (!(aug(source).program ==
        parse_program(golden::fib_augmented, Dialect::Any)))
    return fail("augmentation image diverges");
  if (!(inv(source).program ==
        parse_program(golden::fib_inverse, Dialect::Any)))
    return fail("inverse image diverges");

  Program par_src = parse_program(golden::par_source, Dialect::Any);
  if (!(ann(par_src) == parse_annotated(golden::par_annotated)))
    return fail("annotation image diverges");
  AnnProgram populated = parse_annotated(golden::par_populated);
  if (!(inv_annotated(populated).program ==
        parse_annotated(golden::par_populated_inverse)))
    return fail("annotated inverse image diverges");
  return pass();
}

// --------------------------------------------------------------------------
// 3. Parallel golden run: the left-first interleaving stamps identifiers
//    1, 2, 3; the reverse run restores the stores, resets the counter, and
//    completes in mirror order 3, 2, 1.
// --------------------------------------------------------------------------
std::string criterion_parallel_golden() {
  AnnProgram p = ann(parse_program(golden::par_source, Dialect::Any));
  ForwardResult fwd =
      fwd_run(p, golden::par_sigma0(), AuxStore::parallel({}),
              parse_schedule("L,R,R"));
  if (fwd.status != ParStatus::Done) return fail("forward run did not finish");
  if (fwd.sigma != golden::par_sigma_LRR())
    return fail("final sigma is " + to_string(fwd.sigma));
  if (render(fwd.program) != golden::par_populated)
    return fail("identifier stamping diverges: " + render(fwd.program));

  ReverseResult rev = rev_run(inv_annotated(fwd.program), fwd.sigma,
                              fwd.delta, fwd.counter);
  if (rev.status != ParStatus::Done) return fail("reverse run did not finish");
  if (rev.sigma != golden::par_sigma0())
    return fail("restored sigma is " + to_string(rev.sigma));
  if (!rev.delta.empty())
    return fail("reversal data left over: " + to_string(rev.delta));
  if (!(rev.counter == IdentifierCounter{}))
    return fail("counter did not reset");
  if (rev.record.size() != 3 || rev.record[0].id != 3 ||
      rev.record[1].id != 2 || rev.record[2].id != 1)
    return fail("reverse completions are not in mirror order");
  return pass();
}

// --------------------------------------------------------------------------
// 4. Unchecked-order counterexample: reversing in the textual order of the
//    inverted program instead of the recorded order lands on the wrong store.
// --------------------------------------------------------------------------
std::string criterion_unchecked_counterexample() {
  AnnProgram populated = parse_annotated(golden::par_populated);
  std::vector<StepPath> order{StepPath::parse("L"), StepPath::parse("R"),
                              StepPath::parse("R")};
  auto [sigma, delta] = rev_run_unchecked(
      inv_annotated(populated), golden::par_sigma_LRR(),
      golden::par_delta_LRR(), order);
  if (sigma != golden::par_sigma_unchecked())
    return fail("unchecked reverse produced " + to_string(sigma));
  return pass();
}

// --------------------------------------------------------------------------
// 5. Sequential property suites: 1000 generated programs each for the
//    store-equivalence property (plain vs. augmented runs) and the
//    restoration property (forward then inverse drains every stack).
// --------------------------------------------------------------------------
std::string run_property_suite(Prop prop, SuiteConfig sc, bool allow_skips,
                               std::string* note) {
  PropertyReport r = run_suite(prop, sc);
  if (!r.ok()) {
    const Failure& f = r.failures.front();
    return fail("case " + std::to_string(f.index) + " (seed " +
                std::to_string(f.seed) + "): " + f.detail);
  }
  if (!allow_skips && r.skips != 0)
    return fail(std::to_string(r.skips) + " cases skipped");
  std::ostringstream os;
  os << r.passes << " passed";
  if (r.skips) os << ", " << r.skips << " skipped";
  *note = os.str();
  return pass();
}

std::string criterion_sequential_suites() {
  SuiteConfig sc;
  sc.gen.seed = 20260817;
  sc.gen.maxStmts = 20;
  sc.cases = 1000;
  std::string note;
  std::string p1 = run_property_suite(Prop::P1, sc, false, &note);
  if (!p1.empty()) return fail("store equivalence: " + p1);
  std::string p2 = run_property_suite(Prop::P2, sc, false, &note);
  if (!p2.empty()) return fail("restoration: " + p2);
  return pass();
}

// --------------------------------------------------------------------------
// 6. Parallel property suites: 200 generated programs of at most 8
//    statements; every interleaving of each round-trips exactly, with the
//    counter reset and mirror-order reverse completions.
// --------------------------------------------------------------------------
std::string criterion_parallel_suites() {
  SuiteConfig sc;
  sc.gen.seed = 20260817;
  sc.gen.dialect = Dialect::Parallel;
  sc.gen.maxStmts = 8;
  sc.cases = 200;
  sc.mode = Exhaustive{};
  std::string note;
  return run_property_suite(Prop::P34, sc, false, &note);
}

// --------------------------------------------------------------------------
// 7. Mutation sensitivity: each single-clause corruption of the transforms
//    is caught by the suites above (all eight must be detected).
// --------------------------------------------------------------------------
std::string criterion_mutation_sensitivity() {
  SuiteConfig seq;
  seq.gen.seed = 20260817;
  seq.gen.maxStmts = 20;
  seq.cases = 1000;
  SuiteConfig par;
  par.gen.seed = 20260817;
  par.gen.dialect = Dialect::Parallel;
  par.gen.maxStmts = 8;
  par.cases = 200;

  auto outcomes = detect_transform_mutations(seq, par);
  std::size_t detected = 0;
  std::string missed;
  for (const auto& o : outcomes) {
    if (o.detected) ++detected;
    else missed += (missed.empty() ? "" : "; ") + o.name;
  }
  if (detected != outcomes.size())
    return fail(std::to_string(detected) + "/" +
                std::to_string(outcomes.size()) + " detected; missed: " +
                missed);
  return pass();
}

}  // namespace

int main() {
  std::vector<Criterion> results;
  results.push_back(check(
      1, "sequential golden run reaches and restores the exact stores", 1000,
      criterion_sequential_golden));
  results.push_back(check(2, "transform images match their expected programs",
                          1000, criterion_transform_images));
  results.push_back(check(
      3, "parallel golden run stamps, restores, and mirrors", 1000,
      criterion_parallel_golden));
  results.push_back(
      check(4, "unchecked reverse order reproduces the counterexample", 1000,
            criterion_unchecked_counterexample));
  results.push_back(check(
      5, "1000-case sequential suites: store equivalence and restoration",
      60000, criterion_sequential_suites));
  results.push_back(
      check(6, "200-case parallel suite: every interleaving round-trips",
            120000, criterion_parallel_suites));
  results.push_back(
      check(7, "all eight transform corruptions are detected", 120000,
            criterion_mutation_sensitivity));

  bool all = true;
  for (const auto& c : results) {
    std::ostringstream line;
    line << "[" << c.number << "] " << c.description << " ";
    while (line.str().size() < 68) line << ".";
    std::cout << line.str() << " " << (c.pass ? "PASS" : "FAIL") << " ("
              << static_cast<long>(c.elapsed_ms) << " ms)\n";
    if (!c.pass) {
      std::cout << "    " << c.detail << "\n";
      all = false;
    }
  }
  std::cout << (all ? "acceptance: all criteria pass\n"
                    : "acceptance: FAILURES\n");
  return all ? 0 : 1;
}
