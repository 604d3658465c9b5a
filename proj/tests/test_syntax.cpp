#include <catch2/catch_amalgamated.hpp>

#include "golden.hpp"
#include "reverso/reverso.hpp"

using namespace reverso;

// ---------------------------------------------------------------------------
// Parsing and rendering
// ---------------------------------------------------------------------------

TEST_CASE("render/parse round trip is the identity on the AST") {
  for (const std::string& text :
       {golden::fib_source, golden::fib_augmented, golden::fib_inverse}) {
    Program p = parse_program(text, Dialect::Any);
    CHECK(parse_program(render(p), Dialect::Any) == p);
  }
  Program par = parse_program(golden::par_source, Dialect::Parallel);
  CHECK(parse_program(render(par), Dialect::Parallel) == par);
}

TEST_CASE("rendering is canonical: reparsing canonical text reproduces it") {
  Program p = parse_program(golden::fib_source);
  std::string canon = render(p);
  CHECK(render(parse_program(canon)) == canon);
}

TEST_CASE("semicolons before else/end and at the last statement are optional") {
  Program with = parse_program("if X > Y then skip; else skip; end");
  Program without = parse_program("if X > Y then skip else skip end");
  CHECK(with == without);
  CHECK(parse_program("X = 1") == parse_program("X = 1;"));
}

TEST_CASE("arithmetic is left-associative and parentheses are preserved") {
  Program left = parse_program("Q = X - Y - Z;");
  Program grouped = parse_program("Q = (X - Y) - Z;");
  Program right = parse_program("Q = X - (Y - Z);");
  // (X - Y) - Z carries an explicit Paren node, so the ASTs differ...
  CHECK(left != grouped);
  CHECK(left != right);
  // ...but evaluation agrees with left associativity.
  DataStore s = golden::sigma_of({{"X", 10}, {"Y", 3}, {"Z", 2}, {"Q", 0}});
  auto rl = run(left, s);
  auto rg = run(grouped, s);
  auto rr = run(right, s);
  CHECK(rl.sigma.get("Q") == Int(5));
  CHECK(rg.sigma.get("Q") == Int(5));
  CHECK(rr.sigma.get("Q") == Int(9));
}

TEST_CASE("boolean grammar: literals, negation, conjunction, comparisons") {
  Program p = parse_program(
      "if !(X > Y) && (X == Y) == T then X = 1; else X = 2; end");
  std::string canon = render(p);
  CHECK(parse_program(canon) == p);

  auto eq = run(p, golden::sigma_of({{"X", 3}, {"Y", 3}}));
  CHECK(eq.sigma.get("X") == Int(1));
  auto gt = run(p, golden::sigma_of({{"X", 4}, {"Y", 3}}));
  CHECK(gt.sigma.get("X") == Int(2));
}

TEST_CASE("statement zoo renders and reparses") {
  const std::string text =
      "skip;\n"
      "X = Y + 2;\n"
      "X += Y - 1;\n"
      "X -= 3;\n"
      "if X > 0 then X = 0; else skip; end\n"
      "while X > 0 do X -= 1; end\n"
      "push(sigma(X), delta(X));\n"
      "push(T, delta(B));\n"
      "push(F, delta(W));\n"
      "X = pop(delta(X));\n"
      "if pop(delta(B)) then skip; else skip; end\n";
  Program p = parse_program(text, Dialect::Any);
  CHECK(parse_program(render(p), Dialect::Any) == p);
  CHECK(stmt_count(p) > 10);
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_program("X = 1;\nY = ;\n");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("syntax") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_program("while T do skip"), SyntaxError);
  CHECK_THROWS_AS(parse_program("X ="), SyntaxError);
  CHECK_THROWS_AS(parse_program("= 4;"), SyntaxError);
}

TEST_CASE("structure helpers: stmt_count, variables_of, contains_*") {
  Program fib = parse_program(golden::fib_source);
  CHECK(stmt_count(fib) == 10);
  CHECK(variables_of(fib) == std::vector<VarName>{"X", "Y", "Z", "N"});
  CHECK_FALSE(contains_push(fib));
  CHECK_FALSE(contains_pop(fib));
  CHECK_FALSE(contains_par(fib));

  Program au = parse_program(golden::fib_augmented, Dialect::Any);
  CHECK(contains_push(au));
  CHECK_FALSE(contains_pop(au));

  Program iv = parse_program(golden::fib_inverse, Dialect::Any);
  CHECK(contains_pop(iv));

  Program par = parse_program(golden::par_source, Dialect::Parallel);
  CHECK(contains_par(par));
  CHECK(stmt_count(par) == 4);  // the par container counts, like if/while
}

TEST_CASE("inline rendering puts a whole program on one line") {
  Program p = parse_program("if X > 0 then X = 0; else skip; end");
  std::string one = inline_program(p);
  CHECK(one.find('\n') == std::string::npos);
  CHECK(one.find("if X > 0 then") != std::string::npos);
}

// ---------------------------------------------------------------------------
// Dialects
// ---------------------------------------------------------------------------

TEST_CASE("dialect enforcement at parse time") {
  CHECK_THROWS_AS(parse_program(golden::par_source, Dialect::Sequential),
                  DialectError);
  CHECK_THROWS_AS(parse_program("while X > 0 do skip end", Dialect::Parallel),
                  DialectError);
  CHECK_THROWS_AS(
      parse_program("if X > 0 then skip else skip end", Dialect::Parallel),
      DialectError);
  CHECK_THROWS_AS(parse_program("push(T, delta(B));", Dialect::Parallel),
                  DialectError);
  CHECK_THROWS_AS(parse_program("X = pop(delta(X));", Dialect::Parallel),
                  DialectError);
  // Dialect::Any admits everything grammatical.
  CHECK_NOTHROW(parse_program(golden::par_source, Dialect::Any));
  CHECK_NOTHROW(parse_program(golden::fib_augmented, Dialect::Any));
}

TEST_CASE("the annotated dialect goes through parse_annotated") {
  CHECK_THROWS_AS(parse_program("skip;", Dialect::Annotated), DialectError);
  AnnProgram ap = parse_annotated(golden::par_populated);
  CHECK(stmt_count(ap) == 4);
  CHECK(render(ap) == golden::par_populated);
}

// ---------------------------------------------------------------------------
// Annotated programs
// ---------------------------------------------------------------------------

TEST_CASE("identifier stacks parse head-first; brackets are optional") {
  AnnProgram ap = parse_annotated("X = 1 [3,2,1];");
  REQUIRE(ap.stmts.size() == 1);
  CHECK(ap.stmts[0].ids == IdStack{3, 2, 1});

  AnnProgram empty_brackets = parse_annotated("X = 1 [];");
  AnnProgram no_brackets = parse_annotated("X = 1;");
  CHECK(empty_brackets == no_brackets);
  CHECK(empty_brackets.stmts[0].ids.empty());
}

TEST_CASE("strip_annotations recovers the plain program") {
  AnnProgram ap = parse_annotated(golden::par_populated);
  Program plain = strip_annotations(ap);
  CHECK(plain == parse_program(golden::par_source, Dialect::Parallel));
}

TEST_CASE("annotated validation rejects malformed id stacks") {
  AnnProgram increasing = parse_annotated("X = 1 [1,2];");
  auto vs = validate(increasing);
  REQUIRE_FALSE(vs.empty());
  CHECK(vs[0].code == "id-stack");

  // A constructive annotated statement must not read its own target.
  AnnProgram self = parse_annotated("X += X + 1;");
  auto vs2 = validate(self);
  REQUIRE_FALSE(vs2.empty());
  CHECK(vs2[0].code == "constructive-self-reference");

  CHECK(validate(parse_annotated(golden::par_populated)).empty());
}

// ---------------------------------------------------------------------------
// Validation of plain programs
// ---------------------------------------------------------------------------

TEST_CASE("user source must not touch the auxiliary store") {
  Program au = parse_program(golden::fib_augmented, Dialect::Any);
  CHECK_FALSE(
      validate(au, Dialect::Sequential, SourcePolicy::UserSource).empty());
  CHECK(validate(au, Dialect::Sequential, SourcePolicy::Augmented).empty());
  CHECK(validate(au, Dialect::Sequential, SourcePolicy::Any).empty());

  Program iv = parse_program(golden::fib_inverse, Dialect::Any);
  CHECK_FALSE(
      validate(iv, Dialect::Sequential, SourcePolicy::UserSource).empty());
  CHECK(validate(iv, Dialect::Sequential, SourcePolicy::Inverted).empty());
}

TEST_CASE("reserved stack names cannot be program variables") {
  auto vs = validate(parse_program("B = 1;"), Dialect::Sequential,
                     SourcePolicy::UserSource);
  REQUIRE_FALSE(vs.empty());
  auto vs2 = validate(parse_program("X = W + 1;"), Dialect::Sequential,
                      SourcePolicy::UserSource);
  CHECK_FALSE(vs2.empty());
}

TEST_CASE("constructive assignments must not read their own target") {
  auto vs = validate(parse_program("X += X;"), Dialect::Sequential,
                     SourcePolicy::UserSource);
  REQUIRE_FALSE(vs.empty());
  CHECK(vs[0].code == "constructive-self-reference");
  CHECK(validate(parse_program("X += Y;"), Dialect::Sequential,
                 SourcePolicy::UserSource)
            .empty());
  // Reading the target in a destructive assignment is fine.
  CHECK(validate(parse_program("X = X + 1;"), Dialect::Sequential,
                 SourcePolicy::UserSource)
            .empty());
}

TEST_CASE("require_valid throws with the violations attached") {
  try {
    require_valid(validate(parse_program("X += X;"), Dialect::Sequential,
                           SourcePolicy::UserSource));
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    REQUIRE(e.violations.size() == 1);
    CHECK(std::string(e.what()).find("constructive-self-reference") !=
          std::string::npos);
  }
  CHECK_NOTHROW(require_valid({}));
}

TEST_CASE("violation rendering is line:col: code: message") {
  Violation v{3, 7, "some-code", "something is off"};
  CHECK(v.str() == "3:7: some-code: something is off");
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

TEST_CASE("AST builders agree with the parser") {
  Program built;
  built.stmts.push_back(st_assign(
      "X", mk_bin(ArithOp::Add, mk_var("Y"), mk_int(Int(2)))));
  built.stmts.push_back(st_cassign("Y", CopKind::MinusEq, mk_var("X")));
  CHECK(built == parse_program("X = Y + 2; Y -= X;"));

  Program branch;
  branch.stmts.push_back(st_skip());
  Program cond;
  cond.stmts.push_back(st_if(mk_cmp(CmpOp::Gt, mk_var("X"), mk_int(Int(0))),
                             branch, branch));
  CHECK(cond == parse_program("if X > 0 then skip else skip end"));
}
