#include <catch2/catch_amalgamated.hpp>

#include "golden.hpp"
#include "reverso/reverso.hpp"

using namespace reverso;

// ---------------------------------------------------------------------------
// Data store
// ---------------------------------------------------------------------------

TEST_CASE("data store: bind, read, update") {
  DataStore s;
  CHECK(s.empty());
  s.set("X", Int(4));
  CHECK(s.contains("X"));
  CHECK(s.get("X") == Int(4));
  s.set("X", Int(-7));
  CHECK(s.get("X") == Int(-7));
  CHECK(s.size() == 1);
}

TEST_CASE("reading an unbound variable throws") {
  DataStore s;
  CHECK_THROWS_AS(s.get("X"), UnboundVariableError);
}

TEST_CASE("reserved stack names are not variables") {
  DataStore s;
  CHECK_THROWS_AS(s.set("B", Int(1)), ReservedNameError);
  CHECK_THROWS_AS(s.set("W", Int(1)), ReservedNameError);
}

TEST_CASE("data store printing is sorted and canonical") {
  CHECK(to_string(golden::fib_sigma_final()) ==
        "{N: 2, X: 11, Y: 18, Z: 7}");
  CHECK(to_string(DataStore{}) == "{}");
}

TEST_CASE("data stores hold arbitrarily large integers") {
  DataStore s;
  Int big = Int(1);
  for (int i = 0; i < 200; ++i) big *= 2;
  s.set("X", big);
  CHECK(s.get("X") == Int("1606938044258990275541962092341162602522202993782792835301376"));
}

// ---------------------------------------------------------------------------
// Sequential auxiliary store
// ---------------------------------------------------------------------------

TEST_CASE("sequential stacks are LIFO per variable") {
  auto d = AuxStore::sequential({"X"});
  CHECK(d.empty());
  d.push_value("X", Int(1));
  d.push_value("X", Int(2));
  CHECK_FALSE(d.empty());
  CHECK(d.depth("X") == 2);
  CHECK(d.values_head_first("X") == std::vector<Int>{Int(2), Int(1)});
  CHECK(d.pop_value("X") == Int(2));
  CHECK(d.pop_value("X") == Int(1));
  CHECK(d.empty());
}

TEST_CASE("flag stacks hold the control booleans") {
  auto d = AuxStore::sequential({});
  d.push_flag(FlagStack::W, false);
  d.push_flag(FlagStack::W, true);
  d.push_flag(FlagStack::B, true);
  CHECK(d.flags_head_first(FlagStack::W) == std::vector<bool>{true, false});
  CHECK(d.pop_flag(FlagStack::B) == true);
  CHECK(d.pop_flag(FlagStack::W) == true);
  CHECK(d.pop_flag(FlagStack::W) == false);
  CHECK(d.empty());
}

TEST_CASE("undeclared stacks and empty pops are errors") {
  auto d = AuxStore::sequential({"X"});
  CHECK_THROWS_AS(d.push_value("Y", Int(1)), UnknownStackError);
  CHECK_THROWS_AS(d.pop_value("X"), EmptyStackError);
  CHECK_THROWS_AS(d.pop_flag(FlagStack::B), EmptyStackError);
  d.declare("Y");
  CHECK_NOTHROW(d.push_value("Y", Int(1)));
}

TEST_CASE("reserved names cannot be declared as value stacks") {
  auto d = AuxStore::sequential({});
  CHECK_THROWS_AS(d.declare("B"), ReservedNameError);
}

TEST_CASE("sequential auxiliary store printing, head first") {
  CHECK(to_string(golden::fib_delta_final()) ==
        "{N: [], X: [7, 4, 3, 4], Y: [3], Z: [4, 3, 3, 0], B: [T], "
        "W: [T, T, T, F]}");
}

TEST_CASE("flag operations are sequential-mode only") {
  auto d = AuxStore::parallel({"X"});
  CHECK_THROWS_AS(d.push_flag(FlagStack::B, true), UnknownStackError);
  CHECK_THROWS_AS(d.pop_flag(FlagStack::W), UnknownStackError);
}

// ---------------------------------------------------------------------------
// Parallel auxiliary store
// ---------------------------------------------------------------------------

TEST_CASE("parallel stacks hold identifier-tagged values") {
  auto d = AuxStore::parallel({"X", "Y"});
  CHECK(d.peek_tagged("X") == nullptr);
  d.push_tagged("X", 1, Int(10));
  d.push_tagged("X", 3, Int(30));
  REQUIRE(d.peek_tagged("X") != nullptr);
  CHECK(d.peek_tagged("X")->id == 3);
  CHECK(d.peek_tagged("X")->value == Int(30));
  CHECK(d.tagged_head_first("X") ==
        std::vector<TaggedValue>{{3, Int(30)}, {1, Int(10)}});
  TaggedValue t = d.pop_tagged("X");
  CHECK(t.id == 3);
  CHECK(d.pop_tagged("X").id == 1);
  CHECK_THROWS_AS(d.pop_tagged("X"), EmptyStackError);
  CHECK_THROWS_AS(d.pop_tagged("Q"), UnknownStackError);
}

TEST_CASE("parallel auxiliary store printing") {
  CHECK(to_string(golden::par_delta_LRR()) == "{X: [(3, 4)], Y: [(2, 1)]}");
  CHECK(to_string(AuxStore::parallel({})) == "{}");
}

TEST_CASE("value-stack operations are rejected in parallel mode") {
  auto d = AuxStore::parallel({"X"});
  CHECK_THROWS_AS(d.push_value("X", Int(1)), UnknownStackError);
  auto s = AuxStore::sequential({"X"});
  CHECK_THROWS_AS(s.push_tagged("X", 1, Int(1)), UnknownStackError);
}

// ---------------------------------------------------------------------------
// Equality
// ---------------------------------------------------------------------------

TEST_CASE("store equality is structural") {
  CHECK(golden::fib_delta_final() == golden::fib_delta_final());
  auto a = AuxStore::sequential({"X"});
  auto b = AuxStore::sequential({"X"});
  CHECK(a == b);
  a.push_value("X", Int(1));
  CHECK(a != b);
  b.push_value("X", Int(1));
  CHECK(a == b);
  // Declaration matters: a declared-but-empty stack is visible state.
  auto c = AuxStore::sequential({});
  CHECK(b != c);
  CHECK(golden::fib_sigma0() == golden::fib_sigma0());
  CHECK(golden::fib_sigma0() != golden::fib_sigma_final());
}

// ---------------------------------------------------------------------------
// Identifier counter
// ---------------------------------------------------------------------------

TEST_CASE("identifier counter issues 1, 2, 3, ...") {
  IdentifierCounter c;
  CHECK(c.next_value() == 1);
  CHECK(c.next() == 1);
  CHECK(c.next() == 2);
  CHECK(c.next() == 3);
  CHECK(c.next_value() == 4);
  CHECK(c.previous() == 3);
}

TEST_CASE("identifier counter gates reverse consumption") {
  IdentifierCounter c;
  c.next();
  c.next();  // previous() == 2
  CHECK(c.matches_previous(2));
  CHECK_FALSE(c.matches_previous(1));
  CHECK_FALSE(c.try_consume_previous(1));
  CHECK(c.previous() == 2);
  CHECK(c.try_consume_previous(2));
  CHECK(c.previous() == 1);
  CHECK(c.try_consume_previous(1));
  CHECK(c == IdentifierCounter{});
}

TEST_CASE("counter equality and explicit construction") {
  CHECK(IdentifierCounter{} == IdentifierCounter(1));
  IdentifierCounter c(4);
  CHECK(c.previous() == 3);
  CHECK(c != IdentifierCounter{});
}
