#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "golden.hpp"
#include "reverso/reverso.hpp"

using namespace reverso;

// ---------------------------------------------------------------------------
// Integers
// ---------------------------------------------------------------------------

TEST_CASE("integers within 64 bits serialize as JSON numbers") {
  CHECK(int_to_json(Int(0)).is_number_integer());
  CHECK(int_to_json(Int(-5)).dump() == "-5");
  Int max64("9223372036854775807");
  Int min64("-9223372036854775808");
  CHECK(int_to_json(max64).is_number_integer());
  CHECK(int_to_json(min64).is_number_integer());
  CHECK(int_from_json(int_to_json(max64), "t") == max64);
  CHECK(int_from_json(int_to_json(min64), "t") == min64);
}

TEST_CASE("integers beyond 64 bits serialize as decimal strings") {
  Int big = Int(1) << 200;
  Json j = int_to_json(big);
  REQUIRE(j.is_string());
  CHECK(int_from_json(j, "t") == big);
  Int just_over("9223372036854775808");
  CHECK(int_to_json(just_over).is_string());
  CHECK(int_from_json(int_to_json(just_over), "t") == just_over);
  CHECK_THROWS_AS(int_from_json(Json("pony"), "t"), CheckpointError);
  CHECK_THROWS_AS(int_from_json(Json(1.5), "t"), CheckpointError);
}

// ---------------------------------------------------------------------------
// Stores
// ---------------------------------------------------------------------------

TEST_CASE("a data store survives the JSON round trip") {
  DataStore s = golden::fib_sigma0();
  s.set("HUGE", Int(1) << 100);
  DataStore back = sigma_from_json(sigma_to_json(s));
  CHECK(back == s);
  CHECK_THROWS_AS(sigma_from_json(Json::array()), CheckpointError);
}

TEST_CASE("a sequential auxiliary store serializes head first") {
  AuxStore d = golden::fib_delta_final();
  Json j = delta_to_json(d);
  REQUIRE(j.is_object());
  CHECK(j.at("X") == Json::array({7, 4, 3, 4}));
  CHECK(j.at("B") == Json::array({true}));
  CHECK(j.at("W") == Json::array({true, true, true, false}));
  CHECK(delta_from_json(j, StoreMode::Sequential) == d);
}

TEST_CASE("a parallel auxiliary store serializes as tagged stacks") {
  AuxStore d = golden::par_delta_LRR();
  Json j = delta_to_json(d);
  REQUIRE(j.is_array());
  // [["X", [[3, 4]]], ["Y", [[2, 1]]]]
  CHECK(j.dump() == R"([["X",[[3,4]]],["Y",[[2,1]]]])");
  CHECK(delta_from_json(j, StoreMode::Parallel) == d);
}

TEST_CASE("malformed auxiliary stores are rejected") {
  CHECK_THROWS_AS(delta_from_json(Json::array(), StoreMode::Sequential),
                  CheckpointError);
  CHECK_THROWS_AS(delta_from_json(Json::object(), StoreMode::Parallel),
                  CheckpointError);
  CHECK_THROWS_AS(
      delta_from_json(Json::parse(R"({"B": [3]})"), StoreMode::Sequential),
      CheckpointError);
  CHECK_THROWS_AS(
      delta_from_json(Json::parse(R"([["X", [[1]]]])"), StoreMode::Parallel),
      CheckpointError);
}

TEST_CASE("store documents default the missing halves") {
  StoreDoc doc = store_doc_from_json(Json::parse(R"({"sigma": {"X": 3}})"),
                                     StoreMode::Sequential);
  CHECK(doc.sigma.get("X") == Int(3));
  CHECK(doc.delta.empty());
  CHECK(doc.delta.mode() == StoreMode::Sequential);

  StoreDoc both = store_doc_from_json(
      store_doc_to_json(golden::fib_sigma_final(), golden::fib_delta_final()),
      StoreMode::Sequential);
  CHECK(both.sigma == golden::fib_sigma_final());
  CHECK(both.delta == golden::fib_delta_final());
  CHECK_THROWS_AS(store_doc_from_json(Json(3), StoreMode::Sequential),
                  CheckpointError);
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

TEST_CASE("a sequential checkpoint survives the round trip") {
  Checkpoint c;
  c.dialect = Dialect::Sequential;
  c.program = golden::fib_source;
  c.sigma = golden::fib_sigma_final();
  c.delta = golden::fib_delta_final();
  Checkpoint back = checkpoint_from_json(checkpoint_to_json(c));
  CHECK(back.dialect == Dialect::Sequential);
  CHECK(back.program == c.program);
  CHECK(back.sigma == c.sigma);
  CHECK(back.delta == c.delta);
}

TEST_CASE("a parallel checkpoint carries counter and record") {
  ForwardResult fr =
      fwd_run(ann(parse_program(golden::par_source, Dialect::Any)),
              golden::par_sigma0(), AuxStore::parallel({}),
              parse_schedule("L,R,R"));
  Checkpoint c;
  c.dialect = Dialect::Parallel;
  c.program = render(fr.program);
  c.sigma = fr.sigma;
  c.delta = fr.delta;
  c.counter = fr.counter;
  c.record = fr.record;

  Checkpoint back = checkpoint_from_json(checkpoint_to_json(c));
  CHECK(back.dialect == Dialect::Parallel);
  CHECK(back.program == golden::par_populated);
  CHECK(back.sigma == golden::par_sigma_LRR());
  CHECK(back.delta == golden::par_delta_LRR());
  CHECK(back.counter == IdentifierCounter(4));
  REQUIRE(back.record.size() == 3);
  CHECK(back.record == fr.record);
}

TEST_CASE("malformed checkpoints are rejected with a reason") {
  Json good = checkpoint_to_json(Checkpoint{
      Dialect::Sequential, "skip;\n", DataStore{}, AuxStore::sequential({}),
      IdentifierCounter{}, {}});
  for (const char* key : {"dialect", "program", "sigma", "delta"}) {
    Json j = good;
    j.erase(key);
    CHECK_THROWS_AS(checkpoint_from_json(j), CheckpointError);
  }
  Json bad_dialect = good;
  bad_dialect["dialect"] = "diagonal";
  CHECK_THROWS_AS(checkpoint_from_json(bad_dialect), CheckpointError);
  CHECK_THROWS_AS(checkpoint_from_json(Json(3)), CheckpointError);
}

TEST_CASE("parallel checkpoints validate counter and record entries") {
  Json j = Json{{"dialect", "parallel"},
                {"program", "skip [];\n"},
                {"sigma", Json::object()},
                {"delta", Json::array()}};
  CHECK_THROWS_AS(checkpoint_from_json(j), CheckpointError);  // no counter
  j["counter"] = 0;
  CHECK_THROWS_AS(checkpoint_from_json(j), CheckpointError);  // below 1
  j["counter"] = 1;
  CHECK(checkpoint_from_json(j).counter == IdentifierCounter{});
  j["record"] = Json::array({Json::array({1})});
  CHECK_THROWS_AS(checkpoint_from_json(j), CheckpointError);  // short entry
  j["record"] = Json::array({Json::array({1, "while T do"})});
  CHECK_THROWS_AS(checkpoint_from_json(j), CheckpointError);  // no parse
  j["record"] = Json::array({Json::array({1, "X = 4"})});
  Checkpoint ok = checkpoint_from_json(j);
  REQUIRE(ok.record.size() == 1);
  CHECK(ok.record[0].id == 1);
  CHECK(ok.record[0].text == "X = 4");
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

TEST_CASE("text files write and read back") {
  const std::string path = "/tmp/reverso_io_test.txt";
  write_text_file(path, "X += 1;\n");
  CHECK(read_text_file(path) == "X += 1;\n");
  CHECK_THROWS_AS(read_text_file("/tmp/reverso_no_such_file"), Error);
  std::remove(path.c_str());
}

TEST_CASE("JSON files that do not parse raise a checkpoint error") {
  const std::string path = "/tmp/reverso_io_bad.json";
  write_text_file(path, "{ not json");
  CHECK_THROWS_AS(parse_json_file(path), CheckpointError);
  write_text_file(path, R"({"sigma": {}})");
  CHECK(parse_json_file(path).contains("sigma"));
  std::remove(path.c_str());
}
