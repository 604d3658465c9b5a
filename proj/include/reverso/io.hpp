#pragma once

// JSON serialization: store documents ({"sigma": ..., "delta": ...}) and
// run checkpoints. Values are arbitrary-precision integers; anything that
// fits in a 64-bit signed integer is written as a JSON number, anything
// larger as a decimal string, and both forms are accepted on input. Stacks
// are serialized head first, matching every other external representation.

#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "reverso/errors.hpp"
#include "reverso/par_engine.hpp"
#include "reverso/stores.hpp"
#include "reverso/syntax.hpp"
#include "reverso/types.hpp"

namespace reverso {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Integers
// ---------------------------------------------------------------------------

inline Json int_to_json(const Int& v) {
  static const Int kMin = std::numeric_limits<std::int64_t>::min();
  static const Int kMax = std::numeric_limits<std::int64_t>::max();
  if (v >= kMin && v <= kMax)
    return Json(static_cast<std::int64_t>(v));
  return Json(v.str());
}

inline Int int_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer() || j.is_number_unsigned()) {
    // nlohmann stores integral numbers as int64/uint64.
    if (j.is_number_unsigned()) return Int(j.get<std::uint64_t>());
    return Int(j.get<std::int64_t>());
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      return Int(s);
    } catch (const std::exception&) {
      throw CheckpointError(where + ": '" + s + "' is not a decimal integer");
    }
  }
  throw CheckpointError(where + ": expected an integer or a decimal string");
}

inline Identifier id_from_json(const Json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<Identifier>();
  if (j.is_number_integer()) {
    std::int64_t v = j.get<std::int64_t>();
    if (v >= 0) return static_cast<Identifier>(v);
  }
  throw CheckpointError(where + ": identifiers are non-negative integers");
}

// ---------------------------------------------------------------------------
// Stores
// ---------------------------------------------------------------------------

inline Json sigma_to_json(const DataStore& sigma) {
  Json j = Json::object();
  for (const auto& [v, val] : sigma) j[v] = int_to_json(val);
  return j;
}

inline DataStore sigma_from_json(const Json& j) {
  if (!j.is_object())
    throw CheckpointError("\"sigma\" must be an object of variable: integer");
  DataStore sigma;
  for (const auto& [key, val] : j.items())
    sigma.set(key, int_from_json(val, "sigma." + key));
  return sigma;
}

// Sequential: {"X": [7, 4], "B": [true], "W": [false]} — variable stacks as
// integer arrays, the Boolean stacks under their reserved names.
// Parallel: [["X", [[3, 4]]], ["Y", [[2, 1]]]] — per-variable stacks of
// [identifier, value] pairs.
inline Json delta_to_json(const AuxStore& delta) {
  if (delta.mode() == StoreMode::Sequential) {
    Json j = Json::object();
    for (const auto& v : delta.stack_names()) {
      Json arr = Json::array();
      for (const auto& val : delta.values_head_first(v))
        arr.push_back(int_to_json(val));
      j[v] = std::move(arr);
    }
    for (FlagStack fs : {FlagStack::B, FlagStack::W}) {
      Json arr = Json::array();
      for (bool b : delta.flags_head_first(fs)) arr.push_back(b);
      j[flag_stack_name(fs)] = std::move(arr);
    }
    return j;
  }
  Json j = Json::array();
  for (const auto& v : delta.stack_names()) {
    Json stack = Json::array();
    for (const auto& tv : delta.tagged_head_first(v))
      stack.push_back(Json::array({tv.id, int_to_json(tv.value)}));
    j.push_back(Json::array({v, std::move(stack)}));
  }
  return j;
}

inline AuxStore delta_from_json(const Json& j, StoreMode mode) {
  if (mode == StoreMode::Sequential) {
    if (!j.is_object())
      throw CheckpointError("a sequential \"delta\" must be an object");
    AuxStore delta = AuxStore::sequential({});
    for (const auto& [key, val] : j.items()) {
      if (!val.is_array())
        throw CheckpointError("delta." + key + " must be an array");
      if (is_reserved_name(key)) {
        FlagStack fs = key == "B" ? FlagStack::B : FlagStack::W;
        // Input is head first; rebuild bottom-up.
        for (auto it = val.rbegin(); it != val.rend(); ++it) {
          if (!it->is_boolean())
            throw CheckpointError("delta." + key + " holds Booleans only");
          delta.push_flag(fs, it->get<bool>());
        }
      } else {
        delta.declare(key);
        for (auto it = val.rbegin(); it != val.rend(); ++it)
          delta.push_value(key, int_from_json(*it, "delta." + key));
      }
    }
    return delta;
  }
  if (!j.is_array())
    throw CheckpointError(
        "a parallel \"delta\" must be an array of [name, stack] pairs");
  AuxStore delta = AuxStore::parallel({});
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
        !entry[1].is_array())
      throw CheckpointError("each parallel delta entry is [name, stack]");
    const std::string name = entry[0].get<std::string>();
    delta.declare(name);
    const Json& stack = entry[1];
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
      const Json& pair = *it;
      if (!pair.is_array() || pair.size() != 2)
        throw CheckpointError("delta(" + name +
                              ") entries are [identifier, value] pairs");
      delta.push_tagged(name, id_from_json(pair[0], "delta(" + name + ")"),
                        int_from_json(pair[1], "delta(" + name + ")"));
    }
  }
  return delta;
}

// ---------------------------------------------------------------------------
// Store documents: {"sigma": {...}} with an optional "delta"
// ---------------------------------------------------------------------------

struct StoreDoc {
  DataStore sigma;
  AuxStore delta;
};

inline Json store_doc_to_json(const DataStore& sigma, const AuxStore& delta) {
  return Json{{"sigma", sigma_to_json(sigma)}, {"delta", delta_to_json(delta)}};
}

inline StoreDoc store_doc_from_json(const Json& j, StoreMode mode) {
  if (!j.is_object()) throw CheckpointError("a store document is an object");
  StoreDoc doc;
  doc.delta = mode == StoreMode::Sequential ? AuxStore::sequential({})
                                            : AuxStore::parallel({});
  if (j.contains("sigma")) doc.sigma = sigma_from_json(j.at("sigma"));
  if (j.contains("delta")) doc.delta = delta_from_json(j.at("delta"), mode);
  return doc;
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

// Everything needed to reverse a finished run. Sequentially that is the
// original program plus the final stores; in the parallel dialect it is the
// populated annotated program, the final stores, the identifier counter
// (the value the next forward step would be stamped with), and the
// interleaving record.
struct Checkpoint {
  Dialect dialect = Dialect::Sequential;
  std::string program;
  DataStore sigma;
  AuxStore delta;
  IdentifierCounter counter;
  InterleavingRecord record;
};

inline Json checkpoint_to_json(const Checkpoint& c) {
  Json j{{"dialect",
          c.dialect == Dialect::Sequential ? "sequential" : "parallel"},
         {"program", c.program},
         {"sigma", sigma_to_json(c.sigma)},
         {"delta", delta_to_json(c.delta)}};
  if (c.dialect != Dialect::Sequential) {
    j["counter"] = c.counter.next_value();
    Json rec = Json::array();
    for (const auto& e : c.record)
      rec.push_back(Json::array({e.id, e.text}));
    j["record"] = std::move(rec);
  }
  return j;
}

inline Checkpoint checkpoint_from_json(const Json& j) {
  if (!j.is_object()) throw CheckpointError("a checkpoint is a JSON object");
  for (const char* key : {"dialect", "program", "sigma", "delta"})
    if (!j.contains(key))
      throw CheckpointError(std::string("checkpoint lacks \"") + key + "\"");
  Checkpoint c;
  const std::string dialect = j.at("dialect").is_string()
                                  ? j.at("dialect").get<std::string>()
                                  : std::string();
  if (dialect == "sequential") c.dialect = Dialect::Sequential;
  else if (dialect == "parallel") c.dialect = Dialect::Parallel;
  else
    throw CheckpointError(
        "checkpoint \"dialect\" must be \"sequential\" or \"parallel\"");
  if (!j.at("program").is_string())
    throw CheckpointError("checkpoint \"program\" must be source text");
  c.program = j.at("program").get<std::string>();
  c.sigma = sigma_from_json(j.at("sigma"));
  c.delta = delta_from_json(j.at("delta"),
                            c.dialect == Dialect::Sequential
                                ? StoreMode::Sequential
                                : StoreMode::Parallel);
  if (c.dialect != Dialect::Sequential) {
    if (!j.contains("counter"))
      throw CheckpointError("a parallel checkpoint carries a \"counter\"");
    Identifier next = id_from_json(j.at("counter"), "counter");
    if (next < 1)
      throw CheckpointError("checkpoint \"counter\" must be at least 1");
    c.counter = IdentifierCounter(next);
    if (j.contains("record")) {
      if (!j.at("record").is_array())
        throw CheckpointError("checkpoint \"record\" must be an array");
      for (const auto& e : j.at("record")) {
        if (!e.is_array() || e.size() != 2 || !e[1].is_string())
          throw CheckpointError("record entries are [identifier, statement]");
        RecordEntry entry;
        entry.id = id_from_json(e[0], "record");
        entry.text = e[1].get<std::string>();
        try {
          Program p = parse_program(entry.text, Dialect::Parallel);
          if (p.stmts.size() == 1) entry.stmt = p.stmts.front();
        } catch (const SyntaxError&) {
          throw CheckpointError("record statement does not parse: " +
                                entry.text);
        }
        c.record.push_back(std::move(entry));
      }
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
  if (!out.flush()) throw Error("cannot write " + path);
}

inline Json parse_json_file(const std::string& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw CheckpointError(path + ": " + e.what());
  }
}

}  // namespace reverso
