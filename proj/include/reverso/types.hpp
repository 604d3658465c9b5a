#pragma once

// Shared scalar types for the reverso toolkit.
//
// Program values live in Z with no overflow semantics, so the value type is an
// arbitrary-precision integer rather than a fixed-width machine word.

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace reverso {

using Int = boost::multiprecision::cpp_int;
using VarName = std::string;

// Identifiers stamped onto annotated statements by the parallel engine.
// Allocation is ascending from 1; 0 never names a completed statement.
using Identifier = std::uint64_t;

using Fuel = std::uint64_t;
inline constexpr Fuel kDefaultFuel = 1'000'000;

// The two Boolean auxiliary stacks used by the sequential transforms:
// B records which branch a conditional took, W records loop continuation.
enum class FlagStack { B, W };

inline const char* flag_stack_name(FlagStack s) {
  return s == FlagStack::B ? "B" : "W";
}

// Variable names reserved for the Boolean stacks.
inline bool is_reserved_name(const VarName& v) { return v == "B" || v == "W"; }

enum class Dialect {
  Sequential,  // skip, assignments, if, while
  Parallel,    // skip, assignments, par (no if/while)
  Annotated,   // Parallel plus identifier stacks on statements
  Any,         // grammar-permissive; used before dialect checks run
};

inline const char* dialect_name(Dialect d) {
  switch (d) {
    case Dialect::Sequential: return "sequential";
    case Dialect::Parallel:   return "parallel";
    case Dialect::Annotated:  return "annotated";
    case Dialect::Any:        return "any";
  }
  return "?";
}

}  // namespace reverso
