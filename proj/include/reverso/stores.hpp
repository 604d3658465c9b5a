#pragma once

// Runtime state: the data store (variables -> integers) and the auxiliary
// store of reversal stacks, plus the identifier counter used by the parallel
// dialect.

#include <cassert>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "reverso/errors.hpp"
#include "reverso/types.hpp"

namespace reverso {

// ---------------------------------------------------------------------------
// Data store
// ---------------------------------------------------------------------------

class DataStore {
 public:
  DataStore() = default;

  const Int& get(const VarName& v) const {
    auto it = vars_.find(v);
    if (it == vars_.end())
      throw UnboundVariableError("variable '" + v + "' is not bound");
    return it->second;
  }

  void set(const VarName& v, Int value) {
    if (is_reserved_name(v))
      throw ReservedNameError("reserved name used as a variable: " + v);
    vars_[v] = std::move(value);
  }

  bool contains(const VarName& v) const { return vars_.count(v) > 0; }
  bool empty() const { return vars_.empty(); }
  size_t size() const { return vars_.size(); }

  auto begin() const { return vars_.begin(); }
  auto end() const { return vars_.end(); }

  friend bool operator==(const DataStore&, const DataStore&) = default;

 private:
  std::map<VarName, Int> vars_;
};

// ---------------------------------------------------------------------------
// Auxiliary store
// ---------------------------------------------------------------------------

// A value tagged with the identifier of the statement that saved it.
struct TaggedValue {
  Identifier id;
  Int value;

  friend bool operator==(const TaggedValue&, const TaggedValue&) = default;
};

enum class StoreMode { Sequential, Parallel };

// The auxiliary store. Sequentially it holds one plain value stack per
// variable plus the two Boolean stacks B (branches) and W (loops); in the
// parallel dialect it holds one (identifier, value) stack per variable and
// no Boolean stacks. Stack heads live at the *back* of the vectors; all
// serialized/documented forms list head first.
class AuxStore {
 public:
  AuxStore() = default;

  static AuxStore sequential(const std::vector<VarName>& vars) {
    AuxStore s;
    s.mode_ = StoreMode::Sequential;
    for (const auto& v : vars) s.declare(v);
    return s;
  }

  static AuxStore parallel(const std::vector<VarName>& vars) {
    AuxStore s;
    s.mode_ = StoreMode::Parallel;
    for (const auto& v : vars) s.declare(v);
    return s;
  }

  StoreMode mode() const { return mode_; }

  void declare(const VarName& v) {
    if (is_reserved_name(v))
      throw ReservedNameError("reserved name used as a stack: " + v);
    if (mode_ == StoreMode::Sequential)
      plain_.emplace(v, std::vector<Int>{});
    else
      tagged_.emplace(v, std::vector<TaggedValue>{});
  }

  bool declared(const VarName& v) const {
    return mode_ == StoreMode::Sequential ? plain_.count(v) > 0
                                          : tagged_.count(v) > 0;
  }

  // --- sequential stacks ---------------------------------------------------

  void push_value(const VarName& v, Int value) {
    plain_stack(v).push_back(std::move(value));
  }

  Int pop_value(const VarName& v) {
    auto& st = plain_stack(v);
    if (st.empty())
      throw EmptyStackError("pop from empty stack delta(" + v + ")");
    Int out = std::move(st.back());
    st.pop_back();
    return out;
  }

  void push_flag(FlagStack s, bool value) {
    require_sequential();
    flags(s).push_back(value);
  }

  bool pop_flag(FlagStack s) {
    require_sequential();
    auto& st = flags(s);
    if (st.empty())
      throw EmptyStackError(std::string("pop from empty stack delta(") +
                            flag_stack_name(s) + ")");
    bool out = st.back();
    st.pop_back();
    return out;
  }

  // --- parallel stacks -------------------------------------------------------

  void push_tagged(const VarName& v, Identifier id, Int value) {
    auto& st = tagged_stack(v);
    // Identifiers are issued in increasing order, so each stack is strictly
    // decreasing from its head.
    assert(st.empty() || st.back().id < id);
    st.push_back(TaggedValue{id, std::move(value)});
  }

  const TaggedValue* peek_tagged(const VarName& v) const {
    const auto& st = tagged_stack(v);
    return st.empty() ? nullptr : &st.back();
  }

  TaggedValue pop_tagged(const VarName& v) {
    auto& st = tagged_stack(v);
    if (st.empty())
      throw EmptyStackError("pop from empty stack delta(" + v + ")");
    TaggedValue out = std::move(st.back());
    st.pop_back();
    return out;
  }

  // --- inspection ------------------------------------------------------------

  bool empty() const {
    for (const auto& [v, st] : plain_)
      if (!st.empty()) return false;
    for (const auto& [v, st] : tagged_)
      if (!st.empty()) return false;
    return flags_b_.empty() && flags_w_.empty();
  }

  // Head-first copies, the order used everywhere outside this class.
  std::vector<Int> values_head_first(const VarName& v) const {
    const auto& st = plain_stack(v);
    return {st.rbegin(), st.rend()};
  }
  std::vector<bool> flags_head_first(FlagStack s) const {
    require_sequential();
    const auto& st = s == FlagStack::B ? flags_b_ : flags_w_;
    return {st.rbegin(), st.rend()};
  }
  std::vector<TaggedValue> tagged_head_first(const VarName& v) const {
    const auto& st = tagged_stack(v);
    return {st.rbegin(), st.rend()};
  }

  std::vector<VarName> stack_names() const {
    std::vector<VarName> out;
    if (mode_ == StoreMode::Sequential)
      for (const auto& [v, st] : plain_) out.push_back(v);
    else
      for (const auto& [v, st] : tagged_) out.push_back(v);
    return out;
  }

  size_t depth(const VarName& v) const {
    return mode_ == StoreMode::Sequential ? plain_stack(v).size()
                                          : tagged_stack(v).size();
  }
  size_t flag_depth(FlagStack s) const {
    require_sequential();
    return (s == FlagStack::B ? flags_b_ : flags_w_).size();
  }

  friend bool operator==(const AuxStore&, const AuxStore&) = default;

 private:
  void require_sequential() const {
    if (mode_ != StoreMode::Sequential)
      throw UnknownStackError(
          "Boolean stacks B/W exist only in the sequential store");
  }

  std::vector<Int>& plain_stack(const VarName& v) {
    auto it = plain_.find(v);
    if (it == plain_.end())
      throw UnknownStackError("no stack delta(" + v + ")");
    return it->second;
  }
  const std::vector<Int>& plain_stack(const VarName& v) const {
    auto it = plain_.find(v);
    if (it == plain_.end())
      throw UnknownStackError("no stack delta(" + v + ")");
    return it->second;
  }
  std::vector<TaggedValue>& tagged_stack(const VarName& v) {
    auto it = tagged_.find(v);
    if (it == tagged_.end())
      throw UnknownStackError("no stack delta(" + v + ")");
    return it->second;
  }
  const std::vector<TaggedValue>& tagged_stack(const VarName& v) const {
    auto it = tagged_.find(v);
    if (it == tagged_.end())
      throw UnknownStackError("no stack delta(" + v + ")");
    return it->second;
  }
  std::vector<bool>& flags(FlagStack s) {
    return s == FlagStack::B ? flags_b_ : flags_w_;
  }

  StoreMode mode_ = StoreMode::Sequential;
  std::map<VarName, std::vector<Int>> plain_;
  std::map<VarName, std::vector<TaggedValue>> tagged_;
  std::vector<bool> flags_b_;
  std::vector<bool> flags_w_;
};

// ---------------------------------------------------------------------------
// Compact one-line renderings (traces, error messages, test failure output)
// ---------------------------------------------------------------------------

inline std::string to_string(const DataStore& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, val] : s) {
    if (!first) out += ", ";
    first = false;
    out += v + ": " + val.str();
  }
  return out + "}";
}

// Stacks print head first: {X: [7, 4, 3, 4], B: [T], W: [T, T, T, F]}.
inline std::string to_string(const AuxStore& s) {
  std::string out = "{";
  bool first = true;
  auto sep = [&] {
    if (!first) out += ", ";
    first = false;
  };
  for (const auto& v : s.stack_names()) {
    sep();
    out += v + ": [";
    if (s.mode() == StoreMode::Sequential) {
      auto vals = s.values_head_first(v);
      for (size_t i = 0; i < vals.size(); ++i) {
        if (i) out += ", ";
        out += vals[i].str();
      }
    } else {
      auto vals = s.tagged_head_first(v);
      for (size_t i = 0; i < vals.size(); ++i) {
        if (i) out += ", ";
        out += "(" + std::to_string(vals[i].id) + ", " + vals[i].value.str() + ")";
      }
    }
    out += "]";
  }
  if (s.mode() == StoreMode::Sequential) {
    for (FlagStack fs : {FlagStack::B, FlagStack::W}) {
      sep();
      out += std::string(flag_stack_name(fs)) + ": [";
      auto flags = s.flags_head_first(fs);
      for (size_t i = 0; i < flags.size(); ++i) {
        if (i) out += ", ";
        out += flags[i] ? "T" : "F";
      }
      out += "]";
    }
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Identifier counter
// ---------------------------------------------------------------------------

// Issues 1, 2, 3, ... going forward; reverse execution consumes identifiers
// in descending order, gated by matches_previous(). After a complete
// round trip the counter is back at 1.
class IdentifierCounter {
 public:
  IdentifierCounter() = default;
  explicit IdentifierCounter(Identifier next) : next_(next) {}

  // The identifier the next forward step will receive.
  Identifier next_value() const { return next_; }

  // Issue the next identifier (forward direction).
  Identifier next() { return next_++; }

  // The identifier issued most recently, i.e. the only one reverse execution
  // may consume now. Zero when nothing has been issued.
  Identifier previous() const { return next_ - 1; }

  bool matches_previous(Identifier id) const {
    return next_ > 1 && id == next_ - 1;
  }

  // Reverse-direction consumption: succeeds only for the most recently
  // issued identifier. Returning false signals a disabled reverse step.
  bool try_consume_previous(Identifier id) {
    if (!matches_previous(id)) return false;
    --next_;
    return true;
  }

  friend bool operator==(const IdentifierCounter&,
                         const IdentifierCounter&) = default;

 private:
  Identifier next_ = 1;
};

}  // namespace reverso
