#pragma once

// Error taxonomy. Hard faults are exceptions; two conditions are deliberately
// not exceptions because they are ordinary control flow:
//   - fuel exhaustion is a run status (engines return it),
//   - an identifier mismatch during reverse execution is a disabled-step
//     signal (IdentifierCounter::matches_previous returns false).

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace reverso {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A single static-check diagnostic. Rendered as "line:col: code: message".
struct Violation {
  int line = 0;
  int col = 0;
  std::string code;
  std::string message;

  std::string str() const {
    std::ostringstream os;
    os << line << ":" << col << ": " << code << ": " << message;
    return os.str();
  }
};

// Malformed source text; thrown by the lexer/parser with token position.
struct SyntaxError : Error {
  int line, col;
  SyntaxError(int line_, int col_, const std::string& msg)
      : Error(std::to_string(line_) + ":" + std::to_string(col_) +
              ": syntax: " + msg),
        line(line_),
        col(col_) {}
};

// A construct is grammatical but illegal for the requested dialect.
struct DialectError : Error {
  using Error::Error;
};

// Raised by operations whose precondition is "validate(...) passes" when it
// does not; carries the individual violations.
struct ValidationError : Error {
  std::vector<Violation> violations;
  explicit ValidationError(std::vector<Violation> vs)
      : Error(join(vs)), violations(std::move(vs)) {}

 private:
  static std::string join(const std::vector<Violation>& vs) {
    std::string out = "validation failed";
    for (const auto& v : vs) out += "\n  " + v.str();
    return out;
  }
};

// B or W used as an ordinary program variable.
struct ReservedNameError : Error {
  using Error::Error;
};

// A push/pop addressed a stack that does not exist in the auxiliary store.
struct UnknownStackError : Error {
  using Error::Error;
};

// A pop on an empty stack: the program and the auxiliary store are out of
// sync (e.g. an inverted program run against the wrong delta).
struct EmptyStackError : Error {
  using Error::Error;
};

// sigma has no binding for a variable the program reads.
struct UnboundVariableError : Error {
  using Error::Error;
};

// No rule applies in a forward configuration; indicates an engine bug.
struct StuckError : Error {
  using Error::Error;
};

// Reverse execution found no enabled statement although work remains:
// the annotated program, delta, and counter are mutually inconsistent.
struct StuckReverseError : Error {
  using Error::Error;
};

// An explicit schedule ran out of entries, or an entry addressed a statement
// that is not enabled.
struct ScheduleError : Error {
  using Error::Error;
};

// enumerate_interleavings refused a program above its statement bound.
struct BoundExceededError : Error {
  using Error::Error;
};

// A store or checkpoint document does not match the expected JSON shape.
struct CheckpointError : Error {
  using Error::Error;
};

// minimize() was handed an input the oracle does not fail on.
struct NotFailingError : Error {
  using Error::Error;
};

}  // namespace reverso
