#pragma once

// Shared fixtures: the two worked example programs with their hand-checked
// transforms, runs, and stores. Everything here was computed independently
// (by hand or by an oracle script) before the engines existed; tests compare
// library output against these frozen values, never the other way around.

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "reverso/reverso.hpp"

namespace golden {

// ---------------------------------------------------------------------------
// Sequential worked example: iterative Fibonacci with a conditional swap.
// ---------------------------------------------------------------------------

inline const std::string fib_source = R"(if X > Y then
  Z = Y;
  Y = X;
  X = Z;
else
  skip;
end
while N - 2 > 0 do
  Z = X;
  X = Y;
  Y += Z;
  N -= 1;
end
)";

// The augmented image: every destructive assignment saves the old value
// first, the conditional records which branch ran, and the loop records its
// reordered flag sequence (entry F, later iterations and exit T) so the
// inverse can replay the iteration count.
inline const std::string fib_augmented = R"(if X > Y then
  push(sigma(Z), delta(Z));
  Z = Y;
  push(sigma(Y), delta(Y));
  Y = X;
  push(sigma(X), delta(X));
  X = Z;
  push(T, delta(B));
else
  skip;
  push(F, delta(B));
end
if N - 2 > 0 then
  push(F, delta(W));
  push(sigma(Z), delta(Z));
  Z = X;
  push(sigma(X), delta(X));
  X = Y;
  Y += Z;
  N -= 1;
  while N - 2 > 0 do
    push(T, delta(W));
    push(sigma(Z), delta(Z));
    Z = X;
    push(sigma(X), delta(X));
    X = Y;
    Y += Z;
    N -= 1;
  end
  push(T, delta(W));
else
  push(F, delta(W));
end
)";

// The inverse: statements in reverse order, constructive operators flipped,
// destructive assignments replaced by pops, control decisions read back from
// the B and W stacks.
inline const std::string fib_inverse = R"(while pop(delta(W)) do
  N += 1;
  Y -= Z;
  X = pop(delta(X));
  Z = pop(delta(Z));
end
if pop(delta(B)) then
  X = pop(delta(X));
  Y = pop(delta(Y));
  Z = pop(delta(Z));
else
  skip;
end
)";

// ---------------------------------------------------------------------------
// Parallel worked example.
// ---------------------------------------------------------------------------

inline const std::string par_source = "X += Y + 2 par (Y = X + 2; X = 4);\n";

inline const std::string par_annotated =
    "X += Y + 2 [] par (Y = X + 2 []; X = 4 []);\n";

// The same program after the forward run that completed the left assignment
// first, then the right sequence (paths L, R, R).
inline const std::string par_populated =
    "X += Y + 2 [1] par (Y = X + 2 [2]; X = 4 [3]);\n";

// Its inverse: sequence order flipped, constructive operator flipped,
// identifier stacks travelling with their statements.
inline const std::string par_populated_inverse =
    "X -= Y + 2 [1] par (X = 4 [3]; Y = X + 2 [2]);\n";

// ---------------------------------------------------------------------------
// Store builders and frozen run results
// ---------------------------------------------------------------------------

inline reverso::DataStore sigma_of(
    std::initializer_list<std::pair<const char*, long long>> xs) {
  reverso::DataStore s;
  for (const auto& [name, value] : xs) s.set(name, reverso::Int(value));
  return s;
}

inline reverso::DataStore fib_sigma0() {
  return sigma_of({{"X", 4}, {"Y", 3}, {"Z", 0}, {"N", 5}});
}

inline reverso::DataStore fib_sigma_final() {
  return sigma_of({{"X", 11}, {"Y", 18}, {"Z", 7}, {"N", 2}});
}

// Auxiliary store after the augmented forward run, head (most recent) first.
inline const std::vector<long long> fib_delta_X = {7, 4, 3, 4};
inline const std::vector<long long> fib_delta_Y = {3};
inline const std::vector<long long> fib_delta_Z = {4, 3, 3, 0};
inline const std::vector<bool> fib_delta_B = {true};
inline const std::vector<bool> fib_delta_W = {true, true, true, false};

inline reverso::AuxStore fib_delta_final() {
  // Stacks are built bottom-up, so push in reverse of the head-first lists.
  auto d = reverso::AuxStore::sequential({"X", "Y", "Z", "N"});
  for (auto it = fib_delta_X.rbegin(); it != fib_delta_X.rend(); ++it)
    d.push_value("X", reverso::Int(*it));
  for (auto it = fib_delta_Y.rbegin(); it != fib_delta_Y.rend(); ++it)
    d.push_value("Y", reverso::Int(*it));
  for (auto it = fib_delta_Z.rbegin(); it != fib_delta_Z.rend(); ++it)
    d.push_value("Z", reverso::Int(*it));
  for (auto it = fib_delta_B.rbegin(); it != fib_delta_B.rend(); ++it)
    d.push_flag(reverso::FlagStack::B, *it);
  for (auto it = fib_delta_W.rbegin(); it != fib_delta_W.rend(); ++it)
    d.push_flag(reverso::FlagStack::W, *it);
  return d;
}

inline reverso::DataStore par_sigma0() { return sigma_of({{"X", 1}, {"Y", 1}}); }

// Final sigmas per schedule, and the wrong result of reversing in the
// unchecked order L,R,R (undo the constructive add first) instead of the
// recorded mirror order.
inline reverso::DataStore par_sigma_LRR() {
  return sigma_of({{"X", 4}, {"Y", 6}});
}
inline reverso::DataStore par_sigma_RLR() {
  return sigma_of({{"X", 4}, {"Y", 3}});
}
inline reverso::DataStore par_sigma_RRL() {
  return sigma_of({{"X", 9}, {"Y", 3}});
}
inline reverso::DataStore par_sigma_unchecked() {
  return sigma_of({{"X", 4}, {"Y", 1}});
}

// Tagged auxiliary store after the L,R,R forward run.
inline reverso::AuxStore par_delta_LRR() {
  auto d = reverso::AuxStore::parallel({"X", "Y"});
  d.push_tagged("Y", 2, reverso::Int(1));
  d.push_tagged("X", 3, reverso::Int(4));
  return d;
}

}  // namespace golden
