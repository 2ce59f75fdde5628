#pragma once

#include <optional>

#include "moa/expr.hpp"
#include "moa/onf.hpp"

namespace moa {

// Destination of a reduction. Free result indices are named k, l, m by
// axis and the offset is an affine pattern over those names. The length
// is used when the target buffer is not one of the expression's inputs;
// it defaults to the element count of the result.
struct ReduceTarget {
    std::string buffer;
    AffineOffset offset;
    std::optional<NPoly> length;
};

// Expression-level rewrites, applied bottom-up to fixpoint:
//   - a transpose of a rank <= 1 subexpression is eliminated
//   - temporal indices <i+c> collapse to the recurrence rows <c>
//   - nested psi applications fuse into a single index
ExprPtr simplify_expr(const ExprPtr& e);

// Lowers a well-shaped expression to a loop-nest program over raveled
// buffers: simplification, then inner-product expansion into summations,
// then flattening of every remaining index to a row-major affine offset.
// The resulting program assigns the expression's value elementwise to
// the target; its evaluation agrees with eval() on any binding.
OnfProgram reduce_to_onf(const ExprPtr& e, const ReduceTarget& target);

// Reduction into a fresh "out" buffer addressed in row-major order.
OnfProgram reduce_to_onf(const ExprPtr& e);

// The complete iterative solver in normal form, over buffers X, R, P
// (each 2n), A (n*n) and b (n). Statement layout:
//   [0]  X[k] := 0                      zero initial guess
//   [1]  P[k] := R[k] := b[k] - ...     initial residual
//   [2]  X[n + k] := ...                iterate updates
//   [3]  R[n + k] := ...
//   [4]  P[n + k] := ...
//   [5]  X[k] := X[n + k]               row rotation
//   [6]  R[k] := R[n + k]
//   [7]  P[k] := P[n + k]
// One full iteration is the slice [2, 8).
OnfProgram reduce_cg();

inline constexpr std::size_t kCgStmtZeroGuess = 0;
inline constexpr std::size_t kCgStmtInitResidual = 1;
inline constexpr std::size_t kCgStmtUpdateX = 2;
inline constexpr std::size_t kCgStmtUpdateR = 3;
inline constexpr std::size_t kCgStmtUpdateP = 4;
inline constexpr std::size_t kCgStmtIterationFirst = kCgStmtUpdateX;
inline constexpr std::size_t kCgStmtIterationCount = 6;

}  // namespace moa
