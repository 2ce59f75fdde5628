#pragma once

#include <string>

#include "moa/onf.hpp"

namespace moa {

// Renders one scalar normal-form expression:
//   sum(var, lo, hi, body) for summations (inclusive upper bound),
//   buffer[offset] for ravel references, infix arithmetic otherwise.
std::string emit_expr(const OnfExprPtr& e);

// Deterministic imperative rendering of a whole program: one `for v in
// [0, bound):` header per loop (half-open), two-space indent, `:=`
// assignment, chained targets left to right. The empty program renders
// as the empty string.
std::string emit_pseudocode(const OnfProgram& p);

std::string to_string(const AffineOffset& offset);
std::string to_string(const NPoly& p);

}  // namespace moa
