#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "moa/array.hpp"

namespace moa {

// c0 + c1*n + c2*n^2 in the symbolic problem size n. Flat offsets and
// loop extents stay affine (c2 == 0); buffer lengths may be quadratic
// (an n-by-n matrix ravel holds n^2 reals).
struct NPoly {
    std::int64_t c0 = 0;
    std::int64_t c1 = 0;
    std::int64_t c2 = 0;

    static NPoly constant(std::int64_t value) { return {value, 0, 0}; }
    static NPoly n() { return {0, 1, 0}; }

    bool is_affine() const { return c2 == 0; }
    bool is_constant() const { return c1 == 0 && c2 == 0; }
    bool is_zero() const { return c0 == 0 && is_constant(); }

    std::int64_t resolve(std::int64_t n) const { return c0 + c1 * n + c2 * n * n; }

    NPoly operator+(const NPoly& o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }

    // Throws ReductionError if the product leaves degree 2.
    NPoly operator*(const NPoly& o) const;

    bool operator==(const NPoly& o) const = default;
};

// An affine combination of loop variables: constant + sum(coeff_v * v).
// Terms keep their introduction order (outer loop first), which the
// emitter relies on for deterministic rendering.
struct AffineOffset {
    NPoly constant;
    std::vector<std::pair<std::string, NPoly>> terms;

    static AffineOffset of(NPoly constant) { return {constant, {}}; }
    static AffineOffset var(const std::string& name) { return {NPoly{}, {{name, NPoly::constant(1)}}}; }

    AffineOffset operator+(const AffineOffset& o) const;
    AffineOffset operator*(const NPoly& factor) const;

    std::int64_t resolve(std::int64_t n, const std::vector<std::pair<std::string, std::int64_t>>& env) const;

    bool operator==(const AffineOffset& o) const = default;
};

// A single element of a raveled buffer.
struct FlatRef {
    std::string buffer;
    AffineOffset offset;

    bool operator==(const FlatRef& o) const = default;
};

enum class OnfKind { FlatRef, Const, BinOp, Sum };

struct OnfExpr;
using OnfExprPtr = std::shared_ptr<const OnfExpr>;

// Scalar expression of the normal form: ravel references, constants,
// arithmetic, and bounded summations. No array-level operator survives
// reduction.
struct OnfExpr {
    OnfKind kind;

    FlatRef ref;                 // FlatRef
    double value = 0.0;          // Const
    PointwiseOp op = PointwiseOp::Add;  // BinOp
    OnfExprPtr lhs;
    OnfExprPtr rhs;
    std::string var;             // Sum: var ranges over [0, extent)
    NPoly extent;
    OnfExprPtr body;
};

OnfExprPtr onf_ref(FlatRef ref);
OnfExprPtr onf_ref(std::string buffer, AffineOffset offset);
OnfExprPtr onf_const(double value);
OnfExprPtr onf_binop(PointwiseOp op, OnfExprPtr lhs, OnfExprPtr rhs);
OnfExprPtr onf_sum(std::string var, NPoly extent, OnfExprPtr body);

bool structurally_equal(const OnfExprPtr& a, const OnfExprPtr& b);

// for name in [0, extent)
struct LoopVar {
    std::string name;
    NPoly extent;

    bool operator==(const LoopVar& o) const = default;
};

// A loop nest assigning one scalar expression to one or more targets
// (chained assignment); targets are stored left to right.
struct OnfStatement {
    std::vector<LoopVar> loops;
    std::vector<FlatRef> targets;
    OnfExprPtr rhs;
};

bool structurally_equal(const OnfStatement& a, const OnfStatement& b);

// An ordered list of loop-nest statements over named flat buffers; each
// statement's loop nest runs to completion before the next starts.
struct OnfProgram {
    std::vector<std::pair<std::string, NPoly>> buffers;
    std::vector<OnfStatement> statements;

    // Sub-program over the same buffers.
    OnfProgram slice(std::size_t first, std::size_t count) const;
};

bool structurally_equal(const OnfProgram& a, const OnfProgram& b);

// Structural scan: every reference uses a declared buffer and only
// variables bound by enclosing loops; offsets are affine with
// non-negative coefficients; sum and loop extents are affine. Throws
// Error on the first violation.
void validate(const OnfProgram& p);

}  // namespace moa
