#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "moa/array.hpp"

namespace moa {

// An axis extent that is either a literal or the reserved size symbol n.
// Shapes seen by the symbolic layers may mix literals and n (e.g. the
// two-row recurrence matrices have shape <2 n>).
class SymExtent {
public:
    SymExtent(std::int64_t value) : value_(value) {
        if (value < 0) throw ShapeError("extent must be non-negative, got " + std::to_string(value));
    }

    static SymExtent n() {
        SymExtent e(0);
        e.is_n_ = true;
        return e;
    }

    bool is_n() const { return is_n_; }

    std::int64_t value() const { return value_; }

    std::int64_t resolve(std::int64_t n) const { return is_n_ ? n : value_; }

    bool operator==(const SymExtent& other) const = default;

private:
    std::int64_t value_;
    bool is_n_ = false;
};

using SymShape = std::vector<SymExtent>;

SymShape to_sym_shape(const Shape& s);
Shape resolve(const SymShape& s, std::int64_t n);
std::string to_string(const SymShape& s);

// One component of an index literal: either a constant, or the temporal
// iteration symbol i plus a constant offset (<i>, <i+1>).
struct IndexComponent {
    bool temporal = false;
    std::int64_t offset = 0;

    static IndexComponent constant(std::int64_t value) { return {false, value}; }
    static IndexComponent iter(std::int64_t offset = 0) { return {true, offset}; }

    std::int64_t resolve(std::int64_t temporal_index) const {
        return temporal ? temporal_index + offset : offset;
    }

    bool operator==(const IndexComponent& other) const = default;
};

using SymIndex = std::vector<IndexComponent>;

enum class ExprKind {
    ArrayRef,
    ScalarLiteral,
    IndexLiteral,
    Psi,
    Transpose,
    InnerProduct,
    Pointwise,
    ReduceAdd,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// A node of the symbolic MoA expression tree. Trees are immutable and
// freely shareable; subtrees may appear under several parents.
struct Expr {
    ExprKind kind;

    // ArrayRef
    std::string name;
    SymShape declared_shape;

    // ScalarLiteral
    double value = 0.0;

    // IndexLiteral
    SymIndex index;

    PointwiseOp op = PointwiseOp::Add;

    // Psi: child0 = index, child1 = array. Unary kinds use child0 only.
    ExprPtr child0;
    ExprPtr child1;
};

ExprPtr array_ref(std::string name, SymShape shape);
ExprPtr scalar_literal(double value);
ExprPtr index_literal(SymIndex components);
ExprPtr index_literal(std::initializer_list<std::int64_t> components);
ExprPtr psi(ExprPtr index, ExprPtr array);
ExprPtr transpose(ExprPtr e);
ExprPtr inner_product(ExprPtr lhs, ExprPtr rhs);
ExprPtr pointwise(PointwiseOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr reduce_add(ExprPtr e);

// Environment for evaluation: one concrete array per free ArrayRef, plus
// the value substituted for the temporal symbol i (0 selects the current
// recurrence row).
struct Binding {
    std::map<std::string, DenseArray> arrays;
    std::int64_t temporal_index = 0;
};

// The shape the expression's value must have, by the shape laws of the
// algebra. Conformance violations raise ShapeError citing the offending
// subexpression.
SymShape infer_shape(const ExprPtr& e);

// Denotational evaluation by structural recursion over the concrete
// array operations. This is the oracle the rewrite engine is checked
// against.
DenseArray eval(const ExprPtr& e, const Binding& env);

// Canonical rendering in the expression grammar; parses back to a
// structurally equal tree.
std::string to_string(const ExprPtr& e);

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

}  // namespace moa
