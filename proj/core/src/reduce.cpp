#include "moa/reduce.hpp"

#include <algorithm>
#include <map>

namespace moa {

namespace {

NPoly to_npoly(const SymExtent& e) {
    return e.is_n() ? NPoly::n() : NPoly::constant(e.value());
}

// ---------------------------------------------------------------------
// Expression simplification
// ---------------------------------------------------------------------

ExprPtr simplify_once(const ExprPtr& e, bool& changed) {
    switch (e->kind) {
        case ExprKind::ArrayRef:
        case ExprKind::ScalarLiteral:
            return e;
        case ExprKind::IndexLiteral: {
            bool temporal = std::any_of(e->index.begin(), e->index.end(),
                                        [](const IndexComponent& c) { return c.temporal; });
            if (!temporal) return e;
            // <i + c> - <i> == <c>: only the two recurrence rows remain.
            SymIndex shifted;
            shifted.reserve(e->index.size());
            for (const IndexComponent& c : e->index) {
                shifted.push_back(IndexComponent::constant(c.offset));
            }
            changed = true;
            return index_literal(std::move(shifted));
        }
        case ExprKind::Psi: {
            ExprPtr index = simplify_once(e->child0, changed);
            ExprPtr array = simplify_once(e->child1, changed);
            if (array->kind == ExprKind::Psi) {
                // psi(j, psi(i, a)) == psi(i ++ j, a)
                SymIndex fused = array->child0->index;
                fused.insert(fused.end(), index->index.begin(), index->index.end());
                changed = true;
                return psi(index_literal(std::move(fused)), array->child1);
            }
            if (index == e->child0 && array == e->child1) return e;
            return psi(std::move(index), std::move(array));
        }
        case ExprKind::Transpose: {
            ExprPtr inner = simplify_once(e->child0, changed);
            if (infer_shape(inner).size() <= 1) {
                changed = true;
                return inner;
            }
            if (inner == e->child0) return e;
            return transpose(std::move(inner));
        }
        case ExprKind::InnerProduct: {
            ExprPtr lhs = simplify_once(e->child0, changed);
            ExprPtr rhs = simplify_once(e->child1, changed);
            if (lhs == e->child0 && rhs == e->child1) return e;
            return inner_product(std::move(lhs), std::move(rhs));
        }
        case ExprKind::Pointwise: {
            ExprPtr lhs = simplify_once(e->child0, changed);
            ExprPtr rhs = simplify_once(e->child1, changed);
            if (lhs == e->child0 && rhs == e->child1) return e;
            return pointwise(e->op, std::move(lhs), std::move(rhs));
        }
        case ExprKind::ReduceAdd: {
            ExprPtr inner = simplify_once(e->child0, changed);
            if (inner == e->child0) return e;
            return reduce_add(std::move(inner));
        }
    }
    throw Error("simplify: unreachable");
}

// ---------------------------------------------------------------------
// Lowering to the normal form
// ---------------------------------------------------------------------

bool is_simple_factor(const OnfExprPtr& e) {
    return e->kind == OnfKind::FlatRef || e->kind == OnfKind::Const;
}

OnfExprPtr push_factor_left(const OnfExprPtr& factor, const OnfExprPtr& e) {
    if (e->kind == OnfKind::Sum) {
        return onf_sum(e->var, e->extent, push_factor_left(factor, e->body));
    }
    return onf_binop(PointwiseOp::Mul, factor, e);
}

OnfExprPtr push_factor_right(const OnfExprPtr& e, const OnfExprPtr& factor) {
    if (e->kind == OnfKind::Sum) {
        return onf_sum(e->var, e->extent, push_factor_right(e->body, factor));
    }
    return onf_binop(PointwiseOp::Mul, e, factor);
}

// Multiplication that distributes a single ravel element (or constant)
// into a summation, the way the inner-product expansion folds the left
// argument's scalars into the sum over the shared dimension.
OnfExprPtr distribute_mul(const OnfExprPtr& lhs, const OnfExprPtr& rhs) {
    if (is_simple_factor(lhs) && rhs->kind == OnfKind::Sum) {
        return push_factor_left(lhs, rhs);
    }
    if (is_simple_factor(rhs) && lhs->kind == OnfKind::Sum) {
        return push_factor_right(lhs, rhs);
    }
    return onf_binop(PointwiseOp::Mul, lhs, rhs);
}

class Lowerer {
public:
    OnfExprPtr element(const ExprPtr& e, const std::vector<AffineOffset>& mu) {
        switch (e->kind) {
            case ExprKind::ArrayRef: {
                const SymShape& s = e->declared_shape;
                AffineOffset offset;
                for (std::size_t d = 0; d < s.size(); ++d) {
                    offset = offset * to_npoly(s[d]) + mu[d];
                }
                return onf_ref(e->name, std::move(offset));
            }
            case ExprKind::ScalarLiteral:
                return onf_const(e->value);
            case ExprKind::IndexLiteral:
                throw ReductionError("cannot reduce bare index literal `" + to_string(e) + "`");
            case ExprKind::Psi: {
                std::vector<AffineOffset> prefixed;
                prefixed.reserve(e->child0->index.size() + mu.size());
                for (const IndexComponent& c : e->child0->index) {
                    if (c.temporal) {
                        throw ReductionError("temporal index survived simplification in `" + to_string(e) +
                                             "`");
                    }
                    prefixed.push_back(AffineOffset::of(NPoly::constant(c.offset)));
                }
                prefixed.insert(prefixed.end(), mu.begin(), mu.end());
                return element(e->child1, prefixed);
            }
            case ExprKind::Transpose:
                throw ReductionError("cannot reduce matrix transpose `" + to_string(e) + "`");
            case ExprKind::InnerProduct: {
                const SymShape ls = infer_shape(e->child0);
                const SymShape rs = infer_shape(e->child1);
                const std::size_t left_axes = ls.size() - 1;
                const std::string var = fresh();

                std::vector<AffineOffset> left_mu(mu.begin(), mu.begin() + static_cast<std::ptrdiff_t>(left_axes));
                left_mu.push_back(AffineOffset::var(var));
                std::vector<AffineOffset> right_mu{AffineOffset::var(var)};
                right_mu.insert(right_mu.end(), mu.begin() + static_cast<std::ptrdiff_t>(left_axes), mu.end());

                OnfExprPtr body =
                    distribute_mul(element(e->child0, left_mu), element(e->child1, right_mu));
                return onf_sum(var, to_npoly(ls.back()), std::move(body));
            }
            case ExprKind::Pointwise: {
                const bool lhs_scalar = infer_shape(e->child0).empty();
                const bool rhs_scalar = infer_shape(e->child1).empty();
                static const std::vector<AffineOffset> kNone;
                OnfExprPtr lhs = element(e->child0, lhs_scalar ? kNone : mu);
                OnfExprPtr rhs = element(e->child1, rhs_scalar ? kNone : mu);
                return onf_binop(e->op, std::move(lhs), std::move(rhs));
            }
            case ExprKind::ReduceAdd: {
                const SymShape s = infer_shape(e->child0);
                const std::string var = fresh();
                return onf_sum(var, to_npoly(s[0]), element(e->child0, {AffineOffset::var(var)}));
            }
        }
        throw Error("element: unreachable");
    }

private:
    std::string fresh() { return "$" + std::to_string(next_var_++); }

    int next_var_ = 0;
};

// Summation variables are named by nesting height, innermost first:
// j, then i for a sum directly over a sum, and so on.
std::string sum_var_name(int height) {
    switch (height) {
        case 1: return "j";
        case 2: return "i";
        case 3: return "h";
        case 4: return "g";
        default: return "s" + std::to_string(height);
    }
}

int collect_sum_names(const OnfExprPtr& e, std::map<std::string, std::string>& names) {
    switch (e->kind) {
        case OnfKind::FlatRef:
        case OnfKind::Const:
            return 0;
        case OnfKind::BinOp:
            return std::max(collect_sum_names(e->lhs, names), collect_sum_names(e->rhs, names));
        case OnfKind::Sum: {
            const int height = 1 + collect_sum_names(e->body, names);
            names.emplace(e->var, sum_var_name(height));
            return height;
        }
    }
    return 0;
}

AffineOffset rename_offset(const AffineOffset& offset, const std::map<std::string, std::string>& names) {
    AffineOffset out = offset;
    for (auto& [var, coeff] : out.terms) {
        auto it = names.find(var);
        if (it != names.end()) var = it->second;
    }
    return out;
}

OnfExprPtr rename_sums(const OnfExprPtr& e, const std::map<std::string, std::string>& names) {
    switch (e->kind) {
        case OnfKind::FlatRef:
            return onf_ref(e->ref.buffer, rename_offset(e->ref.offset, names));
        case OnfKind::Const:
            return e;
        case OnfKind::BinOp:
            return onf_binop(e->op, rename_sums(e->lhs, names), rename_sums(e->rhs, names));
        case OnfKind::Sum:
            return onf_sum(names.at(e->var), e->extent, rename_sums(e->body, names));
    }
    throw Error("rename: unreachable");
}

std::string free_var_name(std::size_t axis) {
    static const char* kNames[] = {"k", "l", "m"};
    if (axis < 3) return kNames[axis];
    return "k" + std::to_string(axis);
}

// Input buffers in first-occurrence order; rejects one name declared
// with two different shapes.
void collect_buffers(const ExprPtr& e, std::vector<std::pair<std::string, NPoly>>& buffers,
                     std::map<std::string, SymShape>& seen) {
    switch (e->kind) {
        case ExprKind::ArrayRef: {
            auto [it, inserted] = seen.emplace(e->name, e->declared_shape);
            if (!inserted) {
                if (it->second != e->declared_shape) {
                    throw ShapeError("array " + e->name + " declared with shapes " + to_string(it->second) +
                                     " and " + to_string(e->declared_shape) + " in one expression");
                }
                return;
            }
            NPoly length = NPoly::constant(1);
            for (const SymExtent& extent : e->declared_shape) {
                length = length * to_npoly(extent);
            }
            buffers.emplace_back(e->name, length);
            return;
        }
        case ExprKind::ScalarLiteral:
        case ExprKind::IndexLiteral:
            return;
        case ExprKind::Psi:
        case ExprKind::InnerProduct:
        case ExprKind::Pointwise:
            collect_buffers(e->child0, buffers, seen);
            collect_buffers(e->child1, buffers, seen);
            return;
        case ExprKind::Transpose:
        case ExprKind::ReduceAdd:
            collect_buffers(e->child0, buffers, seen);
            return;
    }
}

}  // namespace

ExprPtr simplify_expr(const ExprPtr& e) {
    ExprPtr current = e;
    for (;;) {
        bool changed = false;
        current = simplify_once(current, changed);
        if (!changed) return current;
    }
}

OnfProgram reduce_to_onf(const ExprPtr& e, const ReduceTarget& target) {
    const ExprPtr simplified = simplify_expr(e);
    const SymShape result = infer_shape(simplified);

    std::vector<LoopVar> loops;
    std::vector<AffineOffset> mu;
    NPoly result_count = NPoly::constant(1);
    for (std::size_t axis = 0; axis < result.size(); ++axis) {
        const NPoly extent = to_npoly(result[axis]);
        loops.push_back(LoopVar{free_var_name(axis), extent});
        mu.push_back(AffineOffset::var(free_var_name(axis)));
        result_count = result_count * extent;
    }

    Lowerer lowerer;
    OnfExprPtr rhs = lowerer.element(simplified, mu);
    std::map<std::string, std::string> names;
    collect_sum_names(rhs, names);
    if (!names.empty()) rhs = rename_sums(rhs, names);

    OnfProgram program;
    std::map<std::string, SymShape> seen;
    collect_buffers(simplified, program.buffers, seen);
    if (seen.find(target.buffer) == seen.end()) {
        program.buffers.emplace_back(target.buffer, target.length.value_or(result_count));
    }
    program.statements.push_back(OnfStatement{std::move(loops), {FlatRef{target.buffer, target.offset}},
                                              std::move(rhs)});
    validate(program);
    return program;
}

OnfProgram reduce_to_onf(const ExprPtr& e) {
    const SymShape result = infer_shape(simplify_expr(e));
    AffineOffset offset;
    for (std::size_t axis = 0; axis < result.size(); ++axis) {
        offset = offset * to_npoly(result[axis]) + AffineOffset::var(free_var_name(axis));
    }
    return reduce_to_onf(e, ReduceTarget{"out", std::move(offset), std::nullopt});
}

OnfProgram reduce_cg() {
    const SymShape two_rows{SymExtent(2), SymExtent::n()};
    const SymShape square{SymExtent::n(), SymExtent::n()};
    const SymShape vector_n{SymExtent::n()};

    const ExprPtr x = array_ref("X", two_rows);
    const ExprPtr r = array_ref("R", two_rows);
    const ExprPtr p = array_ref("P", two_rows);
    const ExprPtr a = array_ref("A", square);
    const ExprPtr b = array_ref("b", vector_n);

    const ExprPtr row0 = index_literal(SymIndex{IndexComponent::iter(0)});
    const ExprPtr row1 = index_literal(SymIndex{IndexComponent::iter(1)});
    const ExprPtr x0 = psi(row0, x);
    const ExprPtr r0 = psi(row0, r);
    const ExprPtr p0 = psi(row0, p);
    const ExprPtr r1 = psi(row1, r);

    const ExprPtr alpha = pointwise(PointwiseOp::Div, inner_product(r0, r0),
                                    inner_product(p0, inner_product(a, p0)));
    const ExprPtr beta =
        pointwise(PointwiseOp::Div, inner_product(r1, r1), inner_product(r0, r0));

    const ExprPtr x_next = pointwise(PointwiseOp::Add, x0, pointwise(PointwiseOp::Mul, p0, alpha));
    const ExprPtr r_next = pointwise(PointwiseOp::Sub, r0,
                                     pointwise(PointwiseOp::Mul, alpha, inner_product(a, p0)));
    const ExprPtr p_next = pointwise(PointwiseOp::Add, r1, pointwise(PointwiseOp::Mul, p0, beta));
    const ExprPtr residual = pointwise(PointwiseOp::Sub, b, inner_product(a, x0));

    const NPoly two_n{0, 2, 0};
    const NPoly n_squared{0, 0, 1};
    const AffineOffset row0_at_k = AffineOffset::var("k");
    const AffineOffset row1_at_k{NPoly::n(), {{"k", NPoly::constant(1)}}};
    const std::vector<LoopVar> loop_k{LoopVar{"k", NPoly::n()}};

    OnfProgram program;
    program.buffers = {{"X", two_n}, {"R", two_n}, {"P", two_n}, {"A", n_squared}, {"b", NPoly::n()}};

    program.statements.push_back(OnfStatement{loop_k, {FlatRef{"X", row0_at_k}}, onf_const(0.0)});

    OnfStatement init = reduce_to_onf(residual, ReduceTarget{"R", row0_at_k, two_n}).statements[0];
    init.targets.insert(init.targets.begin(), FlatRef{"P", row0_at_k});
    program.statements.push_back(std::move(init));

    program.statements.push_back(
        reduce_to_onf(x_next, ReduceTarget{"X", row1_at_k, two_n}).statements[0]);
    program.statements.push_back(
        reduce_to_onf(r_next, ReduceTarget{"R", row1_at_k, two_n}).statements[0]);
    program.statements.push_back(
        reduce_to_onf(p_next, ReduceTarget{"P", row1_at_k, two_n}).statements[0]);

    for (const char* name : {"X", "R", "P"}) {
        program.statements.push_back(
            OnfStatement{loop_k, {FlatRef{name, row0_at_k}}, onf_ref(name, row1_at_k)});
    }

    validate(program);
    return program;
}

}  // namespace moa
