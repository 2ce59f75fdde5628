#include "moa/onf.hpp"

#include <algorithm>

#include "moa/error.hpp"

namespace moa {

NPoly NPoly::operator*(const NPoly& o) const {
    const std::int64_t d3 = c1 * o.c2 + c2 * o.c1;
    const std::int64_t d4 = c2 * o.c2;
    if (d3 != 0 || d4 != 0) {
        throw ReductionError("size expression exceeds degree 2 in n");
    }
    return {c0 * o.c0, c0 * o.c1 + c1 * o.c0, c0 * o.c2 + c1 * o.c1 + c2 * o.c0};
}

AffineOffset AffineOffset::operator+(const AffineOffset& o) const {
    AffineOffset out = *this;
    out.constant = out.constant + o.constant;
    for (const auto& [var, coeff] : o.terms) {
        auto it = std::find_if(out.terms.begin(), out.terms.end(),
                               [&](const auto& t) { return t.first == var; });
        if (it == out.terms.end()) {
            out.terms.emplace_back(var, coeff);
        } else {
            it->second = it->second + coeff;
        }
    }
    return out;
}

AffineOffset AffineOffset::operator*(const NPoly& factor) const {
    AffineOffset out;
    out.constant = constant * factor;
    if (!out.constant.is_affine()) {
        throw ReductionError("offset is not affine in n");
    }
    out.terms.reserve(terms.size());
    for (const auto& [var, coeff] : terms) {
        NPoly scaled = coeff * factor;
        if (!scaled.is_affine()) {
            throw ReductionError("offset coefficient of " + var + " is not affine in n");
        }
        out.terms.emplace_back(var, scaled);
    }
    return out;
}

std::int64_t AffineOffset::resolve(std::int64_t n,
                                   const std::vector<std::pair<std::string, std::int64_t>>& env) const {
    std::int64_t out = constant.resolve(n);
    for (const auto& [var, coeff] : terms) {
        auto it = std::find_if(env.begin(), env.end(), [&](const auto& b) { return b.first == var; });
        if (it == env.end()) {
            throw Error("unbound loop variable " + var + " in offset");
        }
        out += coeff.resolve(n) * it->second;
    }
    return out;
}

OnfExprPtr onf_ref(FlatRef ref) {
    auto e = std::make_shared<OnfExpr>();
    e->kind = OnfKind::FlatRef;
    e->ref = std::move(ref);
    return e;
}

OnfExprPtr onf_ref(std::string buffer, AffineOffset offset) {
    return onf_ref(FlatRef{std::move(buffer), std::move(offset)});
}

OnfExprPtr onf_const(double value) {
    auto e = std::make_shared<OnfExpr>();
    e->kind = OnfKind::Const;
    e->value = value;
    return e;
}

OnfExprPtr onf_binop(PointwiseOp op, OnfExprPtr lhs, OnfExprPtr rhs) {
    auto e = std::make_shared<OnfExpr>();
    e->kind = OnfKind::BinOp;
    e->op = op;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
}

OnfExprPtr onf_sum(std::string var, NPoly extent, OnfExprPtr body) {
    auto e = std::make_shared<OnfExpr>();
    e->kind = OnfKind::Sum;
    e->var = std::move(var);
    e->extent = extent;
    e->body = std::move(body);
    return e;
}

bool structurally_equal(const OnfExprPtr& a, const OnfExprPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case OnfKind::FlatRef:
            return a->ref == b->ref;
        case OnfKind::Const:
            return a->value == b->value;
        case OnfKind::BinOp:
            return a->op == b->op && structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
        case OnfKind::Sum:
            return a->var == b->var && a->extent == b->extent && structurally_equal(a->body, b->body);
    }
    return false;
}

bool structurally_equal(const OnfStatement& a, const OnfStatement& b) {
    return a.loops == b.loops && a.targets == b.targets && structurally_equal(a.rhs, b.rhs);
}

OnfProgram OnfProgram::slice(std::size_t first, std::size_t count) const {
    OnfProgram out;
    out.buffers = buffers;
    for (std::size_t s = first; s < first + count && s < statements.size(); ++s) {
        out.statements.push_back(statements[s]);
    }
    return out;
}

bool structurally_equal(const OnfProgram& a, const OnfProgram& b) {
    if (a.buffers != b.buffers || a.statements.size() != b.statements.size()) return false;
    for (std::size_t s = 0; s < a.statements.size(); ++s) {
        if (!structurally_equal(a.statements[s], b.statements[s])) return false;
    }
    return true;
}

namespace {

void check_extent(const NPoly& extent, const char* what) {
    if (!extent.is_affine() || extent.c0 < 0 || extent.c1 < 0) {
        throw Error(std::string(what) + " extent must be a non-negative affine form in n");
    }
}

void check_offset(const OnfProgram& p, const FlatRef& ref, const std::vector<std::string>& bound) {
    bool declared = std::any_of(p.buffers.begin(), p.buffers.end(),
                                [&](const auto& b) { return b.first == ref.buffer; });
    if (!declared) {
        throw Error("reference to undeclared buffer " + ref.buffer);
    }
    const AffineOffset& off = ref.offset;
    if (!off.constant.is_affine() || off.constant.c0 < 0 || off.constant.c1 < 0) {
        throw Error("offset constant of " + ref.buffer + " must be non-negative affine");
    }
    for (const auto& [var, coeff] : off.terms) {
        if (std::find(bound.begin(), bound.end(), var) == bound.end()) {
            throw Error("offset of " + ref.buffer + " uses unbound variable " + var);
        }
        if (!coeff.is_affine() || coeff.c0 < 0 || coeff.c1 < 0) {
            throw Error("offset coefficient of " + var + " must be non-negative affine");
        }
    }
}

void check_expr(const OnfProgram& p, const OnfExprPtr& e, std::vector<std::string>& bound) {
    switch (e->kind) {
        case OnfKind::FlatRef:
            check_offset(p, e->ref, bound);
            return;
        case OnfKind::Const:
            return;
        case OnfKind::BinOp:
            check_expr(p, e->lhs, bound);
            check_expr(p, e->rhs, bound);
            return;
        case OnfKind::Sum:
            check_extent(e->extent, "sum");
            bound.push_back(e->var);
            check_expr(p, e->body, bound);
            bound.pop_back();
            return;
    }
}

}  // namespace

void validate(const OnfProgram& p) {
    for (const auto& [name, length] : p.buffers) {
        if (length.c0 < 0 || length.c1 < 0 || length.c2 < 0) {
            throw Error("buffer " + name + " has a negative length coefficient");
        }
    }
    for (const OnfStatement& stmt : p.statements) {
        std::vector<std::string> bound;
        for (const LoopVar& loop : stmt.loops) {
            check_extent(loop.extent, "loop");
            if (std::find(bound.begin(), bound.end(), loop.name) != bound.end()) {
                throw Error("duplicate loop variable " + loop.name);
            }
            bound.push_back(loop.name);
        }
        if (stmt.targets.empty()) {
            throw Error("statement has no target");
        }
        for (const FlatRef& target : stmt.targets) {
            check_offset(p, target, bound);
        }
        check_expr(p, stmt.rhs, bound);
    }
}

}  // namespace moa
