#include "moa/emit.hpp"

#include <charconv>

#include "moa/error.hpp"

namespace moa {

namespace {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Renders a variable scaled by an affine coefficient: k, k*n, 2*k.
std::string render_term(const std::string& var, const NPoly& coeff) {
    if (coeff == NPoly::constant(1)) return var;
    if (coeff == NPoly::n()) return var + "*n";
    if (coeff.is_constant()) return std::to_string(coeff.c0) + "*" + var;
    return "(" + to_string(coeff) + ")*" + var;
}

// Inclusive upper bound of a summation over [0, extent).
std::string render_last_index(const NPoly& extent) {
    const NPoly last{extent.c0 - 1, extent.c1, extent.c2};
    if (last.is_constant()) return std::to_string(last.c0);
    std::string out = last.c1 == 1 ? "n" : std::to_string(last.c1) + "*n";
    if (last.c0 > 0) out += "+" + std::to_string(last.c0);
    if (last.c0 < 0) out += std::to_string(last.c0);
    return out;
}

int precedence(PointwiseOp op) {
    return (op == PointwiseOp::Mul || op == PointwiseOp::Div) ? 2 : 1;
}

std::string render_expr(const OnfExprPtr& e, int parent_precedence, bool is_right_operand) {
    switch (e->kind) {
        case OnfKind::FlatRef:
            return e->ref.buffer + "[" + to_string(e->ref.offset) + "]";
        case OnfKind::Const:
            return format_double(e->value);
        case OnfKind::Sum:
            return "sum(" + e->var + ", 0, " + render_last_index(e->extent) + ", " +
                   render_expr(e->body, 0, false) + ")";
        case OnfKind::BinOp: {
            const int prec = precedence(e->op);
            std::string out = render_expr(e->lhs, prec, false) + " " + to_char(e->op) + " " +
                              render_expr(e->rhs, prec, true);
            if (prec < parent_precedence || (prec == parent_precedence && is_right_operand)) {
                return "(" + out + ")";
            }
            return out;
        }
    }
    throw Error("emit: unreachable kind");
}

}  // namespace

std::string to_string(const NPoly& p) {
    std::string out;
    auto append = [&out](const std::string& piece) {
        if (!out.empty()) out += " + ";
        out += piece;
    };
    if (p.c2 != 0) append(p.c2 == 1 ? "n*n" : std::to_string(p.c2) + "*n*n");
    if (p.c1 != 0) append(p.c1 == 1 ? "n" : std::to_string(p.c1) + "*n");
    if (p.c0 != 0 || out.empty()) append(std::to_string(p.c0));
    return out;
}

std::string to_string(const AffineOffset& offset) {
    std::string out;
    auto append = [&out](const std::string& piece) {
        if (!out.empty()) out += " + ";
        out += piece;
    };
    // Pieces mentioning n lead (k*n + j, n + k), plain variables next,
    // the plain constant last.
    for (const auto& [var, coeff] : offset.terms) {
        if (coeff.c1 != 0 || coeff.c2 != 0) append(render_term(var, coeff));
    }
    if (offset.constant.c1 != 0 || offset.constant.c2 != 0) {
        append(to_string(NPoly{0, offset.constant.c1, offset.constant.c2}));
    }
    for (const auto& [var, coeff] : offset.terms) {
        if (coeff.c1 == 0 && coeff.c2 == 0 && !coeff.is_zero()) append(render_term(var, coeff));
    }
    if (offset.constant.c0 != 0 || out.empty()) append(std::to_string(offset.constant.c0));
    return out;
}

std::string emit_expr(const OnfExprPtr& e) { return render_expr(e, 0, false); }

std::string emit_pseudocode(const OnfProgram& p) {
    std::string out;
    for (const OnfStatement& stmt : p.statements) {
        std::string indent;
        for (const LoopVar& loop : stmt.loops) {
            out += indent + "for " + loop.name + " in [0, " + to_string(loop.extent) + "):\n";
            indent += "  ";
        }
        out += indent;
        for (const FlatRef& target : stmt.targets) {
            out += target.buffer + "[" + to_string(target.offset) + "] := ";
        }
        out += render_expr(stmt.rhs, 0, false) + "\n";
    }
    return out;
}

}  // namespace moa
