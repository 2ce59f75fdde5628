#include "moa/expr.hpp"

#include <charconv>

namespace moa {

namespace {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string to_string(const SymIndex& index) {
    std::string out = "<";
    for (std::size_t d = 0; d < index.size(); ++d) {
        if (d > 0) out += ' ';
        const IndexComponent& c = index[d];
        if (c.temporal) {
            out += 'i';
            if (c.offset != 0) out += '+' + std::to_string(c.offset);
        } else {
            out += std::to_string(c.offset);
        }
    }
    out += '>';
    return out;
}

}  // namespace

SymShape to_sym_shape(const Shape& s) {
    SymShape out;
    out.reserve(s.extents().size());
    for (std::int64_t e : s.extents()) out.emplace_back(e);
    return out;
}

Shape resolve(const SymShape& s, std::int64_t n) {
    std::vector<std::int64_t> extents;
    extents.reserve(s.size());
    for (const SymExtent& e : s) extents.push_back(e.resolve(n));
    return Shape(std::move(extents));
}

std::string to_string(const SymShape& s) {
    std::string out = "<";
    for (std::size_t d = 0; d < s.size(); ++d) {
        if (d > 0) out += ' ';
        out += s[d].is_n() ? "n" : std::to_string(s[d].value());
    }
    out += '>';
    return out;
}

ExprPtr array_ref(std::string name, SymShape shape) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::ArrayRef;
    e->name = std::move(name);
    e->declared_shape = std::move(shape);
    return e;
}

ExprPtr scalar_literal(double value) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::ScalarLiteral;
    e->value = value;
    return e;
}

ExprPtr index_literal(SymIndex components) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::IndexLiteral;
    e->index = std::move(components);
    return e;
}

ExprPtr index_literal(std::initializer_list<std::int64_t> components) {
    SymIndex index;
    for (std::int64_t c : components) index.push_back(IndexComponent::constant(c));
    return index_literal(std::move(index));
}

ExprPtr psi(ExprPtr index, ExprPtr array) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Psi;
    e->child0 = std::move(index);
    e->child1 = std::move(array);
    return e;
}

ExprPtr transpose(ExprPtr inner) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Transpose;
    e->child0 = std::move(inner);
    return e;
}

ExprPtr inner_product(ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::InnerProduct;
    e->child0 = std::move(lhs);
    e->child1 = std::move(rhs);
    return e;
}

ExprPtr pointwise(PointwiseOp op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Pointwise;
    e->op = op;
    e->child0 = std::move(lhs);
    e->child1 = std::move(rhs);
    return e;
}

ExprPtr reduce_add(ExprPtr inner) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::ReduceAdd;
    e->child0 = std::move(inner);
    return e;
}

namespace {

[[noreturn]] void shape_fail(const ExprPtr& e, const std::string& why) {
    throw ShapeError("shape error in `" + to_string(e) + "`: " + why);
}

}  // namespace

SymShape infer_shape(const ExprPtr& e) {
    switch (e->kind) {
        case ExprKind::ArrayRef:
            return e->declared_shape;
        case ExprKind::ScalarLiteral:
            return {};
        case ExprKind::IndexLiteral:
            return {SymExtent(static_cast<std::int64_t>(e->index.size()))};
        case ExprKind::Psi: {
            if (e->child0->kind != ExprKind::IndexLiteral) {
                shape_fail(e, "psi index must be an index literal");
            }
            SymShape array_shape = infer_shape(e->child1);
            const SymIndex& index = e->child0->index;
            if (index.size() > array_shape.size()) {
                shape_fail(e, "index length " + std::to_string(index.size()) + " exceeds rank " +
                                  std::to_string(array_shape.size()));
            }
            for (std::size_t d = 0; d < index.size(); ++d) {
                const IndexComponent& c = index[d];
                if (c.temporal || array_shape[d].is_n()) continue;
                if (c.offset < 0 || c.offset >= array_shape[d].value()) {
                    shape_fail(e, "index component " + std::to_string(c.offset) + " out of bounds on axis " +
                                      std::to_string(d) + " of " + to_string(array_shape));
                }
            }
            return SymShape(array_shape.begin() + static_cast<std::ptrdiff_t>(index.size()), array_shape.end());
        }
        case ExprKind::Transpose: {
            SymShape s = infer_shape(e->child0);
            if (s.size() <= 1) return s;
            if (s.size() == 2) return {s[1], s[0]};
            shape_fail(e, "transpose of rank " + std::to_string(s.size()) + " is unsupported");
        }
        case ExprKind::InnerProduct: {
            SymShape l = infer_shape(e->child0);
            SymShape r = infer_shape(e->child1);
            if (l.empty() || r.empty()) {
                shape_fail(e, "inner product operands must have rank >= 1");
            }
            if (!(l.back() == r.front())) {
                shape_fail(e, "inner extents " + to_string(SymShape{l.back()}) + " and " +
                                  to_string(SymShape{r.front()}) + " do not conform");
            }
            SymShape out(l.begin(), l.end() - 1);
            out.insert(out.end(), r.begin() + 1, r.end());
            return out;
        }
        case ExprKind::Pointwise: {
            SymShape l = infer_shape(e->child0);
            SymShape r = infer_shape(e->child1);
            if (l.empty()) return r;
            if (r.empty()) return l;
            if (l != r) {
                shape_fail(e, "shapes " + to_string(l) + " and " + to_string(r) + " do not conform");
            }
            return l;
        }
        case ExprKind::ReduceAdd: {
            SymShape s = infer_shape(e->child0);
            if (s.size() != 1) {
                shape_fail(e, "reduction operand must have rank 1, got " + to_string(s));
            }
            return {};
        }
    }
    throw Error("infer_shape: unreachable");
}

namespace {

// Unify the bound array's concrete shape against the declaration,
// pinning the value of n the first time it is seen.
void check_declared(const std::string& name, const SymShape& declared, const Shape& bound,
                    std::int64_t& n_value, bool& n_known) {
    if (static_cast<std::int64_t>(declared.size()) != bound.rank()) {
        throw ShapeError("binding for " + name + " has rank " + std::to_string(bound.rank()) +
                         ", declared " + to_string(declared));
    }
    for (std::size_t d = 0; d < declared.size(); ++d) {
        const std::int64_t actual = bound.extent(static_cast<std::int64_t>(d));
        if (declared[d].is_n()) {
            if (!n_known) {
                n_value = actual;
                n_known = true;
            } else if (n_value != actual) {
                throw ShapeError("binding for " + name + " resolves n to " + std::to_string(actual) +
                                 " but n was already " + std::to_string(n_value));
            }
        } else if (declared[d].value() != actual) {
            throw ShapeError("binding for " + name + " has shape " + to_string(bound) + ", declared " +
                             to_string(declared));
        }
    }
}

DenseArray eval_rec(const ExprPtr& e, const Binding& env, std::int64_t& n_value, bool& n_known) {
    switch (e->kind) {
        case ExprKind::ArrayRef: {
            auto it = env.arrays.find(e->name);
            if (it == env.arrays.end()) {
                throw Error("eval: unbound array name " + e->name);
            }
            check_declared(e->name, e->declared_shape, it->second.shape(), n_value, n_known);
            return it->second;
        }
        case ExprKind::ScalarLiteral:
            return DenseArray(e->value);
        case ExprKind::IndexLiteral: {
            std::vector<double> out;
            out.reserve(e->index.size());
            for (const IndexComponent& c : e->index) {
                out.push_back(static_cast<double>(c.resolve(env.temporal_index)));
            }
            return make_vector(std::move(out));
        }
        case ExprKind::Psi: {
            if (e->child0->kind != ExprKind::IndexLiteral) {
                throw Error("eval: psi index must be an index literal");
            }
            IndexVector idx;
            for (const IndexComponent& c : e->child0->index) idx.push_back(c.resolve(env.temporal_index));
            return psi(idx, eval_rec(e->child1, env, n_value, n_known));
        }
        case ExprKind::Transpose:
            return transpose(eval_rec(e->child0, env, n_value, n_known));
        case ExprKind::InnerProduct:
            return inner_product(eval_rec(e->child0, env, n_value, n_known),
                                 eval_rec(e->child1, env, n_value, n_known));
        case ExprKind::Pointwise:
            return pointwise(e->op, eval_rec(e->child0, env, n_value, n_known),
                             eval_rec(e->child1, env, n_value, n_known));
        case ExprKind::ReduceAdd:
            return reduce_add(eval_rec(e->child0, env, n_value, n_known));
    }
    throw Error("eval: unreachable");
}

}  // namespace

DenseArray eval(const ExprPtr& e, const Binding& env) {
    std::int64_t n_value = 0;
    bool n_known = false;
    return eval_rec(e, env, n_value, n_known);
}

std::string to_string(const ExprPtr& e) {
    switch (e->kind) {
        case ExprKind::ArrayRef:
            return e->name;
        case ExprKind::ScalarLiteral:
            return format_double(e->value);
        case ExprKind::IndexLiteral:
            return to_string(e->index);
        case ExprKind::Psi:
            return "psi(" + to_string(e->child0) + ", " + to_string(e->child1) + ")";
        case ExprKind::Transpose:
            return "tr " + to_string(e->child0);
        case ExprKind::InnerProduct:
            return "ip(" + to_string(e->child0) + ", " + to_string(e->child1) + ")";
        case ExprKind::Pointwise:
            return "(" + to_string(e->child0) + " " + std::string(1, to_char(e->op)) + " " +
                   to_string(e->child1) + ")";
        case ExprKind::ReduceAdd:
            return "red(" + to_string(e->child0) + ")";
    }
    return "?";
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case ExprKind::ArrayRef:
            return a->name == b->name && a->declared_shape == b->declared_shape;
        case ExprKind::ScalarLiteral:
            return a->value == b->value;
        case ExprKind::IndexLiteral:
            return a->index == b->index;
        case ExprKind::Psi:
        case ExprKind::InnerProduct:
            return structurally_equal(a->child0, b->child0) && structurally_equal(a->child1, b->child1);
        case ExprKind::Transpose:
        case ExprKind::ReduceAdd:
            return structurally_equal(a->child0, b->child0);
        case ExprKind::Pointwise:
            return a->op == b->op && structurally_equal(a->child0, b->child0) &&
                   structurally_equal(a->child1, b->child1);
    }
    return false;
}

}  // namespace moa
