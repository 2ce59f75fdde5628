#pragma once

// Random well-shaped expression trees plus matching bindings, used to
// drive the reducer-versus-evaluator equivalence checks. Only supported
// constructs are produced: constant in-bounds indices, eliminable
// transposes, conformable operands, and nonzero divisor leaves.

#include <random>
#include <string>
#include <vector>

#include "moa/expr.hpp"

namespace exprgen {

struct Generated {
    moa::ExprPtr expr;
    moa::Binding binding;
};

class Generator {
public:
    explicit Generator(std::mt19937_64& rng) : rng_(rng) {}

    Generated generate(int max_depth = 4) {
        Generated out;
        const moa::Shape target = random_shape(2);
        out.expr = gen(target, max_depth, out.binding, false);
        return out;
    }

    // An expression of exactly the given shape.
    moa::ExprPtr gen(const moa::Shape& target, int depth, moa::Binding& binding, bool positive_data) {
        if (depth <= 0 || chance(0.25)) {
            return leaf(target, binding, positive_data);
        }
        switch (pick(target)) {
            case Node::Pointwise: {
                const auto op = static_cast<moa::PointwiseOp>(int_in(0, 3));
                if (op == moa::PointwiseOp::Div) {
                    // Keep divisors simple and bounded away from zero.
                    const moa::Shape rhs_shape = chance(0.5) ? moa::Shape::scalar() : target;
                    return moa::pointwise(op, gen(target, depth - 1, binding, positive_data),
                                          leaf(rhs_shape, binding, true));
                }
                if (target.rank() > 0 && chance(0.3)) {
                    // Scalar extension on one side.
                    const bool scalar_left = chance(0.5);
                    auto scalar_side = gen(moa::Shape::scalar(), depth - 1, binding, positive_data);
                    auto full_side = gen(target, depth - 1, binding, positive_data);
                    return scalar_left ? moa::pointwise(op, std::move(scalar_side), std::move(full_side))
                                       : moa::pointwise(op, std::move(full_side), std::move(scalar_side));
                }
                return moa::pointwise(op, gen(target, depth - 1, binding, positive_data),
                                      gen(target, depth - 1, binding, positive_data));
            }
            case Node::Psi: {
                std::vector<std::int64_t> extended = {int_in(1, 4)};
                if (chance(0.3)) extended.push_back(int_in(1, 4));
                moa::SymIndex index;
                for (std::int64_t extent : extended) {
                    index.push_back(moa::IndexComponent::constant(int_in(0, extent - 1)));
                }
                extended.insert(extended.end(), target.extents().begin(), target.extents().end());
                return moa::psi(moa::index_literal(std::move(index)),
                                gen(moa::Shape(std::move(extended)), depth - 1, binding, positive_data));
            }
            case Node::Transpose:
                return moa::transpose(gen(target, depth - 1, binding, positive_data));
            case Node::ReduceAdd:
                return moa::reduce_add(gen(moa::Shape{int_in(1, 6)}, depth - 1, binding, positive_data));
            case Node::InnerProduct: {
                const auto split = static_cast<std::size_t>(int_in(0, target.rank()));
                const std::int64_t q = int_in(1, 6);
                std::vector<std::int64_t> lhs_extents(target.extents().begin(),
                                                      target.extents().begin() + split);
                lhs_extents.push_back(q);
                std::vector<std::int64_t> rhs_extents = {q};
                rhs_extents.insert(rhs_extents.end(), target.extents().begin() + split,
                                   target.extents().end());
                return moa::inner_product(
                    gen(moa::Shape(std::move(lhs_extents)), depth - 1, binding, positive_data),
                    gen(moa::Shape(std::move(rhs_extents)), depth - 1, binding, positive_data));
            }
        }
        return leaf(target, binding, positive_data);
    }

private:
    enum class Node { Pointwise, Psi, Transpose, ReduceAdd, InnerProduct };

    Node pick(const moa::Shape& target) {
        for (;;) {
            switch (int_in(0, 4)) {
                case 0: return Node::Pointwise;
                case 1: return Node::Psi;
                case 2:
                    if (target.rank() <= 1) return Node::Transpose;
                    break;
                case 3:
                    if (target.rank() == 0) return Node::ReduceAdd;
                    break;
                case 4:
                    if (target.rank() <= 2) return Node::InnerProduct;
                    break;
            }
        }
    }

    moa::ExprPtr leaf(const moa::Shape& shape, moa::Binding& binding, bool positive_data) {
        if (shape.rank() == 0 && chance(0.4)) {
            return moa::scalar_literal(positive_data ? real_in(0.5, 2.0) : real_in(-2.0, 2.0));
        }
        const std::string name = "t" + std::to_string(next_name_++);
        std::vector<double> data(static_cast<std::size_t>(shape.element_count()));
        for (double& v : data) v = positive_data ? real_in(0.5, 2.0) : real_in(-2.0, 2.0);
        binding.arrays.emplace(name, moa::DenseArray(shape, std::move(data)));
        return moa::array_ref(name, moa::to_sym_shape(shape));
    }

    moa::Shape random_shape(std::int64_t max_rank) {
        const std::int64_t rank = int_in(0, max_rank);
        std::vector<std::int64_t> extents;
        for (std::int64_t d = 0; d < rank; ++d) extents.push_back(int_in(1, 6));
        return moa::Shape(std::move(extents));
    }

    bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }

    std::int64_t int_in(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
    }

    double real_in(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    std::mt19937_64& rng_;
    int next_name_ = 0;
};

}  // namespace exprgen
