#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "moa/shape.hpp"

namespace moa {

// The four pointwise operators of the algebra, shared by the concrete
// arrays, the expression IR, and the normal-form programs.
enum class PointwiseOp { Add, Sub, Mul, Div };

char to_char(PointwiseOp op);

// A shape plus its row-major ravel. The data buffer IS the ravel: rav(a)
// reuses it unchanged. A scalar has the empty shape and one element.
class DenseArray {
public:
    // Scalar zero.
    DenseArray() : data_(1, 0.0) {}

    // Scalar value.
    explicit DenseArray(double value) : data_(1, value) {}

    DenseArray(Shape shape, std::vector<double> data)
        : shape_(std::move(shape)), data_(std::move(data)) {
        if (static_cast<std::int64_t>(data_.size()) != shape_.element_count()) {
            throw ShapeError("array data length " + std::to_string(data_.size()) +
                             " does not match shape " + to_string(shape_));
        }
    }

    static DenseArray zeros(Shape shape) {
        auto count = static_cast<std::size_t>(shape.element_count());
        return DenseArray(std::move(shape), std::vector<double>(count, 0.0));
    }

    const Shape& shape() const { return shape_; }
    const std::vector<double>& data() const { return data_; }
    std::int64_t rank() const { return shape_.rank(); }

    // The value of a one-element array (any rank with tau == 1).
    double scalar() const {
        if (data_.size() != 1) {
            throw RankError("scalar() on array of shape " + to_string(shape_));
        }
        return data_[0];
    }

    bool operator==(const DenseArray& other) const = default;

private:
    Shape shape_;
    std::vector<double> data_;
};

// Construction helpers used throughout the solver and tests.
DenseArray make_vector(std::vector<double> values);
DenseArray make_matrix(std::initializer_list<std::initializer_list<double>> rows);

// rho.
Shape shape(const DenseArray& a);

// tau: total element count (1 for scalars).
std::int64_t tau(const DenseArray& a);

// The row-major flat offset of a full index, by Horner's rule over the
// extents. Requires idx to be a full index for s.
std::int64_t gamma(const IndexVector& idx, const Shape& s);

// psi: partial or full indexing. The result shape drops one leading axis
// per index component; the result data is the contiguous slab of the
// ravel selected by the index. The empty index returns the array itself.
DenseArray psi(const IndexVector& idx, const DenseArray& a);

// take / drop / concatenate on rank-1 arrays. Negative counts act from
// the right.
DenseArray take(std::int64_t count, const DenseArray& v);
DenseArray drop(std::int64_t count, const DenseArray& v);
DenseArray concat(const DenseArray& lhs, const DenseArray& rhs);

// rav: the rank-1 view of the buffer (row-major ordering is fixed).
DenseArray ravel(const DenseArray& a);

// <0 1 ... q-1>.
DenseArray iota(std::int64_t q);

// Identity on rank 0/1; axis swap on rank 2. Higher ranks are out of
// scope for this algebra.
DenseArray transpose(const DenseArray& a);

// Elementwise op with scalar extension: one operand may be a scalar, in
// which case it extends to the other operand's shape.
DenseArray pointwise(PointwiseOp op, const DenseArray& lhs, const DenseArray& rhs);

// Additive reduction of a rank-1 array, summed left to right; the empty
// vector reduces to the additive identity.
DenseArray reduce_add(const DenseArray& v);

// Generalized inner product (+ over x): pointwise products over the
// shared inner dimension followed by additive reduction. The result
// shape is drop(-1, rho lhs) ++ drop(1, rho rhs); vector . vector is a
// scalar, never a 1-by-1 matrix.
DenseArray inner_product(const DenseArray& lhs, const DenseArray& rhs);

std::string to_string(const DenseArray& a);

}  // namespace moa
