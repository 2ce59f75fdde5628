#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "moa/error.hpp"

namespace moa {

// A (possibly empty) vector of index coordinates. Partial indices are
// allowed: the length may be anything up to the rank of the array it
// indexes.
using IndexVector = std::vector<std::int64_t>;

// The value of rho: an ordered vector of non-negative axis extents. The
// empty shape is valid and is the shape of a scalar.
class Shape {
public:
    Shape() = default;

    explicit Shape(std::vector<std::int64_t> extents) : extents_(std::move(extents)) {
        for (std::int64_t e : extents_) {
            if (e < 0) {
                throw ShapeError("shape extent must be non-negative, got " + std::to_string(e));
            }
        }
    }

    Shape(std::initializer_list<std::int64_t> extents)
        : Shape(std::vector<std::int64_t>(extents)) {}

    static Shape scalar() { return Shape{}; }

    std::int64_t rank() const { return static_cast<std::int64_t>(extents_.size()); }

    std::int64_t extent(std::int64_t axis) const { return extents_[static_cast<std::size_t>(axis)]; }

    const std::vector<std::int64_t>& extents() const { return extents_; }

    // tau: the total element count, pi over the extents. The empty
    // product is 1, so scalars hold exactly one element.
    std::int64_t element_count() const {
        std::int64_t n = 1;
        for (std::int64_t e : extents_) n *= e;
        return n;
    }

    bool operator==(const Shape& other) const = default;

private:
    std::vector<std::int64_t> extents_;
};

// take on a shape vector; negative counts take from the right.
Shape take(std::int64_t count, const Shape& s);

// drop on a shape vector; negative counts drop from the right.
Shape drop(std::int64_t count, const Shape& s);

// ++ on shape vectors.
Shape concat(const Shape& lhs, const Shape& rhs);

// Renders "<2 3>"; the empty shape renders as "<>".
std::string to_string(const Shape& s);
std::string to_string(const IndexVector& idx);

}  // namespace moa
