#include "moa/array.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace moa {

namespace {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::int64_t checked_length(const DenseArray& v, const char* who) {
    if (v.rank() != 1) {
        throw RankError(std::string(who) + ": rank-1 operand required, got shape " + to_string(v.shape()));
    }
    return v.shape().extent(0);
}

}  // namespace

char to_char(PointwiseOp op) {
    switch (op) {
        case PointwiseOp::Add: return '+';
        case PointwiseOp::Sub: return '-';
        case PointwiseOp::Mul: return '*';
        case PointwiseOp::Div: return '/';
    }
    return '?';
}

Shape take(std::int64_t count, const Shape& s) {
    const auto len = s.rank();
    if (count > len || -count > len) {
        throw ConformanceError("take: count " + std::to_string(count) + " exceeds length " + std::to_string(len));
    }
    const auto& e = s.extents();
    std::vector<std::int64_t> out;
    if (count >= 0) {
        out.assign(e.begin(), e.begin() + count);
    } else {
        out.assign(e.end() + count, e.end());
    }
    return Shape(std::move(out));
}

Shape drop(std::int64_t count, const Shape& s) {
    const auto len = s.rank();
    if (count > len || -count > len) {
        throw ConformanceError("drop: count " + std::to_string(count) + " exceeds length " + std::to_string(len));
    }
    const auto& e = s.extents();
    std::vector<std::int64_t> out;
    if (count >= 0) {
        out.assign(e.begin() + count, e.end());
    } else {
        out.assign(e.begin(), e.end() + count);
    }
    return Shape(std::move(out));
}

Shape concat(const Shape& lhs, const Shape& rhs) {
    std::vector<std::int64_t> out = lhs.extents();
    out.insert(out.end(), rhs.extents().begin(), rhs.extents().end());
    return Shape(std::move(out));
}

std::string to_string(const Shape& s) {
    std::string out = "<";
    for (std::size_t d = 0; d < s.extents().size(); ++d) {
        if (d > 0) out += ' ';
        out += std::to_string(s.extents()[d]);
    }
    out += '>';
    return out;
}

std::string to_string(const IndexVector& idx) {
    std::string out = "<";
    for (std::size_t d = 0; d < idx.size(); ++d) {
        if (d > 0) out += ' ';
        out += std::to_string(idx[d]);
    }
    out += '>';
    return out;
}

DenseArray make_vector(std::vector<double> values) {
    auto n = static_cast<std::int64_t>(values.size());
    return DenseArray(Shape{n}, std::move(values));
}

DenseArray make_matrix(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<double> data;
    std::int64_t cols = rows.size() == 0 ? 0 : static_cast<std::int64_t>(rows.begin()->size());
    for (const auto& row : rows) {
        if (static_cast<std::int64_t>(row.size()) != cols) {
            throw ShapeError("make_matrix: ragged rows");
        }
        data.insert(data.end(), row.begin(), row.end());
    }
    return DenseArray(Shape{static_cast<std::int64_t>(rows.size()), cols}, std::move(data));
}

Shape shape(const DenseArray& a) { return a.shape(); }

std::int64_t tau(const DenseArray& a) { return a.shape().element_count(); }

std::int64_t gamma(const IndexVector& idx, const Shape& s) {
    if (static_cast<std::int64_t>(idx.size()) != s.rank()) {
        throw RankError("gamma: index " + to_string(idx) + " is not a full index for shape " + to_string(s));
    }
    std::int64_t offset = 0;
    for (std::int64_t d = 0; d < s.rank(); ++d) {
        const std::int64_t component = idx[static_cast<std::size_t>(d)];
        if (component < 0 || component >= s.extent(d)) {
            throw IndexError("gamma: component " + std::to_string(component) + " out of bounds on axis " +
                             std::to_string(d) + " of shape " + to_string(s));
        }
        offset = offset * s.extent(d) + component;
    }
    return offset;
}

DenseArray psi(const IndexVector& idx, const DenseArray& a) {
    const auto prefix = static_cast<std::int64_t>(idx.size());
    if (prefix > a.rank()) {
        throw RankError("psi: index " + to_string(idx) + " is longer than the rank of shape " +
                        to_string(a.shape()));
    }
    Shape result_shape = drop(prefix, a.shape());

    IndexVector padded = idx;
    padded.resize(static_cast<std::size_t>(a.rank()), 0);
    // An out-of-bounds component surfaces through gamma. Zero-extent
    // trailing axes make even the zero pad invalid, so only run gamma
    // when there is at least one element to address.
    const std::int64_t slab = result_shape.element_count();
    std::int64_t start = 0;
    if (tau(a) > 0) {
        start = gamma(padded, a.shape());
    } else {
        for (std::int64_t d = 0; d < prefix; ++d) {
            const std::int64_t component = idx[static_cast<std::size_t>(d)];
            if (component < 0 || component >= a.shape().extent(d)) {
                throw IndexError("psi: component " + std::to_string(component) + " out of bounds on axis " +
                                 std::to_string(d) + " of shape " + to_string(a.shape()));
            }
        }
    }

    std::vector<double> data(a.data().begin() + start, a.data().begin() + start + slab);
    return DenseArray(std::move(result_shape), std::move(data));
}

DenseArray take(std::int64_t count, const DenseArray& v) {
    const auto len = checked_length(v, "take");
    if (count > len || -count > len) {
        throw ConformanceError("take: count " + std::to_string(count) + " exceeds vector length " +
                               std::to_string(len));
    }
    std::vector<double> out;
    if (count >= 0) {
        out.assign(v.data().begin(), v.data().begin() + count);
    } else {
        out.assign(v.data().end() + count, v.data().end());
    }
    return make_vector(std::move(out));
}

DenseArray drop(std::int64_t count, const DenseArray& v) {
    const auto len = checked_length(v, "drop");
    if (count > len || -count > len) {
        throw ConformanceError("drop: count " + std::to_string(count) + " exceeds vector length " +
                               std::to_string(len));
    }
    std::vector<double> out;
    if (count >= 0) {
        out.assign(v.data().begin() + count, v.data().end());
    } else {
        out.assign(v.data().begin(), v.data().end() + count);
    }
    return make_vector(std::move(out));
}

DenseArray concat(const DenseArray& lhs, const DenseArray& rhs) {
    checked_length(lhs, "concat");
    checked_length(rhs, "concat");
    std::vector<double> out = lhs.data();
    out.insert(out.end(), rhs.data().begin(), rhs.data().end());
    return make_vector(std::move(out));
}

DenseArray ravel(const DenseArray& a) {
    return DenseArray(Shape{tau(a)}, a.data());
}

DenseArray iota(std::int64_t q) {
    if (q < 0) {
        throw ShapeError("iota: negative count " + std::to_string(q));
    }
    std::vector<double> out(static_cast<std::size_t>(q));
    for (std::int64_t k = 0; k < q; ++k) out[static_cast<std::size_t>(k)] = static_cast<double>(k);
    return make_vector(std::move(out));
}

DenseArray transpose(const DenseArray& a) {
    if (a.rank() <= 1) return a;
    if (a.rank() > 2) {
        throw RankError("transpose: rank " + std::to_string(a.rank()) + " is unsupported");
    }
    const std::int64_t rows = a.shape().extent(0);
    const std::int64_t cols = a.shape().extent(1);
    std::vector<double> out(a.data().size());
    for (std::int64_t i = 0; i < rows; ++i) {
        for (std::int64_t j = 0; j < cols; ++j) {
            out[static_cast<std::size_t>(j * rows + i)] = a.data()[static_cast<std::size_t>(i * cols + j)];
        }
    }
    return DenseArray(Shape{cols, rows}, std::move(out));
}

DenseArray pointwise(PointwiseOp op, const DenseArray& lhs, const DenseArray& rhs) {
    const bool lhs_scalar = lhs.rank() == 0;
    const bool rhs_scalar = rhs.rank() == 0;
    if (!lhs_scalar && !rhs_scalar && lhs.shape() != rhs.shape()) {
        throw ConformanceError(std::string("pointwise ") + to_char(op) + ": shapes " + to_string(lhs.shape()) +
                               " and " + to_string(rhs.shape()) + " do not conform");
    }
    const Shape& result_shape = lhs_scalar ? rhs.shape() : lhs.shape();
    const auto count = static_cast<std::size_t>(result_shape.element_count());

    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double a = lhs.data()[lhs_scalar ? 0 : k];
        const double b = rhs.data()[rhs_scalar ? 0 : k];
        switch (op) {
            case PointwiseOp::Add: out[k] = a + b; break;
            case PointwiseOp::Sub: out[k] = a - b; break;
            case PointwiseOp::Mul: out[k] = a * b; break;
            case PointwiseOp::Div:
                if (b == 0.0) {
                    throw DivisionError("pointwise /: division by zero at ravel offset " + std::to_string(k));
                }
                out[k] = a / b;
                break;
        }
    }
    return DenseArray(result_shape, std::move(out));
}

DenseArray reduce_add(const DenseArray& v) {
    checked_length(v, "reduce_add");
    double acc = 0.0;
    for (double x : v.data()) acc += x;
    return DenseArray(acc);
}

DenseArray inner_product(const DenseArray& lhs, const DenseArray& rhs) {
    if (lhs.rank() < 1 || rhs.rank() < 1) {
        throw RankError("inner_product: both operands must have rank >= 1, got " + to_string(lhs.shape()) +
                        " and " + to_string(rhs.shape()));
    }
    const std::int64_t q = lhs.shape().extent(lhs.rank() - 1);
    const std::int64_t q_rhs = rhs.shape().extent(0);
    if (q != q_rhs) {
        throw ConformanceError("inner_product: last extent " + std::to_string(q) +
                               " of the left argument does not match first extent " + std::to_string(q_rhs) +
                               " of the right argument");
    }

    const Shape result_shape = concat(drop(-1, lhs.shape()), drop(1, rhs.shape()));
    const std::int64_t left_count = drop(-1, lhs.shape()).element_count();
    const std::int64_t right_count = drop(1, rhs.shape()).element_count();

    std::vector<double> out(static_cast<std::size_t>(left_count * right_count));
    for (std::int64_t i = 0; i < left_count; ++i) {
        for (std::int64_t j = 0; j < right_count; ++j) {
            double acc = 0.0;
            for (std::int64_t k = 0; k < q; ++k) {
                acc += lhs.data()[static_cast<std::size_t>(i * q + k)] *
                       rhs.data()[static_cast<std::size_t>(k * right_count + j)];
            }
            out[static_cast<std::size_t>(i * right_count + j)] = acc;
        }
    }
    return DenseArray(result_shape, std::move(out));
}

std::string to_string(const DenseArray& a) {
    if (a.rank() == 0) return format_double(a.data()[0]);
    std::string out = "<";
    for (std::size_t k = 0; k < a.data().size(); ++k) {
        if (k > 0) out += ' ';
        out += format_double(a.data()[k]);
    }
    out += '>';
    if (a.rank() > 1) out += " : " + to_string(a.shape());
    return out;
}

}  // namespace moa
