#include "moa/cg.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace moa {

namespace {

double dot_self_row(const std::vector<double>& buf, std::int64_t first, std::int64_t n) {
    double acc = 0.0;
    for (std::int64_t j = 0; j < n; ++j) {
        acc += buf[static_cast<std::size_t>(first + j)] * buf[static_cast<std::size_t>(first + j)];
    }
    return acc;
}

}  // namespace

CgState cg_init(std::span<const double> a, std::span<const double> b, const SolveOptions& options) {
    const auto n = static_cast<std::int64_t>(b.size());
    if (n < 1) {
        throw ShapeError("cg_init: right-hand side is empty");
    }
    if (static_cast<std::int64_t>(a.size()) != n * n) {
        throw ShapeError("cg_init: matrix has " + std::to_string(a.size()) + " entries, expected " +
                         std::to_string(n * n) + " for a square system of size " + std::to_string(n));
    }

    double max_abs = 0.0;
    for (double v : a) max_abs = std::max(max_abs, std::abs(v));
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t j = i + 1; j < n; ++j) {
            const double upper = a[static_cast<std::size_t>(i * n + j)];
            const double lower = a[static_cast<std::size_t>(j * n + i)];
            if (std::abs(upper - lower) > 1e-12 * max_abs) {
                throw SymmetryError("cg_init: entries (" + std::to_string(i) + "," + std::to_string(j) +
                                    ") and (" + std::to_string(j) + "," + std::to_string(i) +
                                    ") differ by " + std::to_string(std::abs(upper - lower)));
            }
        }
    }

    CgState state;
    state.n = n;
    state.a.assign(a.begin(), a.end());
    state.b.assign(b.begin(), b.end());
    state.x_buf.assign(static_cast<std::size_t>(2 * n), 0.0);
    state.r_buf.assign(static_cast<std::size_t>(2 * n), 0.0);
    state.p_buf.assign(static_cast<std::size_t>(2 * n), 0.0);

    if (options.initial_guess) {
        if (static_cast<std::int64_t>(options.initial_guess->size()) != n) {
            throw ShapeError("cg_init: guess has length " + std::to_string(options.initial_guess->size()) +
                             ", expected " + std::to_string(n));
        }
        std::copy(options.initial_guess->begin(), options.initial_guess->end(), state.x_buf.begin());
    }

    // P[k] := R[k] := b[k] - sum(j, A[k*n + j] * X[j])
    for (std::int64_t k = 0; k < n; ++k) {
        double ax = 0.0;
        for (std::int64_t j = 0; j < n; ++j) {
            ax += state.a[static_cast<std::size_t>(k * n + j)] * state.x_buf[static_cast<std::size_t>(j)];
        }
        const double r = state.b[static_cast<std::size_t>(k)] - ax;
        state.r_buf[static_cast<std::size_t>(k)] = r;
        state.p_buf[static_cast<std::size_t>(k)] = r;
    }
    state.residual_norm = std::sqrt(dot_self_row(state.r_buf, 0, n));
    return state;
}

CgState cg_step(CgState state) {
    const std::int64_t n = state.n;
    if (n == 0) {
        throw ShapeError("cg_step: state is not initialized");
    }

    // sum(j, R[j] * R[j])
    const double rr = dot_self_row(state.r_buf, 0, n);
    if (rr == 0.0) {
        return state;  // already converged; beta would be 0/0
    }

    // sum(i, sum(j, P[i] * (A[i*n + j] * P[j])))
    double pap = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::int64_t j = 0; j < n; ++j) {
            row += state.p_buf[static_cast<std::size_t>(i)] *
                   (state.a[static_cast<std::size_t>(i * n + j)] * state.p_buf[static_cast<std::size_t>(j)]);
        }
        pap += row;
    }
    if (pap <= 0.0) {
        throw NotPositiveDefiniteError("cg_step: p.Ap = " + std::to_string(pap) +
                                       "; the matrix is not positive-definite");
    }

    const double alpha = rr / pap;

    // X[n + k] := X[k] + P[k] * alpha
    for (std::int64_t k = 0; k < n; ++k) {
        state.x_buf[static_cast<std::size_t>(n + k)] =
            state.x_buf[static_cast<std::size_t>(k)] + state.p_buf[static_cast<std::size_t>(k)] * alpha;
    }

    // R[n + k] := R[k] - alpha * sum(j, A[k*n + j] * P[j])
    for (std::int64_t k = 0; k < n; ++k) {
        double ap = 0.0;
        for (std::int64_t j = 0; j < n; ++j) {
            ap += state.a[static_cast<std::size_t>(k * n + j)] * state.p_buf[static_cast<std::size_t>(j)];
        }
        state.r_buf[static_cast<std::size_t>(n + k)] =
            state.r_buf[static_cast<std::size_t>(k)] - alpha * ap;
    }

    // sum(j, R[n + j] * R[n + j]) feeds both the residual norm and beta.
    const double rr_next = dot_self_row(state.r_buf, n, n);
    const double beta = rr_next / rr;

    // P[n + k] := R[n + k] + P[k] * beta
    for (std::int64_t k = 0; k < n; ++k) {
        state.p_buf[static_cast<std::size_t>(n + k)] =
            state.r_buf[static_cast<std::size_t>(n + k)] + state.p_buf[static_cast<std::size_t>(k)] * beta;
    }

    state.residual_norm = std::sqrt(rr_next);

    // Row rotation by copy: X[k] := X[n + k], likewise R and P.
    for (std::int64_t k = 0; k < n; ++k) {
        state.x_buf[static_cast<std::size_t>(k)] = state.x_buf[static_cast<std::size_t>(n + k)];
        state.r_buf[static_cast<std::size_t>(k)] = state.r_buf[static_cast<std::size_t>(n + k)];
        state.p_buf[static_cast<std::size_t>(k)] = state.p_buf[static_cast<std::size_t>(n + k)];
    }

    state.iteration += 1;
    state.last_alpha = alpha;
    state.last_beta = beta;
    return state;
}

double residual_norm(const CgState& state) { return state.residual_norm; }

SolveReport cg_solve(std::span<const double> a, std::span<const double> b, const SolveOptions& options) {
    if (options.tolerance < 0.0) {
        throw Error("cg_solve: tolerance must be non-negative");
    }
    CgState state = cg_init(a, b, options);
    const std::int64_t n = state.n;
    const std::int64_t max_iterations = options.max_iterations.value_or(2 * n);
    if (max_iterations < 1) {
        throw Error("cg_solve: max_iterations must be at least 1");
    }

    double b_norm = 0.0;
    for (double v : b) b_norm += v * v;
    b_norm = std::sqrt(b_norm);
    const double threshold = b_norm == 0.0 ? options.tolerance : options.tolerance * b_norm;

    SolveReport report;
    report.residual_history.push_back(state.residual_norm);
    report.converged = state.residual_norm <= threshold;

    while (!report.converged && state.iteration < max_iterations) {
        state = cg_step(std::move(state));
        report.residual_history.push_back(state.residual_norm);
        report.converged = state.residual_norm <= threshold;
    }

    report.iterations = state.iteration;
    report.solution.assign(state.x_buf.begin(), state.x_buf.begin() + n);
    return report;
}

}  // namespace moa
