#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "moa/error.hpp"

namespace moa {

struct SolveOptions {
    // Relative Euclidean residual threshold |r|/|b|; absolute when b = 0.
    double tolerance = 1e-10;
    // Defaults to 2n: the n-step exact-arithmetic bound plus headroom
    // for rounding.
    std::optional<std::int64_t> max_iterations;
    std::optional<std::vector<double>> initial_guess;
};

struct SolveReport {
    std::vector<double> solution;
    std::int64_t iterations = 0;
    // Euclidean residual norms, starting with the initial residual; the
    // length is always iterations + 1.
    std::vector<double> residual_history;
    bool converged = false;
};

// Solver state in the two-row recurrence layout: X, R, P each hold rows
// 0 (current step) and 1 (next step) of length n, so the working memory
// is exactly 6n reals however many iterations run.
struct CgState {
    std::int64_t n = 0;
    std::vector<double> a;      // n*n, row-major
    std::vector<double> b;      // n
    std::vector<double> x_buf;  // 2n
    std::vector<double> r_buf;  // 2n
    std::vector<double> p_buf;  // 2n
    std::int64_t iteration = 0;
    double residual_norm = 0.0;
    double last_alpha = 0.0;
    double last_beta = 0.0;
};

// Validates the system (square, symmetric within 1e-12 * max|a|), sets
// row 0 of X to the guess (zeros by default) and rows 0 of R and P to
// b - A x. Raises SymmetryError or ShapeError on bad input.
CgState cg_init(std::span<const double> a, std::span<const double> b, const SolveOptions& options = {});

// One iteration: fills row 1 of X, R, P from row 0, refreshes the
// residual norm from the new residual row, then copies row 1 back to
// row 0 and increments the counter. A zero residual makes the step a
// no-op; a non-positive p.Ap denominator raises
// NotPositiveDefiniteError. The update arithmetic follows the
// normal-form statements term for term, so the buffers stay bitwise
// equal to the reference executor's.
CgState cg_step(CgState state);

// Euclidean norm of the current residual row.
double residual_norm(const CgState& state);

// Iterates until the residual criterion or the iteration cap is hit.
// Non-convergence is reported, not thrown.
SolveReport cg_solve(std::span<const double> a, std::span<const double> b,
                     const SolveOptions& options = {});

}  // namespace moa
