// Acceptance suite: one line per criterion, every tolerance pinned in
// code. Exits nonzero if any criterion fails.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "moa/cg.hpp"
#include "moa/demo.hpp"
#include "moa/emit.hpp"
#include "moa/onf_eval.hpp"
#include "moa/reduce.hpp"
#include "support/exprgen.hpp"
#include "support/oracles.hpp"

namespace {

int failures = 0;

void criterion(int number, const std::string& name, const std::function<bool()>& check) {
    bool pass = false;
    std::string note;
    try {
        pass = check();
    } catch (const std::exception& e) {
        note = std::string(" (") + e.what() + ")";
    }
    std::printf("[%s] %d. %s%s\n", pass ? "PASS" : "FAIL", number, name.c_str(), note.c_str());
    if (!pass) ++failures;
}

moa::SolveOptions demo_options() {
    moa::SolveOptions options;
    options.initial_guess = std::vector<double>(moa::demo::kGuess.begin(), moa::demo::kGuess.end());
    return options;
}

bool base_case_exact() {
    const moa::CgState state = moa::cg_init(moa::demo::kMatrix, moa::demo::kRhs, demo_options());
    return state.r_buf[0] == -8.0 && state.r_buf[1] == -3.0 && state.p_buf[0] == -8.0 &&
           state.p_buf[1] == -3.0;
}

bool first_step_matches() {
    namespace d = moa::demo;
    moa::CgState state = moa::cg_init(d::kMatrix, d::kRhs, demo_options());
    state = moa::cg_step(std::move(state));
    auto within = [](double actual, double expected, double tol) {
        return std::abs(actual - expected) <= tol;
    };
    return within(state.last_alpha, d::kAlpha, 1e-12) &&
           within(state.x_buf[0], d::kX1[0], 5e-4) && within(state.x_buf[1], d::kX1[1], 5e-4) &&
           within(state.r_buf[0], d::kR1[0], 5e-4) && within(state.r_buf[1], d::kR1[1], 5e-4) &&
           within(state.p_buf[0], d::kP1[0], 5e-4) && within(state.p_buf[1], d::kP1[1], 5e-4);
}

bool reducer_matches_evaluator() {
    std::mt19937_64 rng(307);
    exprgen::Generator gen(rng);
    for (int trial = 0; trial < 100; ++trial) {
        const auto [expr, binding] = gen.generate(4);
        const moa::DenseArray expected = moa::eval(expr, binding);

        const moa::OnfProgram program = moa::reduce_to_onf(expr);
        moa::BufferMap buffers;
        for (const auto& [name, value] : binding.arrays) buffers[name] = value.data();
        buffers["out"] = std::vector<double>(static_cast<std::size_t>(moa::tau(expected)), 0.0);
        const moa::BufferMap result = moa::eval_onf(program, std::move(buffers), 0);

        const auto& out = result.at("out");
        if (out.size() != expected.data().size()) return false;
        for (std::size_t k = 0; k < out.size(); ++k) {
            const double reference = expected.data()[k];
            if (out[k] == reference) continue;
            const double rel =
                std::abs(out[k] - reference) / std::max(std::abs(reference), std::abs(out[k]));
            if (rel > 1e-12) return false;
        }
    }
    return true;
}

bool solver_matches_executor_bitwise() {
    std::mt19937_64 rng(419);
    const moa::OnfProgram iteration =
        moa::reduce_cg().slice(moa::kCgStmtIterationFirst, moa::kCgStmtIterationCount);
    for (std::int64_t n : {2, 4, 8}) {
        const auto a = oracle::random_spd(n, rng);
        const auto b = oracle::random_vector(n, rng);

        moa::CgState state = moa::cg_init(a, b);
        moa::BufferMap buffers{{"A", state.a}, {"b", state.b}, {"X", state.x_buf},
                               {"R", state.r_buf}, {"P", state.p_buf}};
        for (std::int64_t step = 0; step < n; ++step) {
            state = moa::cg_step(std::move(state));
            buffers = moa::eval_onf(iteration, std::move(buffers), n);
            if (buffers.at("X") != state.x_buf || buffers.at("R") != state.r_buf ||
                buffers.at("P") != state.p_buf) {
                return false;
            }
        }
    }
    return true;
}

bool solver_matches_direct_oracle() {
    std::mt19937_64 rng(509);
    const std::vector<std::int64_t> sizes{2,  3,  4,  5,  6,  7,  8,  9,  12, 16,
                                          20, 24, 32, 33, 40, 48, 50, 56, 60, 64};
    for (const std::int64_t n : sizes) {
        const auto a = oracle::random_spd(n, rng);
        const auto b = oracle::random_vector(n, rng);

        moa::SolveOptions options;
        options.tolerance = 1e-8;
        const moa::SolveReport report = moa::cg_solve(a, b, options);
        if (!report.converged || report.iterations > 2 * n) return false;

        const auto direct = oracle::gauss_solve(a, b);
        for (std::size_t k = 0; k < direct.size(); ++k) {
            if (std::abs(report.solution[k] - direct[k]) > 1e-6) return false;
        }
    }
    return true;
}

bool psi_gamma_correspondence() {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::int64_t> extents;
        const std::int64_t rank = std::uniform_int_distribution<std::int64_t>(0, 4)(rng);
        std::int64_t count = 1;
        for (std::int64_t d = 0; d < rank; ++d) {
            extents.push_back(std::uniform_int_distribution<std::int64_t>(1, 6)(rng));
            count *= extents.back();
        }
        if (count > 4096) continue;

        const moa::Shape shape(extents);
        std::vector<double> data(static_cast<std::size_t>(count));
        std::uniform_real_distribution<double> dist(-2.0, 2.0);
        for (double& v : data) v = dist(rng);
        const moa::DenseArray a(shape, std::move(data));

        moa::IndexVector idx;
        for (std::int64_t e : extents) {
            idx.push_back(std::uniform_int_distribution<std::int64_t>(0, e - 1)(rng));
        }
        if (moa::psi(idx, a).data()[0] !=
            a.data()[static_cast<std::size_t>(moa::gamma(idx, shape))]) {
            return false;
        }
    }

    // Exhaustive bijectivity for every probed shape with tau <= 256.
    std::vector<std::vector<std::int64_t>> shapes{{}};
    for (std::int64_t e = 1; e <= 6; ++e) shapes.push_back({e});
    for (std::int64_t e0 = 1; e0 <= 6; ++e0)
        for (std::int64_t e1 = 1; e1 <= 6; ++e1) shapes.push_back({e0, e1});
    for (std::int64_t e0 = 1; e0 <= 6; ++e0)
        for (std::int64_t e1 = 1; e1 <= 6; ++e1)
            for (std::int64_t e2 = 1; e2 <= 6; ++e2)
                if (e0 * e1 * e2 <= 256) shapes.push_back({e0, e1, e2});
    for (std::int64_t e0 = 1; e0 <= 4; ++e0)
        for (std::int64_t e1 = 1; e1 <= 4; ++e1)
            for (std::int64_t e2 = 1; e2 <= 4; ++e2)
                for (std::int64_t e3 = 1; e3 <= 4; ++e3)
                    if (e0 * e1 * e2 * e3 <= 256) shapes.push_back({e0, e1, e2, e3});

    for (const auto& extents : shapes) {
        const moa::Shape shape(extents);
        std::vector<bool> hit(static_cast<std::size_t>(shape.element_count()), false);
        for (const auto& idx : oracle::enumerate_indices(extents)) {
            const std::int64_t offset = moa::gamma(idx, shape);
            if (offset < 0 || offset >= shape.element_count()) return false;
            if (hit[static_cast<std::size_t>(offset)]) return false;
            hit[static_cast<std::size_t>(offset)] = true;
        }
        for (bool h : hit) {
            if (!h) return false;
        }
    }
    return true;
}

bool memory_bound_holds() {
    std::mt19937_64 rng(409);
    for (const std::int64_t n : {std::int64_t{2}, std::int64_t{64}, std::int64_t{1024}}) {
        const auto a = oracle::random_spd(n, rng);
        const auto b = oracle::random_vector(n, rng);
        moa::CgState state = moa::cg_init(a, b);
        const auto total = [&state] {
            return state.x_buf.size() + state.r_buf.size() + state.p_buf.size();
        };
        if (total() != static_cast<std::size_t>(6 * n)) return false;
        for (int step = 0; step < 3; ++step) {
            state = moa::cg_step(std::move(state));
            if (total() != static_cast<std::size_t>(6 * n)) return false;
        }
    }
    return true;
}

bool pseudocode_matches_golden() {
    const std::string rendered = moa::emit_pseudocode(moa::reduce_cg());
    if (rendered.find("X[n + k] := X[k]") == std::string::npos) return false;

    std::ifstream in(std::string(MOA_TESTS_DIR) + "/golden/cg_onf.txt", std::ios::binary);
    if (!in) return false;
    std::ostringstream golden;
    golden << in.rdbuf();
    return rendered == golden.str();
}

}  // namespace

int main() {
    criterion(1, "base case on the demo system is exact", base_case_exact);
    criterion(2, "first step matches the demo references", first_step_matches);
    criterion(3, "reduced programs agree with the evaluator on 100 random expressions",
              reducer_matches_evaluator);
    criterion(4, "solver steps are bitwise equal to the normal-form executor",
              solver_matches_executor_bitwise);
    criterion(5, "solver agrees with Gaussian elimination on 20 random SPD systems",
              solver_matches_direct_oracle);
    criterion(6, "psi/gamma correspondence and gamma bijectivity hold", psi_gamma_correspondence);
    criterion(7, "solver working memory is exactly 6n reals", memory_bound_holds);
    criterion(8, "emitted pseudocode is byte-identical to the golden file", pseudocode_matches_golden);

    if (failures != 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
