#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "moa/array.hpp"
#include "moa/cg.hpp"
#include "moa/emit.hpp"
#include "moa/onf_eval.hpp"
#include "moa/reduce.hpp"

namespace {

std::vector<double> spd_matrix(std::int64_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> m(static_cast<std::size_t>(n * n));
    for (double& v : m) v = dist(rng);
    std::vector<double> a(static_cast<std::size_t>(n * n), 0.0);
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::int64_t k = 0; k < n; ++k) {
                acc += m[static_cast<std::size_t>(i * n + k)] * m[static_cast<std::size_t>(j * n + k)];
            }
            a[static_cast<std::size_t>(i * n + j)] = acc + (i == j ? static_cast<double>(n) : 0.0);
        }
    }
    return a;
}

std::vector<double> random_vector(std::int64_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = dist(rng);
    return v;
}

void BM_CgStep(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    std::mt19937_64 rng(1);
    const auto a = spd_matrix(n, rng);
    const auto b = random_vector(n, rng);
    moa::CgState cg = moa::cg_init(a, b);
    for (auto _ : state) {
        cg = moa::cg_step(std::move(cg));
        benchmark::DoNotOptimize(cg.residual_norm);
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_CgStep)->Arg(16)->Arg(64)->Arg(256);

void BM_CgSolve(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    std::mt19937_64 rng(2);
    const auto a = spd_matrix(n, rng);
    const auto b = random_vector(n, rng);
    moa::SolveOptions options;
    options.tolerance = 1e-8;
    for (auto _ : state) {
        const moa::SolveReport report = moa::cg_solve(a, b, options);
        benchmark::DoNotOptimize(report.solution.data());
    }
}
BENCHMARK(BM_CgSolve)->Arg(16)->Arg(64);

// Interpreted execution of one normal-form iteration, for comparison
// with the compiled step above.
void BM_OnfIteration(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    std::mt19937_64 rng(3);
    const auto a = spd_matrix(n, rng);
    const auto b = random_vector(n, rng);
    const moa::CgState cg = moa::cg_init(a, b);
    const moa::OnfProgram iteration =
        moa::reduce_cg().slice(moa::kCgStmtIterationFirst, moa::kCgStmtIterationCount);
    moa::BufferMap buffers{{"A", cg.a}, {"b", cg.b}, {"X", cg.x_buf}, {"R", cg.r_buf},
                           {"P", cg.p_buf}};
    for (auto _ : state) {
        buffers = moa::eval_onf(iteration, std::move(buffers), n);
        benchmark::DoNotOptimize(buffers.at("X").data());
    }
}
BENCHMARK(BM_OnfIteration)->Arg(16)->Arg(64);

void BM_ReduceCg(benchmark::State& state) {
    for (auto _ : state) {
        const moa::OnfProgram program = moa::reduce_cg();
        benchmark::DoNotOptimize(program.statements.size());
    }
}
BENCHMARK(BM_ReduceCg);

void BM_EmitCg(benchmark::State& state) {
    const moa::OnfProgram program = moa::reduce_cg();
    for (auto _ : state) {
        const std::string text = moa::emit_pseudocode(program);
        benchmark::DoNotOptimize(text.data());
    }
}
BENCHMARK(BM_EmitCg);

void BM_InnerProduct(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    std::mt19937_64 rng(4);
    const moa::DenseArray a(moa::Shape{n, n}, spd_matrix(n, rng));
    const moa::DenseArray v = moa::make_vector(random_vector(n, rng));
    for (auto _ : state) {
        const moa::DenseArray result = moa::inner_product(a, v);
        benchmark::DoNotOptimize(result.data().data());
    }
}
BENCHMARK(BM_InnerProduct)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
