#include <doctest.h>

#include <random>

#include "moa/emit.hpp"
#include "moa/onf_eval.hpp"
#include "moa/parse.hpp"
#include "moa/reduce.hpp"
#include "support/exprgen.hpp"

using namespace moa;

namespace {

const SymShape kTwoRows{SymExtent(2), SymExtent::n()};
const SymShape kSquare{SymExtent::n(), SymExtent::n()};
const SymShape kVectorN{SymExtent::n()};

AffineOffset off_var(const char* v) { return AffineOffset::var(v); }

AffineOffset off_n_plus(const char* v) {
    return AffineOffset{NPoly::n(), {{v, NPoly::constant(1)}}};
}

AffineOffset off_row_major(const char* row, const char* col) {
    return AffineOffset{NPoly{}, {{row, NPoly::n()}, {col, NPoly::constant(1)}}};
}

// sum(j, 0, n-1, R[j] * R[j])
OnfExprPtr sum_rr(const char* buffer, bool next_row) {
    auto ref = onf_ref(buffer, next_row ? off_n_plus("j") : off_var("j"));
    return onf_sum("j", NPoly::n(), onf_binop(PointwiseOp::Mul, ref, ref));
}

// sum(i, 0, n-1, sum(j, 0, n-1, P[i] * (A[i*n + j] * P[j])))
OnfExprPtr sum_pap() {
    auto body = onf_binop(
        PointwiseOp::Mul, onf_ref("P", off_var("i")),
        onf_binop(PointwiseOp::Mul, onf_ref("A", off_row_major("i", "j")), onf_ref("P", off_var("j"))));
    return onf_sum("i", NPoly::n(), onf_sum("j", NPoly::n(), std::move(body)));
}

// sum(j, 0, n-1, A[k*n + j] * P[j]) -- one matrix-vector row
OnfExprPtr sum_row_times(const char* vec) {
    return onf_sum("j", NPoly::n(),
                   onf_binop(PointwiseOp::Mul, onf_ref("A", off_row_major("k", "j")),
                             onf_ref(vec, off_var("j"))));
}

// The solver program encoded by hand, statement for statement, from its
// published normal form.
OnfProgram hand_encoded_cg() {
    const std::vector<LoopVar> loop_k{LoopVar{"k", NPoly::n()}};
    const NPoly two_n{0, 2, 0};
    const NPoly n_squared{0, 0, 1};

    OnfProgram p;
    p.buffers = {{"X", two_n}, {"R", two_n}, {"P", two_n}, {"A", n_squared}, {"b", NPoly::n()}};

    p.statements.push_back(OnfStatement{loop_k, {FlatRef{"X", off_var("k")}}, onf_const(0.0)});

    p.statements.push_back(OnfStatement{
        loop_k,
        {FlatRef{"P", off_var("k")}, FlatRef{"R", off_var("k")}},
        onf_binop(PointwiseOp::Sub, onf_ref("b", off_var("k")), sum_row_times("X"))});

    const auto alpha = onf_binop(PointwiseOp::Div, sum_rr("R", false), sum_pap());

    p.statements.push_back(OnfStatement{
        loop_k,
        {FlatRef{"X", off_n_plus("k")}},
        onf_binop(PointwiseOp::Add, onf_ref("X", off_var("k")),
                  onf_binop(PointwiseOp::Mul, onf_ref("P", off_var("k")), alpha))});

    p.statements.push_back(OnfStatement{
        loop_k,
        {FlatRef{"R", off_n_plus("k")}},
        onf_binop(PointwiseOp::Sub, onf_ref("R", off_var("k")),
                  onf_binop(PointwiseOp::Mul, alpha, sum_row_times("P")))});

    const auto beta = onf_binop(PointwiseOp::Div, sum_rr("R", true), sum_rr("R", false));

    p.statements.push_back(OnfStatement{
        loop_k,
        {FlatRef{"P", off_n_plus("k")}},
        onf_binop(PointwiseOp::Add, onf_ref("R", off_n_plus("k")),
                  onf_binop(PointwiseOp::Mul, onf_ref("P", off_var("k")), beta))});

    for (const char* name : {"X", "R", "P"}) {
        p.statements.push_back(
            OnfStatement{loop_k, {FlatRef{name, off_var("k")}}, onf_ref(name, off_n_plus("k"))});
    }
    return p;
}

bool onf_is_pure(const OnfExprPtr& e) {
    switch (e->kind) {
        case OnfKind::FlatRef:
        case OnfKind::Const:
            return true;
        case OnfKind::BinOp:
            return onf_is_pure(e->lhs) && onf_is_pure(e->rhs);
        case OnfKind::Sum:
            return onf_is_pure(e->body);
    }
    return false;
}

ExprPtr psi_row(int row, const ExprPtr& array) {
    return psi(index_literal({row}), array);
}

}  // namespace

TEST_CASE("squared-residual term reduces to a single sum over the ravel") {
    const auto r = array_ref("R", kTwoRows);
    const OnfProgram p = reduce_to_onf(inner_product(psi_row(0, r), psi_row(0, r)));
    REQUIRE(p.statements.size() == 1);
    CHECK(p.statements[0].loops.empty());
    CHECK(structurally_equal(p.statements[0].rhs, sum_rr("R", false)));
}

TEST_CASE("next-row squared term offsets by n") {
    const auto r = array_ref("R", kTwoRows);
    const OnfProgram p = reduce_to_onf(inner_product(psi_row(1, r), psi_row(1, r)));
    CHECK(structurally_equal(p.statements[0].rhs, sum_rr("R", true)));
}

TEST_CASE("the p.A.p denominator reduces to a nested sum with the scalar folded in") {
    const auto a = array_ref("A", kSquare);
    const auto p_arr = array_ref("P", kTwoRows);
    const auto p0 = psi_row(0, p_arr);
    const OnfProgram p = reduce_to_onf(inner_product(p0, inner_product(a, p0)));
    CHECK(structurally_equal(p.statements[0].rhs, sum_pap()));
}

TEST_CASE("reduce_cg reproduces the hand-encoded normal form") {
    CHECK(structurally_equal(reduce_cg(), hand_encoded_cg()));
}

TEST_CASE("reduced programs contain only flat references, arithmetic, and sums") {
    const auto a = array_ref("A", kSquare);
    const auto p_arr = array_ref("P", kTwoRows);
    const auto expr = pointwise(PointwiseOp::Mul, inner_product(psi_row(0, p_arr), psi_row(0, p_arr)),
                                inner_product(a, psi_row(0, p_arr)));
    const OnfProgram program = reduce_to_onf(expr);
    validate(program);
    for (const auto& stmt : program.statements) {
        CHECK(onf_is_pure(stmt.rhs));
    }
    const OnfProgram cg = reduce_cg();
    validate(cg);
    for (const auto& stmt : cg.statements) {
        CHECK(onf_is_pure(stmt.rhs));
    }
}

TEST_CASE("reduction is idempotent over pre-simplified input") {
    std::mt19937_64 rng(211);
    exprgen::Generator gen(rng);
    for (int trial = 0; trial < 40; ++trial) {
        const auto [expr, binding] = gen.generate(4);
        const ExprPtr once = simplify_expr(expr);
        CHECK(structurally_equal(once, simplify_expr(once)));
        CHECK(structurally_equal(reduce_to_onf(expr), reduce_to_onf(once)));
    }
}

TEST_CASE("transposes vanish and temporal indices collapse under simplification") {
    const auto v = array_ref("v", kVectorN);
    CHECK(structurally_equal(simplify_expr(transpose(v)), v));

    const auto r = array_ref("R", kTwoRows);
    const ExprPtr shifted = simplify_expr(psi(index_literal(SymIndex{IndexComponent::iter(1)}), r));
    CHECK(shifted->child0->index == SymIndex{IndexComponent::constant(1)});

    // psi(j, psi(i, a)) fuses to psi(i ++ j, a).
    const auto m = array_ref("A", kSquare);
    const ExprPtr fused = simplify_expr(psi(index_literal({1}), psi(index_literal({0}), m)));
    CHECK(fused->child1->kind == ExprKind::ArrayRef);
    CHECK(fused->child0->index ==
          SymIndex{IndexComponent::constant(0), IndexComponent::constant(1)});
}

TEST_CASE("unsupported nodes raise reduction errors") {
    const auto m = array_ref("M", SymShape{SymExtent(3), SymExtent(4)});
    CHECK_THROWS_AS(reduce_to_onf(transpose(m)), ReductionError);

    // A rank-3 all-n array needs an n^2 stride, which is not affine.
    const auto cube = array_ref("C", SymShape{SymExtent::n(), SymExtent::n(), SymExtent::n()});
    CHECK_THROWS_AS(reduce_to_onf(cube), ReductionError);

    CHECK_THROWS_AS(reduce_to_onf(index_literal({0, 1})), ReductionError);
}

TEST_CASE("reducing and executing agrees with direct evaluation") {
    std::mt19937_64 rng(307);
    exprgen::Generator gen(rng);
    for (int trial = 0; trial < 30; ++trial) {
        const auto [expr, binding] = gen.generate(4);
        const DenseArray expected = eval(expr, binding);

        const OnfProgram program = reduce_to_onf(expr);
        BufferMap buffers;
        for (const auto& [name, value] : binding.arrays) {
            buffers[name] = value.data();
        }
        buffers["out"] = std::vector<double>(static_cast<std::size_t>(tau(expected)), 0.0);
        const BufferMap result = eval_onf(program, std::move(buffers), 0);

        const auto& out = result.at("out");
        REQUIRE(out.size() == expected.data().size());
        for (std::size_t k = 0; k < out.size(); ++k) {
            const double reference = expected.data()[k];
            const double got = out[k];
            if (reference == got) continue;
            const double rel = std::abs(got - reference) / std::max(std::abs(reference), std::abs(got));
            CHECK(rel <= 1e-12);
        }
    }
}

TEST_CASE("executor runs the solver base case on the demo system") {
    const OnfProgram cg = reduce_cg();
    BufferMap buffers{
        {"A", {4, 1, 1, 3}}, {"b", {1, 2}}, {"X", {2, 1, 0, 0}}, {"R", {0, 0, 0, 0}},
        {"P", {0, 0, 0, 0}},
    };
    const BufferMap after = eval_onf(cg.slice(kCgStmtInitResidual, 1), buffers, 2);
    CHECK(after.at("R")[0] == -8.0);
    CHECK(after.at("R")[1] == -3.0);
    CHECK(after.at("P")[0] == -8.0);
    CHECK(after.at("P")[1] == -3.0);

    const BufferMap stepped = eval_onf(cg.slice(kCgStmtUpdateX, 1), after, 2);
    CHECK(stepped.at("X")[2] == doctest::Approx(0.2356).epsilon(5e-4));
    CHECK(stepped.at("X")[3] == doctest::Approx(0.3384).epsilon(5e-4));
}

TEST_CASE("executor leaves the zero system at zero through the base case") {
    const OnfProgram cg = reduce_cg();
    BufferMap buffers{{"A", {1}}, {"b", {0}}, {"X", {0, 0}}, {"R", {0, 0}}, {"P", {0, 0}}};
    const BufferMap after = eval_onf(cg.slice(kCgStmtZeroGuess, 2), buffers, 1);
    for (const char* name : {"X", "R", "P"}) {
        CHECK(after.at(name) == std::vector<double>{0, 0});
    }
}

TEST_CASE("executor validates buffers") {
    const auto v = array_ref("v", kVectorN);
    const OnfProgram p = reduce_to_onf(reduce_add(v));
    CHECK_THROWS_AS(eval_onf(p, BufferMap{{"out", {0}}}, 3), Error);
    CHECK_THROWS_AS(eval_onf(p, BufferMap{{"v", {1, 2}}, {"out", {0}}}, 3), Error);
    const BufferMap good = eval_onf(p, BufferMap{{"v", {1, 2, 4}}, {"out", {0}}}, 3);
    CHECK(good.at("out")[0] == 7.0);
}

TEST_CASE("pseudocode emission matches the published fragments") {
    const std::string text = emit_pseudocode(reduce_cg());
    CHECK(text.find("X[n + k] := X[k] + P[k] *") != std::string::npos);
    CHECK(text.find("P[k] := R[k] := b[k] - sum(j, 0, n-1, A[k*n + j] * X[j])") != std::string::npos);
    CHECK(text.find("for k in [0, n):") != std::string::npos);
    CHECK(text.find("X[k] := X[n + k]") != std::string::npos);

    CHECK(emit_pseudocode(OnfProgram{}) == "");
}

TEST_CASE("emission of reduced expressions") {
    DeclTable decls{{"R", kTwoRows}, {"A", kSquare}, {"p", kVectorN}, {"v", kVectorN}};

    const OnfProgram squared = reduce_to_onf(parse_expr("ip(psi(<0>,R), psi(<0>,R))", decls));
    CHECK(emit_expr(squared.statements[0].rhs) == "sum(j, 0, n-1, R[j] * R[j])");

    const OnfProgram matvec = reduce_to_onf(parse_expr("ip(A, p)", decls));
    CHECK(emit_pseudocode(matvec).find("sum(j, 0, n-1, A[k*n + j] * p[j])") != std::string::npos);

    const OnfProgram plain = reduce_to_onf(parse_expr("tr v", decls));
    CHECK(emit_pseudocode(plain).find("out[k] := v[k]") != std::string::npos);
}
