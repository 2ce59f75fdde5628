// Command-line driver: solve (CG over files), reduce (lower an
// expression to loop pseudocode), demo (first iteration of the built-in
// reference system checked against its known values).

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "moa/cg.hpp"
#include "moa/demo.hpp"
#include "moa/emit.hpp"
#include "moa/error.hpp"
#include "moa/io.hpp"
#include "moa/parse.hpp"
#include "moa/reduce.hpp"

namespace {

struct SolveArgs {
    std::string matrix_path;
    std::string rhs_path;
    std::string guess_path;
    double tolerance = 1e-10;
    std::int64_t max_iterations = 0;  // 0: default 2n
    std::string out_path;
    std::string format = "json";
};

int run_solve(const SolveArgs& args) {
    const moa::DenseArray matrix = moa::load_matrix(args.matrix_path);
    if (matrix.rank() != 2) {
        throw moa::ShapeError("matrix file must hold a rank-2 array");
    }
    const moa::DenseArray rhs = moa::load_vector(args.rhs_path);

    moa::SolveOptions options;
    options.tolerance = args.tolerance;
    if (args.max_iterations > 0) options.max_iterations = args.max_iterations;
    if (!args.guess_path.empty()) {
        options.initial_guess = moa::load_vector(args.guess_path).data();
    }

    const moa::SolveReport report = moa::cg_solve(matrix.data(), rhs.data(), options);
    const auto format = args.format == "csv" ? moa::ReportFormat::Csv : moa::ReportFormat::Json;
    if (args.out_path.empty()) {
        std::cout << moa::format_report(report, format);
    } else {
        moa::write_report(report, args.out_path, format);
    }
    return report.converged ? 0 : 2;
}

struct ReduceArgs {
    std::string expression;
    std::vector<std::string> decls;
};

int run_reduce(const ReduceArgs& args) {
    moa::DeclTable decls;
    for (const std::string& decl : args.decls) {
        const auto eq = decl.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw moa::Error("bad declaration '" + decl + "', expected name=dims");
        }
        decls[decl.substr(0, eq)] = moa::parse_dims(decl.substr(eq + 1));
    }
    const moa::ExprPtr expr = moa::parse_expr(args.expression, decls);
    const moa::OnfProgram program = moa::reduce_to_onf(expr);
    if (program.statements.size() == 1 && program.statements[0].loops.empty()) {
        std::cout << moa::emit_expr(program.statements[0].rhs) << "\n";
    } else {
        std::cout << moa::emit_pseudocode(program);
    }
    return 0;
}

std::string render(double value, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, value);
    return buf;
}

std::string render_pair(double a, double b, const char* fmt) {
    return "<" + render(a, fmt) + " " + render(b, fmt) + ">";
}

int run_demo() {
    namespace d = moa::demo;
    bool all_pass = true;

    auto line = [&all_pass](const std::string& label, bool pass, const std::string& actual) {
        all_pass = all_pass && pass;
        std::cout << label << (pass ? " PASS" : " FAIL (got " + actual + ")") << "\n";
    };
    auto close = [](double a, double b, double tol) { return std::abs(a - b) <= tol; };

    moa::SolveOptions options;
    options.initial_guess = std::vector<double>(d::kGuess.begin(), d::kGuess.end());
    moa::CgState state = moa::cg_init(d::kMatrix, d::kRhs, options);

    line("r0 = p0 = " + render_pair(d::kResidual0[0], d::kResidual0[1], "%g"),
         state.r_buf[0] == d::kResidual0[0] && state.r_buf[1] == d::kResidual0[1] &&
             state.p_buf[0] == d::kResidual0[0] && state.p_buf[1] == d::kResidual0[1],
         render_pair(state.r_buf[0], state.r_buf[1], "%g"));

    state = moa::cg_step(std::move(state));

    line("alpha = " + render(d::kAlpha, "%.6f") + " (73/331)",
         close(state.last_alpha, d::kAlpha, d::kAlphaTolerance), render(state.last_alpha, "%.6f"));
    line("x1 = " + render_pair(d::kX1[0], d::kX1[1], "%.4f"),
         close(state.x_buf[0], d::kX1[0], d::kVectorTolerance) &&
             close(state.x_buf[1], d::kX1[1], d::kVectorTolerance),
         render_pair(state.x_buf[0], state.x_buf[1], "%.4f"));
    line("r1 = " + render_pair(d::kR1[0], d::kR1[1], "%.4f"),
         close(state.r_buf[0], d::kR1[0], d::kVectorTolerance) &&
             close(state.r_buf[1], d::kR1[1], d::kVectorTolerance),
         render_pair(state.r_buf[0], state.r_buf[1], "%.4f"));
    line("p1 = " + render_pair(d::kP1[0], d::kP1[1], "%.4f"),
         close(state.p_buf[0], d::kP1[0], d::kVectorTolerance) &&
             close(state.p_buf[1], d::kP1[1], d::kVectorTolerance),
         render_pair(state.p_buf[0], state.p_buf[1], "%.4f"));

    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Array algebra with loop-level normal-form reduction and a CG solver"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    CLI::App* solve = app.add_subcommand("solve", "Solve A x = b with the conjugate gradient method");
    solve->add_option("--matrix", solve_args.matrix_path, "Matrix file (MatrixMarket or CSV)")->required();
    solve->add_option("--rhs", solve_args.rhs_path, "Right-hand side vector file")->required();
    solve->add_option("--guess", solve_args.guess_path, "Initial guess vector file");
    solve->add_option("--tol", solve_args.tolerance, "Relative residual tolerance");
    solve->add_option("--max-iter", solve_args.max_iterations, "Iteration cap (default 2n)");
    solve->add_option("--out", solve_args.out_path, "Write the report here instead of stdout");
    solve->add_option("--format", solve_args.format, "Report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    ReduceArgs reduce_args;
    CLI::App* reduce = app.add_subcommand("reduce", "Lower an expression to flat-loop pseudocode");
    reduce->add_option("--expr", reduce_args.expression, "Expression text")->required();
    reduce->add_option("--decl", reduce_args.decls,
                       "Shape declaration name=dims, e.g. R=2,n (repeatable)");

    CLI::App* demo = app.add_subcommand("demo", "Run the built-in reference system");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (solve->parsed()) return run_solve(solve_args);
        if (reduce->parsed()) return run_reduce(reduce_args);
        if (demo->parsed()) return run_demo();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
