#include "moa/onf_eval.hpp"

#include "moa/error.hpp"

namespace moa {

namespace {

using LoopEnv = std::vector<std::pair<std::string, std::int64_t>>;

double read_ref(const BufferMap& buffers, const FlatRef& ref, std::int64_t n, const LoopEnv& env) {
    const std::vector<double>& buffer = buffers.at(ref.buffer);
    const std::int64_t offset = ref.offset.resolve(n, env);
    if (offset < 0 || offset >= static_cast<std::int64_t>(buffer.size())) {
        throw Error("offset " + std::to_string(offset) + " out of range for buffer " + ref.buffer);
    }
    return buffer[static_cast<std::size_t>(offset)];
}

double eval_expr(const OnfExprPtr& e, const BufferMap& buffers, std::int64_t n, LoopEnv& env) {
    switch (e->kind) {
        case OnfKind::FlatRef:
            return read_ref(buffers, e->ref, n, env);
        case OnfKind::Const:
            return e->value;
        case OnfKind::BinOp: {
            const double lhs = eval_expr(e->lhs, buffers, n, env);
            const double rhs = eval_expr(e->rhs, buffers, n, env);
            switch (e->op) {
                case PointwiseOp::Add: return lhs + rhs;
                case PointwiseOp::Sub: return lhs - rhs;
                case PointwiseOp::Mul: return lhs * rhs;
                case PointwiseOp::Div: return lhs / rhs;
            }
            throw Error("eval_onf: unreachable op");
        }
        case OnfKind::Sum: {
            const std::int64_t bound = e->extent.resolve(n);
            double acc = 0.0;
            env.emplace_back(e->var, 0);
            for (std::int64_t v = 0; v < bound; ++v) {
                env.back().second = v;
                acc += eval_expr(e->body, buffers, n, env);
            }
            env.pop_back();
            return acc;
        }
    }
    throw Error("eval_onf: unreachable kind");
}

void run_loops(const OnfStatement& stmt, std::size_t depth, BufferMap& buffers, std::int64_t n,
               LoopEnv& env) {
    if (depth == stmt.loops.size()) {
        const double value = eval_expr(stmt.rhs, buffers, n, env);
        for (const FlatRef& target : stmt.targets) {
            std::vector<double>& buffer = buffers.at(target.buffer);
            const std::int64_t offset = target.offset.resolve(n, env);
            if (offset < 0 || offset >= static_cast<std::int64_t>(buffer.size())) {
                throw Error("target offset " + std::to_string(offset) + " out of range for buffer " +
                            target.buffer);
            }
            buffer[static_cast<std::size_t>(offset)] = value;
        }
        return;
    }
    const std::int64_t bound = stmt.loops[depth].extent.resolve(n);
    env.emplace_back(stmt.loops[depth].name, 0);
    for (std::int64_t v = 0; v < bound; ++v) {
        env.back().second = v;
        run_loops(stmt, depth + 1, buffers, n, env);
    }
    env.pop_back();
}

}  // namespace

BufferMap eval_onf(const OnfProgram& p, BufferMap buffers, std::int64_t n) {
    for (const auto& [name, length] : p.buffers) {
        auto it = buffers.find(name);
        if (it == buffers.end()) {
            throw Error("missing buffer " + name);
        }
        const std::int64_t expected = length.resolve(n);
        if (static_cast<std::int64_t>(it->second.size()) != expected) {
            throw Error("buffer " + name + " has length " + std::to_string(it->second.size()) +
                        ", expected " + std::to_string(expected));
        }
    }
    for (const OnfStatement& stmt : p.statements) {
        LoopEnv env;
        run_loops(stmt, 0, buffers, n, env);
    }
    return buffers;
}

}  // namespace moa
