#include "mcsp/gmm_solver.hpp"

#include "engine.hpp"
#include "mcsp/error.hpp"

namespace mcsp {

namespace {

detail::Algebra gmm_algebra(const GmmContext& ctx) { return {Mode::Gmm, ctx.op, &ctx.pairs, ctx.k}; }

}  // namespace

GmmContext make_gmm_context(const OperationTable& op) {
    GmmContext ctx;
    ctx.pairs = classify_gmm_or_throw(op);
    ctx.op = op;
    ctx.k = op.arity() - 1;
    return ctx;
}

AssignmentMap gmm_minority_witness(const GmmContext& ctx, const AssignmentMap& t, const AssignmentMap& ta,
                                   const AssignmentMap& tb) {
    return gmm_combine(ctx.op, t, ta, tb);
}

CompactRepresentation fixvalues_gmm(const CompactRepresentation& rep, const AssignmentMap& prefix, std::size_t len,
                                    const GmmContext& ctx, ExecPolicy policy) {
    if (len > prefix.size() || len > rep.n()) throw IndexOutOfRange("fixvalues length exceeds the map length");
    return detail::fixvalues(rep, prefix, len, gmm_algebra(ctx), policy);
}

CompactRepresentation next_gmm(const CompactRepresentation& rep, const Edge& edge, const GmmContext& ctx,
                               ExecPolicy policy) {
    return detail::next(rep, edge, gmm_algebra(ctx), policy);
}

std::vector<CompactRepresentation> run_gmm(const Instance& inst, const GmmContext& ctx, ExecPolicy policy) {
    return detail::run(inst, gmm_algebra(ctx), policy);
}

SolveOutcome solve_gmm(const Instance& inst, const GmmContext& ctx, ExecPolicy policy) {
    if (const auto compat = check_compatibility(inst, ctx.op); !compat.accepted) {
        throw IncompatibleAlgebra("operation does not preserve " + compat.failing);
    }
    auto reps = run_gmm(inst, ctx, policy);
    if (!reps.back().empty()) return Sat{*reps.back().witnesses().front()};
    return Unsat{Trace{Mode::Gmm, inst, ctx.op, std::move(reps)}};
}

}  // namespace mcsp
