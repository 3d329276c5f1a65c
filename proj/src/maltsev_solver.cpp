#include "mcsp/maltsev_solver.hpp"

#include "engine.hpp"
#include "mcsp/error.hpp"

namespace mcsp {

namespace {

detail::Algebra maltsev_algebra(const OperationTable& op) { return {Mode::Maltsev, op, nullptr, 0}; }

}  // namespace

CompactRepresentation fixvalues(const CompactRepresentation& rep, const OperationTable& op, const AssignmentMap& prefix,
                                std::size_t len, ExecPolicy policy) {
    if (len > prefix.size() || len > rep.n()) throw IndexOutOfRange("fixvalues length exceeds the map length");
    return detail::fixvalues(rep, prefix, len, maltsev_algebra(op), policy);
}

CompactRepresentation next(const CompactRepresentation& rep, const OperationTable& op, const Edge& edge,
                           ExecPolicy policy) {
    return detail::next(rep, edge, maltsev_algebra(op), policy);
}

std::vector<CompactRepresentation> run_maltsev(const Instance& inst, const OperationTable& op, ExecPolicy policy) {
    return detail::run(inst, maltsev_algebra(op), policy);
}

SolveOutcome solve(const Instance& inst, const OperationTable& op, ExecPolicy policy) {
    const auto verdict = validate_maltsev(op);
    if (!verdict.accepted) throw InvalidAlgebra("operation is not a Mal'tsev operation");
    if (const auto compat = check_compatibility(inst, op); !compat.accepted) {
        throw IncompatibleAlgebra("operation does not preserve " + compat.failing);
    }
    auto reps = run_maltsev(inst, op, policy);
    if (!reps.back().empty()) return Sat{*reps.back().witnesses().front()};
    return Unsat{Trace{Mode::Maltsev, inst, op, std::move(reps)}};
}

}  // namespace mcsp
