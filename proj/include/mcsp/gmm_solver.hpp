#pragma once

#include <cstddef>
#include <vector>

#include "mcsp/algebra.hpp"
#include "mcsp/maltsev_solver.hpp"

namespace mcsp {

/// A validated (k+1)-ary GMM operation with its pair classification.
struct GmmContext {
    OperationTable op;
    PairClassification pairs;
    std::size_t k = 0;
};

/// Throws NotGmm for an unclassifiable pair and ArityMismatch for arity < 3.
GmmContext make_gmm_context(const OperationTable& op);

/// phi(T,...,T, phi(T, Ta,...,Ta, Tb)).
AssignmentMap gmm_minority_witness(const GmmContext& ctx, const AssignmentMap& t, const AssignmentMap& ta,
                                   const AssignmentMap& tb);

/// As fixvalues, additionally carrying every projection key forward.
CompactRepresentation fixvalues_gmm(const CompactRepresentation& rep, const AssignmentMap& prefix, std::size_t len,
                                    const GmmContext& ctx, ExecPolicy policy = ExecPolicy::Parallel);

/// As next over minority pairs, followed by a rebuild of the projection keys.
CompactRepresentation next_gmm(const CompactRepresentation& rep, const Edge& edge, const GmmContext& ctx,
                               ExecPolicy policy = ExecPolicy::Parallel);

std::vector<CompactRepresentation> run_gmm(const Instance& inst, const GmmContext& ctx,
                                           ExecPolicy policy = ExecPolicy::Parallel);

/// Throws IncompatibleAlgebra if ctx.op does not preserve the instance's relations.
SolveOutcome solve_gmm(const Instance& inst, const GmmContext& ctx, ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace mcsp
