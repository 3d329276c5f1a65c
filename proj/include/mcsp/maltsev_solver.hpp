#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "mcsp/algebra.hpp"
#include "mcsp/closure.hpp"
#include "mcsp/instance.hpp"
#include "mcsp/parallel.hpp"
#include "mcsp/representation.hpp"
#include "mcsp/types.hpp"

namespace mcsp {

/// The representation sequence R_0..R_m of a run, with the inputs it was computed from.
struct Trace {
    Mode mode = Mode::Maltsev;
    Instance instance;
    OperationTable op;
    std::vector<CompactRepresentation> reps;
};

struct Sat {
    AssignmentMap witness;
};

struct Unsat {
    Trace trace;
};

using SolveOutcome = std::variant<Sat, Unsat>;

/// The representation U_{len-1} of the maps in rep's closure that agree with
/// `prefix` on coordinates 0..len-1. Only prefix[0..len) is read.
CompactRepresentation fixvalues(const CompactRepresentation& rep, const OperationTable& op, const AssignmentMap& prefix,
                                std::size_t len, ExecPolicy policy = ExecPolicy::Parallel);

/// Extends a representation of the current prefix's solutions by one edge.
CompactRepresentation next(const CompactRepresentation& rep, const OperationTable& op, const Edge& edge,
                           ExecPolicy policy = ExecPolicy::Parallel);

/// R_0..R_m over the sorted edges. Empty domains give m+1 empty representations.
/// Does not validate the algebra.
std::vector<CompactRepresentation> run_maltsev(const Instance& inst, const OperationTable& op,
                                               ExecPolicy policy = ExecPolicy::Parallel);

/// Throws InvalidAlgebra if op is not Mal'tsev and IncompatibleAlgebra if it
/// does not preserve the instance's relations.
SolveOutcome solve(const Instance& inst, const OperationTable& op, ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace mcsp
