#pragma once

#include <vector>

#include "mcsp/algebra.hpp"
#include "mcsp/closure.hpp"
#include "mcsp/instance.hpp"
#include "mcsp/representation.hpp"

/// Straightforward serial transcription of the solver steps, with every
/// closure recomputed from scratch and every witness built eagerly. Slow;
/// used to cross-check the optimized engine on small instances.
namespace mcsp::reference {

/// `pairs` selects GMM behaviour (minority filtering and projection keys)
/// and must be given exactly when rep.mode() is Gmm.
MapRef nonempty(const CompactRepresentation& rep, const OperationTable& op, const ProjectionTarget& target);

CompactRepresentation fixvalues(const CompactRepresentation& rep, const OperationTable& op,
                                const PairClassification* pairs, const AssignmentMap& prefix, std::size_t len);

CompactRepresentation next(const CompactRepresentation& rep, const OperationTable& op,
                           const PairClassification* pairs, const Edge& edge);

std::vector<CompactRepresentation> run(const Instance& inst, const OperationTable& op, Mode mode,
                                       const PairClassification* pairs = nullptr);

}  // namespace mcsp::reference
