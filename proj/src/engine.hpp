#pragma once

#include <cstddef>
#include <vector>

#include "mcsp/algebra.hpp"
#include "mcsp/instance.hpp"
#include "mcsp/parallel.hpp"
#include "mcsp/representation.hpp"

namespace mcsp::detail {

/// What the shared engine needs to know about the algebra. `pairs` is null in
/// Mal'tsev mode.
struct Algebra {
    Mode mode;
    const OperationTable& op;
    const PairClassification* pairs;
    std::size_t k;

    bool allows(Value a, Value b) const { return pairs == nullptr || pairs->is_minority(a, b); }
};

/// mu(t, ta, tb) in Mal'tsev mode, the GMM combination otherwise.
AssignmentMap combine(const Algebra& alg, const AssignmentMap& t, const AssignmentMap& ta, const AssignmentMap& tb);

CompactRepresentation fixvalues(const CompactRepresentation& rep, const AssignmentMap& prefix, std::size_t len,
                                const Algebra& alg, ExecPolicy policy);

CompactRepresentation next(const CompactRepresentation& rep, const Edge& edge, const Algebra& alg,
                           ExecPolicy policy);

std::vector<CompactRepresentation> run(const Instance& inst, const Algebra& alg, ExecPolicy policy);

/// Coordinates I followed by the edge endpoints not already in I.
std::vector<std::size_t> projection_window(const std::vector<std::size_t>& coords, const Edge& edge);

}  // namespace mcsp::detail
