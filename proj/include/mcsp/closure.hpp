#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mcsp/algebra.hpp"
#include "mcsp/instance.hpp"
#include "mcsp/representation.hpp"
#include "mcsp/types.hpp"

namespace mcsp {

/// Distinct coordinates and the value tuples a closure witness may project to.
struct ProjectionTarget {
    std::vector<std::size_t> coords;
    std::vector<std::vector<Value>> allowed;
};

/// Coordinates (i, j, k) of an edge (i,j) plus a third coordinate k, with
/// repeated coordinates merged in first-occurrence order.
std::vector<std::size_t> edge_coords(const Edge& e, std::size_t k);

/// Target rel x {a} on edge_coords(e, k). Tuples that disagree on a merged
/// coordinate are dropped.
ProjectionTarget edge_target(const Edge& e, std::size_t k, Value a);

/// Column-major copy of a representation's distinct witness maps (by
/// pointer), in canonical key order.
class SeedMatrix {
public:
    SeedMatrix() = default;
    explicit SeedMatrix(const CompactRepresentation& rep);

    std::size_t size() const noexcept { return maps_.size(); }
    std::size_t n() const noexcept { return n_; }
    const Value* column(std::size_t c) const { return cols_.data() + c * maps_.size(); }
    const MapRef& map(std::size_t s) const { return maps_[s]; }

private:
    std::size_t n_ = 0;
    std::vector<MapRef> maps_;
    std::vector<Value> cols_;
};

/// Base-q code of a tuple, most significant coordinate first, so code order
/// is lexicographic tuple order.
using TupleCode = std::uint32_t;

/// Fixpoint of the seeds' projection onto `coords` under coordinatewise
/// application of an operation.
///
/// Seeds are scanned in order and the first map for each projection is kept.
/// Each round then applies the operation to every index tuple over the
/// current list in lexicographic order and appends unseen projections. Index
/// tuples made only of entries from earlier rounds are skipped, since they
/// cannot produce anything new. Witness maps are rebuilt from recorded
/// parents on demand.
class ProjectionClosure {
public:
    /// Construction stops early once every code in `wanted` has been
    /// discovered; an empty `wanted` runs to the fixpoint. Stopping early
    /// never changes the witness of a discovered code.
    ProjectionClosure(const SeedMatrix& seeds, const OperationTable& op, std::vector<std::size_t> coords,
                      std::span<const TupleCode> wanted = {});

    std::size_t width() const noexcept { return coords_.size(); }
    const std::vector<std::size_t>& coords() const noexcept { return coords_; }

    TupleCode encode(std::span<const Value> tuple) const;
    std::vector<Value> decode(TupleCode code) const;

    bool contains(TupleCode code) const { return index_[code] >= 0; }
    /// Codes in discovery order.
    const std::vector<TupleCode>& discovered() const noexcept { return codes_; }

    /// Smallest candidate present in the closure; candidates must be sorted ascending.
    std::optional<TupleCode> smallest_of(std::span<const TupleCode> candidates) const;

    /// The first-discovered witness for `code`, which must be present.
    MapRef witness(TupleCode code) const;

private:
    void run();
    bool add(TupleCode code, std::int64_t seed, const std::size_t* parents);

    const SeedMatrix* seeds_;
    const OperationTable* op_;
    std::vector<std::size_t> coords_;
    std::size_t q_;
    std::size_t arity_;
    std::size_t space_ = 1;
    std::vector<std::int32_t> index_;
    std::vector<unsigned char> wanted_;
    std::size_t wanted_left_ = 0;
    std::vector<TupleCode> codes_;
    std::vector<Value> digits_;
    /// Seed index for seed entries, -1 for generated ones.
    std::vector<std::int64_t> seed_of_;
    std::vector<std::size_t> parents_;
    mutable std::vector<MapRef> cache_;
};

/// A map in the closure of rep's witnesses whose projection onto
/// target.coords is the lexicographically smallest reachable allowed tuple,
/// or null when none is reachable.
MapRef nonempty(const CompactRepresentation& rep, const OperationTable& op, const ProjectionTarget& target);

/// Sorted codes of the allowed tuples of `target` (duplicates removed).
std::vector<TupleCode> allowed_codes(const ProjectionTarget& target, std::size_t q);

}  // namespace mcsp
