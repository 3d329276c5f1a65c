#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mcsp/algebra.hpp"
#include "mcsp/instance.hpp"
#include "mcsp/types.hpp"

namespace mcsp {

enum class Mode { Maltsev, Gmm };

struct SigTriple {
    std::size_t i = 0;
    Value a = 0;
    Value b = 0;
    friend bool operator==(const SigTriple&, const SigTriple&) = default;
    friend auto operator<=>(const SigTriple&, const SigTriple&) = default;
};

/// Projection key: strictly increasing coordinates and the value tuple on them.
/// Ordered by (|I|, I, vals).
struct ProjKey {
    std::vector<std::size_t> coords;
    std::vector<Value> vals;

    friend bool operator==(const ProjKey&, const ProjKey&) = default;
    friend std::strong_ordering operator<=>(const ProjKey& x, const ProjKey& y) {
        if (auto c = x.coords.size() <=> y.coords.size(); c != 0) return c;
        if (auto c = x.coords <=> y.coords; c != 0) return c;
        return x.vals <=> y.vals;
    }
};

using WitnessKey = std::variant<SigTriple, ProjKey>;

using SignatureSet = std::set<SigTriple>;

/// A compact representation: signature keys (i,a,b) and, in GMM mode,
/// projection keys, each mapped to a witness assignment.
///
/// Signature entries live in a dense n*q*q table; projection entries in an
/// ordered map. Iteration order is canonical: signature keys by (i,a,b), then
/// projection keys.
class CompactRepresentation {
public:
    CompactRepresentation() = default;
    CompactRepresentation(Mode mode, std::size_t n, std::size_t q, std::size_t k = 0);

    Mode mode() const noexcept { return mode_; }
    std::size_t n() const noexcept { return n_; }
    std::size_t q() const noexcept { return q_; }
    /// Projection width (GMM only; 0 in Mal'tsev mode).
    std::size_t k() const noexcept { return k_; }

    const MapRef& sig(std::size_t i, Value a, Value b) const { return sig_[slot(i, a, b)]; }
    bool has_sig(std::size_t i, Value a, Value b) const { return sig_[slot(i, a, b)] != nullptr; }
    void set_sig(std::size_t i, Value a, Value b, MapRef map);

    const std::map<ProjKey, MapRef>& projections() const noexcept { return proj_; }
    void set_proj(ProjKey key, MapRef map);

    bool empty() const noexcept { return entries_ == 0; }
    /// Number of stored key -> map entries.
    std::size_t size() const noexcept { return entries_; }

    /// All stored maps in canonical key order (one per key, duplicates kept).
    std::vector<MapRef> witnesses() const;
    /// Stored maps in canonical order with pointer duplicates removed.
    std::vector<MapRef> unique_witnesses() const;

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t idx = 0; idx < sig_.size(); ++idx) {
            if (sig_[idx]) {
                const std::size_t i = idx / (q_ * q_);
                const auto a = static_cast<Value>((idx / q_) % q_);
                const auto b = static_cast<Value>(idx % q_);
                fn(WitnessKey{SigTriple{i, a, b}}, *sig_[idx]);
            }
        }
        for (const auto& [key, map] : proj_) fn(WitnessKey{key}, *map);
    }

    /// Deep equality: same mode, shape, keys and map contents.
    friend bool operator==(const CompactRepresentation& x, const CompactRepresentation& y);

private:
    std::size_t slot(std::size_t i, Value a, Value b) const { return (i * q_ + a) * q_ + b; }

    Mode mode_ = Mode::Maltsev;
    std::size_t n_ = 0;
    std::size_t q_ = 0;
    std::size_t k_ = 0;
    std::vector<MapRef> sig_;
    std::map<ProjKey, MapRef> proj_;
    std::size_t entries_ = 0;
};

/// All strictly increasing coordinate lists of length 1..k over [n], ordered as ProjKey coords.
std::vector<std::vector<std::size_t>> projection_coordinate_sets(std::size_t n, std::size_t k);

/// The initial representation R_0 of the edgeless instance. In GMM mode only
/// minority pairs get signature keys, and every |I| <= k gets projection keys.
/// Throws EmptyDomain.
CompactRepresentation init_representation(const Instance& inst, Mode mode = Mode::Maltsev,
                                          const PairClassification* pairs = nullptr, std::size_t k = 0);

/// Signature keys present, after checking the pairing and prefix-agreement
/// conditions. Throws MalformedRepresentation.
SignatureSet signature_of(const CompactRepresentation& rep);

/// Witness-count bound: 2nq^2, plus sum over |I| <= k of C(n,|I|) q^|I| in GMM mode.
std::size_t size_bound(std::size_t n, std::size_t q, Mode mode, std::size_t k);

struct SolutionCheck {
    bool accepted = true;
    std::string discrepancy;
};

/// Compares the representation with the exhaustively enumerated solution
/// set of `inst`: every map must be a solution, the signatures must agree,
/// and in GMM mode every projection onto |I| <= k coordinates must be covered.
SolutionCheck validate_against_solutions(const CompactRepresentation& rep, const Instance& inst,
                                         std::size_t budget, const PairClassification* pairs = nullptr);

// Serialization: [{"key": {"kind":"sig","i":..,"a":..,"b":..} | {"kind":"proj","I":[..],"vals":[..]}, "map": [..]}]
nlohmann::json representation_to_json(const CompactRepresentation& rep);
/// Throws MalformedRepresentation on bad keys, map lengths, values or duplicates.
CompactRepresentation representation_from_json(const nlohmann::json& j, Mode mode, std::size_t n, std::size_t q,
                                               std::size_t k);

}  // namespace mcsp
