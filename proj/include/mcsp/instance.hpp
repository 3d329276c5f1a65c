#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcsp/algebra.hpp"
#include "mcsp/types.hpp"

namespace mcsp {

/// A binary constraint relation on [q]. Pairs are kept sorted and unique,
/// with a dense membership bitmap alongside.
class Relation {
public:
    Relation() = default;
    Relation(std::size_t q, std::vector<ValuePair> pairs);

    std::size_t q() const noexcept { return q_; }
    std::span<const ValuePair> pairs() const noexcept { return pairs_; }
    std::size_t size() const noexcept { return pairs_.size(); }
    bool empty() const noexcept { return pairs_.empty(); }
    bool contains(Value a, Value b) const { return member_[a * q_ + b] != 0; }

    Relation intersect(const Relation& other) const;

    friend bool operator==(const Relation& a, const Relation& b) { return a.q_ == b.q_ && a.pairs_ == b.pairs_; }

private:
    std::size_t q_ = 0;
    std::vector<ValuePair> pairs_;
    std::vector<unsigned char> member_;
};

struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    Relation rel;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// A binary CSP instance as a digraph with per-variable domains. After
/// construction edges are sorted by (from, to) with at most one edge per
/// ordered pair, and every edge tuple lies inside the endpoint domains.
class Instance {
public:
    Instance() = default;
    /// Normalizes: duplicate (from,to) edges are intersected and edges sorted.
    /// Throws DomainViolation if an edge tuple leaves the endpoint domains and
    /// ParameterError for out-of-range indices or values.
    Instance(std::size_t n, std::size_t q, std::vector<std::vector<Value>> domains, std::vector<Edge> edges);

    std::size_t n() const noexcept { return n_; }
    std::size_t q() const noexcept { return q_; }
    std::size_t m() const noexcept { return edges_.size(); }

    std::span<const Value> domain(std::size_t i) const { return domains_[i]; }
    bool in_domain(std::size_t i, Value v) const { return domain_member_[i * q_ + v] != 0; }
    Value min_domain(std::size_t i) const { return domains_[i].front(); }
    bool has_empty_domain() const;

    std::span<const Edge> edges() const noexcept { return edges_; }
    const Edge& edge(std::size_t l) const { return edges_[l]; }

    friend bool operator==(const Instance& a, const Instance& b) {
        return a.n_ == b.n_ && a.q_ == b.q_ && a.domains_ == b.domains_ && a.edges_ == b.edges_;
    }

private:
    std::size_t n_ = 0;
    std::size_t q_ = 0;
    std::vector<std::vector<Value>> domains_;
    std::vector<unsigned char> domain_member_;
    std::vector<Edge> edges_;
};

/// h(i) in D_i for every i and (h(from), h(to)) in rel for every edge.
bool is_homomorphism(const Instance& inst, const AssignmentMap& h);

struct CompatibilityVerdict {
    bool accepted = true;
    /// Human-readable name of the first failing relation, e.g. "domain 3" or "edge (0,1)".
    std::string failing;
};

/// Accepts iff `op` preserves every domain and every edge relation.
CompatibilityVerdict check_compatibility(const Instance& inst, const OperationTable& op);

/// The instance restricted to its first `l` edges in sorted order.
Instance prefix_instance(const Instance& inst, std::size_t l);

// Instance file format:
// {"n": int, "q": int, "domains": [[int,...],...], "edges": [{"from": int, "to": int, "rel": [[a,b],...]}]}
nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);
Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& inst);

nlohmann::json edge_to_json(const Edge& e);

}  // namespace mcsp
