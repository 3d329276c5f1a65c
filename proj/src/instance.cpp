#include "mcsp/instance.hpp"

#include <algorithm>
#include <map>

#include "mcsp/error.hpp"

namespace mcsp {

Relation::Relation(std::size_t q, std::vector<ValuePair> pairs) : q_(q), pairs_(std::move(pairs)) {
    std::sort(pairs_.begin(), pairs_.end());
    pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
    member_.assign(q_ * q_, 0);
    for (auto p : pairs_) {
        if (p.first >= q_ || p.second >= q_) throw ParameterError("relation value out of range");
        member_[p.first * q_ + p.second] = 1;
    }
}

Relation Relation::intersect(const Relation& other) const {
    std::vector<ValuePair> common;
    std::set_intersection(pairs_.begin(), pairs_.end(), other.pairs_.begin(), other.pairs_.end(),
                          std::back_inserter(common));
    return Relation(q_, std::move(common));
}

Instance::Instance(std::size_t n, std::size_t q, std::vector<std::vector<Value>> domains, std::vector<Edge> edges)
    : n_(n), q_(q), domains_(std::move(domains)) {
    if (n == 0) throw ParameterError("instance needs at least one variable");
    if (q == 0) throw ParameterError("domain size must be positive");
    if (domains_.size() != n) throw ParameterError("expected one domain per variable");
    domain_member_.assign(n * q, 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto& d = domains_[i];
        std::sort(d.begin(), d.end());
        d.erase(std::unique(d.begin(), d.end()), d.end());
        for (Value v : d) {
            if (v >= q) throw ParameterError("domain value out of range for variable " + std::to_string(i));
            domain_member_[i * q + v] = 1;
        }
    }

    std::map<std::pair<std::size_t, std::size_t>, Relation> merged;
    for (auto& e : edges) {
        if (e.from >= n || e.to >= n) throw ParameterError("edge endpoint out of range");
        if (e.rel.q() != q) throw ParameterError("edge relation has the wrong domain size");
        for (auto p : e.rel.pairs()) {
            if (!in_domain(e.from, p.first) || !in_domain(e.to, p.second)) {
                throw DomainViolation("edge (" + std::to_string(e.from) + "," + std::to_string(e.to) +
                                      ") tuple (" + std::to_string(p.first) + "," + std::to_string(p.second) +
                                      ") lies outside the endpoint domains");
            }
        }
        auto key = std::make_pair(e.from, e.to);
        auto it = merged.find(key);
        if (it == merged.end()) {
            merged.emplace(key, std::move(e.rel));
        } else {
            it->second = it->second.intersect(e.rel);
        }
    }
    edges_.reserve(merged.size());
    for (auto& [key, rel] : merged) edges_.push_back(Edge{key.first, key.second, std::move(rel)});
}

bool Instance::has_empty_domain() const {
    return std::any_of(domains_.begin(), domains_.end(), [](const auto& d) { return d.empty(); });
}

bool is_homomorphism(const Instance& inst, const AssignmentMap& h) {
    if (h.size() != inst.n()) return false;
    for (std::size_t i = 0; i < inst.n(); ++i) {
        if (h[i] >= inst.q() || !inst.in_domain(i, h[i])) return false;
    }
    for (const auto& e : inst.edges()) {
        if (!e.rel.contains(h[e.from], h[e.to])) return false;
    }
    return true;
}

CompatibilityVerdict check_compatibility(const Instance& inst, const OperationTable& op) {
    if (op.q() != inst.q()) return {false, "algebra domain size " + std::to_string(op.q()) + " != instance q"};
    for (std::size_t i = 0; i < inst.n(); ++i) {
        if (!preserves_unary(op, inst.domain(i))) return {false, "domain " + std::to_string(i)};
    }
    for (const auto& e : inst.edges()) {
        if (!preserves_binary(op, e.rel.pairs())) {
            return {false, "edge (" + std::to_string(e.from) + "," + std::to_string(e.to) + ")"};
        }
    }
    return {true, {}};
}

Instance prefix_instance(const Instance& inst, std::size_t l) {
    if (l > inst.m()) {
        throw IndexOutOfRange("prefix length " + std::to_string(l) + " exceeds edge count " +
                              std::to_string(inst.m()));
    }
    std::vector<std::vector<Value>> domains;
    for (std::size_t i = 0; i < inst.n(); ++i) domains.emplace_back(inst.domain(i).begin(), inst.domain(i).end());
    std::vector<Edge> edges(inst.edges().begin(), inst.edges().begin() + static_cast<std::ptrdiff_t>(l));
    return Instance(inst.n(), inst.q(), std::move(domains), std::move(edges));
}

nlohmann::json edge_to_json(const Edge& e) {
    nlohmann::json rel = nlohmann::json::array();
    for (auto p : e.rel.pairs()) rel.push_back({p.first, p.second});
    return {{"from", e.from}, {"to", e.to}, {"rel", rel}};
}

nlohmann::json instance_to_json(const Instance& inst) {
    nlohmann::json j;
    j["n"] = inst.n();
    j["q"] = inst.q();
    j["domains"] = nlohmann::json::array();
    for (std::size_t i = 0; i < inst.n(); ++i) {
        j["domains"].push_back(std::vector<Value>(inst.domain(i).begin(), inst.domain(i).end()));
    }
    j["edges"] = nlohmann::json::array();
    for (const auto& e : inst.edges()) j["edges"].push_back(edge_to_json(e));
    return j;
}

namespace {

std::size_t read_index(const nlohmann::json& j, const std::string& path, std::size_t bound) {
    if (!j.is_number_unsigned()) throw ParseError(path, "expected a non-negative integer");
    const auto v = j.get<std::size_t>();
    if (v >= bound) throw ParseError(path, "value " + std::to_string(v) + " out of range");
    return v;
}

}  // namespace

Instance instance_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("$", "instance must be a JSON object");
    for (const char* field : {"n", "q", "domains", "edges"}) {
        if (!j.contains(field)) throw ParseError("$", std::string("missing field '") + field + "'");
    }
    const auto n = read_index(j["n"], "$.n", 1u << 20);
    const auto q = read_index(j["q"], "$.q", 1u << 16);
    if (n == 0) throw ParseError("$.n", "need at least one variable");
    if (q == 0) throw ParseError("$.q", "domain size must be positive");

    const auto& jd = j["domains"];
    if (!jd.is_array() || jd.size() != n) throw ParseError("$.domains", "expected an array of n domains");
    std::vector<std::vector<Value>> domains(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string path = "$.domains[" + std::to_string(i) + "]";
        if (!jd[i].is_array()) throw ParseError(path, "expected an array");
        for (std::size_t t = 0; t < jd[i].size(); ++t) {
            domains[i].push_back(
                static_cast<Value>(read_index(jd[i][t], path + "[" + std::to_string(t) + "]", q)));
        }
    }

    const auto& je = j["edges"];
    if (!je.is_array()) throw ParseError("$.edges", "expected an array");
    std::vector<Edge> edges;
    for (std::size_t l = 0; l < je.size(); ++l) {
        const std::string path = "$.edges[" + std::to_string(l) + "]";
        const auto& e = je[l];
        if (!e.is_object() || !e.contains("from") || !e.contains("to") || !e.contains("rel")) {
            throw ParseError(path, "edge needs 'from', 'to' and 'rel'");
        }
        Edge edge;
        edge.from = read_index(e["from"], path + ".from", n);
        edge.to = read_index(e["to"], path + ".to", n);
        if (!e["rel"].is_array()) throw ParseError(path + ".rel", "expected an array of pairs");
        std::vector<ValuePair> pairs;
        for (std::size_t t = 0; t < e["rel"].size(); ++t) {
            const std::string ppath = path + ".rel[" + std::to_string(t) + "]";
            const auto& p = e["rel"][t];
            if (!p.is_array() || p.size() != 2) throw ParseError(ppath, "expected a pair [a,b]");
            pairs.push_back({static_cast<Value>(read_index(p[0], ppath + "[0]", q)),
                             static_cast<Value>(read_index(p[1], ppath + "[1]", q))});
        }
        edge.rel = Relation(q, std::move(pairs));
        edges.push_back(std::move(edge));
    }
    return Instance(n, q, std::move(domains), std::move(edges));
}

Instance parse_instance(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("byte " + std::to_string(e.byte), e.what());
    }
    return instance_from_json(j);
}

std::string serialize_instance(const Instance& inst) { return instance_to_json(inst).dump() + "\n"; }

}  // namespace mcsp
