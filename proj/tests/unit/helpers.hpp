#pragma once

#include <random>
#include <vector>

#include "mcsp/algebra.hpp"
#include "mcsp/instance.hpp"

namespace unit {

inline std::vector<std::vector<mcsp::Value>> full_domains(std::size_t n, std::size_t q) {
    std::vector<mcsp::Value> all;
    for (mcsp::Value v = 0; v < q; ++v) all.push_back(v);
    return std::vector<std::vector<mcsp::Value>>(n, all);
}

inline mcsp::Relation equality(std::size_t q) {
    std::vector<mcsp::ValuePair> pairs;
    for (mcsp::Value v = 0; v < q; ++v) pairs.push_back({v, v});
    return mcsp::Relation(q, pairs);
}

inline mcsp::Relation disequality2() { return mcsp::Relation(2, {{0, 1}, {1, 0}}); }

/// x0 = x1, x1 = x2, x0 != x2 over {0,1}.
inline mcsp::Instance contradiction_chain() {
    return mcsp::Instance(3, 2, full_domains(3, 2),
                          {{0, 1, equality(2)}, {1, 2, equality(2)}, {0, 2, disequality2()}});
}

inline mcsp::AssignmentMap random_map(std::size_t n, std::size_t q, std::mt19937_64& rng) {
    mcsp::AssignmentMap m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = static_cast<mcsp::Value>(rng() % q);
    return m;
}

}  // namespace unit
