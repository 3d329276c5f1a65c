#include "mcsp/representation.hpp"

#include <algorithm>
#include <unordered_set>

#include "mcsp/error.hpp"
#include "mcsp/oracle.hpp"

namespace mcsp {

CompactRepresentation::CompactRepresentation(Mode mode, std::size_t n, std::size_t q, std::size_t k)
    : mode_(mode), n_(n), q_(q), k_(mode == Mode::Gmm ? k : 0), sig_(n * q * q) {}

void CompactRepresentation::set_sig(std::size_t i, Value a, Value b, MapRef map) {
    auto& cell = sig_[slot(i, a, b)];
    if (!cell && map) ++entries_;
    if (cell && !map) --entries_;
    cell = std::move(map);
}

void CompactRepresentation::set_proj(ProjKey key, MapRef map) {
    if (!map) {
        entries_ -= proj_.erase(key);
        return;
    }
    auto [it, inserted] = proj_.insert_or_assign(std::move(key), std::move(map));
    if (inserted) ++entries_;
}

std::vector<MapRef> CompactRepresentation::witnesses() const {
    std::vector<MapRef> out;
    out.reserve(entries_);
    for (const auto& m : sig_) {
        if (m) out.push_back(m);
    }
    for (const auto& [key, m] : proj_) out.push_back(m);
    return out;
}

std::vector<MapRef> CompactRepresentation::unique_witnesses() const {
    std::vector<MapRef> out;
    std::unordered_set<const AssignmentMap*> seen;
    auto push = [&](const MapRef& m) {
        if (m && seen.insert(m.get()).second) out.push_back(m);
    };
    for (const auto& m : sig_) push(m);
    for (const auto& [key, m] : proj_) push(m);
    return out;
}

bool operator==(const CompactRepresentation& x, const CompactRepresentation& y) {
    if (x.mode_ != y.mode_ || x.n_ != y.n_ || x.q_ != y.q_ || x.k_ != y.k_ || x.entries_ != y.entries_) return false;
    for (std::size_t idx = 0; idx < x.sig_.size(); ++idx) {
        const auto& a = x.sig_[idx];
        const auto& b = y.sig_[idx];
        if (!a != !b) return false;
        if (a && a != b && *a != *b) return false;
    }
    if (x.proj_.size() != y.proj_.size()) return false;
    for (auto it = x.proj_.begin(), jt = y.proj_.begin(); it != x.proj_.end(); ++it, ++jt) {
        if (it->first != jt->first) return false;
        if (it->second != jt->second && *it->second != *jt->second) return false;
    }
    return true;
}

std::vector<std::vector<std::size_t>> projection_coordinate_sets(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t size = 1; size <= std::min(k, n); ++size) {
        std::vector<std::size_t> coords(size);
        for (std::size_t p = 0; p < size; ++p) coords[p] = p;
        while (true) {
            out.push_back(coords);
            std::size_t p = size;
            while (p > 0 && coords[p - 1] == n - size + (p - 1)) --p;
            if (p == 0) break;
            ++coords[p - 1];
            for (std::size_t t = p; t < size; ++t) coords[t] = coords[t - 1] + 1;
        }
    }
    return out;
}

CompactRepresentation init_representation(const Instance& inst, Mode mode, const PairClassification* pairs,
                                          std::size_t k) {
    const std::size_t n = inst.n();
    const std::size_t q = inst.q();
    if (mode == Mode::Gmm && (pairs == nullptr || k < 1)) {
        throw ParameterError("GMM representations need a pair classification and k >= 1");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (inst.domain(i).empty()) throw EmptyDomain(i);
    }
    AssignmentMap base(n);
    for (std::size_t i = 0; i < n; ++i) base[i] = inst.min_domain(i);

    CompactRepresentation rep(mode, n, q, k);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<MapRef> unit(q);
        for (Value a : inst.domain(i)) {
            AssignmentMap e = base;
            e[i] = a;
            unit[a] = make_map(std::move(e));
        }
        for (Value a : inst.domain(i)) {
            for (Value b : inst.domain(i)) {
                if (mode == Mode::Gmm && !pairs->is_minority(a, b)) continue;
                rep.set_sig(i, a, b, unit[a]);
            }
        }
    }
    if (mode == Mode::Gmm) {
        for (const auto& coords : projection_coordinate_sets(n, k)) {
            std::vector<std::size_t> digit(coords.size(), 0);
            while (true) {
                ProjKey key{coords, {}};
                AssignmentMap e = base;
                for (std::size_t p = 0; p < coords.size(); ++p) {
                    const Value v = inst.domain(coords[p])[digit[p]];
                    key.vals.push_back(v);
                    e[coords[p]] = v;
                }
                rep.set_proj(std::move(key), make_map(std::move(e)));
                std::size_t p = coords.size();
                while (p > 0 && ++digit[p - 1] == inst.domain(coords[p - 1]).size()) digit[--p] = 0;
                if (p == 0) break;
            }
        }
    }
    return rep;
}

SignatureSet signature_of(const CompactRepresentation& rep) {
    SignatureSet out;
    const std::size_t n = rep.n();
    const std::size_t q = rep.q();
    auto describe = [](std::size_t i, Value a, Value b) {
        return "(" + std::to_string(i) + "," + std::to_string(a) + "," + std::to_string(b) + ")";
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (Value a = 0; a < q; ++a) {
            for (Value b = 0; b < q; ++b) {
                const auto& ta = rep.sig(i, a, b);
                if (!ta) continue;
                if (ta->size() != n) throw MalformedRepresentation("map at " + describe(i, a, b) + " has wrong length");
                if ((*ta)[i] != a) {
                    throw MalformedRepresentation("map at " + describe(i, a, b) + " does not take value a at i");
                }
                const auto& tb = rep.sig(i, b, a);
                if (!tb) throw MalformedRepresentation("key " + describe(i, a, b) + " has no partner " + describe(i, b, a));
                if (tb->size() != n || (*tb)[i] != b) {
                    throw MalformedRepresentation("partner of " + describe(i, a, b) + " does not take value b at i");
                }
                if (!std::equal(ta->begin(), ta->begin() + static_cast<std::ptrdiff_t>(i), tb->begin())) {
                    throw MalformedRepresentation("witnesses of " + describe(i, a, b) + " disagree below i");
                }
                out.insert({i, a, b});
            }
        }
    }
    return out;
}

std::size_t size_bound(std::size_t n, std::size_t q, Mode mode, std::size_t k) {
    std::size_t bound = 2 * n * q * q;
    if (mode == Mode::Gmm) {
        std::size_t binom = 1;
        std::size_t qpow = 1;
        for (std::size_t s = 1; s <= std::min(k, n); ++s) {
            binom = binom * (n - s + 1) / s;
            qpow *= q;
            bound += binom * qpow;
        }
    }
    return bound;
}

SolutionCheck validate_against_solutions(const CompactRepresentation& rep, const Instance& inst, std::size_t budget,
                                         const PairClassification* pairs) {
    if (rep.mode() == Mode::Gmm && pairs == nullptr) {
        throw ParameterError("GMM validation needs a pair classification");
    }
    const auto solutions = oracle::enumerate_solutions(inst, budget);
    SolutionCheck verdict;
    auto fail = [&](std::string what) {
        verdict.accepted = false;
        verdict.discrepancy = std::move(what);
        return verdict;
    };

    bool bad_member = false;
    std::string bad_key;
    rep.for_each([&](const WitnessKey& key, const AssignmentMap& map) {
        if (bad_member || is_homomorphism(inst, map)) return;
        bad_member = true;
        if (const auto* s = std::get_if<SigTriple>(&key)) {
            bad_key = "sig(" + std::to_string(s->i) + "," + std::to_string(s->a) + "," + std::to_string(s->b) + ")";
        } else {
            bad_key = "proj key";
        }
    });
    if (bad_member) return fail("non-member map at " + bad_key);

    SignatureSet have;
    try {
        have = signature_of(rep);
    } catch (const MalformedRepresentation& e) {
        return fail(e.what());
    }
    const auto want = oracle::signature_of_relation(solutions, inst.n(), rep.mode() == Mode::Gmm ? pairs : nullptr);
    for (const auto& t : want) {
        if (!have.contains(t)) {
            return fail("missing triple (" + std::to_string(t.i) + "," + std::to_string(t.a) + "," +
                        std::to_string(t.b) + ")");
        }
    }
    for (const auto& t : have) {
        if (!want.contains(t)) {
            return fail("extra triple (" + std::to_string(t.i) + "," + std::to_string(t.a) + "," +
                        std::to_string(t.b) + ")");
        }
    }

    if (rep.mode() == Mode::Gmm) {
        std::vector<AssignmentMap> stored;
        rep.for_each([&](const WitnessKey&, const AssignmentMap& m) { stored.push_back(m); });
        const auto want_proj = oracle::projections_of_relation(solutions, inst.n(), rep.k());
        const auto have_proj = oracle::projections_of_relation(stored, inst.n(), rep.k());
        for (const auto& [coords, tuples] : want_proj) {
            auto it = have_proj.find(coords);
            for (const auto& t : tuples) {
                if (it == have_proj.end() || !it->second.contains(t)) {
                    return fail("uncovered projection onto " + std::to_string(coords.size()) + " coordinates");
                }
            }
        }
    }
    return verdict;
}

nlohmann::json representation_to_json(const CompactRepresentation& rep) {
    nlohmann::json out = nlohmann::json::array();
    rep.for_each([&](const WitnessKey& key, const AssignmentMap& map) {
        nlohmann::json jk;
        if (const auto* s = std::get_if<SigTriple>(&key)) {
            jk = {{"kind", "sig"}, {"i", s->i}, {"a", s->a}, {"b", s->b}};
        } else {
            const auto& p = std::get<ProjKey>(key);
            jk = {{"kind", "proj"}, {"I", p.coords}, {"vals", p.vals}};
        }
        out.push_back({{"key", std::move(jk)}, {"map", std::vector<Value>(map.begin(), map.end())}});
    });
    return out;
}

namespace {

std::size_t bounded(const nlohmann::json& j, std::size_t bound, const char* what) {
    if (!j.is_number_unsigned() || j.get<std::size_t>() >= bound) {
        throw MalformedRepresentation(std::string("field '") + what + "' is not an integer in range");
    }
    return j.get<std::size_t>();
}

}  // namespace

CompactRepresentation representation_from_json(const nlohmann::json& j, Mode mode, std::size_t n, std::size_t q,
                                               std::size_t k) {
    if (!j.is_array()) throw MalformedRepresentation("representation must be an array");
    CompactRepresentation rep(mode, n, q, k);
    for (const auto& entry : j) {
        if (!entry.is_object() || entry.size() != 2 || !entry.contains("key") || !entry.contains("map")) {
            throw MalformedRepresentation("entry needs exactly 'key' and 'map'");
        }
        const auto& jm = entry["map"];
        if (!jm.is_array() || jm.size() != n) throw MalformedRepresentation("map has wrong length");
        AssignmentMap map(n);
        for (std::size_t i = 0; i < n; ++i) map[i] = static_cast<Value>(bounded(jm[i], q, "map"));

        const auto& jk = entry["key"];
        if (!jk.is_object() || !jk.contains("kind") || !jk["kind"].is_string()) {
            throw MalformedRepresentation("key needs a 'kind'");
        }
        const auto kind = jk["kind"].get<std::string>();
        if (kind == "sig") {
            if (jk.size() != 4 || !jk.contains("i") || !jk.contains("a") || !jk.contains("b")) {
                throw MalformedRepresentation("sig key needs exactly i, a, b");
            }
            const auto i = bounded(jk["i"], n, "i");
            const auto a = static_cast<Value>(bounded(jk["a"], q, "a"));
            const auto b = static_cast<Value>(bounded(jk["b"], q, "b"));
            if (rep.has_sig(i, a, b)) throw MalformedRepresentation("duplicate sig key");
            rep.set_sig(i, a, b, make_map(std::move(map)));
        } else if (kind == "proj") {
            if (mode != Mode::Gmm) throw MalformedRepresentation("projection keys require GMM mode");
            if (jk.size() != 3 || !jk.contains("I") || !jk.contains("vals") || !jk["I"].is_array() ||
                !jk["vals"].is_array()) {
                throw MalformedRepresentation("proj key needs exactly I and vals arrays");
            }
            ProjKey key;
            for (const auto& c : jk["I"]) key.coords.push_back(bounded(c, n, "I"));
            for (const auto& v : jk["vals"]) key.vals.push_back(static_cast<Value>(bounded(v, q, "vals")));
            if (key.coords.empty() || key.coords.size() > k || key.coords.size() != key.vals.size()) {
                throw MalformedRepresentation("proj key has bad width");
            }
            if (!std::is_sorted(key.coords.begin(), key.coords.end()) ||
                std::adjacent_find(key.coords.begin(), key.coords.end()) != key.coords.end()) {
                throw MalformedRepresentation("proj key coordinates must be strictly increasing");
            }
            if (rep.projections().contains(key)) throw MalformedRepresentation("duplicate proj key");
            rep.set_proj(std::move(key), make_map(std::move(map)));
        } else {
            throw MalformedRepresentation("unknown key kind '" + kind + "'");
        }
    }
    return rep;
}

}  // namespace mcsp
