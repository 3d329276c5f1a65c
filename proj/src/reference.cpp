#include "mcsp/reference.hpp"

#include <algorithm>
#include <map>

#include "mcsp/error.hpp"

namespace mcsp::reference {

namespace {

std::vector<Value> project(const AssignmentMap& m, const std::vector<std::size_t>& coords) {
    std::vector<Value> out;
    for (auto c : coords) out.push_back(m[c]);
    return out;
}

AssignmentMap combine(const OperationTable& op, const PairClassification* pairs, const AssignmentMap& t,
                      const AssignmentMap& ta, const AssignmentMap& tb) {
    if (pairs != nullptr) return gmm_combine(op, t, ta, tb);
    const AssignmentMap maps[3] = {t, ta, tb};
    return apply_pointwise(op, std::span<const AssignmentMap>(maps, 3));
}

CompactRepresentation level(const CompactRepresentation& u, const OperationTable& op, const PairClassification* pairs,
                            std::size_t j, Value aj) {
    CompactRepresentation out(u.mode(), u.n(), u.q(), u.k());
    if (!u.has_sig(j, aj, aj)) return out;
    const MapRef t0 = u.sig(j, aj, aj);
    for (std::size_t i = 0; i <= j; ++i) out.set_sig(i, (*t0)[i], (*t0)[i], t0);
    for (std::size_t i = j + 1; i < u.n(); ++i) {
        for (Value a = 0; a < u.q(); ++a) {
            for (Value b = a; b < u.q(); ++b) {
                if (!u.has_sig(i, a, b) || !u.has_sig(i, b, a)) continue;
                const MapRef t = reference::nonempty(u, op, ProjectionTarget{{j, i}, {{aj, a}}});
                if (!t) continue;
                out.set_sig(i, a, b, t);
                if (a != b) out.set_sig(i, b, a, make_map(combine(op, pairs, *t, *u.sig(i, a, b), *u.sig(i, b, a))));
            }
        }
    }
    for (const auto& [key, map] : u.projections()) {
        ProjectionTarget target;
        const auto at = std::find(key.coords.begin(), key.coords.end(), j);
        if (at != key.coords.end()) {
            if (key.vals[static_cast<std::size_t>(at - key.coords.begin())] != aj) continue;
            target = {key.coords, {key.vals}};
        } else {
            target.coords.push_back(j);
            target.coords.insert(target.coords.end(), key.coords.begin(), key.coords.end());
            std::vector<Value> tuple{aj};
            tuple.insert(tuple.end(), key.vals.begin(), key.vals.end());
            target.allowed.push_back(std::move(tuple));
        }
        if (MapRef t = reference::nonempty(u, op, target)) out.set_proj(key, t);
    }
    return out;
}

}  // namespace

MapRef nonempty(const CompactRepresentation& rep, const OperationTable& op, const ProjectionTarget& target) {
    std::vector<std::pair<std::vector<Value>, MapRef>> found;
    std::map<std::vector<Value>, std::size_t> seen;
    for (const auto& m : rep.witnesses()) {
        auto tuple = project(*m, target.coords);
        if (seen.emplace(tuple, found.size()).second) found.push_back({std::move(tuple), m});
    }
    const std::size_t r = op.arity();
    bool grew = !found.empty();
    while (grew) {
        grew = false;
        const std::size_t snapshot = found.size();
        std::vector<std::size_t> idx(r, 0);
        std::vector<Value> cell(r);
        std::vector<const AssignmentMap*> args(r);
        while (true) {
            // The projection decides novelty; the full map is built only for new tuples.
            std::vector<Value> tuple(target.coords.size());
            for (std::size_t t = 0; t < tuple.size(); ++t) {
                for (std::size_t p = 0; p < r; ++p) cell[p] = found[idx[p]].first[t];
                tuple[t] = op(cell);
            }
            if (!seen.count(tuple)) {
                for (std::size_t p = 0; p < r; ++p) args[p] = found[idx[p]].second.get();
                auto m = apply_pointwise(op, std::span<const AssignmentMap* const>(args));
                seen.emplace(tuple, found.size());
                found.push_back({std::move(tuple), make_map(std::move(m))});
                grew = true;
            }
            std::size_t p = r;
            while (p > 0 && ++idx[p - 1] == snapshot) idx[--p] = 0;
            if (p == 0) break;
        }
    }
    auto allowed = target.allowed;
    std::sort(allowed.begin(), allowed.end());
    for (const auto& tuple : allowed) {
        if (auto it = seen.find(tuple); it != seen.end()) return found[it->second].second;
    }
    return nullptr;
}

CompactRepresentation fixvalues(const CompactRepresentation& rep, const OperationTable& op,
                                const PairClassification* pairs, const AssignmentMap& prefix, std::size_t len) {
    CompactRepresentation u = rep;
    for (std::size_t j = 0; j < len; ++j) u = level(u, op, pairs, j, prefix[j]);
    return u;
}

CompactRepresentation next(const CompactRepresentation& rep, const OperationTable& op,
                           const PairClassification* pairs, const Edge& edge) {
    const std::size_t n = rep.n();
    const std::size_t q = rep.q();
    CompactRepresentation out(rep.mode(), n, q, rep.k());
    for (std::size_t k = 0; k < n; ++k) {
        for (Value a = 0; a < q; ++a) {
            for (Value b = a; b < q; ++b) {
                if (pairs != nullptr && !pairs->is_minority(a, b)) continue;
                const MapRef ha = reference::nonempty(rep, op, edge_target(edge, k, a));
                if (!ha) continue;
                if (a == b) {
                    out.set_sig(k, a, a, ha);
                    continue;
                }
                const auto fixed = fixvalues(rep, op, pairs, *ha, k);
                const MapRef hb = reference::nonempty(fixed, op, edge_target(edge, k, b));
                if (!hb) continue;
                out.set_sig(k, a, b, ha);
                out.set_sig(k, b, a, hb);
            }
        }
    }
    if (rep.mode() == Mode::Gmm) {
        for (const auto& coords : projection_coordinate_sets(n, rep.k())) {
            ProjectionTarget target;
            target.coords = coords;
            for (std::size_t c : {edge.from, edge.to}) {
                if (std::find(target.coords.begin(), target.coords.end(), c) == target.coords.end()) {
                    target.coords.push_back(c);
                }
            }
            const auto pos_i = std::find(target.coords.begin(), target.coords.end(), edge.from) - target.coords.begin();
            const auto pos_j = std::find(target.coords.begin(), target.coords.end(), edge.to) - target.coords.begin();
            // Every value tuple on I, one query each.
            std::vector<Value> vals(coords.size(), 0);
            while (true) {
                ProjectionTarget t = target;
                for (auto p : edge.rel.pairs()) {
                    std::vector<Value> tuple(target.coords.size(), 0);
                    std::copy(vals.begin(), vals.end(), tuple.begin());
                    bool ok = true;
                    for (auto [pos, v] : {std::pair{pos_i, p.first}, std::pair{pos_j, p.second}}) {
                        const auto upos = static_cast<std::size_t>(pos);
                        if (upos < coords.size()) {
                            ok = ok && tuple[upos] == v;
                        } else {
                            tuple[upos] = v;
                        }
                    }
                    if (edge.from == edge.to) ok = ok && p.first == p.second;
                    if (ok) t.allowed.push_back(std::move(tuple));
                }
                if (MapRef m = reference::nonempty(rep, op, t)) out.set_proj(ProjKey{coords, vals}, m);
                std::size_t p = vals.size();
                while (p > 0 && ++vals[p - 1] == q) vals[--p] = 0;
                if (p == 0) break;
            }
        }
    }
    return out;
}

std::vector<CompactRepresentation> run(const Instance& inst, const OperationTable& op, Mode mode,
                                       const PairClassification* pairs) {
    if ((mode == Mode::Gmm) != (pairs != nullptr)) throw ParameterError("pairs must be given exactly in GMM mode");
    const std::size_t k = mode == Mode::Gmm ? op.arity() - 1 : 0;
    std::vector<CompactRepresentation> reps;
    if (inst.has_empty_domain()) {
        for (std::size_t l = 0; l <= inst.m(); ++l) reps.emplace_back(mode, inst.n(), inst.q(), k);
        return reps;
    }
    reps.push_back(init_representation(inst, mode, pairs, k));
    for (const auto& e : inst.edges()) reps.push_back(next(reps.back(), op, pairs, e));
    return reps;
}

}  // namespace mcsp::reference
