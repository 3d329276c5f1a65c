#include "engine.hpp"

#include <algorithm>
#include <map>
#include <memory>

#include "mcsp/closure.hpp"

namespace mcsp::detail {

namespace {

using RepPtr = std::shared_ptr<const CompactRepresentation>;

CompactRepresentation empty_like(const CompactRepresentation& rep) {
    return CompactRepresentation(rep.mode(), rep.n(), rep.q(), rep.k());
}

struct SigEntry {
    Value a;
    Value b;
    MapRef map;
};

// One level of fixvalues: restrict U to maps with value aj at coordinate j.
CompactRepresentation fix_level(const CompactRepresentation& u, const SeedMatrix& seeds, std::size_t j, Value aj,
                                const Algebra& alg, ExecPolicy policy) {
    const std::size_t n = u.n();
    const std::size_t q = u.q();
    const MapRef& t0 = u.sig(j, aj, aj);
    if (!t0) return empty_like(u);

    CompactRepresentation out = empty_like(u);
    for (std::size_t i = 0; i <= j; ++i) out.set_sig(i, (*t0)[i], (*t0)[i], t0);

    std::vector<std::vector<SigEntry>> found(n);
    parallel_for(n - j - 1, policy, [&](std::size_t offset) {
        const std::size_t i = j + 1 + offset;
        std::vector<TupleCode> wanted;
        for (Value a = 0; a < q; ++a) {
            for (Value b = a; b < q; ++b) {
                if (u.has_sig(i, a, b) && u.has_sig(i, b, a)) {
                    wanted.push_back(static_cast<TupleCode>(aj * q + a));
                    break;
                }
            }
        }
        if (wanted.empty()) return;
        const ProjectionClosure closure(seeds, alg.op, {j, i}, wanted);
        for (TupleCode code : wanted) {
            if (!closure.contains(code)) continue;
            const auto a = static_cast<Value>(code % q);
            const MapRef t = closure.witness(code);
            for (Value b = a; b < q; ++b) {
                if (!u.has_sig(i, a, b) || !u.has_sig(i, b, a)) continue;
                found[i].push_back({a, b, t});
                if (a != b) {
                    found[i].push_back({b, a, make_map(combine(alg, *t, *u.sig(i, a, b), *u.sig(i, b, a)))});
                }
            }
        }
    }, 8);
    for (std::size_t i = j + 1; i < n; ++i) {
        for (auto& e : found[i]) out.set_sig(i, e.a, e.b, std::move(e.map));
    }

    if (alg.mode == Mode::Gmm && !u.projections().empty()) {
        // Keys grouped by coordinate set; the map order keeps each group contiguous.
        std::vector<std::vector<const ProjKey*>> groups;
        for (const auto& [key, map] : u.projections()) {
            if (groups.empty() || groups.back().front()->coords != key.coords) groups.emplace_back();
            groups.back().push_back(&key);
        }
        std::vector<std::vector<std::pair<const ProjKey*, MapRef>>> kept(groups.size());
        parallel_for(groups.size(), policy, [&](std::size_t g) {
            const auto& coords = groups[g].front()->coords;
            const auto at = std::find(coords.begin(), coords.end(), j);
            const bool inside = at != coords.end();
            std::vector<std::size_t> window;
            if (!inside) window.push_back(j);
            window.insert(window.end(), coords.begin(), coords.end());

            std::vector<std::pair<const ProjKey*, TupleCode>> queries;
            for (const ProjKey* key : groups[g]) {
                if (inside && key->vals[static_cast<std::size_t>(at - coords.begin())] != aj) continue;
                TupleCode code = inside ? 0 : aj;
                for (Value v : key->vals) code = static_cast<TupleCode>(code * q + v);
                queries.push_back({key, code});
            }
            if (queries.empty()) return;
            std::vector<TupleCode> wanted;
            for (const auto& qr : queries) wanted.push_back(qr.second);
            const ProjectionClosure closure(seeds, alg.op, window, wanted);
            for (const auto& [key, code] : queries) {
                if (closure.contains(code)) kept[g].push_back({key, closure.witness(code)});
            }
        }, 4);
        for (auto& group : kept) {
            for (auto& [key, map] : group) out.set_proj(*key, std::move(map));
        }
    }
    return out;
}

// A pending H_b computation for coordinate k and the smaller value a.
struct Request {
    std::size_t k;
    Value a;
    const AssignmentMap* prefix;
    std::vector<Value> bs;
    RepPtr fixed;
};

// Computes fixvalues(R, prefix, k) for every request, sharing levels between
// requests whose prefixes agree. Each trie node applies one level.
void descend(const RepPtr& u, std::size_t depth, std::vector<std::size_t> ids, std::vector<Request>& reqs,
             const Algebra& alg, ExecPolicy policy) {
    std::vector<std::size_t> deeper;
    for (auto id : ids) {
        if (reqs[id].k == depth) {
            reqs[id].fixed = u;
        } else {
            deeper.push_back(id);
        }
    }
    if (deeper.empty()) return;
    if (u->empty()) {
        for (auto id : deeper) reqs[id].fixed = u;
        return;
    }
    std::stable_sort(deeper.begin(), deeper.end(), [&](std::size_t x, std::size_t y) {
        return (*reqs[x].prefix)[depth] < (*reqs[y].prefix)[depth];
    });
    std::vector<std::pair<RepPtr, std::vector<std::size_t>>> children;
    {
        const SeedMatrix seeds(*u);
        std::size_t start = 0;
        while (start < deeper.size()) {
            const Value v = (*reqs[deeper[start]].prefix)[depth];
            std::size_t stop = start;
            while (stop < deeper.size() && (*reqs[deeper[stop]].prefix)[depth] == v) ++stop;
            children.emplace_back(std::make_shared<const CompactRepresentation>(
                                      fix_level(*u, seeds, depth, v, alg, policy)),
                                  std::vector<std::size_t>(deeper.begin() + static_cast<std::ptrdiff_t>(start),
                                                           deeper.begin() + static_cast<std::ptrdiff_t>(stop)));
            start = stop;
        }
    }
    for (auto& [child, group] : children) descend(child, depth + 1, std::move(group), reqs, alg, policy);
}

// Smallest allowed code of edge_target(e, k, v) for each v, in v order; empty when none.
std::vector<std::vector<TupleCode>> targets_by_value(const Edge& e, std::size_t k, std::size_t q) {
    std::vector<std::vector<TupleCode>> out(q);
    for (Value v = 0; v < q; ++v) out[v] = allowed_codes(edge_target(e, k, v), q);
    return out;
}

}  // namespace

AssignmentMap combine(const Algebra& alg, const AssignmentMap& t, const AssignmentMap& ta, const AssignmentMap& tb) {
    if (alg.mode == Mode::Gmm) return gmm_combine(alg.op, t, ta, tb);
    const AssignmentMap* args[3] = {&t, &ta, &tb};
    return apply_pointwise(alg.op, std::span<const AssignmentMap* const>(args, 3));
}

std::vector<std::size_t> projection_window(const std::vector<std::size_t>& coords, const Edge& edge) {
    std::vector<std::size_t> w = coords;
    for (std::size_t c : {edge.from, edge.to}) {
        if (std::find(w.begin(), w.end(), c) == w.end()) w.push_back(c);
    }
    return w;
}

CompactRepresentation fixvalues(const CompactRepresentation& rep, const AssignmentMap& prefix, std::size_t len,
                                const Algebra& alg, ExecPolicy policy) {
    CompactRepresentation u = rep;
    for (std::size_t j = 0; j < len && !u.empty(); ++j) {
        const SeedMatrix seeds(u);
        u = fix_level(u, seeds, j, prefix[j], alg, policy);
    }
    return u;
}

CompactRepresentation next(const CompactRepresentation& rep, const Edge& edge, const Algebra& alg,
                           ExecPolicy policy) {
    const std::size_t n = rep.n();
    const std::size_t q = rep.q();
    CompactRepresentation out = empty_like(rep);
    if (rep.empty()) return out;
    const SeedMatrix seeds(rep);

    // H[k][a]: witness of rel x {a} on (i, j, k) in the closure of rep.
    std::vector<std::vector<MapRef>> h(n, std::vector<MapRef>(q));
    std::vector<std::vector<std::vector<TupleCode>>> targets(n);
    parallel_for(n, policy, [&](std::size_t k) {
        targets[k] = targets_by_value(edge, k, q);
        std::vector<TupleCode> wanted;
        for (const auto& codes : targets[k]) {
            if (!codes.empty()) wanted.push_back(codes.front());
        }
        if (wanted.empty()) return;
        const ProjectionClosure closure(seeds, alg.op, edge_coords(edge, k), wanted);
        for (Value a = 0; a < q; ++a) {
            if (auto best = closure.smallest_of(targets[k][a])) h[k][a] = closure.witness(*best);
        }
    }, 4);

    std::vector<Request> reqs;
    for (std::size_t k = 0; k < n; ++k) {
        for (Value a = 0; a < q; ++a) {
            if (!h[k][a]) continue;
            Request r{k, a, h[k][a].get(), {}, nullptr};
            for (Value b = a + 1; b < q; ++b) {
                if (h[k][b] && alg.allows(a, b)) r.bs.push_back(b);
            }
            if (!r.bs.empty()) reqs.push_back(std::move(r));
        }
    }
    if (!reqs.empty()) {
        std::vector<std::size_t> ids(reqs.size());
        for (std::size_t r = 0; r < ids.size(); ++r) ids[r] = r;
        descend(std::make_shared<const CompactRepresentation>(rep), 0, std::move(ids), reqs, alg, policy);
    }

    // H_b for every request, from the closure of the fixed representation.
    std::vector<std::vector<MapRef>> hb(reqs.size());
    parallel_for(reqs.size(), policy, [&](std::size_t r) {
        const Request& req = reqs[r];
        hb[r].assign(req.bs.size(), nullptr);
        if (req.fixed->empty()) return;
        const SeedMatrix fixed_seeds(*req.fixed);
        std::vector<TupleCode> wanted;
        for (Value b : req.bs) wanted.push_back(targets[req.k][b].front());
        const ProjectionClosure closure(fixed_seeds, alg.op, edge_coords(edge, req.k), wanted);
        for (std::size_t t = 0; t < req.bs.size(); ++t) {
            if (auto best = closure.smallest_of(targets[req.k][req.bs[t]])) hb[r][t] = closure.witness(*best);
        }
    }, 4);

    for (std::size_t k = 0; k < n; ++k) {
        for (Value a = 0; a < q; ++a) {
            if (h[k][a]) out.set_sig(k, a, a, h[k][a]);
        }
    }
    for (std::size_t r = 0; r < reqs.size(); ++r) {
        for (std::size_t t = 0; t < reqs[r].bs.size(); ++t) {
            if (!hb[r][t]) continue;
            out.set_sig(reqs[r].k, reqs[r].a, reqs[r].bs[t], h[reqs[r].k][reqs[r].a]);
            out.set_sig(reqs[r].k, reqs[r].bs[t], reqs[r].a, hb[r][t]);
        }
    }

    if (alg.mode == Mode::Gmm) {
        // For each |I| <= k, keep the smallest rel-consistent tuple on I + {i, j} per I-projection.
        const auto sets = projection_coordinate_sets(n, alg.k);
        std::vector<std::vector<std::pair<ProjKey, MapRef>>> keys(sets.size());
        parallel_for(sets.size(), policy, [&](std::size_t s) {
            const auto& coords = sets[s];
            const auto window = projection_window(coords, edge);
            const auto pos_i = static_cast<std::size_t>(std::find(window.begin(), window.end(), edge.from) -
                                                        window.begin());
            const auto pos_j = static_cast<std::size_t>(std::find(window.begin(), window.end(), edge.to) -
                                                        window.begin());
            const ProjectionClosure closure(seeds, alg.op, window);
            std::vector<TupleCode> present(closure.discovered());
            std::sort(present.begin(), present.end());
            std::vector<Value> last;
            for (TupleCode code : present) {
                const auto tuple = closure.decode(code);
                if (!edge.rel.contains(tuple[pos_i], tuple[pos_j])) continue;
                std::vector<Value> vals(tuple.begin(), tuple.begin() + static_cast<std::ptrdiff_t>(coords.size()));
                if (!keys[s].empty() && vals == last) continue;
                last = vals;
                keys[s].push_back({ProjKey{coords, std::move(vals)}, closure.witness(code)});
            }
        }, 4);
        for (auto& group : keys) {
            for (auto& [key, map] : group) out.set_proj(std::move(key), std::move(map));
        }
    }
    return out;
}

std::vector<CompactRepresentation> run(const Instance& inst, const Algebra& alg, ExecPolicy policy) {
    std::vector<CompactRepresentation> reps;
    reps.reserve(inst.m() + 1);
    if (inst.has_empty_domain()) {
        for (std::size_t l = 0; l <= inst.m(); ++l) reps.emplace_back(alg.mode, inst.n(), inst.q(), alg.k);
        return reps;
    }
    reps.push_back(init_representation(inst, alg.mode, alg.pairs, alg.k));
    for (const auto& e : inst.edges()) reps.push_back(next(reps.back(), e, alg, policy));
    return reps;
}

}  // namespace mcsp::detail
