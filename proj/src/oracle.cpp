#include "mcsp/oracle.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <set>

#include "mcsp/error.hpp"

namespace mcsp::oracle {

std::vector<AssignmentMap> enumerate_solutions(const Instance& inst, std::size_t budget) {
    const std::size_t n = inst.n();
    const std::size_t q = inst.q();
    std::size_t space = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (space > budget / q) {
            throw BudgetExceeded("q^n exceeds the enumeration budget of " + std::to_string(budget));
        }
        space *= q;
    }

    // Edges grouped by the later endpoint so each is checked once both ends are set.
    std::vector<std::vector<const Edge*>> closing(n);
    for (const auto& e : inst.edges()) closing[std::max(e.from, e.to)].push_back(&e);

    std::vector<AssignmentMap> out;
    if (inst.has_empty_domain()) return out;
    AssignmentMap h(n);
    std::vector<std::size_t> pos(n, 0);
    std::size_t depth = 0;
    // Iterative depth-first search in lexicographic order.
    while (true) {
        const auto dom = inst.domain(depth);
        bool placed = false;
        while (pos[depth] < dom.size()) {
            h[depth] = dom[pos[depth]++];
            bool ok = true;
            for (const Edge* e : closing[depth]) {
                if (!e->rel.contains(h[e->from], h[e->to])) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                placed = true;
                break;
            }
        }
        if (placed) {
            if (depth + 1 == n) {
                out.push_back(h);
            } else {
                ++depth;
                pos[depth] = 0;
            }
            continue;
        }
        if (depth == 0) break;
        --depth;
    }
    return out;
}

SignatureSet signature_of_relation(const std::vector<AssignmentMap>& sorted_maps, std::size_t n,
                                   const PairClassification* pairs) {
    SignatureSet out;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t start = 0;
        while (start < sorted_maps.size()) {
            std::size_t stop = start + 1;
            while (stop < sorted_maps.size() &&
                   std::equal(sorted_maps[start].begin(), sorted_maps[start].begin() + static_cast<std::ptrdiff_t>(i),
                              sorted_maps[stop].begin())) {
                ++stop;
            }
            std::set<Value> seen;
            for (std::size_t t = start; t < stop; ++t) seen.insert(sorted_maps[t][i]);
            for (Value a : seen) {
                for (Value b : seen) {
                    if (pairs != nullptr && !pairs->is_minority(a, b)) continue;
                    out.insert({i, a, b});
                }
            }
            start = stop;
        }
    }
    return out;
}

SignatureSet brute_signature(const Instance& inst, std::size_t budget, const PairClassification* pairs) {
    return signature_of_relation(enumerate_solutions(inst, budget), inst.n(), pairs);
}

ProjectionSets projections_of_relation(const std::vector<AssignmentMap>& maps, std::size_t n, std::size_t k) {
    ProjectionSets out;
    for (const auto& coords : projection_coordinate_sets(n, k)) {
        auto& tuples = out[coords];
        for (const auto& m : maps) {
            std::vector<Value> t;
            t.reserve(coords.size());
            for (auto c : coords) t.push_back(m[c]);
            tuples.insert(std::move(t));
        }
    }
    return out;
}

ProjectionSets brute_projections(const Instance& inst, std::size_t k, std::size_t budget) {
    return projections_of_relation(enumerate_solutions(inst, budget), inst.n(), k);
}

std::string family_name(Family f) {
    switch (f) {
        case Family::LinP: return "lin_p";
        case Family::Coset: return "coset";
        case Family::RandomInvariant: return "random_invariant";
        case Family::RandomGmm: return "random_gmm";
    }
    return "unknown";
}

std::optional<Family> family_from_name(const std::string& name) {
    for (auto f : {Family::LinP, Family::Coset, Family::RandomInvariant, Family::RandomGmm}) {
        if (family_name(f) == name) return f;
    }
    return std::nullopt;
}

FiniteGroup cyclic_group(std::size_t order) {
    if (order == 0) throw ParameterError("group order must be positive");
    FiniteGroup g;
    g.order = order;
    g.mult.resize(order * order);
    g.inverse.resize(order);
    for (std::size_t x = 0; x < order; ++x) {
        for (std::size_t y = 0; y < order; ++y) g.mult[x * order + y] = static_cast<Value>((x + y) % order);
        g.inverse[x] = static_cast<Value>((order - x) % order);
    }
    return g;
}

FiniteGroup symmetric_group_s3() {
    // Elements are the permutations of {0,1,2} in lexicographic order; element 0 is the identity.
    std::vector<std::array<int, 3>> perms;
    std::array<int, 3> p{0, 1, 2};
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    auto index = [&](const std::array<int, 3>& x) {
        return static_cast<Value>(std::find(perms.begin(), perms.end(), x) - perms.begin());
    };
    FiniteGroup g;
    g.order = 6;
    g.mult.resize(36);
    g.inverse.resize(6);
    for (std::size_t x = 0; x < 6; ++x) {
        for (std::size_t y = 0; y < 6; ++y) {
            std::array<int, 3> c{};
            for (int t = 0; t < 3; ++t) c[t] = perms[x][perms[y][t]];  // x after y
            g.mult[x * 6 + y] = index(c);
        }
        std::array<int, 3> inv{};
        for (int t = 0; t < 3; ++t) inv[perms[x][t]] = t;
        g.inverse[x] = index(inv);
    }
    return g;
}

FiniteGroup group_by_name(const std::string& name) {
    if (name == "s3") return symmetric_group_s3();
    if (name.size() >= 2 && name[0] == 'z') {
        std::size_t order = 0;
        try {
            order = std::stoul(name.substr(1));
        } catch (const std::exception&) {
            throw ParameterError("bad group name '" + name + "'");
        }
        if (order < 2 || order > 64) throw ParameterError("cyclic group order must be in [2,64]");
        return cyclic_group(order);
    }
    throw ParameterError("unknown group '" + name + "'");
}

namespace {

using Rng = std::mt19937_64;

std::size_t uniform(Rng& rng, std::size_t bound) {
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

// Closure of a pair set under coordinatewise application of `op`.
std::vector<ValuePair> close_pairs(const OperationTable& op, std::vector<ValuePair> pairs) {
    const std::size_t q = op.q();
    const std::size_t r = op.arity();
    std::vector<unsigned char> member(q * q, 0);
    std::vector<ValuePair> list;
    for (auto p : pairs) {
        if (!member[p.first * q + p.second]) {
            member[p.first * q + p.second] = 1;
            list.push_back(p);
        }
    }
    bool grew = true;
    std::vector<Value> left(r), right(r);
    while (grew) {
        grew = false;
        const std::size_t size = list.size();
        std::vector<std::size_t> digits(r, 0);
        while (true) {
            for (std::size_t p = 0; p < r; ++p) {
                left[p] = list[digits[p]].first;
                right[p] = list[digits[p]].second;
            }
            const ValuePair img{op(left), op(right)};
            if (!member[img.first * q + img.second]) {
                member[img.first * q + img.second] = 1;
                list.push_back(img);
                grew = true;
            }
            std::size_t p = r;
            while (p > 0 && ++digits[p - 1] == size) digits[--p] = 0;
            if (p == 0) break;
        }
    }
    std::sort(list.begin(), list.end());
    return list;
}

std::vector<Value> close_values(const OperationTable& op, std::vector<Value> values) {
    std::vector<ValuePair> diag;
    for (Value v : values) diag.push_back({v, v});
    std::vector<Value> out;
    for (auto p : close_pairs(op, diag)) out.push_back(p.first);
    return out;
}

std::vector<ValuePair> restrict_to(const std::vector<ValuePair>& rel, const std::vector<std::vector<Value>>& domains,
                                   std::size_t i, std::size_t j) {
    std::vector<ValuePair> out;
    for (auto p : rel) {
        if (std::binary_search(domains[i].begin(), domains[i].end(), p.first) &&
            std::binary_search(domains[j].begin(), domains[j].end(), p.second)) {
            out.push_back(p);
        }
    }
    return out;
}

// Picks `count` distinct ordered pairs, avoiding `used`. Self-loops only when allowed.
std::vector<std::pair<std::size_t, std::size_t>> pick_pairs(Rng& rng, std::size_t n, std::size_t count,
                                                            std::set<std::pair<std::size_t, std::size_t>>& used,
                                                            bool loops) {
    const std::size_t available = (loops ? n * n : n * (n - 1)) - used.size();
    if (count > available) throw ParameterError("not enough distinct variable pairs for the requested edge count");
    std::vector<std::pair<std::size_t, std::size_t>> out;
    while (out.size() < count) {
        std::size_t i = uniform(rng, n);
        std::size_t j = uniform(rng, n);
        if (i == j && (!loops || !coin(rng, 0.15))) continue;
        if (!used.insert({i, j}).second) continue;
        out.push_back({i, j});
    }
    return out;
}

// Distinct vertices v_0..v_{L-1} forming a cycle whose ordered edges are unused.
std::vector<std::size_t> pick_cycle(Rng& rng, std::size_t n, std::size_t length,
                                    std::set<std::pair<std::size_t, std::size_t>>& used) {
    std::vector<std::size_t> verts(n);
    for (std::size_t i = 0; i < n; ++i) verts[i] = i;
    std::shuffle(verts.begin(), verts.end(), rng);
    verts.resize(length);
    for (std::size_t t = 0; t < length; ++t) used.insert({verts[t], verts[(t + 1) % length]});
    return verts;
}

OperationTable random_gmm_operation(Rng& rng, std::size_t q) {
    PairClassification kinds(q);
    for (Value a = 0; a < q; ++a) {
        for (Value b = a + 1; b < q; ++b) kinds.set(a, b, coin(rng, 0.5) ? PairKind::Majority : PairKind::Minority);
    }
    std::vector<Value> entries(q * q * q);
    for (Value x = 0; x < q; ++x) {
        for (Value y = 0; y < q; ++y) {
            for (Value z = 0; z < q; ++z) {
                Value v = 0;
                if (x == y && y == z) {
                    v = x;
                } else if (x == y || y == z || x == z) {
                    const Value rep = (x == y) ? x : z;                   // repeated value
                    const Value odd = (x == y) ? z : (y == z ? x : y);    // discrepant value
                    if (kinds(rep, odd) == PairKind::Majority) {
                        v = rep;
                    } else if (x == z) {
                        v = coin(rng, 0.5) ? rep : odd;  // middle discrepancy is unconstrained
                    } else {
                        v = odd;
                    }
                } else {
                    v = coin(rng, 0.5) ? x : static_cast<Value>(uniform(rng, q));
                }
                entries[(x * q + y) * q + z] = v;
            }
        }
    }
    return OperationTable(q, 3, std::move(entries));
}

Generated generate_lin_p(const GeneratorSpec& spec, Rng& rng) {
    const std::size_t p = spec.p;
    const std::size_t n = spec.n;
    if (p < 2) throw ParameterError("lin_p needs p >= 2");
    Generated g{Instance{}, make_affine_maltsev(p), std::nullopt};
    AssignmentMap h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = static_cast<Value>(uniform(rng, p));
    std::vector<std::vector<Value>> domains(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (coin(rng, 0.1)) {
            domains[i] = {h[i]};
        } else {
            for (Value v = 0; v < p; ++v) domains[i].push_back(v);
        }
    }
    auto translation = [&](std::size_t i, std::size_t j, std::size_t c) {
        std::vector<ValuePair> rel;
        for (Value a = 0; a < p; ++a) rel.push_back({a, static_cast<Value>((a + c) % p)});
        return Edge{i, j, Relation(p, restrict_to(rel, domains, i, j))};
    };

    std::vector<Edge> edges;
    std::set<std::pair<std::size_t, std::size_t>> used;
    if (!spec.satisfiable) {
        if (n < 2 || spec.m < 2) throw ParameterError("an unsatisfiable lin_p instance needs n >= 2 and m >= 2");
        const std::size_t length = 2 + uniform(rng, std::min(n, spec.m) - 1);
        const auto cycle = pick_cycle(rng, n, length, used);
        std::size_t sum = 0;
        for (std::size_t t = 0; t < length; ++t) {
            std::size_t c = uniform(rng, p);
            if (t + 1 == length) c = (p - sum % p + 1 + uniform(rng, p - 1)) % p;  // total is nonzero
            sum += c;
            edges.push_back(translation(cycle[t], cycle[(t + 1) % length], c));
        }
    }
    const std::size_t rest = spec.m - edges.size();
    for (auto [i, j] : pick_pairs(rng, n, rest, used, false)) {
        edges.push_back(translation(i, j, (h[j] + p - h[i]) % p));
    }
    g.instance = Instance(n, p, std::move(domains), std::move(edges));
    if (spec.satisfiable) g.planted = h;
    return g;
}

Generated generate_coset(const GeneratorSpec& spec, Rng& rng) {
    const FiniteGroup grp = group_by_name(spec.group);
    const std::size_t q = grp.order;
    const std::size_t n = spec.n;
    Generated g{Instance{}, make_group_maltsev(q, grp.mult, grp.inverse), std::nullopt};
    AssignmentMap h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = static_cast<Value>(uniform(rng, q));

    auto cyclic_subgroup = [&](Value gen) {
        std::vector<Value> out{grp.identity};
        for (Value x = gen; x != grp.identity; x = grp(x, gen)) out.push_back(x);
        return out;
    };
    std::vector<std::vector<Value>> domains(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (coin(rng, 0.2)) {
            for (Value k : cyclic_subgroup(static_cast<Value>(uniform(rng, q)))) domains[i].push_back(grp(h[i], k));
        } else {
            for (Value v = 0; v < q; ++v) domains[i].push_back(v);
        }
        std::sort(domains[i].begin(), domains[i].end());
    }

    // Right-multiplication graph {(x, x c)}.
    auto graph = [&](std::size_t i, std::size_t j, Value c) {
        std::vector<ValuePair> rel;
        for (Value x = 0; x < q; ++x) rel.push_back({x, grp(x, c)});
        return Edge{i, j, Relation(q, restrict_to(rel, domains, i, j))};
    };
    // Left coset (h_i, h_j) S of the subgroup S of G^2 generated by random pairs.
    auto coset = [&](std::size_t i, std::size_t j) {
        std::vector<ValuePair> gens{{grp.identity, grp.identity}};
        const std::size_t count = 1 + uniform(rng, 2);
        for (std::size_t t = 0; t < count; ++t) {
            gens.push_back({static_cast<Value>(uniform(rng, q)), static_cast<Value>(uniform(rng, q))});
        }
        std::set<ValuePair> sub(gens.begin(), gens.end());
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<ValuePair> cur(sub.begin(), sub.end());
            for (auto x : cur) {
                for (auto y : cur) grew |= sub.insert({grp(x.first, y.first), grp(x.second, y.second)}).second;
            }
        }
        std::vector<ValuePair> rel;
        for (auto s : sub) rel.push_back({grp(h[i], s.first), grp(h[j], s.second)});
        return Edge{i, j, Relation(q, restrict_to(rel, domains, i, j))};
    };

    std::vector<Edge> edges;
    std::set<std::pair<std::size_t, std::size_t>> used;
    if (!spec.satisfiable) {
        if (n < 2 || spec.m < 2) throw ParameterError("an unsatisfiable coset instance needs n >= 2 and m >= 2");
        const std::size_t length = 2 + uniform(rng, std::min(n, spec.m) - 1);
        const auto cycle = pick_cycle(rng, n, length, used);
        Value prod = grp.identity;
        for (std::size_t t = 0; t < length; ++t) {
            Value c = static_cast<Value>(uniform(rng, q));
            if (t + 1 == length) {
                // Any c with prod * c != e closes the cycle inconsistently.
                const Value forbidden = grp.inverse[prod];
                do {
                    c = static_cast<Value>(uniform(rng, q));
                } while (c == forbidden);
            }
            prod = grp(prod, c);
            edges.push_back(graph(cycle[t], cycle[(t + 1) % length], c));
        }
    }
    const std::size_t rest = spec.m - edges.size();
    for (auto [i, j] : pick_pairs(rng, n, rest, used, false)) {
        if (coin(rng, 0.5)) {
            edges.push_back(graph(i, j, grp(grp.inverse[h[i]], h[j])));
        } else {
            edges.push_back(coset(i, j));
        }
    }
    g.instance = Instance(n, q, std::move(domains), std::move(edges));
    if (spec.satisfiable) g.planted = h;
    return g;
}

// Relations are op-closures of random pair sets. Satisfiable instances seed
// every relation with the planted pair; unsatisfiable ones get a contradiction
// injected (a translation cycle for affine ops, conflicting singletons otherwise).
Generated generate_random(const GeneratorSpec& spec, Rng& rng, bool gmm) {
    const std::size_t q = spec.p;
    const std::size_t n = spec.n;
    if (q < 2) throw ParameterError("random families need a domain of size >= 2");
    Generated g{Instance{}, gmm ? random_gmm_operation(rng, q) : make_affine_maltsev(q), std::nullopt};
    AssignmentMap h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = static_cast<Value>(uniform(rng, q));

    std::vector<std::vector<Value>> domains(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (spec.satisfiable && coin(rng, 0.25)) {
            std::vector<Value> seed{h[i]};
            if (coin(rng, 0.5)) seed.push_back(static_cast<Value>(uniform(rng, q)));
            domains[i] = close_values(g.op, seed);
        } else {
            for (Value v = 0; v < q; ++v) domains[i].push_back(v);
        }
    }
    auto random_relation = [&](std::size_t i, std::size_t j) {
        std::vector<ValuePair> seed;
        if (spec.satisfiable) seed.push_back({h[i], h[j]});
        const std::size_t extra = (spec.satisfiable ? 0 : 1) + uniform(rng, 3);
        for (std::size_t t = 0; t < extra; ++t) {
            const auto& di = domains[i];
            const auto& dj = domains[j];
            Value a = di[uniform(rng, di.size())];
            Value b = dj[uniform(rng, dj.size())];
            if (i == j) b = a;
            seed.push_back({a, b});
        }
        if (i == j && spec.satisfiable) seed.front().second = seed.front().first;
        return Edge{i, j, Relation(q, close_pairs(g.op, seed))};
    };

    std::vector<Edge> edges;
    std::set<std::pair<std::size_t, std::size_t>> used;
    if (!spec.satisfiable) {
        if (n < 2 || spec.m < 2) throw ParameterError("an unsatisfiable random instance needs n >= 2 and m >= 2");
        if (!gmm) {
            const std::size_t length = 2 + uniform(rng, std::min(n, spec.m) - 1);
            const auto cycle = pick_cycle(rng, n, length, used);
            std::size_t sum = 0;
            for (std::size_t t = 0; t < length; ++t) {
                std::size_t c = uniform(rng, q);
                if (t + 1 == length) c = (q - sum % q + 1 + uniform(rng, q - 1)) % q;
                sum += c;
                std::vector<ValuePair> rel;
                for (Value a = 0; a < q; ++a) rel.push_back({a, static_cast<Value>((a + c) % q)});
                edges.push_back(Edge{cycle[t], cycle[(t + 1) % length], Relation(q, rel)});
            }
        } else {
            const auto cycle = pick_cycle(rng, n, 2, used);
            const Value a = static_cast<Value>(uniform(rng, q));
            const Value b = static_cast<Value>(uniform(rng, q));
            const Value b2 = static_cast<Value>((b + 1 + uniform(rng, q - 1)) % q);
            edges.push_back(Edge{cycle[0], cycle[1], Relation(q, {{a, b}})});
            edges.push_back(Edge{cycle[1], cycle[0], Relation(q, {{b2, a}})});
        }
    }
    const std::size_t rest = spec.m - edges.size();
    for (auto [i, j] : pick_pairs(rng, n, rest, used, true)) edges.push_back(random_relation(i, j));
    g.instance = Instance(n, q, std::move(domains), std::move(edges));
    if (spec.satisfiable) g.planted = h;
    return g;
}

}  // namespace

Generated generate(const GeneratorSpec& spec) {
    if (spec.n == 0) throw ParameterError("n must be positive");
    Rng rng(spec.seed);
    switch (spec.family) {
        case Family::LinP: return generate_lin_p(spec, rng);
        case Family::Coset: return generate_coset(spec, rng);
        case Family::RandomInvariant: return generate_random(spec, rng, false);
        case Family::RandomGmm: return generate_random(spec, rng, true);
    }
    throw ParameterError("unknown family");
}

}  // namespace mcsp::oracle
