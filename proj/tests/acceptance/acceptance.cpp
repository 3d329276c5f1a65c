// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "../support/testkit.hpp"
#include "mcsp/certificate.hpp"
#include "mcsp/error.hpp"
#include "mcsp/gmm_solver.hpp"
#include "mcsp/maltsev_solver.hpp"
#include "mcsp/oracle.hpp"
#include "mcsp/representation.hpp"

using namespace mcsp;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Line {
    int id;
    std::string title;
    bool pass;
    std::string detail;
};

// Counts mismatches and remembers the first few for the report.
struct Tally {
    std::size_t checked = 0;
    std::size_t failed = 0;
    std::string first;

    void record(bool ok, const std::string& what) {
        ++checked;
        if (!ok) {
            if (failed == 0) first = what;
            ++failed;
        }
    }
    std::string summary(const std::string& unit) const {
        std::ostringstream os;
        os << failed << " mismatches over " << checked << " " << unit;
        if (failed) os << "; first: " << first;
        return os.str();
    }
};

std::map<std::vector<std::size_t>, std::set<std::vector<Value>>> stored_projections(const CompactRepresentation& rep,
                                                                                   bool& consistent) {
    std::map<std::vector<std::size_t>, std::set<std::vector<Value>>> out;
    for (const auto& [key, map] : rep.projections()) {
        std::vector<Value> got;
        for (auto c : key.coords) got.push_back((*map)[c]);
        if (got != key.vals) consistent = false;
        out[key.coords].insert(key.vals);
    }
    return out;
}

std::size_t gmm_bound(std::size_t n, std::size_t q, std::size_t k) { return size_bound(n, q, Mode::Gmm, k); }

struct CorpusResult {
    Tally decision;    // 1
    Tally signature;   // 2
    Tally soundness;   // 3
    Tally size;        // 4
    Tally cert_accept; // 6
    Tally cert_fuzz;   // 6
    Tally agreement;   // 7
    std::size_t instances = 0;
    std::size_t unsat = 0;
    double solve_seconds = 0;
    double total_seconds = 0;
};

std::string describe(const oracle::GeneratorSpec& spec) {
    std::ostringstream os;
    os << oracle::family_name(spec.family) << "(p=" << spec.p << ",n=" << spec.n << ",m=" << spec.m
       << ",seed=" << spec.seed << ",sat=" << spec.satisfiable << ")";
    return os.str();
}

void check_certificate_integrity(const SolveOutcome& outcome, const Instance& inst, const OperationTable& op,
                                 const std::string& name, CorpusResult& res) {
    const std::string text = emit_certificate(outcome);
    const auto verdict = check_certificate(inst, op, text);
    res.cert_accept.record(verdict.accepted, name + ": " + verdict.reason);
    const auto cert = nlohmann::json::parse(text);
    const auto mutations = testkit::mutate(cert, 200, std::hash<std::string>{}(name));
    res.cert_fuzz.record(mutations.size() == 200, name + ": only " + std::to_string(mutations.size()) + " mutations");
    for (std::size_t t = 0; t < mutations.size(); ++t) {
        const auto v = check_certificate(inst, op, mutations[t], ExecPolicy::Serial);
        res.cert_fuzz.record(!v.accepted, name + ": mutation " + std::to_string(t) + " accepted: " + mutations[t].dump());
    }
}

CorpusResult run_corpus(std::size_t per_group) {
    CorpusResult res;
    const auto start = Clock::now();
    const auto groups = testkit::corpus_groups();
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (std::size_t t = 0; t < per_group; ++t) {
            const auto spec = testkit::corpus_spec(groups[g], g, t);
            const auto gen = oracle::generate(spec);
            const Instance& inst = gen.instance;
            const std::string name = describe(spec);
            ++res.instances;

            const auto solutions = oracle::enumerate_solutions(inst);
            const GmmContext ctx = make_gmm_context(gen.op);

            const auto solve_start = Clock::now();
            const SolveOutcome mo = solve(inst, gen.op);
            const SolveOutcome go = solve_gmm(inst, ctx);
            const auto mreps = run_maltsev(inst, gen.op);
            const auto greps = run_gmm(inst, ctx);
            res.solve_seconds += seconds_since(solve_start);

            const bool m_sat = std::holds_alternative<Sat>(mo);
            const bool g_sat = std::holds_alternative<Sat>(go);
            res.decision.record(m_sat == !solutions.empty(), name + " (maltsev)");
            res.decision.record(g_sat == !solutions.empty(), name + " (gmm)");
            res.agreement.record(m_sat == g_sat, name);
            if (!m_sat) ++res.unsat;

            // Witness soundness.
            for (const auto* o : {&mo, &go}) {
                if (const auto* s = std::get_if<Sat>(o)) res.soundness.record(is_homomorphism(inst, s->witness), name + " witness");
            }
            for (const auto* reps : {&mreps, &greps}) {
                for (std::size_t l = 0; l < reps->size(); ++l) {
                    const Instance prefix = prefix_instance(inst, l);
                    bool ok = true;
                    (*reps)[l].for_each([&](const WitnessKey&, const AssignmentMap& m) { ok = ok && is_homomorphism(prefix, m); });
                    res.soundness.record(ok, name + " step " + std::to_string(l));
                }
            }

            // Signatures, projections and size bounds per step.
            const std::size_t n = inst.n();
            const std::size_t q = inst.q();
            for (std::size_t l = 0; l <= inst.m(); ++l) {
                const auto sols = oracle::enumerate_solutions(prefix_instance(inst, l));
                const auto expected = oracle::signature_of_relation(sols, n);
                const auto expected_gmm = oracle::signature_of_relation(sols, n, &ctx.pairs);
                const std::string at = name + " step " + std::to_string(l);
                bool ok = signature_of(mreps[l]) == expected;
                res.signature.record(ok, at + " (maltsev signature)");
                ok = signature_of(greps[l]) == expected_gmm;
                res.signature.record(ok, at + " (gmm signature)");
                bool consistent = true;
                const auto stored = stored_projections(greps[l], consistent);
                auto oracle_proj = oracle::projections_of_relation(sols, n, ctx.k);
                for (auto it = oracle_proj.begin(); it != oracle_proj.end();) {
                    it = it->second.empty() ? oracle_proj.erase(it) : std::next(it);
                }
                res.signature.record(consistent && stored == oracle_proj, at + " (gmm projections)");

                res.size.record(mreps[l].size() <= 2 * n * q * q, at + " (maltsev size " + std::to_string(mreps[l].size()) + ")");
                res.size.record(greps[l].size() <= gmm_bound(n, q, ctx.k), at + " (gmm size " + std::to_string(greps[l].size()) + ")");
            }

            if (!m_sat) check_certificate_integrity(mo, inst, gen.op, name + " maltsev", res);
            if (!g_sat) check_certificate_integrity(go, inst, gen.op, name + " gmm", res);
        }
    }
    res.total_seconds = seconds_since(start);
    return res;
}

// Criterion 5: the closure of R_0 is the full product of the domains.
Line generation_property() {
    const auto start = Clock::now();
    Tally tally;
    std::mt19937_64 rng(5);
    for (std::size_t q = 1; q <= 3; ++q) {
        // The affine operation plus Mal'tsev tables: every one when the free
        // cells allow it (q <= 2), otherwise a random sample.
        std::vector<OperationTable> ops{make_affine_maltsev(q)};
        std::size_t free_cells = 0;
        for (Value x = 0; x < q; ++x) {
            for (Value y = 0; y < q; ++y) {
                for (Value z = 0; z < q; ++z) free_cells += (y != z && x != y) ? 1 : 0;
            }
        }
        std::size_t total = 1;
        for (std::size_t c = 0; c < free_cells && total <= 64; ++c) total *= q;
        const bool exhaustive = total <= 64;
        const std::size_t count = exhaustive ? total : 40;
        for (std::size_t t = 0; t < count; ++t) {
            std::size_t digits = t;
            ops.push_back(OperationTable::from_function(q, 3, [&](std::span<const Value> x) -> Value {
                if (x[1] == x[2]) return x[0];
                if (x[0] == x[1]) return x[2];
                if (!exhaustive) return static_cast<Value>(std::uniform_int_distribution<std::size_t>(0, q - 1)(rng));
                const auto v = static_cast<Value>(digits % q);
                digits /= q;
                return v;
            }));
        }
        for (const auto& op : ops) {
            // Every nonempty domain preserved by op.
            std::vector<std::vector<Value>> subsets;
            for (std::size_t mask = 1; mask < (std::size_t{1} << q); ++mask) {
                std::vector<Value> s;
                for (Value v = 0; v < q; ++v) {
                    if (mask >> v & 1) s.push_back(v);
                }
                if (preserves_unary(op, s)) subsets.push_back(s);
            }
            for (std::size_t n = 1; n <= 3; ++n) {
                std::vector<std::size_t> pick(n, 0);
                while (true) {
                    std::vector<std::vector<Value>> domains;
                    for (auto p : pick) domains.push_back(subsets[p]);
                    const Instance inst(n, q, domains, {});
                    const auto rep = init_representation(inst);
                    std::vector<AssignmentMap> seeds;
                    for (const auto& m : rep.witnesses()) seeds.push_back(*m);
                    const auto closed = testkit::close_maps(op, seeds);
                    const auto product = oracle::enumerate_solutions(inst);
                    tally.record(closed == product, "n=" + std::to_string(n) + " q=" + std::to_string(q));
                    std::size_t p = n;
                    while (p > 0 && ++pick[p - 1] == subsets.size()) pick[--p] = 0;
                    if (p == 0) break;
                }
            }
        }
    }
    const double secs = seconds_since(start);
    std::ostringstream os;
    os << tally.summary("domain/operation combinations") << ", " << secs << " s";
    return {5, "R_0 generates the domain product (micro scale)", tally.failed == 0 && secs < 5.0, os.str()};
}

// Criterion 8: polynomial-scaling smoke test on lin_p, q = 3.
Line scaling() {
    std::ostringstream os;
    bool pass = true;
    for (auto [n, m, limit] : {std::tuple{50, 150, 5.0}, std::tuple{100, 400, 60.0}}) {
        double worst = 0;
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            oracle::GeneratorSpec spec;
            spec.family = oracle::Family::LinP;
            spec.p = 3;
            spec.n = static_cast<std::size_t>(n);
            spec.m = static_cast<std::size_t>(m);
            spec.seed = seed;
            spec.satisfiable = seed != 3;
            const auto gen = oracle::generate(spec);
            const auto start = Clock::now();
            const auto out = solve(gen.instance, gen.op);
            const double secs = seconds_since(start);
            worst = std::max(worst, secs);
            const bool sat = std::holds_alternative<Sat>(out);
            if (sat != spec.satisfiable) pass = false;
            if (sat && !is_homomorphism(gen.instance, std::get<Sat>(out).witness)) pass = false;
        }
        if (worst >= limit) pass = false;
        os << "n=" << n << ",m=" << m << ": worst " << worst << " s (limit " << limit << " s); ";
    }
    return {8, "polynomial-scaling smoke test", pass, os.str()};
}

// Independent recomputation of the algebra checks.
bool brute_maltsev(const OperationTable& op, std::vector<Value>& violation) {
    const std::size_t q = op.q();
    for (Value a = 0; a < q; ++a) {
        for (Value b = 0; b < q; ++b) {
            if (op.apply3(a, b, b) != a) {
                violation = {a, b, b};
                return false;
            }
            if (op.apply3(b, b, a) != a) {
                violation = {b, b, a};
                return false;
            }
        }
    }
    return true;
}

// Returns 0 majority, 1 minority, 2 neither for the pair {a,b}, a < b.
int brute_pair(const OperationTable& op, Value a, Value b) {
    const std::size_t r = op.arity();
    bool majority = true;
    for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
        for (std::size_t pos = 0; pos < r; ++pos) {
            std::vector<Value> args(r, y);
            args[pos] = x;
            if (op(args) != y) majority = false;
        }
    }
    if (majority) return 0;
    bool minority = true;
    for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
        std::vector<Value> first(r, y), last(r, y);
        first[0] = x;
        last[r - 1] = x;
        if (op(first) != x || op(last) != x) minority = false;
    }
    return minority ? 1 : 2;
}

bool brute_preserves(const OperationTable& op, const std::vector<ValuePair>& rel) {
    std::set<ValuePair> members(rel.begin(), rel.end());
    for (auto x : rel) {
        for (auto y : rel) {
            for (auto z : rel) {
                if (!members.count({op.apply3(x.first, y.first, z.first), op.apply3(x.second, y.second, z.second)})) {
                    return false;
                }
            }
        }
    }
    return true;
}

Line algebra_validation() {
    std::mt19937_64 rng(9);
    auto uni = [&](std::size_t bound) { return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng); };
    Tally tally;
    for (std::size_t t = 0; t < 100; ++t) {
        const std::size_t q = 2 + t % 2;
        // A third each: unconstrained, Mal'tsev-shaped, and majority-on-some-pairs tables.
        const std::size_t style = t % 3;
        const auto op = OperationTable::from_function(q, 3, [&](std::span<const Value> x) -> Value {
            if (style == 1) {
                if (x[1] == x[2]) return x[0];
                if (x[0] == x[1]) return x[2];
            }
            if (style == 2) {
                if (x[0] == x[1] || x[0] == x[2]) return x[0];
                if (x[1] == x[2]) return uni(4) == 0 ? x[0] : x[1];
            }
            return static_cast<Value>(uni(q));
        });
        const std::string name = "table " + std::to_string(t);

        std::vector<Value> violation;
        const bool maltsev = brute_maltsev(op, violation);
        const auto mv = validate_maltsev(op);
        tally.record(mv.accepted == maltsev && (maltsev || (mv.violation && *mv.violation == violation)),
                     name + " validate_maltsev");

        const auto gv = validate_gmm(op);
        bool gmm = true;
        bool kinds_match = true;
        for (Value a = 0; a < q; ++a) {
            for (Value b = a + 1; b < q; ++b) {
                const int kind = brute_pair(op, a, b);
                if (kind == 2) {
                    if (gmm) {
                        kinds_match = kinds_match && gv.failing_pair && gv.failing_pair->first == a &&
                                      gv.failing_pair->second == b;
                    }
                    gmm = false;
                } else if (gv.accepted) {
                    kinds_match = kinds_match && gv.pairs.is_minority(a, b) == (kind == 1);
                }
            }
        }
        tally.record(gv.accepted == gmm && kinds_match, name + " validate_gmm");

        // Compatibility against a random instance with random relations and domains.
        std::vector<std::vector<Value>> domains(3);
        for (auto& d : domains) {
            for (Value v = 0; v < q; ++v) {
                if (uni(3) != 0) d.push_back(v);
            }
            if (d.empty()) d.push_back(static_cast<Value>(uni(q)));
        }
        std::vector<Edge> edges;
        bool expected = true;
        for (const auto& d : domains) {
            std::vector<ValuePair> diag;
            for (Value v : d) diag.push_back({v, v});
            expected = expected && brute_preserves(op, diag);
        }
        for (std::size_t e = 0; e < 2; ++e) {
            const std::size_t i = e, j = e + 1;
            std::vector<ValuePair> rel;
            for (Value a : domains[i]) {
                for (Value b : domains[j]) {
                    if (uni(2) == 0) rel.push_back({a, b});
                }
            }
            expected = expected && brute_preserves(op, rel);
            edges.push_back({i, j, Relation(q, rel)});
        }
        const Instance inst(3, q, domains, edges);
        tally.record(check_compatibility(inst, op).accepted == expected, name + " check_compatibility");
    }
    return {9, "algebra validation against brute force", tally.failed == 0, tally.summary("verdicts on 100 tables")};
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t per_group = 500;
    if (argc > 1) per_group = std::stoul(argv[1]);

    const CorpusResult corpus = run_corpus(per_group);
    std::vector<Line> lines;
    {
        std::ostringstream os;
        os << corpus.decision.summary("verdicts") << " (" << corpus.instances << " instances, " << corpus.unsat
           << " unsat), corpus time " << corpus.total_seconds << " s, solver time " << corpus.solve_seconds << " s";
        lines.push_back({1, "oracle decision equivalence", corpus.decision.failed == 0 && corpus.solve_seconds < 60.0,
                         os.str()});
    }
    lines.push_back({2, "signature and projection completeness", corpus.signature.failed == 0,
                     corpus.signature.summary("step comparisons")});
    lines.push_back({3, "witness soundness", corpus.soundness.failed == 0, corpus.soundness.summary("checks")});
    lines.push_back({4, "size bounds", corpus.size.failed == 0, corpus.size.summary("representations")});
    lines.push_back({6, "certificate integrity", corpus.cert_accept.failed == 0 && corpus.cert_fuzz.failed == 0,
                     corpus.cert_accept.summary("certificates") + "; " + corpus.cert_fuzz.summary("fuzz checks")});
    lines.push_back({7, "cross-solver agreement", corpus.agreement.failed == 0, corpus.agreement.summary("instances")});
    lines.push_back(generation_property());
    lines.push_back(scaling());
    lines.push_back(algebra_validation());
    std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });

    bool all = true;
    for (const auto& l : lines) {
        std::cout << (l.pass ? "PASS" : "FAIL") << " criterion " << l.id << ": " << l.title << " -- " << l.detail
                  << "\n";
        all = all && l.pass;
    }
    return all ? 0 : 1;
}
