#include <doctest.h>

#include <omp.h>

#include <random>

#include "../support/testkit.hpp"
#include "helpers.hpp"
#include "mcsp/closure.hpp"
#include "mcsp/error.hpp"
#include "mcsp/maltsev_solver.hpp"
#include "mcsp/oracle.hpp"
#include "mcsp/reference.hpp"

using namespace mcsp;

namespace {

SignatureSet all_pairs_at(std::size_t i, std::size_t q) {
    SignatureSet s;
    for (Value a = 0; a < q; ++a) {
        for (Value b = 0; b < q; ++b) s.insert({i, a, b});
    }
    return s;
}

SignatureSet merge(SignatureSet a, const SignatureSet& b) {
    a.insert(b.begin(), b.end());
    return a;
}

}  // namespace

TEST_CASE("edge coordinates merge repeats") {
    CHECK(edge_coords({0, 1, unit::equality(2)}, 2) == std::vector<std::size_t>{0, 1, 2});
    CHECK(edge_coords({0, 1, unit::equality(2)}, 1) == std::vector<std::size_t>{0, 1});
    CHECK(edge_coords({2, 2, unit::equality(2)}, 0) == std::vector<std::size_t>{2, 0});
    // On (0,1) with k=0, only tuples with value a at 0 survive.
    const auto t = edge_target({0, 1, unit::disequality2()}, 0, 1);
    CHECK(t.allowed == std::vector<std::vector<Value>>{{1, 0}});
}

TEST_CASE("nonempty examples") {
    const auto op = make_affine_maltsev(2);
    const auto r0 = init_representation(Instance(2, 2, unit::full_domains(2, 2), {}));
    const auto hit = nonempty(r0, op, {{0, 1}, {{1, 1}}});
    REQUIRE(hit);
    CHECK(*hit == AssignmentMap{1, 1});
    CHECK_FALSE(nonempty(r0, op, {{0, 1}, {}}));

    const auto fixed = init_representation(Instance(2, 2, {{0}, {0, 1}}, {}));
    CHECK_FALSE(nonempty(fixed, op, {{0}, {{1}}}));
}

TEST_CASE("property: nonempty agrees with brute-force closure") {
    std::mt19937_64 rng(41);
    for (std::size_t t = 0; t < 60; ++t) {
        const auto gen = oracle::generate(testkit::corpus_spec(testkit::corpus_groups()[t % 4], t % 4, t));
        const auto reps = run_maltsev(gen.instance, gen.op, ExecPolicy::Serial);
        const std::size_t n = gen.instance.n(), q = gen.instance.q();
        for (std::size_t l = 0; l < reps.size(); ++l) {
            const auto sols = oracle::enumerate_solutions(prefix_instance(gen.instance, l));
            ProjectionTarget target;
            target.coords = {rng() % n};
            const std::size_t other = rng() % n;
            if (other != target.coords[0]) target.coords.push_back(other);
            for (int s = 0; s < 3; ++s) {
                std::vector<Value> tuple;
                for (std::size_t c = 0; c < target.coords.size(); ++c) tuple.push_back(static_cast<Value>(rng() % q));
                target.allowed.push_back(tuple);
            }
            const MapRef got = nonempty(reps[l], gen.op, target);
            std::optional<std::vector<Value>> best;
            for (const auto& h : sols) {
                std::vector<Value> proj;
                for (auto c : target.coords) proj.push_back(h[c]);
                if (std::find(target.allowed.begin(), target.allowed.end(), proj) != target.allowed.end() &&
                    (!best || proj < *best)) {
                    best = proj;
                }
            }
            REQUIRE(bool(got) == best.has_value());
            if (got) {
                CHECK(is_homomorphism(prefix_instance(gen.instance, l), *got));
                std::vector<Value> proj;
                for (auto c : target.coords) proj.push_back((*got)[c]);
                CHECK(proj == *best);
            }
            const MapRef slow = reference::nonempty(reps[l], gen.op, target);
            REQUIRE(bool(slow) == bool(got));
            if (got) CHECK(*slow == *got);
        }
    }
}

TEST_CASE("fixvalues examples") {
    const auto op = make_affine_maltsev(2);
    const auto r0 = init_representation(Instance(2, 2, unit::full_domains(2, 2), {}));
    CHECK(fixvalues(r0, op, {0, 0}, 0) == r0);

    const auto u = fixvalues(r0, op, {1, 0}, 1);
    CHECK(signature_of(u) == merge({{0, 1, 1}}, all_pairs_at(1, 2)));
    u.for_each([](const WitnessKey&, const AssignmentMap& m) { CHECK(m[0] == 1); });

    const auto narrow = init_representation(Instance(2, 2, {{0}, {0, 1}}, {}));
    CHECK(fixvalues(narrow, op, {1, 0}, 1).empty());
    CHECK_THROWS_AS(fixvalues(r0, op, {1, 0}, 3), IndexOutOfRange);
}

TEST_CASE("next examples") {
    const auto op = make_affine_maltsev(2);
    const Instance edgeless(2, 2, unit::full_domains(2, 2), {});
    const auto r0 = init_representation(edgeless);

    CHECK(next(r0, op, {0, 1, Relation(2, {})}).empty());

    // Only the diagonal maps survive, so coordinate 1 keeps only reflexive
    // triples: no two solutions agree on coordinate 0 and differ on 1.
    const Edge eq{0, 1, unit::equality(2)};
    const auto r1 = next(r0, op, eq);
    const SignatureSet expected{{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {1, 0, 0}, {1, 1, 1}};
    CHECK(signature_of(r1) == expected);
    CHECK(oracle::brute_signature(Instance(2, 2, unit::full_domains(2, 2), {eq})) == expected);

    const auto inst = unit::contradiction_chain();
    const auto reps = run_maltsev(inst, op);
    REQUIRE(reps.size() == 4);
    CHECK(reps[3].empty());
    CHECK_FALSE(reps[2].empty());
}

TEST_CASE("solve examples") {
    const auto op = make_affine_maltsev(2);

    // x0 + x1 = 1, x1 + x2 = 0, x0 + x2 = 1.
    const Instance lin(3, 2, unit::full_domains(3, 2),
                       {{0, 1, unit::disequality2()}, {1, 2, unit::equality(2)}, {0, 2, unit::disequality2()}});
    const auto sat = solve(lin, op);
    REQUIRE(std::holds_alternative<Sat>(sat));
    CHECK(is_homomorphism(lin, std::get<Sat>(sat).witness));

    const auto unsat = solve(unit::contradiction_chain(), op);
    REQUIRE(std::holds_alternative<Unsat>(unsat));
    const auto& trace = std::get<Unsat>(unsat).trace;
    CHECK(trace.reps.size() == 4);
    CHECK(trace.reps.back().empty());

    const Instance edgeless(3, 4, {{1}, {0, 1, 2, 3}, {3}}, {});
    const auto free = solve(edgeless, make_affine_maltsev(4));
    REQUIRE(std::holds_alternative<Sat>(free));
    CHECK(std::get<Sat>(free).witness == AssignmentMap{1, 0, 3});

    CHECK_THROWS_AS(solve(lin, make_majority(2)), InvalidAlgebra);
    const Instance le(2, 2, unit::full_domains(2, 2), {{0, 1, Relation(2, {{0, 0}, {0, 1}, {1, 1}})}});
    CHECK_THROWS_AS(solve(le, op), IncompatibleAlgebra);
}

TEST_CASE("empty domains give an unsat trace of empty representations") {
    const Instance inst(2, 2, {{0, 1}, {}}, {});
    const auto out = solve(inst, make_affine_maltsev(2));
    REQUIRE(std::holds_alternative<Unsat>(out));
    const auto& reps = std::get<Unsat>(out).trace.reps;
    REQUIRE(reps.size() == 1);
    CHECK(reps[0].empty());
}

TEST_CASE("engine matches the reference implementation") {
    for (std::size_t t = 0; t < 60; ++t) {
        const auto gen = oracle::generate(testkit::corpus_spec(testkit::corpus_groups()[t % 4], t % 4, t));
        // The reference is exponential in practice; keep it to small spaces.
        if (gen.instance.n() > 4) continue;
        const auto fast = run_maltsev(gen.instance, gen.op, ExecPolicy::Serial);
        const auto slow = reference::run(gen.instance, gen.op, Mode::Maltsev);
        REQUIRE(fast.size() == slow.size());
        for (std::size_t l = 0; l < fast.size(); ++l) CHECK(fast[l] == slow[l]);
    }
}

TEST_CASE("serial and parallel runs are identical") {
    const int saved = omp_get_max_threads();
    omp_set_num_threads(4);
    for (std::size_t t = 0; t < 40; ++t) {
        const auto gen = oracle::generate(testkit::corpus_spec(testkit::corpus_groups()[t % 4], t % 4, t));
        const auto serial = run_maltsev(gen.instance, gen.op, ExecPolicy::Serial);
        const auto parallel = run_maltsev(gen.instance, gen.op, ExecPolicy::Parallel);
        CHECK(serial == parallel);
    }
    oracle::GeneratorSpec big;
    big.p = 3;
    big.n = 30;
    big.m = 80;
    big.seed = 7;
    const auto gen = oracle::generate(big);
    CHECK(run_maltsev(gen.instance, gen.op, ExecPolicy::Serial) == run_maltsev(gen.instance, gen.op, ExecPolicy::Parallel));
    omp_set_num_threads(saved);
}

TEST_CASE("property: representations on larger instances stay sound and bounded") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        oracle::GeneratorSpec spec;
        spec.family = seed % 2 ? oracle::Family::Coset : oracle::Family::LinP;
        spec.p = 3;
        spec.group = "s3";
        spec.n = 20;
        spec.m = 40;
        spec.seed = seed;
        spec.satisfiable = seed < 2;
        const auto gen = oracle::generate(spec);
        const auto reps = run_maltsev(gen.instance, gen.op);
        for (std::size_t l = 0; l < reps.size(); ++l) {
            const auto prefix = prefix_instance(gen.instance, l);
            CHECK(reps[l].size() <= size_bound(gen.instance.n(), gen.instance.q(), Mode::Maltsev, 0));
            reps[l].for_each([&](const WitnessKey&, const AssignmentMap& m) { CHECK(is_homomorphism(prefix, m)); });
        }
        CHECK(reps.back().empty() != spec.satisfiable);
    }
}
