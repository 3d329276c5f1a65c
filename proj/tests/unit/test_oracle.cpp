#include <doctest.h>

#include "helpers.hpp"
#include "mcsp/error.hpp"
#include "mcsp/oracle.hpp"

using namespace mcsp;

TEST_CASE("enumerate_solutions examples") {
    CHECK(oracle::enumerate_solutions(Instance(2, 2, unit::full_domains(2, 2), {})).size() == 4);
    const Instance eq(2, 2, unit::full_domains(2, 2), {{0, 1, unit::equality(2)}});
    CHECK(oracle::enumerate_solutions(eq) == std::vector<AssignmentMap>{{0, 0}, {1, 1}});
    CHECK(oracle::enumerate_solutions(unit::contradiction_chain()).empty());
    CHECK_THROWS_AS(oracle::enumerate_solutions(Instance(10, 4, unit::full_domains(10, 4), {}), 1000), BudgetExceeded);
}

TEST_CASE("brute_signature examples") {
    const Instance edgeless(2, 3, {{0, 2}, {1}}, {});
    CHECK(oracle::brute_signature(edgeless) ==
          SignatureSet{{0, 0, 0}, {0, 0, 2}, {0, 2, 0}, {0, 2, 2}, {1, 1, 1}});
    CHECK(oracle::brute_signature(unit::contradiction_chain()).empty());
}

TEST_CASE("brute_projections") {
    const Instance eq(3, 2, unit::full_domains(3, 2), {{0, 1, unit::equality(2)}});
    const auto proj = oracle::brute_projections(eq, 2);
    CHECK(proj.at({0, 1}) == std::set<std::vector<Value>>{{0, 0}, {1, 1}});
    CHECK(proj.at({0, 2}).size() == 4);
    CHECK(proj.at({2}).size() == 2);
}

TEST_CASE("groups") {
    const auto z4 = oracle::group_by_name("z4");
    CHECK(z4.order == 4);
    CHECK(z4(3, 2) == 1);
    const auto s3 = oracle::group_by_name("s3");
    CHECK(s3.order == 6);
    bool abelian = true;
    for (Value x = 0; x < 6; ++x) {
        CHECK(s3(x, s3.inverse[x]) == s3.identity);
        for (Value y = 0; y < 6; ++y) abelian = abelian && s3(x, y) == s3(y, x);
    }
    CHECK_FALSE(abelian);
    CHECK_THROWS_AS(oracle::group_by_name("q8"), ParameterError);
}

TEST_CASE("generator invariants") {
    for (auto family : {oracle::Family::LinP, oracle::Family::Coset, oracle::Family::RandomInvariant,
                        oracle::Family::RandomGmm}) {
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            oracle::GeneratorSpec spec;
            spec.family = family;
            spec.p = family == oracle::Family::LinP ? 2 + seed % 2 : 2 + seed % 3;
            spec.group = seed % 2 ? "z4" : "s3";
            spec.n = 3 + seed % 4;
            spec.m = 2 + seed % 8;
            spec.seed = seed;
            spec.satisfiable = seed % 3 != 0;
            const auto gen = oracle::generate(spec);
            CAPTURE(oracle::family_name(family));
            CAPTURE(seed);
            CHECK(check_compatibility(gen.instance, gen.op).accepted);
            for (const auto& e : gen.instance.edges()) CHECK(preserves_binary(gen.op, e.rel.pairs()));
            const auto sols = oracle::enumerate_solutions(gen.instance);
            if (spec.satisfiable) {
                REQUIRE(gen.planted);
                CHECK(is_homomorphism(gen.instance, *gen.planted));
            } else {
                CHECK_FALSE(gen.planted);
                CHECK(sols.empty());
            }
            // Same seed, same instance.
            CHECK(oracle::generate(spec).instance == gen.instance);
        }
    }
}

TEST_CASE("lin_p planted example") {
    oracle::GeneratorSpec spec;
    spec.p = 2;
    spec.n = 3;
    spec.m = 3;
    spec.seed = 1;
    const auto gen = oracle::generate(spec);
    CHECK(validate_maltsev(gen.op).accepted);
    REQUIRE(gen.planted);
    CHECK(is_homomorphism(gen.instance, *gen.planted));
}

TEST_CASE("coset over Z_4 is compatible with the group operation") {
    oracle::GeneratorSpec spec;
    spec.family = oracle::Family::Coset;
    spec.p = 4;
    spec.group = "z4";
    spec.n = 5;
    spec.m = 6;
    spec.seed = 9;
    const auto gen = oracle::generate(spec);
    const auto z4 = oracle::cyclic_group(4);
    CHECK(gen.op == make_group_maltsev(4, z4.mult, z4.inverse));
    CHECK(check_compatibility(gen.instance, gen.op).accepted);
}

TEST_CASE("generator parameter errors") {
    oracle::GeneratorSpec spec;
    spec.p = 1;
    CHECK_THROWS_AS(oracle::generate(spec), ParameterError);
    spec.p = 3;
    spec.n = 1;
    spec.satisfiable = false;
    CHECK_THROWS_AS(oracle::generate(spec), ParameterError);
    CHECK(oracle::family_from_name("coset") == oracle::Family::Coset);
    CHECK_FALSE(oracle::family_from_name("sat"));
}
