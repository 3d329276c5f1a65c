#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mcsp/algebra.hpp"
#include "mcsp/instance.hpp"
#include "mcsp/representation.hpp"
#include "mcsp/types.hpp"

/// Brute-force ground truth and seeded instance generators.
namespace mcsp::oracle {

inline constexpr std::size_t kDefaultBudget = 1'000'000;

/// All homomorphisms in lexicographic order. Throws BudgetExceeded when q^n > budget.
std::vector<AssignmentMap> enumerate_solutions(const Instance& inst, std::size_t budget = kDefaultBudget);

/// Signature of an explicit relation given as lexicographically sorted maps.
/// With `pairs`, only minority pairs are kept.
SignatureSet signature_of_relation(const std::vector<AssignmentMap>& sorted_maps, std::size_t n,
                                   const PairClassification* pairs = nullptr);

/// Exact signature of the solution set of `inst`.
SignatureSet brute_signature(const Instance& inst, std::size_t budget = kDefaultBudget,
                             const PairClassification* pairs = nullptr);

using ProjectionSets = std::map<std::vector<std::size_t>, std::set<std::vector<Value>>>;

/// pi_I of the maps for every strictly increasing I with 1 <= |I| <= k.
ProjectionSets projections_of_relation(const std::vector<AssignmentMap>& maps, std::size_t n, std::size_t k);
ProjectionSets brute_projections(const Instance& inst, std::size_t k, std::size_t budget = kDefaultBudget);

enum class Family { LinP, Coset, RandomInvariant, RandomGmm };

std::string family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);

/// Parameters for a generated instance. `p` is the modulus for lin_p, the
/// domain size for random families; `group` selects "z<k>" or "s3" for coset.
struct GeneratorSpec {
    Family family = Family::LinP;
    std::size_t p = 2;
    std::string group = "z4";
    std::size_t n = 4;
    std::size_t m = 4;
    std::uint64_t seed = 0;
    bool satisfiable = true;
};

struct Generated {
    Instance instance;
    OperationTable op;
    /// The hidden solution for satisfiable instances.
    std::optional<AssignmentMap> planted;
};

/// Throws ParameterError on invalid parameters.
Generated generate(const GeneratorSpec& spec);

/// Multiplication and inverse tables of a small group, elements numbered 0..order-1.
struct FiniteGroup {
    std::size_t order = 0;
    std::vector<Value> mult;
    std::vector<Value> inverse;
    Value identity = 0;

    Value operator()(Value x, Value y) const { return mult[x * order + y]; }
};

FiniteGroup cyclic_group(std::size_t order);
FiniteGroup symmetric_group_s3();
/// "z<k>" or "s3".
FiniteGroup group_by_name(const std::string& name);

}  // namespace mcsp::oracle
