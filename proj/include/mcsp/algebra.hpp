#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcsp/types.hpp"

namespace mcsp {

/// A total r-ary operation on [q], stored densely in row-major order: the entry
/// for (x_0, ..., x_{r-1}) lives at index sum_p x_p * q^(r-1-p).
class OperationTable {
public:
    OperationTable() = default;
    /// Throws ParameterError when q or arity is zero, the table has the wrong
    /// length or an entry is out of range.
    OperationTable(std::size_t q, std::size_t arity, std::vector<Value> entries);

    /// Builds a table by evaluating `fn` on every argument tuple.
    static OperationTable from_function(std::size_t q, std::size_t arity,
                                        const std::function<Value(std::span<const Value>)>& fn);

    std::size_t q() const noexcept { return q_; }
    std::size_t arity() const noexcept { return arity_; }
    std::span<const Value> entries() const noexcept { return entries_; }

    Value operator()(std::span<const Value> args) const { return entries_[index_of(args)]; }
    Value operator()(std::initializer_list<Value> args) const {
        return (*this)(std::span<const Value>(args.begin(), args.size()));
    }
    Value apply3(Value x, Value y, Value z) const noexcept {
        return entries_[(static_cast<std::size_t>(x) * q_ + y) * q_ + z];
    }

    std::size_t index_of(std::span<const Value> args) const;

    friend bool operator==(const OperationTable&, const OperationTable&) = default;

private:
    std::size_t q_ = 0;
    std::size_t arity_ = 0;
    std::vector<Value> entries_;
};

/// Classification of a two-element subset {a,b} under a GMM operation.
enum class PairKind { Minority, Majority };

/// Symmetric q x q table of pair kinds. Diagonal entries are Minority.
class PairClassification {
public:
    PairClassification() = default;
    explicit PairClassification(std::size_t q) : q_(q), kinds_(q * q, PairKind::Minority) {}

    std::size_t q() const noexcept { return q_; }
    PairKind operator()(Value a, Value b) const { return kinds_[a * q_ + b]; }
    bool is_minority(Value a, Value b) const { return (*this)(a, b) == PairKind::Minority; }
    void set(Value a, Value b, PairKind kind) {
        kinds_[a * q_ + b] = kind;
        kinds_[b * q_ + a] = kind;
    }

    friend bool operator==(const PairClassification&, const PairClassification&) = default;

private:
    std::size_t q_ = 0;
    std::vector<PairKind> kinds_;
};

struct MaltsevVerdict {
    bool accepted = false;
    /// First argument tuple (x,y,z) violating the law, scanning pairs (a,b)
    /// lexicographically and testing (a,b,b) before (b,b,a).
    std::optional<std::vector<Value>> violation;
};

/// Checks op(a,b,b) = op(b,b,a) = a for all a,b. Throws ArityMismatch unless arity is 3.
MaltsevVerdict validate_maltsev(const OperationTable& op);

struct GmmVerdict {
    bool accepted = false;
    PairClassification pairs;
    /// First pair (a<b, lexicographic) that is neither majority nor minority.
    std::optional<ValuePair> failing_pair;
};

/// Classifies every pair {a,b}; accepts iff each is majority or minority.
/// Throws ArityMismatch when arity < 3.
GmmVerdict validate_gmm(const OperationTable& op);

/// Like validate_gmm but throws NotGmm on the first unclassifiable pair.
PairClassification classify_gmm_or_throw(const OperationTable& op);

bool is_idempotent(const OperationTable& op);

/// An argument tuple of relation members whose coordinatewise image escapes the relation.
struct BinaryViolation {
    std::vector<ValuePair> arguments;
    ValuePair image;
};

struct UnaryViolation {
    std::vector<Value> arguments;
    Value image = 0;
};

/// First violating tuple in lexicographic order of `rel` (sorted ascending).
std::optional<BinaryViolation> find_binary_violation(const OperationTable& op,
                                                     std::span<const ValuePair> rel);
std::optional<UnaryViolation> find_unary_violation(const OperationTable& op,
                                                   std::span<const Value> set);

inline bool preserves_binary(const OperationTable& op, std::span<const ValuePair> rel) {
    return !find_binary_violation(op, rel).has_value();
}
inline bool preserves_unary(const OperationTable& op, std::span<const Value> set) {
    return !find_unary_violation(op, set).has_value();
}

/// result(i) = op(maps[0](i), ..., maps[r-1](i)).
AssignmentMap apply_pointwise(const OperationTable& op, std::span<const AssignmentMap* const> maps);
AssignmentMap apply_pointwise(const OperationTable& op, std::span<const AssignmentMap> maps);

/// phi(T,...,T, phi(T, Ta,...,Ta, Tb)): the GMM analogue of mu(T, Ta, Tb).
AssignmentMap gmm_combine(const OperationTable& op, const AssignmentMap& t, const AssignmentMap& ta,
                          const AssignmentMap& tb);

// Well-known operations.
OperationTable make_affine_maltsev(std::size_t q);  ///< x - y + z mod q
OperationTable make_majority(std::size_t q);        ///< median on the chain 0 < 1 < ... < q-1
OperationTable make_group_maltsev(std::size_t q, std::span<const Value> mult,
                                  std::span<const Value> inverse);  ///< x y^-1 z

// JSON text format: {"q": int, "arity": int, "table": [...]}.
nlohmann::json algebra_to_json(const OperationTable& op);
OperationTable algebra_from_json(const nlohmann::json& j);
OperationTable parse_algebra(const std::string& text);
std::string serialize_algebra(const OperationTable& op);

}  // namespace mcsp
