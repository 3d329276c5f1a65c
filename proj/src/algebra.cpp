#include "mcsp/algebra.hpp"

#include <algorithm>
#include <limits>

#include "mcsp/error.hpp"

namespace mcsp {

namespace {

std::size_t checked_power(std::size_t base, std::size_t exp) {
    std::size_t result = 1;
    for (std::size_t e = 0; e < exp; ++e) {
        if (base != 0 && result > std::numeric_limits<std::size_t>::max() / base) {
            throw ParameterError("operation table size overflows");
        }
        result *= base;
    }
    return result;
}

// Advances `digits` as a base-`radix` odometer; returns false after the last tuple.
bool advance(std::vector<std::size_t>& digits, std::size_t radix) {
    for (std::size_t p = digits.size(); p-- > 0;) {
        if (++digits[p] < radix) return true;
        digits[p] = 0;
    }
    return false;
}

// The tuple (y,...,y) with x placed at `pos`.
std::vector<Value> one_discrepancy(std::size_t arity, Value x, Value y, std::size_t pos) {
    std::vector<Value> args(arity, y);
    args[pos] = x;
    return args;
}

}  // namespace

OperationTable::OperationTable(std::size_t q, std::size_t arity, std::vector<Value> entries)
    : q_(q), arity_(arity), entries_(std::move(entries)) {
    if (q == 0) throw ParameterError("domain size must be positive");
    if (arity == 0) throw ParameterError("arity must be positive");
    if (q > std::numeric_limits<Value>::max()) throw ParameterError("domain size too large");
    const std::size_t expected = checked_power(q, arity);
    if (entries_.size() != expected) {
        throw ParameterError("operation table has " + std::to_string(entries_.size()) +
                             " entries, expected " + std::to_string(expected));
    }
    for (std::size_t idx = 0; idx < entries_.size(); ++idx) {
        if (entries_[idx] >= q) {
            throw ParameterError("table entry " + std::to_string(idx) + " is out of range");
        }
    }
}

OperationTable OperationTable::from_function(
    std::size_t q, std::size_t arity, const std::function<Value(std::span<const Value>)>& fn) {
    std::vector<Value> entries;
    entries.reserve(checked_power(q, arity));
    std::vector<std::size_t> digits(arity, 0);
    std::vector<Value> args(arity, 0);
    do {
        for (std::size_t p = 0; p < arity; ++p) args[p] = static_cast<Value>(digits[p]);
        entries.push_back(fn(args));
    } while (advance(digits, q));
    return OperationTable(q, arity, std::move(entries));
}

std::size_t OperationTable::index_of(std::span<const Value> args) const {
    if (args.size() != arity_) {
        throw ArityMismatch("operation of arity " + std::to_string(arity_) + " applied to " +
                            std::to_string(args.size()) + " arguments");
    }
    std::size_t idx = 0;
    for (Value v : args) idx = idx * q_ + v;
    return idx;
}

MaltsevVerdict validate_maltsev(const OperationTable& op) {
    if (op.arity() != 3) {
        throw ArityMismatch("Mal'tsev operations are ternary, got arity " + std::to_string(op.arity()));
    }
    const auto q = static_cast<Value>(op.q());
    for (Value a = 0; a < q; ++a) {
        for (Value b = 0; b < q; ++b) {
            if (op.apply3(a, b, b) != a) return {false, std::vector<Value>{a, b, b}};
            if (op.apply3(b, b, a) != a) return {false, std::vector<Value>{b, b, a}};
        }
    }
    return {true, std::nullopt};
}

GmmVerdict validate_gmm(const OperationTable& op) {
    const std::size_t r = op.arity();
    if (r < 3) throw ArityMismatch("GMM operations need arity >= 3, got " + std::to_string(r));
    const auto q = static_cast<Value>(op.q());
    GmmVerdict verdict;
    verdict.pairs = PairClassification(q);
    for (Value a = 0; a < q; ++a) {
        for (Value b = a + 1; b < q; ++b) {
            bool majority = true;
            for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
                for (std::size_t pos = 0; pos < r && majority; ++pos) {
                    if (op(one_discrepancy(r, x, y, pos)) != y) majority = false;
                }
            }
            if (majority) {
                verdict.pairs.set(a, b, PairKind::Majority);
                continue;
            }
            bool minority = true;
            for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
                if (op(one_discrepancy(r, x, y, 0)) != x || op(one_discrepancy(r, x, y, r - 1)) != x) {
                    minority = false;
                }
            }
            if (!minority) {
                verdict.failing_pair = ValuePair{a, b};
                return verdict;
            }
            verdict.pairs.set(a, b, PairKind::Minority);
        }
    }
    verdict.accepted = true;
    return verdict;
}

PairClassification classify_gmm_or_throw(const OperationTable& op) {
    auto verdict = validate_gmm(op);
    if (!verdict.accepted) throw NotGmm(verdict.failing_pair->first, verdict.failing_pair->second);
    return std::move(verdict.pairs);
}

bool is_idempotent(const OperationTable& op) {
    for (Value a = 0; a < op.q(); ++a) {
        std::vector<Value> args(op.arity(), a);
        if (op(args) != a) return false;
    }
    return true;
}

std::optional<BinaryViolation> find_binary_violation(const OperationTable& op,
                                                     std::span<const ValuePair> rel) {
    if (rel.empty()) return std::nullopt;
    const std::size_t r = op.arity();
    const std::size_t q = op.q();
    std::vector<bool> member(q * q, false);
    for (auto p : rel) member[p.first * q + p.second] = true;

    std::vector<std::size_t> digits(r, 0);
    std::vector<Value> left(r), right(r);
    do {
        for (std::size_t p = 0; p < r; ++p) {
            left[p] = rel[digits[p]].first;
            right[p] = rel[digits[p]].second;
        }
        const Value x = op(left);
        const Value y = op(right);
        if (!member[x * q + y]) {
            BinaryViolation v;
            for (std::size_t p = 0; p < r; ++p) v.arguments.push_back(rel[digits[p]]);
            v.image = {x, y};
            return v;
        }
    } while (advance(digits, rel.size()));
    return std::nullopt;
}

std::optional<UnaryViolation> find_unary_violation(const OperationTable& op, std::span<const Value> set) {
    if (set.empty()) return std::nullopt;
    const std::size_t r = op.arity();
    std::vector<bool> member(op.q(), false);
    for (Value v : set) member[v] = true;
    std::vector<std::size_t> digits(r, 0);
    std::vector<Value> args(r);
    do {
        for (std::size_t p = 0; p < r; ++p) args[p] = set[digits[p]];
        const Value x = op(args);
        if (!member[x]) return UnaryViolation{args, x};
    } while (advance(digits, set.size()));
    return std::nullopt;
}

AssignmentMap apply_pointwise(const OperationTable& op, std::span<const AssignmentMap* const> maps) {
    if (maps.size() != op.arity()) {
        throw ArityMismatch("expected " + std::to_string(op.arity()) + " maps, got " +
                            std::to_string(maps.size()));
    }
    const std::size_t n = maps.front()->size();
    for (const auto* m : maps) {
        if (m->size() != n) throw LengthMismatch("maps disagree on the number of variables");
    }
    AssignmentMap out(n);
    if (op.arity() == 3) {
        const auto &x = *maps[0], &y = *maps[1], &z = *maps[2];
        for (std::size_t i = 0; i < n; ++i) out[i] = op.apply3(x[i], y[i], z[i]);
        return out;
    }
    std::vector<Value> args(op.arity());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < maps.size(); ++p) args[p] = (*maps[p])[i];
        out[i] = op(args);
    }
    return out;
}

AssignmentMap apply_pointwise(const OperationTable& op, std::span<const AssignmentMap> maps) {
    std::vector<const AssignmentMap*> ptrs;
    ptrs.reserve(maps.size());
    for (const auto& m : maps) ptrs.push_back(&m);
    return apply_pointwise(op, ptrs);
}

AssignmentMap gmm_combine(const OperationTable& op, const AssignmentMap& t, const AssignmentMap& ta,
                          const AssignmentMap& tb) {
    const std::size_t r = op.arity();
    std::vector<const AssignmentMap*> inner(r, &ta);
    inner.front() = &t;
    inner.back() = &tb;
    const AssignmentMap mixed = apply_pointwise(op, inner);
    std::vector<const AssignmentMap*> outer(r, &t);
    outer.back() = &mixed;
    return apply_pointwise(op, outer);
}

OperationTable make_affine_maltsev(std::size_t q) {
    return OperationTable::from_function(q, 3, [q](std::span<const Value> a) {
        return static_cast<Value>((a[0] + q - a[1] + a[2]) % q);
    });
}

OperationTable make_majority(std::size_t q) {
    return OperationTable::from_function(q, 3, [](std::span<const Value> a) {
        return std::max(std::min(a[0], a[1]), std::min(std::max(a[0], a[1]), a[2]));
    });
}

OperationTable make_group_maltsev(std::size_t q, std::span<const Value> mult, std::span<const Value> inverse) {
    if (mult.size() != q * q || inverse.size() != q) throw ParameterError("group table has wrong size");
    return OperationTable::from_function(q, 3, [&](std::span<const Value> a) {
        const Value xy = mult[a[0] * q + inverse[a[1]]];
        return mult[xy * q + a[2]];
    });
}

nlohmann::json algebra_to_json(const OperationTable& op) {
    nlohmann::json j;
    j["q"] = op.q();
    j["arity"] = op.arity();
    j["table"] = std::vector<Value>(op.entries().begin(), op.entries().end());
    return j;
}

OperationTable algebra_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("$", "algebra must be a JSON object");
    for (const char* field : {"q", "arity", "table"}) {
        if (!j.contains(field)) throw ParseError("$", std::string("missing field '") + field + "'");
    }
    if (!j["q"].is_number_unsigned()) throw ParseError("$.q", "expected a non-negative integer");
    if (!j["arity"].is_number_unsigned()) throw ParseError("$.arity", "expected a non-negative integer");
    if (!j["table"].is_array()) throw ParseError("$.table", "expected an array");
    const auto q = j["q"].get<std::size_t>();
    const auto arity = j["arity"].get<std::size_t>();
    if (q == 0 || q > std::numeric_limits<Value>::max()) throw ParseError("$.q", "out of range");
    if (arity == 0 || arity > 16) throw ParseError("$.arity", "out of range");
    std::vector<Value> entries;
    entries.reserve(j["table"].size());
    for (std::size_t idx = 0; idx < j["table"].size(); ++idx) {
        const auto& e = j["table"][idx];
        if (!e.is_number_unsigned() || e.get<std::size_t>() >= q) {
            throw ParseError("$.table[" + std::to_string(idx) + "]", "entry must be an integer below q");
        }
        entries.push_back(e.get<Value>());
    }
    try {
        return OperationTable(q, arity, std::move(entries));
    } catch (const ParameterError& e) {
        throw ParseError("$.table", e.what());
    }
}

OperationTable parse_algebra(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("byte " + std::to_string(e.byte), e.what());
    }
    return algebra_from_json(j);
}

std::string serialize_algebra(const OperationTable& op) { return algebra_to_json(op).dump() + "\n"; }

}  // namespace mcsp
