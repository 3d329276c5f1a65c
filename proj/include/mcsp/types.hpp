#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <vector>

namespace mcsp {

/// An element of the domain [q].
using Value = std::uint16_t;

/// A total map [n] -> [q]. Used for candidate solutions and representation witnesses.
class AssignmentMap {
public:
    AssignmentMap() = default;
    explicit AssignmentMap(std::size_t n, Value fill = 0) : values_(n, fill) {}
    explicit AssignmentMap(std::vector<Value> values) : values_(std::move(values)) {}
    AssignmentMap(std::initializer_list<Value> values) : values_(values) {}

    std::size_t size() const noexcept { return values_.size(); }
    Value operator[](std::size_t i) const { return values_[i]; }
    Value& operator[](std::size_t i) { return values_[i]; }

    std::span<const Value> values() const noexcept { return values_; }
    const Value* data() const noexcept { return values_.data(); }
    Value* data() noexcept { return values_.data(); }

    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    friend bool operator==(const AssignmentMap&, const AssignmentMap&) = default;
    friend auto operator<=>(const AssignmentMap&, const AssignmentMap&) = default;

private:
    std::vector<Value> values_;
};

/// Witness maps are immutable once built and shared between representations.
using MapRef = std::shared_ptr<const AssignmentMap>;

inline MapRef make_map(AssignmentMap m) { return std::make_shared<const AssignmentMap>(std::move(m)); }

/// A pair of domain values, e.g. one tuple of a binary relation.
struct ValuePair {
    Value first = 0;
    Value second = 0;
    friend bool operator==(const ValuePair&, const ValuePair&) = default;
    friend auto operator<=>(const ValuePair&, const ValuePair&) = default;
};

}  // namespace mcsp
