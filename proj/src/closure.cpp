#include "mcsp/closure.hpp"

#include <algorithm>

#include "mcsp/error.hpp"

namespace mcsp {

std::vector<std::size_t> edge_coords(const Edge& e, std::size_t k) {
    std::vector<std::size_t> coords{e.from};
    if (e.to != e.from) coords.push_back(e.to);
    if (k != e.from && k != e.to) coords.push_back(k);
    return coords;
}

ProjectionTarget edge_target(const Edge& e, std::size_t k, Value a) {
    ProjectionTarget t;
    t.coords = edge_coords(e, k);
    for (auto p : e.rel.pairs()) {
        // Values for (from, to, k) before merging.
        const std::size_t raw[3] = {e.from, e.to, k};
        const Value vals[3] = {p.first, p.second, a};
        std::vector<Value> tuple(t.coords.size());
        std::vector<bool> set(t.coords.size(), false);
        bool ok = true;
        for (int s = 0; s < 3 && ok; ++s) {
            const auto pos = static_cast<std::size_t>(std::find(t.coords.begin(), t.coords.end(), raw[s]) -
                                                      t.coords.begin());
            if (set[pos] && tuple[pos] != vals[s]) ok = false;
            tuple[pos] = vals[s];
            set[pos] = true;
        }
        if (ok) t.allowed.push_back(std::move(tuple));
    }
    return t;
}

SeedMatrix::SeedMatrix(const CompactRepresentation& rep) : n_(rep.n()), maps_(rep.unique_witnesses()) {
    const std::size_t s = maps_.size();
    cols_.resize(n_ * s);
    for (std::size_t idx = 0; idx < s; ++idx) {
        const Value* m = maps_[idx]->data();
        for (std::size_t c = 0; c < n_; ++c) cols_[c * s + idx] = m[c];
    }
}

ProjectionClosure::ProjectionClosure(const SeedMatrix& seeds, const OperationTable& op,
                                     std::vector<std::size_t> coords, std::span<const TupleCode> wanted)
    : seeds_(&seeds), op_(&op), coords_(std::move(coords)), q_(op.q()), arity_(op.arity()) {
    for (std::size_t t = 0; t < coords_.size(); ++t) {
        if (coords_[t] >= seeds.n() && seeds.size() > 0) throw IndexOutOfRange("closure coordinate out of range");
        if (space_ > (std::size_t{1} << 26) / q_) throw ParameterError("projection space too large");
        space_ *= q_;
    }
    index_.assign(space_, -1);
    if (!wanted.empty()) {
        wanted_.assign(space_, 0);
        for (TupleCode c : wanted) {
            if (c < space_ && !wanted_[c]) {
                wanted_[c] = 1;
                ++wanted_left_;
            }
        }
    }
    run();
}

TupleCode ProjectionClosure::encode(std::span<const Value> tuple) const {
    TupleCode code = 0;
    for (Value v : tuple) code = static_cast<TupleCode>(code * q_ + v);
    return code;
}

std::vector<Value> ProjectionClosure::decode(TupleCode code) const {
    std::vector<Value> out(width());
    for (std::size_t t = width(); t > 0; --t) {
        out[t - 1] = static_cast<Value>(code % q_);
        code /= static_cast<TupleCode>(q_);
    }
    return out;
}

bool ProjectionClosure::add(TupleCode code, std::int64_t seed, const std::size_t* parents) {
    if (index_[code] >= 0) return false;
    index_[code] = static_cast<std::int32_t>(codes_.size());
    codes_.push_back(code);
    const std::size_t w = width();
    const std::size_t base = digits_.size();
    digits_.resize(base + w);
    TupleCode rest = code;
    for (std::size_t t = w; t > 0; --t) {
        digits_[base + t - 1] = static_cast<Value>(rest % q_);
        rest /= static_cast<TupleCode>(q_);
    }
    if (!wanted_.empty() && wanted_[code]) --wanted_left_;
    seed_of_.push_back(seed);
    for (std::size_t p = 0; p < arity_; ++p) parents_.push_back(parents ? parents[p] : 0);
    return true;
}

void ProjectionClosure::run() {
    const std::size_t w = width();
    auto finished = [&] { return codes_.size() == space_ || (!wanted_.empty() && wanted_left_ == 0); };

    std::vector<const Value*> cols(w);
    for (std::size_t t = 0; t < w; ++t) cols[t] = seeds_->column(coords_[t]);
    for (std::size_t s = 0; s < seeds_->size(); ++s) {
        TupleCode code = 0;
        for (std::size_t t = 0; t < w; ++t) code = static_cast<TupleCode>(code * q_ + cols[t][s]);
        add(code, static_cast<std::int64_t>(s), nullptr);
        if (finished()) return;
    }
    if (codes_.empty() || finished()) return;

    std::vector<std::size_t> idx(arity_, 0);
    std::vector<Value> args(arity_);
    std::size_t done = 0;
    bool stop = false;

    auto apply = [&]() {
        TupleCode code = 0;
        if (arity_ == 3) {
            const Value* x = &digits_[idx[0] * w];
            const Value* y = &digits_[idx[1] * w];
            const Value* z = &digits_[idx[2] * w];
            for (std::size_t t = 0; t < w; ++t) code = static_cast<TupleCode>(code * q_ + op_->apply3(x[t], y[t], z[t]));
        } else {
            for (std::size_t t = 0; t < w; ++t) {
                for (std::size_t p = 0; p < arity_; ++p) args[p] = digits_[idx[p] * w + t];
                code = static_cast<TupleCode>(code * q_ + (*op_)(args));
            }
        }
        if (add(code, -1, idx.data()) && finished()) stop = true;
    };

    while (!stop) {
        const std::size_t snapshot = codes_.size();
        if (snapshot == done) break;
        // Lexicographic odometer over [0,snapshot)^arity; `fresh` tracks whether
        // some earlier position already holds an index >= done.
        auto visit = [&](auto& self, std::size_t pos, bool fresh) -> void {
            if (pos + 1 == arity_) {
                for (idx[pos] = fresh ? 0 : done; idx[pos] < snapshot && !stop; ++idx[pos]) apply();
                return;
            }
            for (idx[pos] = 0; idx[pos] < snapshot && !stop; ++idx[pos]) self(self, pos + 1, fresh || idx[pos] >= done);
        };
        visit(visit, 0, false);
        done = snapshot;
    }
}

std::optional<TupleCode> ProjectionClosure::smallest_of(std::span<const TupleCode> candidates) const {
    for (TupleCode c : candidates) {
        if (c < space_ && index_[c] >= 0) return c;
    }
    return std::nullopt;
}

MapRef ProjectionClosure::witness(TupleCode code) const {
    const auto idx = static_cast<std::size_t>(index_[code]);
    if (cache_.size() < codes_.size()) cache_.resize(codes_.size());
    if (cache_[idx]) return cache_[idx];
    if (seed_of_[idx] >= 0) {
        cache_[idx] = seeds_->map(static_cast<std::size_t>(seed_of_[idx]));
        return cache_[idx];
    }
    std::vector<MapRef> parts(arity_);
    std::vector<const AssignmentMap*> ptrs(arity_);
    for (std::size_t p = 0; p < arity_; ++p) {
        parts[p] = witness(codes_[parents_[idx * arity_ + p]]);
        ptrs[p] = parts[p].get();
    }
    cache_[idx] = make_map(apply_pointwise(*op_, std::span<const AssignmentMap* const>(ptrs)));
    return cache_[idx];
}

std::vector<TupleCode> allowed_codes(const ProjectionTarget& target, std::size_t q) {
    std::vector<TupleCode> out;
    out.reserve(target.allowed.size());
    for (const auto& tuple : target.allowed) {
        if (tuple.size() != target.coords.size()) throw LengthMismatch("target tuple width differs from coords");
        TupleCode code = 0;
        for (Value v : tuple) {
            if (v >= q) throw ParameterError("target value out of range");
            code = static_cast<TupleCode>(code * q + v);
        }
        out.push_back(code);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

MapRef nonempty(const CompactRepresentation& rep, const OperationTable& op, const ProjectionTarget& target) {
    const auto codes = allowed_codes(target, op.q());
    if (codes.empty() || rep.empty()) return nullptr;
    for (auto c : target.coords) {
        if (c >= rep.n()) throw IndexOutOfRange("target coordinate " + std::to_string(c) + " out of range");
    }
    const SeedMatrix seeds(rep);
    const TupleCode first = codes.front();
    const ProjectionClosure closure(seeds, op, target.coords, std::span<const TupleCode>(&first, 1));
    const auto best = closure.smallest_of(codes);
    return best ? closure.witness(*best) : nullptr;
}

}  // namespace mcsp
