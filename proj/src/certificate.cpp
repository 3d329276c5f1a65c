#include "mcsp/certificate.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <set>

#include "engine.hpp"
#include "mcsp/error.hpp"
#include "mcsp/gmm_solver.hpp"

namespace mcsp {

namespace {

std::string sha256_hex(const std::string& text) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 computation failed");
    }
    std::string hex;
    char buf[3];
    for (unsigned int t = 0; t < len; ++t) {
        std::snprintf(buf, sizeof buf, "%02x", digest[t]);
        hex += buf;
    }
    return hex;
}

CheckVerdict reject(std::optional<std::size_t> step, std::string reason) { return {false, step, std::move(reason)}; }

// Every stored map must respect the domains and the first `l` edges.
std::optional<std::string> membership_failure(const CompactRepresentation& rep, const Instance& inst, std::size_t l) {
    std::optional<std::string> failure;
    rep.for_each([&](const WitnessKey&, const AssignmentMap& m) {
        if (failure) return;
        for (std::size_t i = 0; i < inst.n(); ++i) {
            if (!inst.in_domain(i, m[i])) {
                failure = "stored map leaves the domain of variable " + std::to_string(i);
                return;
            }
        }
        for (std::size_t e = 0; e < l; ++e) {
            const Edge& edge = inst.edge(e);
            if (!edge.rel.contains(m[edge.from], m[edge.to])) {
                failure = "stored map violates edge (" + std::to_string(edge.from) + "," + std::to_string(edge.to) + ")";
                return;
            }
        }
    });
    return failure;
}

}  // namespace

std::string instance_digest(const Instance& inst) { return sha256_hex(serialize_instance(inst)); }

std::string algebra_digest(const OperationTable& op) { return sha256_hex(serialize_algebra(op)); }

std::string mode_name(Mode mode) { return mode == Mode::Gmm ? "gmm" : "maltsev"; }

nlohmann::json certificate_to_json(const Trace& trace) {
    nlohmann::json j;
    j["instance_digest"] = instance_digest(trace.instance);
    j["algebra_digest"] = algebra_digest(trace.op);
    j["mode"] = mode_name(trace.mode);
    j["edges"] = nlohmann::json::array();
    for (const auto& e : trace.instance.edges()) j["edges"].push_back(edge_to_json(e));
    j["reps"] = nlohmann::json::array();
    for (const auto& rep : trace.reps) j["reps"].push_back(representation_to_json(rep));
    j["verdict"] = "unsat";
    return j;
}

std::string emit_certificate(const SolveOutcome& outcome) {
    const auto* unsat = std::get_if<Unsat>(&outcome);
    if (unsat == nullptr) throw NotUnsat();
    return certificate_to_json(unsat->trace).dump() + "\n";
}

CheckVerdict check_certificate(const Instance& inst, const OperationTable& op, const std::string& text,
                               ExecPolicy policy) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        return reject(std::nullopt, std::string("malformed JSON: ") + e.what());
    }
    return check_certificate(inst, op, j, policy);
}

CheckVerdict check_certificate(const Instance& inst, const OperationTable& op, const nlohmann::json& cert,
                               ExecPolicy policy) {
    static const std::set<std::string> fields{"instance_digest", "algebra_digest", "mode", "edges", "reps", "verdict"};
    if (!cert.is_object()) return reject(std::nullopt, "certificate must be a JSON object");
    for (const auto& [key, value] : cert.items()) {
        if (!fields.count(key)) return reject(std::nullopt, "unexpected field '" + key + "'");
    }
    for (const auto& f : fields) {
        if (!cert.contains(f)) return reject(std::nullopt, "missing field '" + f + "'");
    }
    if (cert["verdict"] != "unsat") return reject(std::nullopt, "verdict must be \"unsat\"");
    if (cert["instance_digest"] != instance_digest(inst)) return reject(std::nullopt, "instance digest mismatch");
    if (cert["algebra_digest"] != algebra_digest(op)) return reject(std::nullopt, "algebra digest mismatch");

    Mode mode;
    if (cert["mode"] == "maltsev") {
        mode = Mode::Maltsev;
    } else if (cert["mode"] == "gmm") {
        mode = Mode::Gmm;
    } else {
        return reject(std::nullopt, "mode must be \"maltsev\" or \"gmm\"");
    }

    std::optional<GmmContext> ctx;
    try {
        if (mode == Mode::Maltsev) {
            if (!validate_maltsev(op).accepted) return reject(std::nullopt, "operation is not Mal'tsev");
        } else {
            ctx = make_gmm_context(op);
        }
    } catch (const Error& e) {
        return reject(std::nullopt, std::string("operation rejected: ") + e.what());
    }
    if (const auto compat = check_compatibility(inst, op); !compat.accepted) {
        return reject(std::nullopt, "operation does not preserve " + compat.failing);
    }

    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : inst.edges()) edges.push_back(edge_to_json(e));
    if (cert["edges"] != edges) return reject(std::nullopt, "edge list differs from the instance");

    const auto& jreps = cert["reps"];
    const std::size_t m = inst.m();
    if (!jreps.is_array() || jreps.size() != m + 1) {
        return reject(std::nullopt, "expected " + std::to_string(m + 1) + " representations");
    }

    const std::size_t k = ctx ? ctx->k : 0;
    std::vector<CompactRepresentation> reps;
    reps.reserve(m + 1);
    for (std::size_t l = 0; l <= m; ++l) {
        try {
            reps.push_back(representation_from_json(jreps[l], mode, inst.n(), inst.q(), k));
            signature_of(reps.back());
        } catch (const Error& e) {
            return reject(l, e.what());
        }
    }

    const detail::Algebra alg{mode, ctx ? ctx->op : op, ctx ? &ctx->pairs : nullptr, k};
    const CompactRepresentation init = inst.has_empty_domain()
                                           ? CompactRepresentation(mode, inst.n(), inst.q(), k)
                                           : init_representation(inst, mode, alg.pairs, k);
    if (!(reps[0] == init)) return reject(0, "R_0 differs from the initial representation");

    auto step_failure = [&](std::size_t l) -> std::optional<std::string> {
        if (auto f = membership_failure(reps[l], inst, l)) return f;
        if (l > 0 && !(detail::next(reps[l - 1], inst.edge(l - 1), alg, ExecPolicy::Serial) == reps[l])) {
            return "replaying step " + std::to_string(l) + " does not reproduce R_" + std::to_string(l);
        }
        return std::nullopt;
    };
    if (policy == ExecPolicy::Serial || worker_count() < 2) {
        for (std::size_t l = 0; l <= m; ++l) {
            if (auto f = step_failure(l)) return reject(l, *f);
        }
    } else {
        // Steps are independent given the parsed sequence; report the smallest failing one.
        std::vector<std::optional<std::string>> failures(m + 1);
        parallel_for(m + 1, policy, [&](std::size_t l) { failures[l] = step_failure(l); });
        for (std::size_t l = 0; l <= m; ++l) {
            if (failures[l]) return reject(l, *failures[l]);
        }
    }
    if (!reps[m].empty()) return reject(m, "final representation is not empty");
    return {true, std::nullopt, "accepted"};
}

}  // namespace mcsp
