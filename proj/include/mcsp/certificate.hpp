#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include <json.hpp>

#include "mcsp/algebra.hpp"
#include "mcsp/instance.hpp"
#include "mcsp/maltsev_solver.hpp"
#include "mcsp/parallel.hpp"

namespace mcsp {

/// Hex SHA-256 of the canonical serialization.
std::string instance_digest(const Instance& inst);
std::string algebra_digest(const OperationTable& op);

std::string mode_name(Mode mode);

/// {"instance_digest", "algebra_digest", "mode", "edges", "reps", "verdict": "unsat"}.
nlohmann::json certificate_to_json(const Trace& trace);

/// Canonical text: sorted keys, compact, newline-terminated. Throws NotUnsat for a Sat outcome.
std::string emit_certificate(const SolveOutcome& outcome);

struct CheckVerdict {
    bool accepted = false;
    /// The first failing step l (0..m); empty when the header itself is bad.
    std::optional<std::size_t> step;
    std::string reason;
};

/// Accepts iff the header binds the certificate to (inst, op), R_0 is the
/// initial representation, every stored map of R_l solves the first l edges,
/// replaying each step reproduces R_l exactly, and R_m is empty.
CheckVerdict check_certificate(const Instance& inst, const OperationTable& op, const nlohmann::json& cert,
                               ExecPolicy policy = ExecPolicy::Parallel);
/// Text form; malformed JSON is a rejection.
CheckVerdict check_certificate(const Instance& inst, const OperationTable& op, const std::string& text,
                               ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace mcsp
