// mcsp: solve, check, generate and inspect binary CSP instances with
// Mal'tsev or generalized majority-minority polymorphisms.
//
// Exit status: 0 SAT/ACCEPT/success, 1 UNSAT/REJECT, 2 usage or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "mcsp/certificate.hpp"
#include "mcsp/error.hpp"
#include "mcsp/gmm_solver.hpp"
#include "mcsp/maltsev_solver.hpp"
#include "mcsp/oracle.hpp"

using namespace mcsp;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;

struct InputError : Error {
    using Error::Error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw InputError("cannot write '" + path + "'");
}

json to_json(const AssignmentMap& m) { return json(std::vector<Value>(m.begin(), m.end())); }

json signature_json(const SignatureSet& sig) {
    json out = json::array();
    for (const auto& t : sig) out.push_back({t.i, t.a, t.b});
    return out;
}

std::string pair_kind_name(PairKind k) { return k == PairKind::Majority ? "majority" : "minority"; }

struct Options {
    std::string instance;
    std::string algebra;
    std::string cert;
    bool gmm = false;
    bool as_json = false;
    bool serial = false;
    std::size_t budget = oracle::kDefaultBudget;
    std::uint64_t seed = 0;

    // gen
    std::string family = "lin_p";
    std::size_t p = 2;
    std::string group = "z4";
    std::size_t n = 4;
    std::size_t m = 4;
    bool unsat = false;
    std::string out_instance;
    std::string out_algebra;
    std::string manifest;
};

ExecPolicy policy_of(const Options& o) { return o.serial ? ExecPolicy::Serial : ExecPolicy::Parallel; }

int run_solve(const Options& o) {
    const Instance inst = parse_instance(read_file(o.instance));
    const OperationTable op = parse_algebra(read_file(o.algebra));
    const SolveOutcome out = o.gmm ? solve_gmm(inst, make_gmm_context(op), policy_of(o)) : solve(inst, op, policy_of(o));

    if (const auto* sat = std::get_if<Sat>(&out)) {
        if (o.as_json) {
            std::cout << json{{"verdict", "sat"}, {"witness", to_json(sat->witness)}}.dump() << "\n";
        } else {
            std::cout << "SAT\n" << to_json(sat->witness).dump() << "\n";
        }
        return kOk;
    }
    const auto& trace = std::get<Unsat>(out).trace;
    std::size_t witnesses = 0;
    for (const auto& rep : trace.reps) witnesses += rep.size();
    if (!o.cert.empty()) write_file(o.cert, emit_certificate(out));
    if (o.as_json) {
        json j{{"verdict", "unsat"}, {"m", inst.m()}, {"witnesses", witnesses}};
        if (!o.cert.empty()) j["certificate"] = o.cert;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "UNSAT m=" << inst.m() << " witnesses=" << witnesses << "\n";
        if (!o.cert.empty()) std::cout << "certificate written to " << o.cert << "\n";
    }
    return kNegative;
}

int run_check(const Options& o) {
    const Instance inst = parse_instance(read_file(o.instance));
    const OperationTable op = parse_algebra(read_file(o.algebra));
    const auto v = check_certificate(inst, op, read_file(o.cert), policy_of(o));
    if (o.as_json) {
        json j{{"verdict", v.accepted ? "accept" : "reject"}, {"reason", v.reason}};
        j["step"] = v.step ? json(*v.step) : json(nullptr);
        std::cout << j.dump() << "\n";
    } else if (v.accepted) {
        std::cout << "ACCEPT\n";
    } else {
        std::cout << "REJECT";
        if (v.step) std::cout << " step " << *v.step;
        std::cout << ": " << v.reason << "\n";
    }
    return v.accepted ? kOk : kNegative;
}

int run_gen(const Options& o) {
    oracle::GeneratorSpec spec;
    const auto family = oracle::family_from_name(o.family);
    if (!family) throw ParameterError("unknown family '" + o.family + "'");
    spec.family = *family;
    spec.p = o.p;
    spec.group = o.group;
    spec.n = o.n;
    spec.m = o.m;
    spec.seed = o.seed;
    spec.satisfiable = !o.unsat;
    const auto gen = oracle::generate(spec);

    write_file(o.out_instance, serialize_instance(gen.instance));
    write_file(o.out_algebra, serialize_algebra(gen.op));
    json manifest{{"family", o.family}, {"p", o.p}, {"group", o.group}, {"n", o.n}, {"m", o.m},
                  {"seed", o.seed},     {"satisfiable", spec.satisfiable}};
    manifest["planted"] = gen.planted ? to_json(*gen.planted) : json(nullptr);
    if (!o.manifest.empty()) write_file(o.manifest, manifest.dump() + "\n");
    if (o.as_json) {
        std::cout << manifest.dump() << "\n";
    } else {
        std::cout << "wrote " << o.out_instance << " (m=" << gen.instance.m() << ") and " << o.out_algebra << "\n";
    }
    return kOk;
}

int run_validate(const Options& o) {
    const OperationTable op = parse_algebra(read_file(o.algebra));
    json j{{"q", op.q()}, {"arity", op.arity()}};
    bool accepted = false;
    if (o.gmm) {
        const auto v = validate_gmm(op);
        accepted = v.accepted;
        j["gmm"] = v.accepted;
        if (v.failing_pair) j["failing_pair"] = {v.failing_pair->first, v.failing_pair->second};
        if (v.accepted) {
            json pairs = json::array();
            for (Value a = 0; a < op.q(); ++a) {
                for (Value b = a + 1; b < op.q(); ++b) pairs.push_back({{"pair", {a, b}}, {"kind", pair_kind_name(v.pairs(a, b))}});
            }
            j["pairs"] = pairs;
        }
    } else {
        if (op.arity() != 3) throw ArityMismatch("a Mal'tsev operation must be ternary");
        const auto v = validate_maltsev(op);
        accepted = v.accepted;
        j["maltsev"] = v.accepted;
        if (v.violation) j["violation"] = *v.violation;
    }
    if (o.as_json) {
        std::cout << j.dump() << "\n";
        return accepted ? kOk : kNegative;
    }
    if (o.gmm) {
        if (!accepted) {
            const auto& fp = j["failing_pair"];
            std::cout << "NOT GMM: pair {" << fp[0] << "," << fp[1] << "} is neither majority nor minority\n";
        } else {
            std::cout << "GMM (arity " << op.arity() << ")\n";
            for (const auto& p : j["pairs"]) {
                std::cout << "  {" << p["pair"][0] << "," << p["pair"][1] << "} " << p["kind"].get<std::string>() << "\n";
            }
        }
    } else if (accepted) {
        std::cout << "MALTSEV\n";
    } else {
        std::cout << "NOT MALTSEV: violated at " << j["violation"].dump() << "\n";
    }
    return accepted ? kOk : kNegative;
}

int run_oracle(const Options& o) {
    const Instance inst = parse_instance(read_file(o.instance));
    std::optional<GmmContext> ctx;
    if (o.gmm) {
        if (o.algebra.empty()) throw InputError("--gmm needs --algebra to classify pairs");
        ctx = make_gmm_context(parse_algebra(read_file(o.algebra)));
    }
    const auto sols = oracle::enumerate_solutions(inst, o.budget);
    const auto sig = oracle::signature_of_relation(sols, inst.n(), ctx ? &ctx->pairs : nullptr);
    if (o.as_json) {
        std::cout << json{{"solutions", sols.size()}, {"signature", signature_json(sig)}}.dump() << "\n";
    } else {
        std::cout << "solutions " << sols.size() << "\n";
        std::cout << "signature " << signature_json(sig).dump() << "\n";
    }
    return sols.empty() ? kNegative : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polymorphism-based solver for binary constraint satisfaction problems"};
    app.require_subcommand(1, 1);
    Options o;

    auto* solve_cmd = app.add_subcommand("solve", "decide an instance; write a certificate when unsatisfiable");
    solve_cmd->add_option("--instance", o.instance, "instance JSON")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--algebra", o.algebra, "operation table JSON")->required()->check(CLI::ExistingFile);
    solve_cmd->add_flag("--gmm", o.gmm, "treat the operation as generalized majority-minority");
    solve_cmd->add_option("--cert", o.cert, "where to write the certificate");

    auto* check_cmd = app.add_subcommand("check", "verify an unsatisfiability certificate");
    check_cmd->add_option("--instance", o.instance, "instance JSON")->required()->check(CLI::ExistingFile);
    check_cmd->add_option("--algebra", o.algebra, "operation table JSON")->required()->check(CLI::ExistingFile);
    check_cmd->add_option("--cert", o.cert, "certificate JSON")->required()->check(CLI::ExistingFile);

    auto* gen_cmd = app.add_subcommand("gen", "generate a seeded instance and its operation");
    gen_cmd->add_option("--family", o.family, "lin_p, coset, random_invariant or random_gmm")->capture_default_str();
    gen_cmd->add_option("--p", o.p, "modulus or domain size")->capture_default_str();
    gen_cmd->add_option("--group", o.group, "z<k> or s3 for the coset family")->capture_default_str();
    gen_cmd->add_option("--n", o.n, "variables")->capture_default_str();
    gen_cmd->add_option("--m", o.m, "edges")->capture_default_str();
    gen_cmd->add_flag("--unsat", o.unsat, "inject a contradiction");
    gen_cmd->add_option("--out-instance", o.out_instance, "instance output path")->required();
    gen_cmd->add_option("--out-algebra", o.out_algebra, "algebra output path")->required();
    gen_cmd->add_option("--manifest", o.manifest, "manifest output path (seed, planted witness)");

    auto* validate_cmd = app.add_subcommand("validate-algebra", "check the Mal'tsev law or classify GMM pairs");
    validate_cmd->add_option("--algebra", o.algebra, "operation table JSON")->required()->check(CLI::ExistingFile);
    validate_cmd->add_flag("--gmm", o.gmm, "classify pairs instead of checking the Mal'tsev law");

    auto* oracle_cmd = app.add_subcommand("oracle", "enumerate solutions by brute force");
    oracle_cmd->add_option("--instance", o.instance, "instance JSON")->required()->check(CLI::ExistingFile);
    oracle_cmd->add_option("--algebra", o.algebra, "operation table JSON (with --gmm)")->check(CLI::ExistingFile);
    oracle_cmd->add_flag("--gmm", o.gmm, "keep only minority pairs in the signature");
    oracle_cmd->add_option("--budget", o.budget, "maximum q^n to enumerate")->capture_default_str();

    for (auto* cmd : {solve_cmd, check_cmd, gen_cmd, validate_cmd, oracle_cmd}) {
        cmd->add_flag("--json", o.as_json, "machine-readable output");
    }
    for (auto* cmd : {solve_cmd, check_cmd}) cmd->add_flag("--serial", o.serial, "run on one thread");
    gen_cmd->add_option("--seed", o.seed, "generator seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*solve_cmd) return run_solve(o);
        if (*check_cmd) return run_check(o);
        if (*gen_cmd) return run_gen(o);
        if (*validate_cmd) return run_validate(o);
        return run_oracle(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}
