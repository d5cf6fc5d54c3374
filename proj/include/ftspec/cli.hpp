#pragma once

// Command-line front end. dispatch() takes the arguments after the program
// name and returns the process exit code:
//   0 success / pass, 1 verification or equivalence failure,
//   2 parse or validation error, 3 size cap exceeded.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ftspec/circuit.hpp"
#include "ftspec/compile.hpp"
#include "ftspec/error.hpp"
#include "ftspec/frame.hpp"
#include "ftspec/oracle.hpp"
#include "ftspec/spec_format.hpp"
#include "ftspec/transforms.hpp"
#include "ftspec/verifier.hpp"

namespace ftspec::cli {

enum Exit : int { kOk = 0, kFail = 1, kInvalid = 2, kSizeCap = 3 };

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw ValidationError("cannot write '" + path + "'");
}

inline IcmCircuit load_circuit(const std::string& path) {
    try {
        IcmCircuit c = parse_circuit(read_file(path));
        require_valid(c);
        return c;
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), 0);
    }
}

inline Specification load_spec(const std::string& path) {
    try {
        Specification s = parse_spec(read_file(path));
        require_valid(s);
        return s;
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), 0);
    }
}

inline void emit(std::ostream& out, const std::string& text, const std::string& path) {
    if (path.empty())
        out << text;
    else
        write_file(path, text);
}

inline std::string frame_comment(const PauliFrame& f) {
    std::string out;
    std::istringstream is(format_frame(f));
    for (std::string line; std::getline(is, line);) out += "# frame: " + line + "\n";
    return out;
}

} // namespace detail

inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Specification and verification of ICM circuits", "ftspec"};
    app.require_subcommand(1);
    std::string format = "text";
    app.add_option("--format", format, "Report style")->check(CLI::IsMember({"text", "records"}));

    std::string a, b, output, demote, flavour = "rotated_meas";
    bool dual = false, uncorrected = false, per_outcome = false;
    std::size_t shots = 100;
    std::uint64_t seed = 1;
    double tol = 1e-9;

    auto* parse = app.add_subcommand("parse", "Validate a circuit and print its canonical form");
    parse->add_option("circuit", a)->required();

    auto* derive = app.add_subcommand("derive-spec", "Derive the specification of a circuit");
    derive->add_option("circuit", a)->required();
    derive->add_option("-o,--output", output, "Write to file");

    auto* ver = app.add_subcommand("verify", "Check a circuit against a specification");
    ver->add_option("circuit", a)->required();
    ver->add_option("spec", b)->required();

    auto* diff = app.add_subcommand("spec-diff", "Compare two specifications");
    diff->add_option("specA", a)->required();
    diff->add_option("specB", b)->required();

    auto* equiv = app.add_subcommand("equiv", "Compare the channels of two circuits");
    equiv->add_option("circuitA", a)->required();
    equiv->add_option("circuitB", b)->required();
    equiv->add_option("--tol", tol, "Maximum entrywise Choi deviation");
    equiv->add_flag("--per-outcome", per_outcome, "Also require equal maps for every measurement outcome");

    auto* trans = app.add_subcommand("transform", "Rewrite a circuit");
    trans->add_option("circuit", a)->required();
    auto* dual_flag = trans->add_flag("--dual", dual, "Whole-circuit dual");
    auto* demote_opt = trans->add_option("--demote", demote, "Demote the rotated measurement of a qubit");
    dual_flag->excludes(demote_opt);
    trans->add_option("-o,--output", output, "Write to file");

    auto* comp = app.add_subcommand("compile", "Compile a gate list to an ICM circuit");
    comp->add_option("gatelist", a)->required();
    comp->add_option("--flavour", flavour)->check(CLI::IsMember({"rotated_init", "rotated_meas"}));
    comp->add_flag("--uncorrected", uncorrected, "Emit the uncorrected T gadgets without a frame");
    comp->add_option("-o,--output", output, "Write to file");

    auto* sample = app.add_subcommand("sample-verify", "Sampled verification with trusted initialisation and measurement");
    sample->add_option("circuit", a)->required();
    sample->add_option("spec", b)->required();
    sample->add_option("--shots", shots, "Shots per row");
    sample->add_option("--seed", seed, "Random seed");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    }
    const ReportFormat fmt = format == "records" ? ReportFormat::Records : ReportFormat::Text;

    try {
        if (parse->parsed()) {
            const IcmCircuit c = detail::load_circuit(a);
            if (fmt == ReportFormat::Records)
                out << "status: valid\nqubits: " << c.size() << "\ncnots: " << c.cnots.size()
                    << "\nrules: " << c.rules.size() << "\n";
            else
                out << serialize_circuit(c);
            return kOk;
        }
        if (derive->parsed()) {
            detail::emit(out, serialize_spec(derive_specification(detail::load_circuit(a))), output);
            return kOk;
        }
        if (ver->parsed()) {
            const VerificationReport r = verify(detail::load_circuit(a), detail::load_spec(b));
            out << format_report(r, fmt);
            return r.overall() ? kOk : kFail;
        }
        if (diff->parsed()) {
            const EquivalenceReport r = spec_equiv(detail::load_spec(a), detail::load_spec(b));
            out << format_report(r, fmt);
            return r.equal() ? kOk : kFail;
        }
        if (equiv->parsed()) {
            const IcmCircuit ca = detail::load_circuit(a), cb = detail::load_circuit(b);
            const ChoiMatrix ja = channel_choi(ca), jb = channel_choi(cb);
            const bool same_dims = ja.rows() == jb.rows();
            const double dev = same_dims ? (ja - jb).cwiseAbs().maxCoeff() : 0.0;
            const bool channel_equal = same_dims && channels_equal(ja, jb, tol);
            const bool outcomes_equal = !per_outcome || (same_dims && branches_equal(ca, cb, tol));
            const bool equal = channel_equal && outcomes_equal;
            if (fmt == ReportFormat::Records) {
                out << "equivalent: " << (equal ? "yes" : "no") << "\n";
                if (same_dims) out << "max_deviation: " << std::setprecision(3) << dev << "\n";
                else out << "dimension: " << ja.rows() << " vs " << jb.rows() << "\n";
                if (per_outcome) out << "per_outcome: " << (outcomes_equal ? "yes" : "no") << "\n";
            } else {
                if (same_dims)
                    out << "channels " << (channel_equal ? "equal" : "differ") << " (max Choi deviation " << std::setprecision(3)
                        << dev << ", tolerance " << tol << ")\n";
                else
                    out << "channels differ: Choi dimension " << ja.rows() << " vs " << jb.rows() << "\n";
                if (per_outcome) out << "per-outcome maps " << (outcomes_equal ? "equal" : "differ") << "\n";
            }
            return equal ? kOk : kFail;
        }
        if (trans->parsed()) {
            if (!dual && demote.empty()) {
                err << "error: transform needs --dual or --demote <qubit>\n";
                return kInvalid;
            }
            const IcmCircuit c = detail::load_circuit(a);
            detail::emit(out, serialize_circuit(dual ? dual_rewrite(c) : demote_rotated_measurement(c, demote)), output);
            return kOk;
        }
        if (comp->parsed()) {
            GateList g;
            try {
                g = parse_gates(detail::read_file(a));
            } catch (const ParseError& e) {
                throw ParseError(a + ": " + e.what(), 0);
            }
            const CompileResult r = compile_to_icm(g, *flavour_from_name(flavour), !uncorrected);
            detail::emit(out, serialize_circuit(r.circuit) + detail::frame_comment(r.frame), output);
            return kOk;
        }
        if (sample->parsed()) {
            const SampleReport r = sample_verify(detail::load_circuit(a), detail::load_spec(b), shots, seed);
            out << format_report(r, fmt);
            return r.overall() ? kOk : kFail;
        }
    } catch (const SizeCapError& e) {
        err << "error: " << e.what() << "\n";
        return kSizeCap;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kInvalid;
}

} // namespace ftspec::cli
