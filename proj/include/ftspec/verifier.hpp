#pragma once

// Checks a candidate ICM circuit against a specification (ST, I, O) and
// compares two specifications.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ftspec/circuit.hpp"
#include "ftspec/spec_format.hpp"
#include "ftspec/truth_table.hpp"

namespace ftspec {

enum class ReportFormat { Text, Records };

struct RosterCheck {
    bool ok = true;
    std::string detail; // empty when ok
};

struct InitCheck {
    bool pass = true;
    std::vector<std::string> mismatched; // "q2: expected Z, found X"
};

struct RowFailure {
    std::size_t index = 0;
    PauliOperator input;
    PauliOperator expected; // signed
    PauliOperator actual;   // signed
};

struct TableCheck {
    bool pass = true;
    std::vector<RowFailure> failures;
};

struct RuleCheck {
    bool pass = true;
    std::optional<std::size_t> first_divergence;
    std::string detail;
};

struct VerificationReport {
    RosterCheck roster;
    InitCheck criterion1;
    TableCheck criterion2;
    RuleCheck criterion3;

    bool overall() const noexcept { return roster.ok && criterion1.pass && criterion2.pass && criterion3.pass; }
};

namespace detail {

inline RosterCheck compare_rosters(const std::vector<std::string>& io_a, const std::vector<std::string>& anc_a,
                                   const std::vector<std::string>& io_b, const std::vector<std::string>& anc_b,
                                   const char* name_a, const char* name_b) {
    RosterCheck out;
    auto diff = [&](const std::vector<std::string>& a, const std::vector<std::string>& b, const char* what) {
        std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
        for (const auto& id : sa)
            if (!sb.count(id)) out.detail += std::string(what) + " '" + id + "' only in " + name_a + "; ";
        for (const auto& id : sb)
            if (!sa.count(id)) out.detail += std::string(what) + " '" + id + "' only in " + name_b + "; ";
    };
    if (io_a.size() + anc_a.size() != io_b.size() + anc_b.size())
        out.detail += std::string(name_a) + " has " + std::to_string(io_a.size() + anc_a.size()) + " qubits, " +
                      name_b + " has " + std::to_string(io_b.size() + anc_b.size()) + "; ";
    diff(io_a, io_b, "io qubit");
    diff(anc_a, anc_b, "ancilla");
    if (!out.detail.empty()) {
        out.ok = false;
        out.detail.erase(out.detail.size() - 2);
    }
    return out;
}

inline RuleCheck compare_rules(const std::vector<MeasurementRule>& expected, const std::vector<MeasurementRule>& actual) {
    RuleCheck out;
    const std::size_t common = std::min(expected.size(), actual.size());
    for (std::size_t i = 0; i < common; ++i) {
        if (!(expected[i] == actual[i])) {
            out.pass = false;
            out.first_divergence = i;
            out.detail = "expected " + rule_tuple(expected[i]) + ", found " + rule_tuple(actual[i]);
            return out;
        }
    }
    if (expected.size() != actual.size()) {
        out.pass = false;
        out.first_divergence = common;
        out.detail = expected.size() > actual.size() ? "missing " + rule_tuple(expected[common])
                                                     : "unexpected " + rule_tuple(actual[common]);
    }
    return out;
}

inline std::vector<std::string> roster_ancillae(const Specification& s) {
    std::vector<std::string> out;
    for (const InitEntry& e : s.init) out.push_back(e.qubit);
    return out;
}

} // namespace detail

/// Checks the three criteria of the verification theorem. The candidate must be
/// a valid ICM circuit; every other finding is report data.
inline VerificationReport verify(const IcmCircuit& candidate, const Specification& spec) {
    require_valid(candidate);
    require_valid(spec);
    VerificationReport rep;

    const Roster roster = roster_of(candidate);
    std::vector<std::string> cand_io, cand_anc;
    for (std::size_t col = 0; col < roster.size(); ++col)
        (candidate.qubits[roster.circuit_index[col]].kind == QubitKind::Io ? cand_io : cand_anc)
            .push_back(roster.ids[col]);
    rep.roster = detail::compare_rosters(spec.io_ids, detail::roster_ancillae(spec), cand_io, cand_anc,
                                         "specification", "candidate");
    if (!rep.roster.ok) {
        rep.criterion1.pass = rep.criterion2.pass = rep.criterion3.pass = false;
        return rep;
    }

    // Criterion 1: initialisation map.
    for (const InitEntry& e : spec.init) {
        const QubitDecl& q = candidate.qubit(e.qubit);
        if (q.init != e.basis) {
            rep.criterion1.pass = false;
            rep.criterion1.mismatched.push_back(e.qubit + ": expected " + basis_char(e.basis) + ", found " +
                                                basis_char(q.init.value_or(Basis::Z)));
        }
    }

    // Criterion 2: every ST row is supported by the candidate's CNOT region.
    const std::vector<std::string> spec_roster = spec.roster();
    std::vector<std::size_t> to_circuit(spec_roster.size());
    for (std::size_t col = 0; col < spec_roster.size(); ++col) to_circuit[col] = candidate.index_of(spec_roster[col]);
    const std::vector<Cnot> gates = stabiliser_cnots(candidate);
    for (std::size_t i = 0; i < spec.table.rows.size(); ++i) {
        const TableRow& row = spec.table.rows[i];
        PauliOperator wide = remap_pauli(row.input(), to_circuit, candidate.size());
        PauliOperator actual = project_pauli(conjugate_circuit(std::move(wide), gates), to_circuit);
        if (!(actual == row.output())) {
            rep.criterion2.pass = false;
            rep.criterion2.failures.push_back({i, row.input(), row.output(), std::move(actual)});
        }
    }

    // Criterion 3: ancilla measurement rules, order-sensitive.
    rep.criterion3 = detail::compare_rules(spec.rules, ancilla_rules(candidate));
    return rep;
}

struct EquivalenceReport {
    RosterCheck roster;
    bool init_equal = true;
    std::vector<std::string> init_diff;
    RuleCheck rules;
    bool table_equal = true;

    bool equal() const noexcept { return roster.ok && init_equal && rules.pass && table_equal; }
};

/// Specification equivalence: equal I, equal O (order-sensitive) and equal
/// truth-table row groups. Columns of `b` are matched to `a` by qubit name.
inline EquivalenceReport spec_equiv(const Specification& a, const Specification& b) {
    require_valid(a);
    require_valid(b);
    EquivalenceReport rep;
    rep.roster = detail::compare_rosters(a.io_ids, detail::roster_ancillae(a), b.io_ids, detail::roster_ancillae(b),
                                         "first", "second");
    if (!rep.roster.ok) {
        rep.init_equal = rep.table_equal = rep.rules.pass = false;
        return rep;
    }

    std::map<std::string, Basis> init_b;
    for (const InitEntry& e : b.init) init_b[e.qubit] = e.basis;
    for (const InitEntry& e : a.init) {
        if (init_b.at(e.qubit) != e.basis) {
            rep.init_equal = false;
            rep.init_diff.push_back(e.qubit + ": " + basis_char(e.basis) + " vs " + basis_char(init_b.at(e.qubit)));
        }
    }
    rep.rules = detail::compare_rules(a.rules, b.rules);

    // Reorder b's columns into a's roster order.
    const std::vector<std::string> ra = a.roster(), rb = b.roster();
    std::vector<std::size_t> b_to_a(rb.size());
    for (std::size_t j = 0; j < rb.size(); ++j)
        b_to_a[j] = static_cast<std::size_t>(std::find(ra.begin(), ra.end(), rb[j]) - ra.begin());
    StabiliserTruthTable tb;
    tb.n = a.n;
    for (const TableRow& r : b.table.rows)
        tb.rows.emplace_back(remap_pauli(r.input(), b_to_a, a.n), remap_pauli(r.output(), b_to_a, a.n));
    rep.table_equal = ftspec::table_equal(a.table, tb);
    return rep;
}

// ---------------------------------------------------------------------------
// Rendering.

inline std::string format_report(const VerificationReport& r, ReportFormat fmt = ReportFormat::Text) {
    std::ostringstream os;
    auto pf = [](bool b) { return b ? "pass" : "fail"; };
    if (fmt == ReportFormat::Records) {
        os << "roster: " << (r.roster.ok ? "ok" : "mismatch") << "\n";
        if (!r.roster.ok) os << "roster.detail: " << r.roster.detail << "\n";
        os << "criterion1: " << pf(r.criterion1.pass) << "\n";
        for (const auto& m : r.criterion1.mismatched) os << "criterion1.mismatch: " << m << "\n";
        os << "criterion2: " << pf(r.criterion2.pass) << "\n";
        for (const auto& f : r.criterion2.failures)
            os << "criterion2.row: " << f.index << " " << pauli_format(f.input) << " expected="
               << (f.expected.phase() == 2 ? "-" : "+") << pauli_format(f.expected.canonical()) << " actual="
               << (f.actual.phase() == 2 ? "-" : "+") << pauli_format(f.actual.canonical()) << "\n";
        os << "criterion3: " << pf(r.criterion3.pass) << "\n";
        if (r.criterion3.first_divergence)
            os << "criterion3.rule: " << *r.criterion3.first_divergence << " " << r.criterion3.detail << "\n";
        os << "overall: " << pf(r.overall()) << "\n";
        return os.str();
    }
    if (!r.roster.ok) os << "roster mismatch: " << r.roster.detail << "\n";
    os << "criterion 1 (initialisation): " << pf(r.criterion1.pass) << "\n";
    for (const auto& m : r.criterion1.mismatched) os << "  " << m << "\n";
    os << "criterion 2 (truth table): " << pf(r.criterion2.pass) << "\n";
    for (const auto& f : r.criterion2.failures) {
        const TableRow expected(f.input, f.expected), actual(f.input, f.actual);
        os << "  row " << f.index << ": expected " << row_format(expected) << ", found " << row_format(actual) << "\n";
    }
    os << "criterion 3 (measurement rules): " << pf(r.criterion3.pass) << "\n";
    if (r.criterion3.first_divergence)
        os << "  rule " << *r.criterion3.first_divergence << ": " << r.criterion3.detail << "\n";
    os << "overall: " << (r.overall() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

inline std::string format_report(const EquivalenceReport& r, ReportFormat fmt = ReportFormat::Text) {
    std::ostringstream os;
    auto yn = [](bool b) { return b ? "equal" : "different"; };
    const char* sep = fmt == ReportFormat::Records ? ": " : " ";
    if (!r.roster.ok) os << "roster" << sep << "mismatch (" << r.roster.detail << ")\n";
    os << "init" << sep << yn(r.init_equal) << "\n";
    for (const auto& d : r.init_diff) os << (fmt == ReportFormat::Records ? "init.diff: " : "  ") << d << "\n";
    os << "rules" << sep << yn(r.rules.pass) << "\n";
    if (r.rules.first_divergence)
        os << (fmt == ReportFormat::Records ? "rules.diff: " : "  rule ") << *r.rules.first_divergence << " "
           << r.rules.detail << "\n";
    os << "table" << sep << yn(r.table_equal) << "\n";
    os << "equivalent" << sep << (r.equal() ? "yes" : "no") << "\n";
    return os.str();
}

} // namespace ftspec
