#pragma once

// The specification tuple (ST, I, O) and its "spec v1" text format.

#include <cstddef>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ftspec/circuit.hpp"
#include "ftspec/error.hpp"
#include "ftspec/pauli.hpp"
#include "ftspec/text.hpp"
#include "ftspec/truth_table.hpp"

namespace ftspec {

struct InitEntry {
    std::string qubit;
    Basis basis = Basis::Z;

    friend bool operator==(const InitEntry&, const InitEntry&) = default;
};

/// Column order of the table is `io_ids` followed by the ancillae of `init`.
struct Specification {
    std::size_t n = 0;
    std::vector<std::string> io_ids;
    std::vector<InitEntry> init;       // I, in roster order
    StabiliserTruthTable table;        // ST
    std::vector<MeasurementRule> rules; // O, order significant

    std::vector<std::string> roster() const {
        std::vector<std::string> ids = io_ids;
        for (const InitEntry& e : init) ids.push_back(e.qubit);
        return ids;
    }

    friend bool operator==(const Specification& a, const Specification& b) {
        return a.n == b.n && a.io_ids == b.io_ids && a.init == b.init && a.table == b.table &&
               a.rules == b.rules;
    }
};

/// Named invariant violations of a specification tuple; empty means valid.
inline std::vector<Violation> validate_spec(const Specification& s) {
    std::vector<Violation> out;
    std::set<std::string> io(s.io_ids.begin(), s.io_ids.end());
    std::set<std::string> ancillae;
    std::set<std::string> seen;
    for (const std::string& id : s.io_ids)
        if (!seen.insert(id).second) out.push_back({"duplicate-id", id, "listed twice"});
    for (const InitEntry& e : s.init) {
        if (io.count(e.qubit)) {
            out.push_back({"init-ancilla-only", e.qubit, "I names an io qubit"});
            continue;
        }
        if (!seen.insert(e.qubit).second) out.push_back({"duplicate-id", e.qubit, "listed twice"});
        ancillae.insert(e.qubit);
    }
    const std::size_t roster = s.io_ids.size() + s.init.size();
    if (roster != s.n)
        out.push_back({"dimension", "qubits",
                       std::to_string(s.n) + " declared but roster has " + std::to_string(roster)});
    if (s.table.n != s.n)
        out.push_back({"dimension", "table",
                       "table has " + std::to_string(s.table.n) + " columns, expected " + std::to_string(s.n)});
    for (std::size_t i = 0; i < s.table.rows.size(); ++i)
        if (s.table.rows[i].size() != s.n)
            out.push_back({"dimension", "row " + std::to_string(i),
                           std::to_string(s.table.rows[i].size()) + " columns, expected " + std::to_string(s.n)});
    auto check_rule_qubit = [&](const std::string& id, std::size_t i) {
        if (io.count(id))
            out.push_back({"rule-ancilla-only", id, "O entry " + std::to_string(i) + " names an io qubit"});
        else if (!ancillae.count(id))
            out.push_back({"rule-ancilla-only", id, "O entry " + std::to_string(i) + " names an unknown qubit"});
    };
    for (std::size_t i = 0; i < s.rules.size(); ++i) {
        check_rule_qubit(s.rules[i].qubit, i);
        if (s.rules[i].then) check_rule_qubit(s.rules[i].then->qubit, i);
    }
    return out;
}

inline void require_valid(const Specification& s) {
    auto vs = validate_spec(s);
    if (vs.empty()) return;
    for (const Violation& v : vs)
        if (v.invariant == "dimension") throw DimensionError(format_violations(vs));
    throw ValidationError(format_violations(vs));
}

/// Ancilla rules of a circuit as they appear in O: rules on io qubits and on
/// distillation ancillae are not part of the specification.
inline std::vector<MeasurementRule> ancilla_rules(const IcmCircuit& c) {
    std::vector<MeasurementRule> out;
    for (const MeasurementRule& r : c.rules) {
        const QubitKind k = c.qubit(r.qubit).kind;
        if (k == QubitKind::Io || k == QubitKind::Distillation) continue;
        out.push_back(r);
    }
    return out;
}

inline Specification derive_specification(const IcmCircuit& c) {
    require_valid(c);
    Specification s;
    const Roster roster = roster_of(c);
    s.n = roster.size();
    for (std::size_t col = 0; col < roster.size(); ++col) {
        const QubitDecl& q = c.qubits[roster.circuit_index[col]];
        if (q.kind == QubitKind::Io) s.io_ids.push_back(q.id);
        else s.init.push_back({q.id, *q.init});
    }
    s.table = derive_truth_table(c);
    s.rules = ancilla_rules(c);
    return s;
}

// ---------------------------------------------------------------------------
// "spec v1" format.

namespace detail {

inline PauliOperator parse_row_pauli(const std::string& token, std::size_t line) {
    if (!token.empty() && (token[0] == '+' || token[0] == '-' || token[0] == 'i'))
        throw ParseError("row Pauli '" + token + "' must not carry a phase", line);
    try {
        return pauli_parse(token);
    } catch (const ParseError& e) {
        throw ParseError("bad Pauli '" + token + "'", line, e.column());
    }
}

} // namespace detail

inline Specification parse_spec(std::string_view text) {
    Specification s;
    bool header = false, have_n = false, have_io = false, table_open = false, table_done = false;
    std::size_t last_line = 0;
    for (const auto& [line_no, tok] : text::tokenize_lines(text)) {
        last_line = line_no;
        if (!header) {
            if (tok.size() != 2 || tok[0] != "spec" || tok[1] != "v1")
                throw ParseError("expected header 'spec v1'", line_no);
            header = true;
            continue;
        }
        const std::string& key = tok[0];
        if (table_open) {
            if (key == "end") {
                if (tok.size() != 1) throw ParseError("expected 'end'", line_no);
                table_open = false;
                table_done = true;
                continue;
            }
            if (tok.size() != 4 || tok[2] != "->" || (tok[0] != "+" && tok[0] != "-"))
                throw ParseError("expected '<+|-> <in> -> <out>'", line_no);
            PauliOperator in = detail::parse_row_pauli(tok[1], line_no);
            PauliOperator out = detail::parse_row_pauli(tok[3], line_no);
            if (in.size() != out.size())
                throw DimensionError("line " + std::to_string(line_no) + ": row input has " +
                                     std::to_string(in.size()) + " columns, output " +
                                     std::to_string(out.size()));
            if (in.size() != s.n)
                throw DimensionError("line " + std::to_string(line_no) + ": row has " +
                                     std::to_string(in.size()) + " columns but 'qubits " +
                                     std::to_string(s.n) + "'");
            s.table.rows.push_back(TableRow::with_sign(std::move(in), std::move(out), tok[0] == "-" ? -1 : 1));
            continue;
        }
        if (key == "qubits") {
            if (tok.size() != 2) throw ParseError("expected 'qubits <N>'", line_no);
            if (have_n) throw ParseError("duplicate 'qubits' line", line_no);
            s.n = text::parse_count(tok[1], line_no);
            s.table.n = s.n;
            have_n = true;
        } else if (key == "io") {
            if (!have_n) throw ParseError("'io' before 'qubits <N>'", line_no);
            if (have_io) throw ParseError("duplicate 'io' line", line_no);
            s.io_ids.assign(tok.begin() + 1, tok.end());
            have_io = true;
        } else if (key == "init") {
            if (!have_io) throw ParseError("'init' before 'io'", line_no);
            if (tok.size() != 3) throw ParseError("expected 'init <id> <basis>'", line_no);
            s.init.push_back({tok[1], detail::expect_basis(tok[2], line_no)});
        } else if (key == "table") {
            if (tok.size() != 1) throw ParseError("expected 'table'", line_no);
            if (!have_io) throw ParseError("'table' before 'io'", line_no);
            if (table_done) throw ParseError("duplicate table", line_no);
            table_open = true;
        } else if (key == "measure") {
            s.rules.push_back(detail::parse_rule_tokens(tok, 1, line_no));
        } else {
            throw ParseError("unknown directive '" + key + "'", line_no);
        }
    }
    if (!header) throw ParseError("empty document (expected 'spec v1')", 1);
    if (table_open) throw ParseError("unterminated table (missing 'end')", last_line);
    if (!have_n) throw ParseError("missing 'qubits <N>' line", last_line);
    if (!have_io) throw ParseError("missing 'io' line", last_line);
    if (!table_done) throw ParseError("missing table", last_line);
    require_valid(s);
    return s;
}

inline std::string serialize_spec(const Specification& s) {
    std::ostringstream os;
    os << "spec v1\n";
    os << "qubits " << s.n << "\n";
    os << "io";
    for (const std::string& id : s.io_ids) os << " " << id;
    os << "\n";
    for (const InitEntry& e : s.init) os << "init " << e.qubit << " " << basis_char(e.basis) << "\n";
    os << "table\n";
    for (const TableRow& r : s.table.rows) os << row_format(r) << "\n";
    os << "end\n";
    for (const MeasurementRule& r : s.rules) os << "measure " << detail::rule_tokens(r) << "\n";
    return os.str();
}

} // namespace ftspec
