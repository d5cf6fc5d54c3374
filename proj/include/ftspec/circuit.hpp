#pragma once

// ICM circuit model: qubit declarations, an ordered CNOT list and ordered
// measurement rules, plus the "icm v1" text format and structural validation.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ftspec/error.hpp"
#include "ftspec/pauli.hpp"
#include "ftspec/text.hpp"

namespace ftspec {

enum class Basis { X, Z, Y, A };

/// Y and A are rotated bases; X and Z are plain.
constexpr bool is_rotated(Basis b) noexcept { return b == Basis::Y || b == Basis::A; }
constexpr bool is_plain(Basis b) noexcept { return !is_rotated(b); }

inline char basis_char(Basis b) noexcept {
    switch (b) {
    case Basis::X: return 'X';
    case Basis::Z: return 'Z';
    case Basis::Y: return 'Y';
    case Basis::A: return 'A';
    }
    return '?';
}

inline std::optional<Basis> basis_from_token(std::string_view token) {
    if (token == "X") return Basis::X;
    if (token == "Z") return Basis::Z;
    if (token == "Y") return Basis::Y;
    if (token == "A") return Basis::A;
    return std::nullopt;
}

enum class QubitKind { Io, Computational, Teleport, Distillation };

inline std::string_view kind_name(QubitKind k) noexcept {
    switch (k) {
    case QubitKind::Io: return "io";
    case QubitKind::Computational: return "computational";
    case QubitKind::Teleport: return "teleport";
    case QubitKind::Distillation: return "distillation";
    }
    return "?";
}

struct QubitDecl {
    std::string id;
    QubitKind kind = QubitKind::Io;
    std::optional<Basis> init; // absent for io qubits

    bool is_ancilla() const noexcept { return kind != QubitKind::Io; }

    friend bool operator==(const QubitDecl&, const QubitDecl&) = default;
};

/// (q1, B1, q2, B2, B3): measure q1 in B1; on eigenvalue +1 measure q2 in B2,
/// otherwise in B3. Without a conditional part this is (q1, B1, -, -, -).
struct MeasurementRule {
    struct Conditional {
        std::string qubit;
        Basis on_plus = Basis::X;
        Basis on_minus = Basis::X;

        friend bool operator==(const Conditional&, const Conditional&) = default;
    };

    std::string qubit;
    Basis basis = Basis::Z;
    std::optional<Conditional> then;

    friend bool operator==(const MeasurementRule&, const MeasurementRule&) = default;
};

inline std::string rule_tuple(const MeasurementRule& r) {
    std::string out = "(" + r.qubit + ", " + basis_char(r.basis);
    if (r.then) {
        out += ", " + r.then->qubit + ", " + basis_char(r.then->on_plus) + ", " +
               basis_char(r.then->on_minus) + ")";
    } else {
        out += ", -, -, -)";
    }
    return out;
}

class IcmCircuit {
public:
    std::vector<QubitDecl> qubits;
    std::vector<Cnot> cnots;
    std::vector<MeasurementRule> rules;
    std::optional<std::vector<std::string>> outputs;

    std::size_t size() const noexcept { return qubits.size(); }

    std::optional<std::size_t> find(std::string_view id) const {
        for (std::size_t i = 0; i < qubits.size(); ++i)
            if (qubits[i].id == id) return i;
        return std::nullopt;
    }

    std::size_t index_of(std::string_view id) const {
        if (auto i = find(id)) return *i;
        throw ValidationError("undeclared qubit '" + std::string(id) + "'");
    }

    const QubitDecl& qubit(std::string_view id) const { return qubits[index_of(id)]; }

    std::size_t add_qubit(QubitDecl decl) {
        qubits.push_back(std::move(decl));
        return qubits.size() - 1;
    }

    void add_cnot(std::string_view control, std::string_view target) {
        cnots.push_back({index_of(control), index_of(target)});
    }

    /// Basis each qubit is measured in: one entry for a q1 position, two for a
    /// conditional q2 position (both alternatives).
    std::vector<Basis> measurement_bases(std::string_view id) const {
        std::vector<Basis> out;
        for (const MeasurementRule& r : rules) {
            if (r.qubit == id) out.push_back(r.basis);
            if (r.then && r.then->qubit == id) {
                out.push_back(r.then->on_plus);
                out.push_back(r.then->on_minus);
            }
        }
        return out;
    }

    bool is_measured(std::string_view id) const {
        for (const MeasurementRule& r : rules)
            if (r.qubit == id || (r.then && r.then->qubit == id)) return true;
        return false;
    }

    std::vector<std::string> ids_of_kind(QubitKind kind) const {
        std::vector<std::string> out;
        for (const QubitDecl& q : qubits)
            if (q.kind == kind) out.push_back(q.id);
        return out;
    }

    friend bool operator==(const IcmCircuit&, const IcmCircuit&) = default;
};

/// A teleport ancilla is rotated at its initialisation or at its measurement.
enum class TeleportFlavour { RotatedInit, RotatedMeasurement };

inline TeleportFlavour teleport_flavour(const QubitDecl& q) {
    return (q.init && is_rotated(*q.init)) ? TeleportFlavour::RotatedInit
                                           : TeleportFlavour::RotatedMeasurement;
}

// ---------------------------------------------------------------------------
// Validation.

struct Violation {
    std::string invariant; // short kebab-case name of the broken invariant
    std::string entity;    // offending qubit id, "cnot #k" or "rule #k"
    std::string detail;

    friend bool operator==(const Violation&, const Violation&) = default;
};

inline std::vector<Violation> validate_icm(const IcmCircuit& c) {
    std::vector<Violation> out;
    auto report = [&](std::string inv, std::string entity, std::string detail) {
        out.push_back({std::move(inv), std::move(entity), std::move(detail)});
    };

    std::set<std::string> seen;
    for (const QubitDecl& q : c.qubits) {
        if (!seen.insert(q.id).second) report("duplicate-id", q.id, "qubit declared twice");
        if (q.kind == QubitKind::Io && q.init)
            report("io-init", q.id, "io qubits carry no fixed initialisation basis");
        if (q.kind != QubitKind::Io && !q.init)
            report("ancilla-init", q.id, "ancilla without initialisation basis");
        if (q.kind == QubitKind::Computational && q.init && is_rotated(*q.init))
            report("computational-init", q.id, "computational ancillae initialise in X or Z");
    }

    for (std::size_t k = 0; k < c.cnots.size(); ++k) {
        const Cnot& g = c.cnots[k];
        const std::string entity = "cnot #" + std::to_string(k + 1);
        if (g.control >= c.size() || g.target >= c.size())
            report("undeclared-qubit", entity, "CNOT endpoint out of range");
        else if (g.control == g.target)
            report("cnot-endpoints", entity, "control equals target (" + c.qubits[g.control].id + ")");
    }

    // Rule structure and causality.
    std::map<std::string, std::size_t> measured_at; // qubit -> first rule index measuring it
    std::map<std::string, std::size_t> conditioned_by;
    for (std::size_t k = 0; k < c.rules.size(); ++k) {
        const MeasurementRule& r = c.rules[k];
        const std::string entity = "rule #" + std::to_string(k + 1);
        if (!c.find(r.qubit)) {
            report("undeclared-qubit", entity, "measures undeclared qubit '" + r.qubit + "'");
            continue;
        }
        if (r.then && !c.find(r.then->qubit)) {
            report("undeclared-qubit", entity, "conditions undeclared qubit '" + r.then->qubit + "'");
            continue;
        }
        if (r.then && r.then->qubit == r.qubit) {
            report("rule-shape", entity, "q1 and q2 are the same qubit '" + r.qubit + "'");
            continue;
        }
        // q1 may appear as q1 once; if it was conditioned earlier this rule
        // chains on the conditioned outcome.
        bool q1_seen_as_q1 = false;
        for (std::size_t j = 0; j < k; ++j)
            if (c.rules[j].qubit == r.qubit) q1_seen_as_q1 = true;
        if (q1_seen_as_q1)
            report("single-measurement", r.qubit, "qubit appears as q1 in more than one rule");
        if (auto it = conditioned_by.find(r.qubit); it != conditioned_by.end()) {
            const MeasurementRule& cond = c.rules[it->second];
            if (r.basis != cond.then->on_plus && r.basis != cond.then->on_minus)
                report("chained-basis", entity,
                       "basis of conditioned qubit '" + r.qubit + "' is not one of its alternatives");
        }
        if (r.then) {
            const std::string& q2 = r.then->qubit;
            if (auto it = measured_at.find(q2); it != measured_at.end())
                report("causality", entity,
                       "conditioned qubit '" + q2 + "' was already measured by rule #" +
                           std::to_string(it->second + 1));
            else if (conditioned_by.count(q2))
                report("causality", entity, "qubit '" + q2 + "' is conditioned twice");
            conditioned_by.emplace(q2, k);
        }
        measured_at.emplace(r.qubit, k);
    }

    // Kind-specific basis constraints.
    for (const QubitDecl& q : c.qubits) {
        const std::vector<Basis> meas = c.measurement_bases(q.id);
        const bool meas_rotated = std::any_of(meas.begin(), meas.end(), is_rotated);
        switch (q.kind) {
        case QubitKind::Io:
            if (meas_rotated)
                report("io-measurement", q.id, "io qubits are measured in X or Z only");
            break;
        case QubitKind::Computational:
            if (q.init)
                for (Basis b : meas)
                    if (b != *q.init)
                        report("computational-measurement", q.id,
                               "computational ancillae are measured in their initialisation basis");
            break;
        case QubitKind::Teleport:
        case QubitKind::Distillation:
            if (!q.init) break;
            if (is_rotated(*q.init) && meas_rotated)
                report("doubly-rotated", q.id, "rotated at both initialisation and measurement");
            else if (!is_rotated(*q.init) && !meas_rotated)
                report("unrotated", q.id,
                       meas.empty() ? "plain initialisation and never measured"
                                    : "plain initialisation and plain measurement");
            break;
        }
    }

    if (c.outputs) {
        for (const std::string& id : *c.outputs) {
            if (!c.find(id)) report("undeclared-qubit", id, "output names an undeclared qubit");
        }
    }
    return out;
}

inline std::string format_violations(const std::vector<Violation>& vs) {
    std::string out;
    for (const Violation& v : vs) out += v.invariant + " [" + v.entity + "]: " + v.detail + "\n";
    return out;
}

inline void require_valid(const IcmCircuit& c) {
    const auto vs = validate_icm(c);
    if (!vs.empty()) throw ValidationError("circuit is not in valid ICM form:\n" + format_violations(vs));
}

// ---------------------------------------------------------------------------
// "icm v1" format.

namespace detail {

inline Basis expect_basis(const std::string& token, std::size_t line) {
    if (auto b = basis_from_token(token)) return *b;
    throw ParseError("bad basis token '" + token + "' (expected X, Z, Y or A)", line);
}

inline std::size_t expect_declared(const IcmCircuit& c, const std::string& id, std::size_t line) {
    if (auto i = c.find(id)) return *i;
    throw ParseError("undeclared qubit '" + id + "'", line);
}

/// Parses the measurement tail shared by the circuit and spec formats:
/// `<id> <basis>` or `<id> <basis> ? <id2> <B2> : <id2> <B3>`.
inline MeasurementRule parse_rule_tokens(const std::vector<std::string>& tok, std::size_t first,
                                         std::size_t line) {
    const std::size_t n = tok.size() - first;
    if (n != 2 && n != 8) throw ParseError("malformed measure line", line);
    MeasurementRule r;
    r.qubit = tok[first];
    r.basis = expect_basis(tok[first + 1], line);
    if (n == 8) {
        if (tok[first + 2] != "?" || tok[first + 5] != ":")
            throw ParseError("conditional measure needs '? <id> <B> : <id> <B>'", line);
        if (tok[first + 3] != tok[first + 6])
            throw ParseError("conditional branches name different qubits '" + tok[first + 3] +
                                 "' and '" + tok[first + 6] + "'",
                             line);
        r.then = MeasurementRule::Conditional{tok[first + 3], expect_basis(tok[first + 4], line),
                                              expect_basis(tok[first + 7], line)};
    }
    return r;
}

inline std::string rule_tokens(const MeasurementRule& r) {
    std::string out = r.qubit + " " + basis_char(r.basis);
    if (r.then)
        out += std::string(" ? ") + r.then->qubit + " " + basis_char(r.then->on_plus) + " : " +
               r.then->qubit + " " + basis_char(r.then->on_minus);
    return out;
}

} // namespace detail

/// Parses an "icm v1" document. Structural (lexical and reference) errors throw
/// ParseError with the line number; ICM-form invariants are left to validate_icm.
inline IcmCircuit parse_circuit(std::string_view text) {
    IcmCircuit c;
    std::optional<std::size_t> declared_count;
    bool header = false;
    std::size_t last_line = 0;
    for (const auto& [line_no, tok] : text::tokenize_lines(text)) {
        last_line = line_no;
        if (!header) {
            if (tok.size() != 2 || tok[0] != "icm" || tok[1] != "v1")
                throw ParseError("expected header 'icm v1'", line_no);
            header = true;
            continue;
        }
        const std::string& key = tok[0];
        if (key == "qubits") {
            if (tok.size() != 2) throw ParseError("expected 'qubits <N>'", line_no);
            if (declared_count) throw ParseError("duplicate 'qubits' line", line_no);
            declared_count = text::parse_count(tok[1], line_no);
        } else if (key == "io" || key == "ancilla") {
            if (!declared_count) throw ParseError("qubit declared before 'qubits <N>'", line_no);
            QubitDecl q;
            if (key == "io") {
                if (tok.size() != 2) throw ParseError("expected 'io <id>'", line_no);
                q.id = tok[1];
                q.kind = QubitKind::Io;
            } else {
                if (tok.size() != 5 || tok[3] != "init")
                    throw ParseError("expected 'ancilla <id> <kind> init <basis>'", line_no);
                q.id = tok[1];
                if (tok[2] == "computational") q.kind = QubitKind::Computational;
                else if (tok[2] == "teleport") q.kind = QubitKind::Teleport;
                else if (tok[2] == "distillation") q.kind = QubitKind::Distillation;
                else throw ParseError("unknown ancilla kind '" + tok[2] + "'", line_no);
                q.init = detail::expect_basis(tok[4], line_no);
            }
            if (c.find(q.id)) throw ParseError("duplicate qubit id '" + q.id + "'", line_no);
            c.qubits.push_back(std::move(q));
        } else if (key == "cnot") {
            if (tok.size() != 3) throw ParseError("expected 'cnot <control> <target>'", line_no);
            const std::size_t ctl = detail::expect_declared(c, tok[1], line_no);
            const std::size_t tgt = detail::expect_declared(c, tok[2], line_no);
            if (ctl == tgt) throw ParseError("CNOT control equals target '" + tok[1] + "'", line_no);
            c.cnots.push_back({ctl, tgt});
        } else if (key == "measure") {
            MeasurementRule r = detail::parse_rule_tokens(tok, 1, line_no);
            detail::expect_declared(c, r.qubit, line_no);
            if (r.then) detail::expect_declared(c, r.then->qubit, line_no);
            c.rules.push_back(std::move(r));
        } else if (key == "out") {
            if (tok.size() < 2) throw ParseError("expected 'out <id> [...]'", line_no);
            if (c.outputs) throw ParseError("duplicate 'out' line", line_no);
            std::vector<std::string> ids(tok.begin() + 1, tok.end());
            for (const auto& id : ids) detail::expect_declared(c, id, line_no);
            c.outputs = std::move(ids);
        } else {
            throw ParseError("unknown directive '" + key + "'", line_no);
        }
    }
    if (!header) throw ParseError("empty document (expected 'icm v1')", 1);
    if (!declared_count) throw ParseError("missing 'qubits <N>' line", last_line);
    if (*declared_count != c.qubits.size())
        throw ParseError("'qubits " + std::to_string(*declared_count) + "' but " +
                             std::to_string(c.qubits.size()) + " qubits declared",
                         last_line);
    return c;
}

inline std::string serialize_circuit(const IcmCircuit& c) {
    std::ostringstream os;
    os << "icm v1\n";
    os << "qubits " << c.qubits.size() << "\n";
    for (const QubitDecl& q : c.qubits) {
        if (q.kind == QubitKind::Io) {
            os << "io " << q.id << "\n";
        } else {
            os << "ancilla " << q.id << " " << kind_name(q.kind) << " init "
               << basis_char(q.init.value_or(Basis::Z)) << "\n";
        }
    }
    for (const Cnot& g : c.cnots) os << "cnot " << c.qubits[g.control].id << " " << c.qubits[g.target].id << "\n";
    for (const MeasurementRule& r : c.rules) os << "measure " << detail::rule_tokens(r) << "\n";
    if (c.outputs) {
        os << "out";
        for (const std::string& id : *c.outputs) os << " " << id;
        os << "\n";
    }
    return os.str();
}

} // namespace ftspec
