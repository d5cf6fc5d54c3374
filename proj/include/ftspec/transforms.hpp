#pragma once

// Rewrites between the rotated-initialisation and rotated-measurement
// constructions.

#include <algorithm>
#include <string>
#include <string_view>

#include "ftspec/circuit.hpp"
#include "ftspec/error.hpp"
#include "ftspec/frame.hpp"

namespace ftspec {

namespace transform_detail {

inline std::size_t plain_rule_of(const IcmCircuit& c, std::string_view q) {
    std::size_t found = c.rules.size();
    for (std::size_t i = 0; i < c.rules.size(); ++i) {
        const MeasurementRule& r = c.rules[i];
        if (r.then && (r.qubit == q || r.then->qubit == q))
            throw ValidationError("qubit '" + std::string(q) + "' takes part in a conditional measurement rule");
        if (r.qubit == q) found = i;
    }
    return found;
}

} // namespace transform_detail

/// Id of the ancilla added when demoting q.
inline std::string demoted_ancilla_id(const IcmCircuit& c, std::string_view q) {
    std::string id = std::string(q) + "_r";
    for (int k = 2; c.find(id); ++k) id = std::string(q) + "_r" + std::to_string(k);
    return id;
}

/// Replaces the rotated measurement of teleport ancilla q by a plain one plus
/// a fresh ancilla r initialised in the rotated basis:
///   q initialised in Z: CNOT(r -> q), measure q in Z, then r in X
///   q initialised in X: CNOT(q -> r), measure q in X, then r in Z
/// q keeps its plain init and plain measurement, so it becomes a
/// computational ancilla. The original outcome of q is 1 xor m(q) xor m(r);
/// demote_frame rewrites a frame accordingly.
inline IcmCircuit demote_rotated_measurement(const IcmCircuit& c, std::string_view q) {
    require_valid(c);
    const std::size_t qi = c.index_of(q);
    const QubitDecl& decl = c.qubits[qi];
    const std::size_t rule = transform_detail::plain_rule_of(c, q);
    if (decl.kind != QubitKind::Teleport || rule == c.rules.size() || !is_rotated(c.rules[rule].basis))
        throw ValidationError("qubit '" + std::string(q) + "' is not a teleport ancilla measured in a rotated basis");

    IcmCircuit out = c;
    const Basis rotated = c.rules[rule].basis;
    const Basis init = *decl.init;
    const std::string r = demoted_ancilla_id(c, q);
    out.qubits[qi].kind = QubitKind::Computational;
    out.add_qubit({r, QubitKind::Teleport, rotated});
    const Basis r_meas = init == Basis::Z ? Basis::X : Basis::Z;
    if (init == Basis::Z)
        out.add_cnot(r, q);
    else
        out.add_cnot(q, r);
    out.rules[rule].basis = init;
    out.rules.insert(out.rules.begin() + static_cast<std::ptrdiff_t>(rule) + 1, {r, r_meas, std::nullopt});
    return out;
}

/// Frame for the demoted circuit: every term that read m(q) reads
/// m(q)*m(r) with its sense inverted.
inline PauliFrame demote_frame(const IcmCircuit& before, const PauliFrame& frame, std::string_view q) {
    const std::string r = demoted_ancilla_id(before, q);
    PauliFrame out = frame;
    for (FrameTerm& t : out.terms)
        if (std::find(t.parity_of.begin(), t.parity_of.end(), q) != t.parity_of.end()) {
            t.parity_of.push_back(r);
            t.invert = !t.invert;
        }
    return out;
}

/// Whole-circuit dual: CNOTs in reverse temporal order (directions kept) and
/// every teleport ancilla's init and measurement bases exchanged. io,
/// computational and distillation qubits are left alone. The map is an
/// involution.
inline IcmCircuit dual_rewrite(const IcmCircuit& c) {
    require_valid(c);
    IcmCircuit out = c;
    std::reverse(out.cnots.begin(), out.cnots.end());
    for (MeasurementRule& r : out.rules) {
        if (r.then)
            throw ValidationError("dual rewrite of conditional rule on '" + r.qubit +
                                  "' would need classical control before the CNOTs");
        QubitDecl& q = out.qubits[out.index_of(r.qubit)];
        if (q.kind != QubitKind::Teleport) continue;
        std::swap(*q.init, r.basis);
    }
    require_valid(out);
    return out;
}

} // namespace ftspec
