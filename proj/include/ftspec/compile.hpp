#pragma once

// Lowering of Clifford+T gate lists to ICM circuits with teleportation
// gadgets, plus the Pauli frame that corrects the measurement byproducts.
//
// Logical qubit k becomes io qubit "q<k>" and keeps its wire: every gadget
// entangles fresh ancillae with the wire and measures them, so the output of
// the circuit is again the io qubits. Ancillae are named a1, a2, ...

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ftspec/circuit.hpp"
#include "ftspec/error.hpp"
#include "ftspec/frame.hpp"
#include "ftspec/pauli.hpp"
#include "ftspec/text.hpp"

namespace ftspec {

enum class GateKind { H, P, Pdg, T, Tdg, Cnot, X, Z };

inline std::string_view gate_name(GateKind g) noexcept {
    switch (g) {
    case GateKind::H: return "h";
    case GateKind::P: return "p";
    case GateKind::Pdg: return "pdg";
    case GateKind::T: return "t";
    case GateKind::Tdg: return "tdg";
    case GateKind::Cnot: return "cnot";
    case GateKind::X: return "x";
    case GateKind::Z: return "z";
    }
    return "?";
}

inline std::optional<GateKind> gate_from_name(std::string_view s) {
    for (GateKind g : {GateKind::H, GateKind::P, GateKind::Pdg, GateKind::T, GateKind::Tdg, GateKind::Cnot, GateKind::X,
                       GateKind::Z})
        if (gate_name(g) == s) return g;
    return std::nullopt;
}

struct Gate {
    GateKind kind = GateKind::H;
    std::size_t qubit = 0;  // 0-based
    std::size_t target = 0; // CNOT only

    friend bool operator==(const Gate&, const Gate&) = default;
};

struct GateList {
    std::size_t n_logical = 0;
    std::vector<Gate> gates;

    friend bool operator==(const GateList&, const GateList&) = default;
};

/// "gates v1" / "qubits N" / one gate per line with 1-based qubit indices.
inline GateList parse_gates(std::string_view text) {
    GateList g;
    bool header = false, have_n = false;
    std::size_t last_line = 0;
    for (const auto& [line_no, tok] : text::tokenize_lines(text)) {
        last_line = line_no;
        if (!header) {
            if (tok.size() != 2 || tok[0] != "gates" || tok[1] != "v1")
                throw ParseError("expected header 'gates v1'", line_no);
            header = true;
            continue;
        }
        if (tok[0] == "qubits") {
            if (tok.size() != 2) throw ParseError("expected 'qubits <N>'", line_no);
            if (have_n) throw ParseError("duplicate 'qubits' line", line_no);
            g.n_logical = text::parse_count(tok[1], line_no);
            have_n = true;
            continue;
        }
        if (!have_n) throw ParseError("gate before 'qubits <N>'", line_no);
        const auto kind = gate_from_name(tok[0]);
        if (!kind) throw ParseError("unknown gate '" + tok[0] + "'", line_no);
        const std::size_t arity = *kind == GateKind::Cnot ? 2 : 1;
        if (tok.size() != arity + 1)
            throw ParseError("gate '" + tok[0] + "' takes " + std::to_string(arity) + " qubit index(es)", line_no);
        auto index = [&](const std::string& t) {
            const std::size_t k = text::parse_count(t, line_no);
            if (k < 1 || k > g.n_logical)
                throw ParseError("qubit index " + t + " out of range 1.." + std::to_string(g.n_logical), line_no);
            return k - 1;
        };
        Gate gate{*kind, index(tok[1]), 0};
        if (arity == 2) {
            gate.target = index(tok[2]);
            if (gate.target == gate.qubit) throw ParseError("CNOT control equals target", line_no);
        }
        g.gates.push_back(gate);
    }
    if (!header) throw ParseError("empty document (expected 'gates v1')", 1);
    if (!have_n) throw ParseError("missing 'qubits <N>' line", last_line);
    return g;
}

inline std::string serialize_gates(const GateList& g) {
    std::ostringstream os;
    os << "gates v1\nqubits " << g.n_logical << "\n";
    for (const Gate& x : g.gates) {
        os << gate_name(x.kind) << " " << x.qubit + 1;
        if (x.kind == GateKind::Cnot) os << " " << x.target + 1;
        os << "\n";
    }
    return os.str();
}

enum class Flavour { RotatedInit, RotatedMeasurement };

inline std::string_view flavour_name(Flavour f) noexcept {
    return f == Flavour::RotatedInit ? "rotated_init" : "rotated_meas";
}

inline std::optional<Flavour> flavour_from_name(std::string_view s) {
    if (s == "rotated_init") return Flavour::RotatedInit;
    if (s == "rotated_meas") return Flavour::RotatedMeasurement;
    return std::nullopt;
}

struct CompileResult {
    IcmCircuit circuit;
    PauliFrame frame;               // corrections on the io qubits
    std::vector<GateKind> gadgets;  // non-Pauli gates as emitted (T may become T^dagger)
};

/// Teleport ancillae used by one gadget.
inline std::size_t gadget_ancillae(GateKind g, Flavour f, bool corrections) {
    switch (g) {
    case GateKind::P:
    case GateKind::Pdg: return 1;
    case GateKind::H: return 3;
    case GateKind::T: return corrections ? 2 : 1;
    case GateKind::Tdg: return (corrections && f == Flavour::RotatedInit) ? 2 : 1;
    default: return 0;
    }
}

namespace compile_detail {

// Sign-free Clifford conjugation of frame corrections.
inline void conj_h(PauliOperator& p, std::size_t k) {
    const bool x = p.x(k), z = p.z(k);
    p.set_x(k, z);
    p.set_z(k, x);
}
inline void conj_p(PauliOperator& p, std::size_t k) { p.set_z(k, p.z(k) != p.x(k)); }
inline void conj_sqrt_x(PauliOperator& p, std::size_t k) { p.set_x(k, p.x(k) != p.z(k)); }

class Builder {
public:
    Builder(std::size_t n, Flavour flavour, bool corrections) : flavour_(flavour), corrections_(corrections) {
        for (std::size_t k = 0; k < n; ++k) {
            const std::string id = "q" + std::to_string(k + 1);
            c_.add_qubit({id, QubitKind::Io, std::nullopt});
            frame_.outputs.push_back(id);
        }
        c_.outputs = frame_.outputs;
    }

    void apply(const Gate& g) {
        switch (g.kind) {
        case GateKind::X:
        case GateKind::Z:
            if (corrections_) frame_.add({}, true, PauliOperator::single(width(), g.qubit, g.kind == GateKind::X ? 'X' : 'Z'));
            return;
        case GateKind::Cnot:
            c_.cnots.push_back({g.qubit, g.target});
            for (FrameTerm& t : frame_.terms) t.correction = conjugate_cnot(t.correction, g.qubit, g.target);
            return;
        case GateKind::P:
        case GateKind::Pdg: phase_gadget(g.qubit, g.kind == GateKind::P); break;
        case GateKind::H:
            phase_gadget(g.qubit, true);
            sqrt_x_gadget(g.qubit);
            phase_gadget(g.qubit, true);
            break;
        case GateKind::T:
        case GateKind::Tdg: gadgets_.push_back(t_gadget(g.qubit, g.kind == GateKind::T)); return;
        }
        gadgets_.push_back(g.kind);
    }

    CompileResult finish() {
        if (!corrections_) frame_.terms.clear();
        CompileResult r{std::move(c_), std::move(frame_), std::move(gadgets_)};
        return r;
    }

private:
    std::size_t width() const { return frame_.outputs.size(); }
    std::string wire(std::size_t k) const { return c_.qubits[k].id; }

    std::string ancilla(Basis init) {
        const std::string id = "a" + std::to_string(++ancillae_);
        c_.add_qubit({id, QubitKind::Teleport, init});
        return id;
    }

    void cnot(const std::string& control, const std::string& target) { c_.add_cnot(control, target); }
    void measure(const std::string& q, Basis b) { c_.rules.push_back({q, b, std::nullopt}); }

    void byproduct(std::vector<std::string> parity, bool invert, std::size_t k, char pauli) {
        frame_.add(std::move(parity), invert, PauliOperator::single(width(), k, pauli));
    }

    template <class F>
    void conjugate_frame(F&& f) {
        for (FrameTerm& t : frame_.terms) f(t.correction);
    }

    // P (want_p) or P^dagger on wire k.
    void phase_gadget(std::size_t k, bool want_p) {
        conjugate_frame([&](PauliOperator& p) { conj_p(p, k); });
        if (flavour_ == Flavour::RotatedMeasurement) {
            // Y-measured copy: P^dagger on +1, P on -1.
            const std::string a = ancilla(Basis::Z);
            cnot(wire(k), a);
            measure(a, Basis::Y);
            byproduct({a}, want_p, k, 'Z');
        } else {
            // Y-initialised ancilla absorbed by a Z measurement: P on +1, P^dagger on -1.
            const std::string a = ancilla(Basis::Y);
            cnot(wire(k), a);
            measure(a, Basis::Z);
            byproduct({a}, !want_p, k, 'Z');
        }
    }

    // (1 - iX)/sqrt2 on wire k.
    void sqrt_x_gadget(std::size_t k) {
        conjugate_frame([&](PauliOperator& p) { conj_sqrt_x(p, k); });
        if (flavour_ == Flavour::RotatedMeasurement) {
            const std::string a = ancilla(Basis::X);
            cnot(a, wire(k));
            measure(a, Basis::Y);
            byproduct({a}, false, k, 'X');
        } else {
            const std::string a = ancilla(Basis::Y);
            cnot(a, wire(k));
            measure(a, Basis::X);
            byproduct({a}, true, k, 'X');
        }
    }

    GateKind t_gadget(std::size_t k, bool want_t) {
        // A pending X on the wire turns T into T^dagger (T X = X T^dagger up
        // to phase). Only outcome-independent X components can be absorbed.
        bool flip = false;
        for (const FrameTerm& t : frame_.terms) {
            if (!t.correction.x(k)) continue;
            if (!t.parity_of.empty())
                throw CompileError("T-type gate on q" + std::to_string(k + 1) +
                                   " follows an outcome-dependent X correction; choosing between T and T^dagger "
                                   "would need control on several outcomes");
            flip = flip != t.invert;
        }
        if (!corrections_) flip = false;
        const bool emit_t = want_t != flip;
        const GateKind emitted = emit_t ? GateKind::T : GateKind::Tdg;

        if (!corrections_) {
            // Uncorrected form: a single ancilla, no correction logic.
            if (flavour_ == Flavour::RotatedInit) {
                const std::string a = ancilla(Basis::A);
                cnot(wire(k), a);
                measure(a, Basis::Z);
            } else {
                const std::string a = ancilla(Basis::Z);
                cnot(wire(k), a);
                measure(a, Basis::A);
            }
            return emitted;
        }
        if (flavour_ == Flavour::RotatedMeasurement) {
            const std::string a = ancilla(Basis::Z);
            cnot(wire(k), a);
            if (emit_t) {
                // A-measurement applies T^dagger, the Y-measured second copy P.
                const std::string b = ancilla(Basis::Z);
                cnot(a, b);
                measure(a, Basis::A);
                measure(b, Basis::Y);
                byproduct({a}, false, k, 'Z');
                byproduct({b}, true, k, 'Z');
            } else {
                measure(a, Basis::A);
                byproduct({a}, false, k, 'Z');
            }
        } else {
            // Injection applies T on +1 and T^dagger on -1; the conditioned
            // Y-initialised ancilla adds the P correction when needed.
            const std::string a = ancilla(Basis::A);
            const std::string b = ancilla(Basis::Y);
            cnot(wire(k), a);
            cnot(wire(k), b);
            if (emit_t) {
                c_.rules.push_back({a, Basis::Z, MeasurementRule::Conditional{b, Basis::X, Basis::Z}});
                byproduct({b}, false, k, 'Z');
            } else {
                c_.rules.push_back({a, Basis::Z, MeasurementRule::Conditional{b, Basis::Z, Basis::X}});
                byproduct({a, b}, true, k, 'Z');
            }
        }
        return emitted;
    }

    Flavour flavour_;
    bool corrections_;
    IcmCircuit c_;
    PauliFrame frame_;
    std::vector<GateKind> gadgets_;
    std::size_t ancillae_ = 0;
};

} // namespace compile_detail

inline CompileResult compile_to_icm(const GateList& g, Flavour flavour, bool corrections = true) {
    compile_detail::Builder b(g.n_logical, flavour, corrections);
    for (const Gate& gate : g.gates) {
        if (gate.qubit >= g.n_logical || (gate.kind == GateKind::Cnot && gate.target >= g.n_logical))
            throw IndexError("gate index out of range");
        b.apply(gate);
    }
    CompileResult r = b.finish();
    require_valid(r.circuit);
    return r;
}

} // namespace ftspec
