#pragma once

// Pauli-frame functions: measurement outcomes -> Pauli correction on the
// output qubits. A frame is a list of terms; each term applies its correction
// when the parity of the listed outcomes (xor `invert`) is odd.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "ftspec/error.hpp"
#include "ftspec/pauli.hpp"

namespace ftspec {

/// Outcome bits by qubit id: 0 for eigenvalue +1, 1 for eigenvalue -1.
using OutcomeBits = std::map<std::string, int>;

struct FrameTerm {
    std::vector<std::string> parity_of;
    bool invert = false;
    PauliOperator correction; // over PauliFrame::outputs, phase ignored

    friend bool operator==(const FrameTerm&, const FrameTerm&) = default;
};

struct PauliFrame {
    std::vector<std::string> outputs;
    std::vector<FrameTerm> terms;

    bool empty() const noexcept { return terms.empty(); }

    bool fires(const FrameTerm& t, const OutcomeBits& bits) const {
        int parity = t.invert ? 1 : 0;
        for (const std::string& q : t.parity_of) {
            auto it = bits.find(q);
            if (it == bits.end()) throw ValidationError("frame refers to unmeasured qubit '" + q + "'");
            parity ^= it->second & 1;
        }
        return parity != 0;
    }

    PauliOperator evaluate(const OutcomeBits& bits) const {
        PauliOperator out(outputs.size());
        for (const FrameTerm& t : terms)
            if (fires(t, bits)) out *= t.correction;
        return out.canonical();
    }

    void add(std::vector<std::string> parity_of, bool invert, PauliOperator correction) {
        if (correction.size() != outputs.size())
            throw DimensionError("frame correction has " + std::to_string(correction.size()) + " qubits, frame has " +
                                 std::to_string(outputs.size()));
        correction.set_phase(0);
        terms.push_back({std::move(parity_of), invert, std::move(correction)});
    }

    friend bool operator==(const PauliFrame&, const PauliFrame&) = default;
};

/// One line per term, e.g. "Z(q1) if m(a1) = -1" or "X(q1) if m(a1)*m(a2) = +1".
inline std::string format_frame(const PauliFrame& f) {
    std::string out;
    for (const FrameTerm& t : f.terms) {
        std::string ops;
        for (std::size_t k = 0; k < t.correction.size(); ++k)
            if (t.correction.symbol(k) != 'I') {
                if (!ops.empty()) ops += " ";
                ops += std::string(1, t.correction.symbol(k)) + "(" + f.outputs[k] + ")";
            }
        if (t.parity_of.empty()) {
            out += ops + (t.invert ? " always\n" : " never\n");
            continue;
        }
        std::string cond;
        for (std::size_t i = 0; i < t.parity_of.size(); ++i) cond += (i ? "*m(" : "m(") + t.parity_of[i] + ")";
        out += ops + " if " + cond + (t.invert ? " = +1\n" : " = -1\n");
    }
    return out;
}

} // namespace ftspec
