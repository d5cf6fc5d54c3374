#pragma once

// Helpers shared by the test executables.

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ftspec/circuit.hpp"

namespace ftspec::test_support {

#ifdef FTSPEC_FIXTURES
inline std::string read_fixture(const std::string& name) {
    std::ifstream in(std::string(FTSPEC_FIXTURES) + "/" + name);
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline IcmCircuit fixture(const std::string& name) { return parse_circuit(read_fixture(name)); }
#endif

struct RandomCircuitOptions {
    std::size_t max_qubits = 6;
    std::size_t max_cnots = 12;
    bool distillation = true;
    std::size_t min_io = 0;
    bool isolated_distillation = false; // distillation qubits only interact with each other
};

/// Random valid ICM circuit mixing all qubit kinds. Every teleport ancilla is
/// rotated exactly once; computational ancillae are measured in their basis.
inline IcmCircuit random_circuit(std::mt19937_64& rng, const RandomCircuitOptions& opt = {}) {
    IcmCircuit c;
    const std::size_t n = std::max<std::size_t>(1 + rng() % opt.max_qubits, opt.min_io);
    for (std::size_t i = 0; i < n; ++i) {
        QubitDecl q;
        q.id = "q" + std::to_string(i + 1);
        const unsigned pick = i < opt.min_io ? 0u : static_cast<unsigned>(rng() % (opt.distillation ? 6 : 5));
        switch (pick) {
        case 0:
        case 1: q.kind = QubitKind::Io; break;
        case 2: q.kind = QubitKind::Computational; q.init = rng() % 2 ? Basis::X : Basis::Z; break;
        case 3:
        case 4: q.kind = QubitKind::Teleport; q.init = static_cast<Basis>(rng() % 4); break;
        default: q.kind = QubitKind::Distillation; q.init = Basis::A; break;
        }
        c.add_qubit(q);
    }
    if (n > 1)
        for (std::size_t g = rng() % (opt.max_cnots + 1); g > 0; --g) {
            const std::size_t a = rng() % n;
            const std::size_t b = (a + 1 + rng() % (n - 1)) % n;
            const bool da = c.qubits[a].kind == QubitKind::Distillation;
            if (opt.isolated_distillation && da != (c.qubits[b].kind == QubitKind::Distillation)) continue;
            c.cnots.push_back({a, b});
        }
    for (const QubitDecl& q : c.qubits) {
        switch (q.kind) {
        case QubitKind::Teleport:
            c.rules.push_back({q.id,
                               is_rotated(*q.init) ? (rng() % 2 ? Basis::X : Basis::Z) : (rng() % 2 ? Basis::Y : Basis::A),
                               std::nullopt});
            break;
        case QubitKind::Computational:
            if (rng() % 4) c.rules.push_back({q.id, *q.init, std::nullopt});
            break;
        case QubitKind::Distillation: c.rules.push_back({q.id, Basis::Z, std::nullopt}); break;
        case QubitKind::Io: break;
        }
    }
    return c;
}

} // namespace ftspec::test_support
