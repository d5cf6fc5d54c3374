#pragma once

// Stabiliser truth tables: derivation from an ICM circuit by seeding single-qubit
// X/Z inputs and conjugating them through the CNOT region, plus a canonical form
// for comparing tables as row groups.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ftspec/circuit.hpp"
#include "ftspec/pauli.hpp"

namespace ftspec {

/// The qubits a truth table speaks about, in column order: io qubits first, then
/// non-distillation ancillae, each group in declaration order.
struct Roster {
    std::vector<std::string> ids;
    std::vector<std::size_t> circuit_index; // column -> index in the circuit

    std::size_t size() const noexcept { return ids.size(); }

    std::optional<std::size_t> column_of(std::string_view id) const {
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (ids[i] == id) return i;
        return std::nullopt;
    }
};

inline Roster roster_of(const IcmCircuit& c) {
    Roster r;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c.qubits[i].kind == QubitKind::Io) {
            r.ids.push_back(c.qubits[i].id);
            r.circuit_index.push_back(i);
        }
    for (std::size_t i = 0; i < c.size(); ++i) {
        const QubitKind k = c.qubits[i].kind;
        if (k == QubitKind::Computational || k == QubitKind::Teleport) {
            r.ids.push_back(c.qubits[i].id);
            r.circuit_index.push_back(i);
        }
    }
    return r;
}

/// CNOTs of the stabiliser partition: every gate not touching a distillation ancilla.
inline std::vector<Cnot> stabiliser_cnots(const IcmCircuit& c) {
    std::vector<Cnot> out;
    out.reserve(c.cnots.size());
    for (const Cnot& g : c.cnots)
        if (c.qubits[g.control].kind != QubitKind::Distillation &&
            c.qubits[g.target].kind != QubitKind::Distillation)
            out.push_back(g);
    return out;
}

/// Re-indexes a Pauli between column spaces: `to_columns[i]` is the destination
/// of source column i.
inline PauliOperator remap_pauli(const PauliOperator& p, std::span<const std::size_t> to_columns,
                                 std::size_t dest_size) {
    PauliOperator out(dest_size);
    for (std::size_t i = 0; i < p.size(); ++i) {
        out.set_x(to_columns[i], p.x(i));
        out.set_z(to_columns[i], p.z(i));
    }
    out.set_phase(p.phase());
    return out;
}

/// Inverse of remap_pauli: picks columns `from_columns` out of a wider Pauli.
inline PauliOperator project_pauli(const PauliOperator& p, std::span<const std::size_t> from_columns) {
    PauliOperator out(from_columns.size());
    for (std::size_t i = 0; i < from_columns.size(); ++i) {
        out.set_x(i, p.x(from_columns[i]));
        out.set_z(i, p.z(from_columns[i]));
    }
    out.set_phase(p.phase());
    return out;
}

struct StabiliserTruthTable {
    std::size_t n = 0;
    std::vector<TableRow> rows;

    friend bool operator==(const StabiliserTruthTable& a, const StabiliserTruthTable& b) {
        return a.n == b.n && a.rows == b.rows;
    }
};

/// A seed of the construction: which roster column gets which single-qubit Pauli.
struct Seed {
    std::size_t column;
    char basis; // 'X' or 'Z'
};

/// Seeds per qubit kind: io and rotated-init teleport ancillae get X and Z rows;
/// rotated-measurement teleport ancillae and computational ancillae get one row
/// in their initialisation basis.
inline std::vector<Seed> truth_table_seeds(const IcmCircuit& c, const Roster& roster) {
    std::vector<Seed> seeds;
    for (std::size_t col = 0; col < roster.size(); ++col) {
        const QubitDecl& q = c.qubits[roster.circuit_index[col]];
        const bool both = q.kind == QubitKind::Io ||
                          (q.kind == QubitKind::Teleport && teleport_flavour(q) == TeleportFlavour::RotatedInit);
        if (both) {
            seeds.push_back({col, 'X'});
            seeds.push_back({col, 'Z'});
        } else {
            seeds.push_back({col, *q.init == Basis::X ? 'X' : 'Z'});
        }
    }
    return seeds;
}

/// Row count predicted by the seeding rules.
inline std::size_t expected_row_count(const IcmCircuit& c) {
    std::size_t rows = 0;
    for (const QubitDecl& q : c.qubits) {
        switch (q.kind) {
        case QubitKind::Io: rows += 2; break;
        case QubitKind::Computational: rows += 1; break;
        case QubitKind::Teleport: rows += teleport_flavour(q) == TeleportFlavour::RotatedInit ? 2 : 1; break;
        case QubitKind::Distillation: break;
        }
    }
    return rows;
}

inline StabiliserTruthTable derive_truth_table(const IcmCircuit& c) {
    require_valid(c);
    const Roster roster = roster_of(c);
    const std::vector<Cnot> gates = stabiliser_cnots(c);
    const std::vector<Seed> seeds = truth_table_seeds(c, roster);

    StabiliserTruthTable table;
    table.n = roster.size();
    table.rows.reserve(seeds.size());
    for (const Seed& s : seeds) {
        PauliOperator in = PauliOperator::single(table.n, s.column, s.basis);
        PauliOperator wide = remap_pauli(in, roster.circuit_index, c.size());
        PauliOperator out = project_pauli(conjugate_circuit(std::move(wide), gates), roster.circuit_index);
        table.rows.emplace_back(std::move(in), std::move(out), RowSeed{roster.ids[s.column], s.basis});
    }
    return table;
}

namespace detail {

// Column `col` of the 4n-bit row word: input x | input z | output x | output z.
inline bool row_bit(const TableRow& r, std::size_t n, std::size_t col) {
    const std::size_t block = col / n, k = col % n;
    switch (block) {
    case 0: return r.input().x(k);
    case 1: return r.input().z(k);
    case 2: return r.output().x(k);
    default: return r.output().z(k);
    }
}

inline bool row_is_trivial(const TableRow& r) { return r.input().is_identity() && r.output().is_identity(); }

} // namespace detail

/// Reduced row-echelon generating set of the row group, eliminating on the
/// leftmost pivot with row_multiply so signs are carried exactly. Identity rows
/// with sign +1 are dropped; a -1 identity row (an inconsistent table) is kept.
inline StabiliserTruthTable canonicalize_table(const StabiliserTruthTable& t) {
    std::vector<TableRow> rows;
    rows.reserve(t.rows.size());
    for (const TableRow& r : t.rows) rows.emplace_back(r.input(), r.output());

    const std::size_t width = 4 * t.n;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < width && rank < rows.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && !detail::row_bit(rows[pivot], t.n, col)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != rank && detail::row_bit(rows[i], t.n, col)) rows[i] = row_multiply(rows[i], rows[rank]);
        ++rank;
    }

    StabiliserTruthTable out;
    out.n = t.n;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i >= rank) {
            if (detail::row_is_trivial(rows[i]) && rows[i].sign() < 0) out.rows.push_back(rows[i]);
            continue;
        }
        out.rows.push_back(rows[i]);
    }
    return out;
}

inline bool table_equal(const StabiliserTruthTable& a, const StabiliserTruthTable& b) {
    if (a.n != b.n)
        throw DimensionError("table size mismatch: " + std::to_string(a.n) + " vs " + std::to_string(b.n));
    return canonicalize_table(a) == canonicalize_table(b);
}

} // namespace ftspec
