#pragma once

// Phase-tracked Pauli strings over n qubits, stored as packed x/z bit words,
// and their conjugation through CNOT networks.
//
// Convention: qubit k carries I, X, Z or Y for (x,z) = (0,0), (1,0), (0,1),
// (1,1), with the Hermitian Y = iXZ. The operator is i^phase times the tensor
// product of the named single-qubit Paulis.

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ftspec/error.hpp"

namespace ftspec {

/// A CNOT given by qubit indices.
struct Cnot {
    std::size_t control = 0;
    std::size_t target = 0;

    friend bool operator==(const Cnot&, const Cnot&) = default;
};

class PauliOperator {
public:
    using Word = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;

    PauliOperator() = default;

    /// Identity on `n` qubits.
    explicit PauliOperator(std::size_t n)
        : n_(n), x_(word_count(n), 0), z_(word_count(n), 0) {}

    static PauliOperator identity(std::size_t n) { return PauliOperator(n); }

    /// Single-qubit X or Z (or Y) at `qubit`, identity elsewhere.
    static PauliOperator single(std::size_t n, std::size_t qubit, char symbol) {
        PauliOperator p(n);
        p.set(qubit, symbol);
        return p;
    }

    std::size_t size() const noexcept { return n_; }

    /// Power of i in front of the named product, 0..3.
    unsigned phase() const noexcept { return phase_; }
    void set_phase(unsigned power) noexcept { phase_ = power & 3u; }

    bool x(std::size_t k) const { return bit(x_, k); }
    bool z(std::size_t k) const { return bit(z_, k); }

    void set_x(std::size_t k, bool v) { assign(x_, k, v); }
    void set_z(std::size_t k, bool v) { assign(z_, k, v); }

    /// 'I', 'X', 'Y' or 'Z' at qubit k.
    char symbol(std::size_t k) const {
        static constexpr char kSymbols[4] = {'I', 'X', 'Z', 'Y'};
        return kSymbols[(x(k) ? 1 : 0) | (z(k) ? 2 : 0)];
    }

    void set(std::size_t k, char symbol) {
        check_index(k);
        switch (symbol) {
        case 'I': set_x(k, false); set_z(k, false); break;
        case 'X': set_x(k, true);  set_z(k, false); break;
        case 'Z': set_x(k, false); set_z(k, true);  break;
        case 'Y': set_x(k, true);  set_z(k, true);  break;
        default: throw std::invalid_argument(std::string("unknown Pauli symbol '") + symbol + "'");
        }
    }

    bool is_identity() const noexcept {
        for (std::size_t w = 0; w < x_.size(); ++w)
            if (x_[w] != 0 || z_[w] != 0) return false;
        return true;
    }

    /// Number of non-identity positions.
    std::size_t weight() const noexcept {
        std::size_t total = 0;
        for (std::size_t w = 0; w < x_.size(); ++w) total += std::popcount(x_[w] | z_[w]);
        return total;
    }

    bool is_x_type() const noexcept {
        for (Word w : z_) if (w != 0) return false;
        return true;
    }
    bool is_z_type() const noexcept {
        for (Word w : x_) if (w != 0) return false;
        return true;
    }

    /// Copy with phase power 0.
    PauliOperator canonical() const {
        PauliOperator p = *this;
        p.phase_ = 0;
        return p;
    }

    /// True iff the two operators commute.
    bool commutes_with(const PauliOperator& other) const {
        require_same_size(other);
        std::size_t anti = 0;
        for (std::size_t w = 0; w < x_.size(); ++w)
            anti += std::popcount((x_[w] & other.z_[w]) ^ (z_[w] & other.x_[w]));
        return anti % 2 == 0;
    }

    std::span<const Word> x_words() const noexcept { return x_; }
    std::span<const Word> z_words() const noexcept { return z_; }

    /// In-place right multiplication: *this = *this * rhs, with exact phase.
    PauliOperator& operator*=(const PauliOperator& rhs) {
        require_same_size(rhs);
        // Per-qubit i-exponent of P_a * P_b: +1 for the cyclic order X->Y->Z,
        // -1 for the reverse, 0 when either factor is I or they are equal.
        int exponent = static_cast<int>(phase_) + static_cast<int>(rhs.phase_);
        for (std::size_t w = 0; w < x_.size(); ++w) {
            const Word x1 = x_[w], z1 = z_[w], x2 = rhs.x_[w], z2 = rhs.z_[w];
            const Word plus = (x1 & ~z1 & x2 & z2) | (~x1 & z1 & x2 & ~z2) | (x1 & z1 & ~x2 & z2);
            const Word minus = (x1 & ~z1 & ~x2 & z2) | (~x1 & z1 & x2 & z2) | (x1 & z1 & x2 & ~z2);
            exponent += std::popcount(plus) - std::popcount(minus);
            x_[w] = x1 ^ x2;
            z_[w] = z1 ^ z2;
        }
        phase_ = static_cast<unsigned>(((exponent % 4) + 4) % 4);
        return *this;
    }

    friend PauliOperator operator*(PauliOperator a, const PauliOperator& b) {
        a *= b;
        return a;
    }

    /// Conjugate in place by CNOT(control, target).
    void conjugate_cnot(std::size_t control, std::size_t target) {
        if (control == target)
            throw IndexError("CNOT control and target must differ (both " + std::to_string(control) + ")");
        check_index(control);
        check_index(target);
        const bool xc = x(control), zc = z(control), xt = x(target), zt = z(target);
        // Sign flips exactly when the pair reads XZ->..., i.e. Y_c Y_t or X_c Z_t.
        if (xc && zt && (xt == zc)) phase_ = (phase_ + 2) & 3u;
        set_x(target, xt != xc);
        set_z(control, zc != zt);
    }

    friend bool operator==(const PauliOperator& a, const PauliOperator& b) {
        return a.n_ == b.n_ && a.phase_ == b.phase_ && a.x_ == b.x_ && a.z_ == b.z_;
    }

    /// Lexicographic order on (x words, z words, phase); used for sorting only.
    friend bool operator<(const PauliOperator& a, const PauliOperator& b) {
        if (a.n_ != b.n_) return a.n_ < b.n_;
        if (a.x_ != b.x_) return a.x_ < b.x_;
        if (a.z_ != b.z_) return a.z_ < b.z_;
        return a.phase_ < b.phase_;
    }

private:
    static std::size_t word_count(std::size_t n) { return (n + kWordBits - 1) / kWordBits; }

    void check_index(std::size_t k) const {
        if (k >= n_)
            throw IndexError("qubit index " + std::to_string(k) + " out of range for " +
                             std::to_string(n_) + "-qubit Pauli");
    }

    void require_same_size(const PauliOperator& other) const {
        if (n_ != other.n_)
            throw DimensionError("Pauli size mismatch: " + std::to_string(n_) + " vs " +
                                 std::to_string(other.n_));
    }

    bool bit(const std::vector<Word>& words, std::size_t k) const {
        check_index(k);
        return (words[k / kWordBits] >> (k % kWordBits)) & 1u;
    }

    void assign(std::vector<Word>& words, std::size_t k, bool v) {
        check_index(k);
        const Word mask = Word{1} << (k % kWordBits);
        if (v) words[k / kWordBits] |= mask;
        else words[k / kWordBits] &= ~mask;
    }

    std::size_t n_ = 0;
    std::vector<Word> x_;
    std::vector<Word> z_;
    unsigned phase_ = 0;
};

inline PauliOperator pauli_mul(const PauliOperator& a, const PauliOperator& b) { return a * b; }

inline PauliOperator conjugate_cnot(PauliOperator p, std::size_t control, std::size_t target) {
    p.conjugate_cnot(control, target);
    return p;
}

/// Left-to-right fold of conjugate_cnot over `cnots` (temporal order).
inline PauliOperator conjugate_circuit(PauliOperator p, std::span<const Cnot> cnots) {
    for (const Cnot& g : cnots) p.conjugate_cnot(g.control, g.target);
    return p;
}

// ---------------------------------------------------------------------------
// Text syntax: optional phase prefix ("+", "-", "i", "+i", "-i") followed by
// one symbol per qubit from {I, X, Y, Z}.

inline PauliOperator pauli_parse(std::string_view text) {
    std::size_t pos = 0;
    unsigned phase = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        if (text[pos] == '-') phase = 2;
        ++pos;
    }
    if (pos < text.size() && text[pos] == 'i') {
        phase = (phase + 1) & 3u;
        ++pos;
    }
    const std::size_t n = text.size() - pos;
    if (n == 0) throw ParseError("empty Pauli string", 0, pos + 1);
    PauliOperator p(n);
    for (std::size_t k = 0; k < n; ++k) {
        const char c = text[pos + k];
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
            throw ParseError(std::string("unexpected character '") + c + "' in Pauli string", 0,
                             pos + k + 1);
        p.set(k, c);
    }
    p.set_phase(phase);
    return p;
}

inline std::string pauli_format(const PauliOperator& p) {
    static constexpr const char* kPrefix[4] = {"", "i", "-", "-i"};
    std::string out = kPrefix[p.phase()];
    out.reserve(out.size() + p.size());
    for (std::size_t k = 0; k < p.size(); ++k) out.push_back(p.symbol(k));
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const PauliOperator& p) { return os << pauli_format(p); }

// ---------------------------------------------------------------------------
// Truth-table rows.

/// Where a row came from: the seeded qubit and the seed Pauli ('X' or 'Z').
struct RowSeed {
    std::string qubit;
    char basis = 'X';

    friend bool operator==(const RowSeed&, const RowSeed&) = default;
};

/// One stabiliser truth-table row: conjugation maps `input` to `sign * output`.
///
/// `input` is phase-free. `output` carries the sign as phase power 0 or 2, so
/// sign() is exactly the quotient of output and input phases.
class TableRow {
public:
    TableRow() = default;

    TableRow(PauliOperator input, PauliOperator output, std::optional<RowSeed> seed = std::nullopt)
        : input_(std::move(input)), output_(std::move(output)), seed_(std::move(seed)) {
        if (input_.size() != output_.size())
            throw DimensionError("row input has " + std::to_string(input_.size()) +
                                 " qubits, output has " + std::to_string(output_.size()));
        const unsigned relative = (output_.phase() + 4 - input_.phase()) & 3u;
        if (relative % 2 != 0)
            throw PhaseError("row relative phase is imaginary: " + pauli_format(input_) + " -> " +
                             pauli_format(output_));
        input_.set_phase(0);
        output_.set_phase(relative);
    }

    /// Row with an explicit sign (+1 or -1) and phase-free operators.
    static TableRow with_sign(PauliOperator input, PauliOperator output, int sign,
                              std::optional<RowSeed> seed = std::nullopt) {
        input.set_phase(0);
        output.set_phase(sign < 0 ? 2 : 0);
        return TableRow(std::move(input), std::move(output), std::move(seed));
    }

    std::size_t size() const noexcept { return input_.size(); }
    const PauliOperator& input() const noexcept { return input_; }
    const PauliOperator& output() const noexcept { return output_; }
    int sign() const noexcept { return output_.phase() == 2 ? -1 : +1; }
    const std::optional<RowSeed>& seed() const noexcept { return seed_; }

    /// Output operator without its sign.
    PauliOperator output_unsigned() const { return output_.canonical(); }

    /// Rows compare on (input, output, sign); provenance is ignored.
    friend bool operator==(const TableRow& a, const TableRow& b) {
        return a.input_ == b.input_ && a.output_ == b.output_;
    }

private:
    PauliOperator input_;
    PauliOperator output_;
    std::optional<RowSeed> seed_;
};

/// "<sign> <input> -> <output>", e.g. "+ XII -> XXX".
inline std::string row_format(const TableRow& r) {
    return std::string(r.sign() < 0 ? "-" : "+") + " " + pauli_format(r.input()) + " -> " +
           pauli_format(r.output_unsigned());
}

inline std::ostream& operator<<(std::ostream& os, const TableRow& r) { return os << row_format(r); }

/// Product of two rows. Input and output products are formed separately and the
/// input's phase is moved onto the output so the row stays phase-free on input.
inline TableRow row_multiply(const TableRow& r1, const TableRow& r2) {
    if (r1.size() != r2.size())
        throw DimensionError("row size mismatch: " + std::to_string(r1.size()) + " vs " +
                             std::to_string(r2.size()));
    return TableRow(r1.input() * r2.input(), r1.output() * r2.output());
}

/// Formal (display-only) normalised sum of rows.
struct FormalSuperposition {
    struct Term {
        double coefficient = 0.0;
        TableRow row;
    };
    std::vector<Term> terms;

    double norm_squared() const {
        double total = 0.0;
        for (const Term& t : terms) total += t.coefficient * t.coefficient;
        return total;
    }
};

inline FormalSuperposition row_superpose(const TableRow& r1, const TableRow& r2) {
    if (r1.size() != r2.size())
        throw DimensionError("row size mismatch: " + std::to_string(r1.size()) + " vs " +
                             std::to_string(r2.size()));
    if (r1 == r2) return FormalSuperposition{{{1.0, r1}}};
    const double c = 1.0 / std::sqrt(2.0);
    return FormalSuperposition{{{c, r1}, {c, r2}}};
}

/// "((+ YX -> YI) + (+ XX -> XI))/sqrt2", or the single row for a one-term sum.
inline std::string superposition_format(const FormalSuperposition& s) {
    if (s.terms.size() == 1) return "(" + row_format(s.terms.front().row) + ")";
    std::string out = "(";
    for (std::size_t i = 0; i < s.terms.size(); ++i) {
        if (i != 0) out += " + ";
        out += "(" + row_format(s.terms[i].row) + ")";
    }
    out += ")/sqrt" + std::to_string(s.terms.size());
    return out;
}

} // namespace ftspec
