#pragma once

// Brute-force dense simulation of ICM circuits: branch enumeration over
// measurement outcomes, Choi matrices, an independent truth-table oracle and
// sampled row verification. Everything here is exponential and size-capped.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ftspec/circuit.hpp"
#include "ftspec/compile.hpp"
#include "ftspec/error.hpp"
#include "ftspec/frame.hpp"
#include "ftspec/pauli.hpp"
#include "ftspec/spec_format.hpp"
#include "ftspec/truth_table.hpp"
#include "ftspec/verifier.hpp"

namespace ftspec {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr std::size_t kOracleMaxQubits = 12;

/// State vector over `n` qubits; qubit 0 is the most significant bit of the
/// basis index. `labels` names the qubits when the state came from a circuit.
struct DenseState {
    std::size_t n = 0;
    CVector amplitudes;
    std::vector<std::string> labels;

    static DenseState basis(std::size_t n, std::size_t index) {
        DenseState s;
        s.n = n;
        s.amplitudes = CVector::Zero(std::size_t{1} << n);
        s.amplitudes(static_cast<Eigen::Index>(index)) = 1;
        return s;
    }
};

namespace oracle_detail {

inline void require_cap(std::size_t n, const char* what) {
    if (n > kOracleMaxQubits)
        throw SizeCapError(std::string(what) + " needs " + std::to_string(n) + " qubits; the dense oracle is capped at " +
                           std::to_string(kOracleMaxQubits));
}

/// Eigenvector of `b` for eigenvalue +1 (outcome 0) or -1 (outcome 1).
inline std::array<cplx, 2> basis_vector(Basis b, int outcome) {
    const double r = 1 / std::sqrt(2.0);
    const double s = outcome ? -1.0 : 1.0;
    switch (b) {
    case Basis::Z: return outcome ? std::array<cplx, 2>{0, 1} : std::array<cplx, 2>{1, 0};
    case Basis::X: return {r, s * r};
    case Basis::Y: return {r, s * r * cplx(0, 1)};
    case Basis::A: return {r, s * r * std::polar(1.0, M_PI / 4)};
    }
    return {1, 0};
}

inline std::array<cplx, 2> init_vector(Basis b) { return basis_vector(b, 0); }

inline std::size_t bit_of(std::size_t n, std::size_t qubit) { return std::size_t{1} << (n - 1 - qubit); }

/// CNOT as a permutation of the rows of `m` (rows index n-qubit basis states).
inline void apply_cnot_rows(CMatrix& m, std::size_t n, std::size_t control, std::size_t target) {
    const std::size_t cb = bit_of(n, control), tb = bit_of(n, target);
    for (std::size_t r = 0; r < (std::size_t{1} << n); ++r)
        if ((r & cb) && !(r & tb)) m.row(static_cast<Eigen::Index>(r)).swap(m.row(static_cast<Eigen::Index>(r | tb)));
}

inline void apply_cnot(CVector& v, std::size_t n, std::size_t control, std::size_t target) {
    const std::size_t cb = bit_of(n, control), tb = bit_of(n, target);
    for (std::size_t r = 0; r < (std::size_t{1} << n); ++r)
        if ((r & cb) && !(r & tb)) std::swap(v(static_cast<Eigen::Index>(r)), v(static_cast<Eigen::Index>(r | tb)));
}

inline Eigen::Matrix2cd pauli_matrix(char s) {
    Eigen::Matrix2cd m;
    switch (s) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1; break;
    }
    return m;
}

/// Applies a 2x2 matrix to one qubit of a state vector.
inline void apply_single(CVector& v, std::size_t n, std::size_t qubit, const Eigen::Matrix2cd& g) {
    const std::size_t b = bit_of(n, qubit);
    for (std::size_t r = 0; r < (std::size_t{1} << n); ++r) {
        if (r & b) continue;
        const auto i0 = static_cast<Eigen::Index>(r), i1 = static_cast<Eigen::Index>(r | b);
        const cplx a0 = v(i0), a1 = v(i1);
        v(i0) = g(0, 0) * a0 + g(0, 1) * a1;
        v(i1) = g(1, 0) * a0 + g(1, 1) * a1;
    }
}

/// Dense application of a Pauli (with its phase) to a state vector.
inline void apply_pauli(CVector& v, const PauliOperator& p) {
    for (std::size_t k = 0; k < p.size(); ++k)
        if (p.symbol(k) != 'I') apply_single(v, p.size(), k, pauli_matrix(p.symbol(k)));
    static const cplx kPhase[4] = {1, cplx(0, 1), -1, cplx(0, -1)};
    v *= kPhase[p.phase()];
}

/// Pauli acting on the rows of `m` (phase dropped).
inline CMatrix pauli_rows(const CMatrix& m, const PauliOperator& p) {
    const std::size_t n = p.size();
    std::size_t xmask = 0, zmask = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (p.x(k)) xmask |= bit_of(n, k);
        if (p.z(k)) zmask |= bit_of(n, k);
    }
    CMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < static_cast<std::size_t>(m.rows()); ++r) {
        const double sign = (__builtin_popcountll(r & zmask) & 1) ? -1.0 : 1.0;
        out.row(static_cast<Eigen::Index>(r ^ xmask)) = sign * m.row(static_cast<Eigen::Index>(r));
    }
    return out;
}

/// Contracts the qubit at significance position `pos` (of `m_qubits`) with the
/// bra of `ket`.
inline CMatrix contract(const CMatrix& m, std::size_t m_qubits, std::size_t pos, const std::array<cplx, 2>& ket) {
    const std::size_t low_bits = m_qubits - 1 - pos;
    const std::size_t low_mask = (std::size_t{1} << low_bits) - 1;
    const std::size_t rows = std::size_t{1} << (m_qubits - 1);
    const cplx b0 = std::conj(ket[0]), b1 = std::conj(ket[1]);
    CMatrix out(static_cast<Eigen::Index>(rows), m.cols());
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t hi = r >> low_bits, lo = r & low_mask;
        const std::size_t r0 = (hi << (low_bits + 1)) | lo;
        const std::size_t r1 = r0 | (std::size_t{1} << low_bits);
        out.row(static_cast<Eigen::Index>(r)) =
            b0 * m.row(static_cast<Eigen::Index>(r0)) + b1 * m.row(static_cast<Eigen::Index>(r1));
    }
    return out;
}

} // namespace oracle_detail

// ---------------------------------------------------------------------------
// Measurement plan and ports.

/// One projective measurement in execution order. A qubit conditioned by an
/// earlier rule takes its basis from that rule's outcome.
struct MeasurementStep {
    std::string qubit;
    std::size_t index = 0; // circuit index
    Basis basis = Basis::Z;
    std::optional<std::size_t> condition; // step whose outcome selects the basis
    Basis on_plus = Basis::Z, on_minus = Basis::Z;

    Basis resolve(const std::vector<int>& outcomes) const {
        if (!condition) return basis;
        return outcomes[*condition] ? on_minus : on_plus;
    }
};

inline std::vector<MeasurementStep> measurement_plan(const IcmCircuit& c) {
    std::vector<MeasurementStep> steps;
    std::map<std::string, std::size_t> step_of;
    std::map<std::string, std::pair<std::size_t, MeasurementRule::Conditional>> conditioned;
    auto later_q1 = [&](std::size_t k, const std::string& id) {
        for (std::size_t j = k + 1; j < c.rules.size(); ++j)
            if (c.rules[j].qubit == id) return true;
        return false;
    };
    auto push = [&](const std::string& id, Basis own) {
        if (step_of.count(id)) return;
        MeasurementStep s;
        s.qubit = id;
        s.index = c.index_of(id);
        s.basis = own;
        if (auto it = conditioned.find(id); it != conditioned.end()) {
            s.condition = it->second.first;
            s.on_plus = it->second.second.on_plus;
            s.on_minus = it->second.second.on_minus;
        }
        step_of[id] = steps.size();
        steps.push_back(std::move(s));
    };
    for (std::size_t k = 0; k < c.rules.size(); ++k) {
        const MeasurementRule& r = c.rules[k];
        push(r.qubit, r.basis);
        if (r.then) {
            conditioned.emplace(r.then->qubit, std::make_pair(step_of.at(r.qubit), *r.then));
            if (!later_q1(k, r.then->qubit)) push(r.then->qubit, r.then->on_plus);
        }
    }
    return steps;
}

/// Channel ports: inputs are the io qubits; outputs are the declared `out`
/// list when none of it is measured, otherwise the unmeasured io qubits.
struct Ports {
    std::vector<std::size_t> inputs, outputs; // circuit indices
    std::vector<std::string> input_ids, output_ids;
};

inline Ports channel_ports(const IcmCircuit& c) {
    Ports p;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c.qubits[i].kind == QubitKind::Io) {
            p.inputs.push_back(i);
            p.input_ids.push_back(c.qubits[i].id);
        }
    bool use_declared = c.outputs.has_value();
    if (use_declared)
        for (const std::string& id : *c.outputs)
            if (c.is_measured(id)) use_declared = false;
    if (use_declared) {
        p.output_ids = *c.outputs;
        for (const std::string& id : p.output_ids) p.outputs.push_back(c.index_of(id));
    } else {
        for (std::size_t i : p.inputs)
            if (!c.is_measured(c.qubits[i].id)) {
                p.outputs.push_back(i);
                p.output_ids.push_back(c.qubits[i].id);
            }
    }
    return p;
}

// ---------------------------------------------------------------------------
// Branch enumeration.

/// One outcome branch: the Kraus operators (one per basis state of traced-out
/// unmeasured qubits) from input ports to output ports.
struct Branch {
    std::vector<int> outcomes; // per MeasurementStep, 0 = +1
    std::vector<Basis> bases;
    OutcomeBits bits;          // outcomes keyed by qubit id
    std::vector<CMatrix> kraus;

    double weight() const {
        double w = 0;
        for (const CMatrix& k : kraus) w += k.squaredNorm();
        return w;
    }
};

namespace oracle_detail {

/// Columns: input-port basis states; rows: full-register basis states after
/// initialisation and the CNOT list.
inline CMatrix propagate(const IcmCircuit& c, const Ports& ports) {
    const std::size_t n = c.size();
    const std::size_t k_in = ports.inputs.size();
    const std::size_t dim = std::size_t{1} << n, cols = std::size_t{1} << k_in;
    std::vector<int> input_slot(n, -1);
    for (std::size_t i = 0; i < k_in; ++i) input_slot[ports.inputs[i]] = static_cast<int>(i);
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(cols));
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t b = 0; b < dim; ++b) {
            cplx amp = 1;
            for (std::size_t q = 0; q < n && amp != cplx(0); ++q) {
                const int bit = (b & bit_of(n, q)) ? 1 : 0;
                if (input_slot[q] >= 0) {
                    const int want = (j >> (k_in - 1 - static_cast<std::size_t>(input_slot[q]))) & 1;
                    if (bit != want) amp = 0;
                } else {
                    amp *= init_vector(*c.qubits[q].init)[bit];
                }
            }
            m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(j)) = amp;
        }
    }
    for (const Cnot& g : c.cnots) apply_cnot_rows(m, n, g.control, g.target);
    return m;
}

/// Splits the post-measurement matrix over `remaining` qubits into Kraus
/// operators on the output ports, one per traced basis state.
inline std::vector<CMatrix> split_kraus(const CMatrix& m, const std::vector<std::size_t>& remaining,
                                        const std::vector<std::size_t>& outputs) {
    const std::size_t r = remaining.size();
    std::vector<std::size_t> out_pos, traced_pos;
    for (std::size_t o : outputs)
        for (std::size_t p = 0; p < r; ++p)
            if (remaining[p] == o) out_pos.push_back(p);
    for (std::size_t p = 0; p < r; ++p)
        if (std::find(out_pos.begin(), out_pos.end(), p) == out_pos.end()) traced_pos.push_back(p);
    const std::size_t k_out = out_pos.size();
    std::vector<CMatrix> out(std::size_t{1} << traced_pos.size(),
                             CMatrix::Zero(static_cast<Eigen::Index>(std::size_t{1} << k_out), m.cols()));
    for (std::size_t row = 0; row < (std::size_t{1} << r); ++row) {
        std::size_t oi = 0, ti = 0;
        for (std::size_t p : out_pos) oi = (oi << 1) | ((row >> (r - 1 - p)) & 1u);
        for (std::size_t p : traced_pos) ti = (ti << 1) | ((row >> (r - 1 - p)) & 1u);
        out[ti].row(static_cast<Eigen::Index>(oi)) = m.row(static_cast<Eigen::Index>(row));
    }
    return out;
}

} // namespace oracle_detail

/// Every outcome branch of the circuit, in lexicographic outcome order.
inline std::vector<Branch> enumerate_branches(const IcmCircuit& c) {
    require_valid(c);
    oracle_detail::require_cap(c.size(), "circuit");
    const Ports ports = channel_ports(c);
    const std::vector<MeasurementStep> steps = measurement_plan(c);
    std::vector<Branch> out;

    std::vector<std::size_t> remaining(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) remaining[i] = i;
    std::vector<int> outcomes;
    std::vector<Basis> bases;

    std::function<void(const CMatrix&, std::vector<std::size_t>&)> walk = [&](const CMatrix& m,
                                                                               std::vector<std::size_t>& rem) {
        const std::size_t depth = outcomes.size();
        if (depth == steps.size()) {
            Branch b;
            b.outcomes = outcomes;
            b.bases = bases;
            for (std::size_t i = 0; i < steps.size(); ++i) b.bits[steps[i].qubit] = outcomes[i];
            b.kraus = oracle_detail::split_kraus(m, rem, ports.outputs);
            out.push_back(std::move(b));
            return;
        }
        const MeasurementStep& s = steps[depth];
        const Basis basis = s.resolve(outcomes);
        const std::size_t pos =
            static_cast<std::size_t>(std::find(rem.begin(), rem.end(), s.index) - rem.begin());
        std::vector<std::size_t> next = rem;
        next.erase(next.begin() + static_cast<std::ptrdiff_t>(pos));
        for (int o = 0; o < 2; ++o) {
            outcomes.push_back(o);
            bases.push_back(basis);
            walk(oracle_detail::contract(m, rem.size(), pos, oracle_detail::basis_vector(basis, o)), next);
            outcomes.pop_back();
            bases.pop_back();
        }
    };
    CMatrix start = oracle_detail::propagate(c, ports);
    walk(start, remaining);
    return out;
}

/// Runs one branch on an explicit io input state. `outcomes` maps every
/// qubit measured along the branch to +1 or -1. Returns the normalised state of
/// all unmeasured qubits and the branch probability.
inline std::pair<DenseState, double> run_branch(const IcmCircuit& c, const DenseState& io_input,
                                                const std::map<std::string, int>& outcomes) {
    require_valid(c);
    oracle_detail::require_cap(c.size(), "circuit");
    const Ports ports = channel_ports(c);
    if (io_input.n != ports.inputs.size())
        throw DimensionError("input state has " + std::to_string(io_input.n) + " qubits, circuit has " +
                             std::to_string(ports.inputs.size()) + " io qubits");
    const std::vector<MeasurementStep> steps = measurement_plan(c);
    CMatrix m = oracle_detail::propagate(c, ports) * io_input.amplitudes;
    std::vector<std::size_t> rem(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) rem[i] = i;
    std::vector<int> bits;
    for (const MeasurementStep& s : steps) {
        auto it = outcomes.find(s.qubit);
        if (it == outcomes.end() || (it->second != 1 && it->second != -1))
            throw ValidationError("inconsistent outcome assignment: no +1/-1 outcome for '" + s.qubit + "'");
        const Basis basis = s.resolve(bits);
        const int o = it->second == 1 ? 0 : 1;
        const std::size_t pos = static_cast<std::size_t>(std::find(rem.begin(), rem.end(), s.index) - rem.begin());
        m = oracle_detail::contract(m, rem.size(), pos, oracle_detail::basis_vector(basis, o));
        rem.erase(rem.begin() + static_cast<std::ptrdiff_t>(pos));
        bits.push_back(o);
    }
    for (const auto& [id, v] : outcomes) {
        bool used = false;
        for (const MeasurementStep& s : steps) used = used || s.qubit == id;
        if (!used) throw ValidationError("inconsistent outcome assignment: '" + id + "' is not measured");
    }
    DenseState out;
    out.n = rem.size();
    out.amplitudes = m.col(0);
    for (std::size_t i : rem) out.labels.push_back(c.qubits[i].id);
    const double p = out.amplitudes.squaredNorm();
    if (p > 0) out.amplitudes /= std::sqrt(p);
    return {std::move(out), p};
}

// ---------------------------------------------------------------------------
// Choi matrices.

/// Choi matrix sum_b vec(K_b) vec(K_b)^dagger with vec index (in * d_out + out);
/// trace equals the input dimension for trace-preserving maps.
using ChoiMatrix = CMatrix;

namespace oracle_detail {

inline CVector vec(const CMatrix& k) {
    const Eigen::Index d_out = k.rows(), d_in = k.cols();
    CVector v(d_in * d_out);
    for (Eigen::Index i = 0; i < d_in; ++i)
        for (Eigen::Index o = 0; o < d_out; ++o) v(i * d_out + o) = k(o, i);
    return v;
}

/// Frame correction for `bits`, re-indexed onto the output ports.
inline PauliOperator frame_on_ports(const PauliFrame& frame, const OutcomeBits& bits, const Ports& ports) {
    PauliOperator out(ports.output_ids.size());
    if (frame.empty()) return out;
    const PauliOperator f = frame.evaluate(bits);
    for (std::size_t k = 0; k < frame.outputs.size(); ++k) {
        auto it = std::find(ports.output_ids.begin(), ports.output_ids.end(), frame.outputs[k]);
        if (it == ports.output_ids.end())
            throw ValidationError("frame output '" + frame.outputs[k] + "' is not an output port");
        const auto pos = static_cast<std::size_t>(it - ports.output_ids.begin());
        out.set_x(pos, f.x(k));
        out.set_z(pos, f.z(k));
    }
    return out;
}

} // namespace oracle_detail

inline ChoiMatrix choi_of_kraus(const std::vector<CMatrix>& kraus) {
    if (kraus.empty()) throw DimensionError("no Kraus operators");
    const Eigen::Index d = kraus[0].rows() * kraus[0].cols();
    ChoiMatrix j = ChoiMatrix::Zero(d, d);
    for (const CMatrix& k : kraus) {
        const CVector v = oracle_detail::vec(k);
        j += v * v.adjoint();
    }
    return j;
}

inline ChoiMatrix choi_of_unitary(const CMatrix& u) { return choi_of_kraus({u}); }

/// Channel of the circuit with every branch corrected by `frame` and all
/// outcomes summed.
inline ChoiMatrix channel_choi(const IcmCircuit& c, const PauliFrame& frame = {}) {
    const Ports ports = channel_ports(c);
    std::vector<CMatrix> kraus;
    for (const Branch& b : enumerate_branches(c)) {
        const PauliOperator f = oracle_detail::frame_on_ports(frame, b.bits, ports);
        for (const CMatrix& k : b.kraus) kraus.push_back(f.is_identity() ? k : oracle_detail::pauli_rows(k, f));
    }
    return choi_of_kraus(kraus);
}

inline bool channels_equal(const ChoiMatrix& a, const ChoiMatrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("Choi matrices of different dimension: " + std::to_string(a.rows()) + " vs " +
                             std::to_string(b.rows()));
    if (std::isinf(tol)) return true;
    if (a.size() == 0) return true;
    return (a - b).cwiseAbs().maxCoeff() <= tol;
}

/// Outcome-resolved comparison: both circuits measure the same qubits and
/// every outcome assignment (with its resolved bases) induces the same
/// trace-non-increasing map. Missing branches count as zero maps.
inline bool branches_equal(const IcmCircuit& a, const IcmCircuit& b, double tol) {
    using Key = std::pair<OutcomeBits, std::map<std::string, Basis>>;
    auto collect = [](const IcmCircuit& c) {
        const std::vector<MeasurementStep> steps = measurement_plan(c);
        std::map<Key, ChoiMatrix> out;
        for (const Branch& br : enumerate_branches(c)) {
            Key k{br.bits, {}};
            for (std::size_t i = 0; i < steps.size(); ++i) k.second[steps[i].qubit] = br.bases[i];
            out[k] = choi_of_kraus(br.kraus);
        }
        return out;
    };
    const auto ma = collect(a), mb = collect(b);
    if (ma.empty() || mb.empty()) return ma.empty() && mb.empty();
    const Eigen::Index d = ma.begin()->second.rows();
    if (mb.begin()->second.rows() != d)
        throw DimensionError("Choi matrices of different dimension: " + std::to_string(d) + " vs " +
                             std::to_string(mb.begin()->second.rows()));
    const ChoiMatrix zero = ChoiMatrix::Zero(d, d);
    auto get = [&](const std::map<Key, ChoiMatrix>& m, const Key& k) -> const ChoiMatrix& {
        auto it = m.find(k);
        return it == m.end() ? zero : it->second;
    };
    for (const auto& [k, j] : ma)
        if (!channels_equal(j, get(mb, k), tol)) return false;
    for (const auto& [k, j] : mb)
        if (!channels_equal(get(ma, k), j, tol)) return false;
    return true;
}

struct ChoiCheck {
    bool hermitian = false;
    bool positive = false;
    bool trace_preserving = false;
    double min_eigenvalue = 0;

    bool ok() const noexcept { return hermitian && positive && trace_preserving; }
};

/// Hermiticity, positivity and trace preservation (partial trace over the
/// output equals the identity on the input).
inline ChoiCheck check_choi(const ChoiMatrix& j, std::size_t d_in, double tol = 1e-10) {
    ChoiCheck r;
    r.hermitian = (j - j.adjoint()).cwiseAbs().maxCoeff() <= tol;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(j, Eigen::EigenvaluesOnly);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    r.positive = r.min_eigenvalue >= -tol;
    const auto din = static_cast<Eigen::Index>(d_in);
    const Eigen::Index d_out = j.rows() / din;
    CMatrix partial = CMatrix::Zero(din, din);
    for (Eigen::Index a = 0; a < din; ++a)
        for (Eigen::Index b = 0; b < din; ++b)
            for (Eigen::Index o = 0; o < d_out; ++o) partial(a, b) += j(a * d_out + o, b * d_out + o);
    r.trace_preserving = (partial - CMatrix::Identity(din, din)).cwiseAbs().maxCoeff() <= tol;
    return r;
}

// ---------------------------------------------------------------------------
// Frame inference.

namespace oracle_detail {

inline PauliOperator pauli_from_code(std::size_t n, std::size_t code) {
    PauliOperator p(n);
    for (std::size_t k = 0; k < n; ++k, code /= 4) p.set(k, "IXYZ"[code % 4]);
    return p;
}

/// Solves for an affine GF(2) function f(b) = c0 ^ sum c_i b_i fitting all
/// samples; returns (c0, c) or nullopt.
inline std::optional<std::pair<int, std::vector<int>>> fit_affine(const std::vector<std::vector<int>>& inputs,
                                                                  const std::vector<int>& values, std::size_t width) {
    // Rows: [1, b_1..b_w | value]
    std::vector<std::vector<int>> rows;
    for (std::size_t s = 0; s < inputs.size(); ++s) {
        std::vector<int> r(width + 2, 0);
        r[0] = 1;
        for (std::size_t i = 0; i < width; ++i) r[i + 1] = inputs[s][i];
        r[width + 1] = values[s];
        rows.push_back(std::move(r));
    }
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col <= width && rank < rows.size(); ++col) {
        std::size_t p = rank;
        while (p < rows.size() && !rows[p][col]) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[rank], rows[p]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != rank && rows[i][col])
                for (std::size_t k = 0; k < width + 2; ++k) rows[i][k] ^= rows[rank][k];
        pivot_col.push_back(col);
        ++rank;
    }
    for (std::size_t i = rank; i < rows.size(); ++i)
        if (rows[i][width + 1]) return std::nullopt;
    std::vector<int> coeff(width + 1, 0);
    for (std::size_t i = 0; i < rank; ++i) coeff[pivot_col[i]] = rows[i][width + 1];
    return std::make_pair(coeff[0], std::vector<int>(coeff.begin() + 1, coeff.end()));
}

} // namespace oracle_detail

/// Finds a Pauli frame (affine in the outcome bits) under which every branch
/// of `c` acts as `u` up to a scalar. Returns nullopt when no such frame exists.
inline std::optional<PauliFrame> infer_frame(const IcmCircuit& c, const CMatrix& u, double tol = 1e-9) {
    const Ports ports = channel_ports(c);
    const std::size_t k_out = ports.outputs.size();
    if (static_cast<std::size_t>(u.rows()) != (std::size_t{1} << k_out) ||
        static_cast<std::size_t>(u.cols()) != (std::size_t{1} << ports.inputs.size()))
        throw DimensionError("unitary does not match the circuit's ports");
    oracle_detail::require_cap(2 * k_out, "frame search");
    const std::vector<MeasurementStep> steps = measurement_plan(c);
    const std::size_t paulis = std::size_t{1} << (2 * k_out);

    std::vector<std::vector<int>> inputs;
    std::vector<PauliOperator> fitted;
    for (const Branch& b : enumerate_branches(c)) {
        if (b.weight() < 1e-12) continue;
        std::optional<PauliOperator> found;
        for (std::size_t code = 0; code < paulis && !found; ++code) {
            const PauliOperator f = oracle_detail::pauli_from_code(k_out, code);
            bool all = true;
            for (const CMatrix& k : b.kraus) {
                const CMatrix fk = oracle_detail::pauli_rows(k, f);
                const cplx lambda = (u.adjoint() * fk).trace() / static_cast<double>(u.cols());
                if ((fk - lambda * u).norm() > tol * std::max(1.0, k.norm())) {
                    all = false;
                    break;
                }
            }
            if (all) found = f;
        }
        if (!found) return std::nullopt;
        inputs.push_back(b.outcomes);
        fitted.push_back(*found);
    }

    PauliFrame frame;
    frame.outputs = ports.output_ids;
    std::map<std::pair<std::vector<std::string>, bool>, PauliOperator> grouped;
    for (std::size_t q = 0; q < k_out; ++q) {
        for (int z = 0; z < 2; ++z) {
            std::vector<int> values;
            for (const PauliOperator& f : fitted) values.push_back(z ? f.z(q) : f.x(q));
            auto fit = oracle_detail::fit_affine(inputs, values, steps.size());
            if (!fit) return std::nullopt;
            std::vector<std::string> parity;
            for (std::size_t i = 0; i < steps.size(); ++i)
                if (fit->second[i]) parity.push_back(steps[i].qubit);
            if (parity.empty() && !fit->first) continue;
            auto key = std::make_pair(parity, fit->first != 0);
            auto it = grouped.try_emplace(key, PauliOperator(k_out)).first;
            PauliOperator single = PauliOperator::single(k_out, q, z ? 'Z' : 'X');
            it->second *= single;
        }
    }
    for (auto& [key, op] : grouped) frame.add(key.first, key.second, op);
    return frame;
}

// ---------------------------------------------------------------------------
// Independent truth table by dense conjugation.

namespace oracle_detail {

/// Reads the Pauli M = U P U^dagger off its action on n + 1 basis states.
inline PauliOperator decode_monomial(std::size_t n, const std::function<CVector(std::size_t)>& column) {
    const CVector c0 = column(0);
    Eigen::Index x_index = 0;
    c0.cwiseAbs().maxCoeff(&x_index);
    const auto x = static_cast<std::size_t>(x_index);
    const cplx a0 = c0(x_index);
    PauliOperator p(n);
    for (std::size_t q = 0; q < n; ++q) {
        const std::size_t e = bit_of(n, q);
        const CVector cq = column(e);
        const cplx ratio = cq(static_cast<Eigen::Index>(e ^ x)) / a0;
        p.set_x(q, (x & e) != 0);
        p.set_z(q, ratio.real() < 0);
    }
    // a0 = i^k for X^x Z^z; named form carries (-i) per Y.
    const double ang = std::arg(a0);
    unsigned k = static_cast<unsigned>(std::lround(ang / (M_PI / 2))) & 3u;
    std::size_t ys = 0;
    for (std::size_t q = 0; q < n; ++q) ys += p.x(q) && p.z(q);
    p.set_phase((k + 3 * static_cast<unsigned>(ys % 4)) & 3u);
    return p;
}

} // namespace oracle_detail

inline StabiliserTruthTable oracle_truth_table(const IcmCircuit& c) {
    require_valid(c);
    const Roster roster = roster_of(c);
    const std::size_t n = roster.size();
    oracle_detail::require_cap(n, "truth table");
    std::vector<Cnot> gates;
    for (const Cnot& g : stabiliser_cnots(c)) {
        const auto col = [&](std::size_t idx) {
            return static_cast<std::size_t>(std::find(roster.circuit_index.begin(), roster.circuit_index.end(), idx) -
                                            roster.circuit_index.begin());
        };
        gates.push_back({col(g.control), col(g.target)});
    }
    StabiliserTruthTable t;
    t.n = n;
    for (const Seed& s : truth_table_seeds(c, roster)) {
        const PauliOperator in = PauliOperator::single(n, s.column, s.basis);
        auto column = [&](std::size_t b) {
            CVector v = DenseState::basis(n, b).amplitudes;
            for (auto it = gates.rbegin(); it != gates.rend(); ++it) oracle_detail::apply_cnot(v, n, it->control, it->target);
            oracle_detail::apply_pauli(v, in);
            for (const Cnot& g : gates) oracle_detail::apply_cnot(v, n, g.control, g.target);
            return v;
        };
        t.rows.emplace_back(in, oracle_detail::decode_monomial(n, column), RowSeed{roster.ids[s.column], s.basis});
    }
    return t;
}

// ---------------------------------------------------------------------------
// Sampled verification under the trusted-IO model: initialisation and
// measurement rules are checked as declared; each table row is tested by
// preparing an eigenstate of its input and sampling its output observable.

struct SampleRow {
    std::size_t index = 0;
    std::size_t shots = 0;
    std::size_t agreeing = 0;
    bool preparable = true;
    bool pass = true;
};

struct SampleReport {
    RosterCheck roster;
    InitCheck criterion1;
    RuleCheck criterion3;
    std::vector<SampleRow> rows;
    std::size_t shots = 0;
    std::uint64_t seed = 0;
    bool no_shots_warning = false;

    bool rows_pass() const {
        for (const SampleRow& r : rows)
            if (!r.pass) return false;
        return true;
    }
    bool overall() const { return roster.ok && criterion1.pass && criterion3.pass && rows_pass(); }
};

inline SampleReport sample_verify(const IcmCircuit& c, const Specification& spec, std::size_t shots,
                                  std::uint64_t seed) {
    const VerificationReport structural = verify(c, spec);
    SampleReport rep;
    rep.roster = structural.roster;
    rep.criterion1 = structural.criterion1;
    rep.criterion3 = structural.criterion3;
    rep.shots = shots;
    rep.seed = seed;
    rep.no_shots_warning = shots == 0;
    if (!rep.roster.ok) return rep;

    const std::vector<std::string> ids = spec.roster();
    const std::size_t n = ids.size();
    oracle_detail::require_cap(n, "sampled verification");
    std::vector<std::size_t> to_circuit(n);
    for (std::size_t k = 0; k < n; ++k) to_circuit[k] = c.index_of(ids[k]);
    std::vector<Cnot> gates;
    for (const Cnot& g : stabiliser_cnots(c)) {
        const auto col = [&](std::size_t idx) {
            return static_cast<std::size_t>(std::find(to_circuit.begin(), to_circuit.end(), idx) - to_circuit.begin());
        };
        gates.push_back({col(g.control), col(g.target)});
    }

    std::mt19937_64 rng(seed);
    static const Basis kPlain[2] = {Basis::Z, Basis::X};
    for (std::size_t i = 0; i < spec.table.rows.size(); ++i) {
        const TableRow& row = spec.table.rows[i];
        SampleRow sr;
        sr.index = i;
        sr.shots = shots;
        CVector psi;
        for (int attempt = 0; attempt < 16; ++attempt) {
            // Product state: io qubits in random X/Z eigenstates, ancillae as
            // declared (randomised too after a failed projection).
            CVector phi = CVector::Ones(1);
            for (std::size_t k = 0; k < n; ++k) {
                const QubitDecl& q = c.qubits[to_circuit[k]];
                std::array<cplx, 2> v;
                if (q.kind == QubitKind::Io || attempt > 0)
                    v = oracle_detail::basis_vector(kPlain[rng() & 1u], static_cast<int>(rng() & 1u));
                else
                    v = oracle_detail::init_vector(*q.init);
                CVector next(phi.size() * 2);
                for (Eigen::Index a = 0; a < phi.size(); ++a) {
                    next(2 * a) = phi(a) * v[0];
                    next(2 * a + 1) = phi(a) * v[1];
                }
                phi = std::move(next);
            }
            CVector projected = phi;
            oracle_detail::apply_pauli(projected, row.input());
            projected = (phi + projected) / 2.0;
            if (projected.squaredNorm() > 1e-12) {
                psi = projected / projected.norm();
                break;
            }
        }
        if (psi.size() == 0) {
            sr.preparable = false;
            sr.pass = false;
            rep.rows.push_back(sr);
            continue;
        }
        for (const Cnot& g : gates) oracle_detail::apply_cnot(psi, n, g.control, g.target);
        CVector q_psi = psi;
        oracle_detail::apply_pauli(q_psi, row.output());
        const double expectation = std::clamp(psi.dot(q_psi).real(), -1.0, 1.0);
        std::bernoulli_distribution plus((1 + expectation) / 2);
        for (std::size_t s = 0; s < shots; ++s) sr.agreeing += plus(rng) ? 1 : 0;
        sr.pass = sr.agreeing == shots;
        rep.rows.push_back(sr);
    }
    return rep;
}

inline std::string format_report(const SampleReport& r, ReportFormat fmt = ReportFormat::Text) {
    std::ostringstream os;
    auto pf = [](bool b) { return b ? "pass" : "fail"; };
    if (fmt == ReportFormat::Records) {
        os << "roster: " << (r.roster.ok ? "ok" : "mismatch") << "\n";
        os << "shots: " << r.shots << "\n";
        os << "seed: " << r.seed << "\n";
        if (r.no_shots_warning) os << "warning: no shots taken; rows pass vacuously\n";
        os << "criterion1: " << pf(r.criterion1.pass) << "\n";
        for (const SampleRow& s : r.rows)
            os << "row: " << s.index << " " << pf(s.pass) << " " << s.agreeing << "/" << s.shots
               << (s.preparable ? "" : " unpreparable") << "\n";
        os << "criterion3: " << pf(r.criterion3.pass) << "\n";
        os << "overall: " << pf(r.overall()) << "\n";
        return os.str();
    }
    if (!r.roster.ok) os << "roster mismatch: " << r.roster.detail << "\n";
    if (r.no_shots_warning) os << "warning: shots = 0, rows pass vacuously\n";
    os << "criterion 1 (initialisation): " << pf(r.criterion1.pass) << "\n";
    for (const auto& m : r.criterion1.mismatched) os << "  " << m << "\n";
    os << "sampled rows (" << r.shots << " shots, seed " << r.seed << "):\n";
    for (const SampleRow& s : r.rows)
        os << "  row " << s.index << ": " << pf(s.pass) << " (" << s.agreeing << "/" << s.shots << " agree"
           << (s.preparable ? "" : ", input not preparable") << ")\n";
    os << "criterion 3 (measurement rules): " << pf(r.criterion3.pass) << "\n";
    if (r.criterion3.first_divergence) os << "  rule " << *r.criterion3.first_divergence << ": " << r.criterion3.detail << "\n";
    os << "overall: " << (r.overall() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

/// Dense unitary of a gate list (qubit 0 most significant).
inline CMatrix ideal_unitary(const GateList& g) {
    oracle_detail::require_cap(g.n_logical, "gate list");
    const std::size_t n = g.n_logical;
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    const cplx i(0, 1);
    const cplx t = std::polar(1.0, std::acos(-1.0) / 4);
    const double r = 1 / std::sqrt(2.0);
    CMatrix u(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        CVector v = CVector::Zero(dim);
        v(col) = 1;
        for (const Gate& x : g.gates) {
            Eigen::Matrix2cd m;
            switch (x.kind) {
            case GateKind::Cnot: oracle_detail::apply_cnot(v, n, x.qubit, x.target); continue;
            case GateKind::H: m << r, r, r, -r; break;
            case GateKind::P: m << 1, 0, 0, i; break;
            case GateKind::Pdg: m << 1, 0, 0, -i; break;
            case GateKind::T: m << 1, 0, 0, t; break;
            case GateKind::Tdg: m << 1, 0, 0, std::conj(t); break;
            case GateKind::X: m = oracle_detail::pauli_matrix('X'); break;
            case GateKind::Z: m = oracle_detail::pauli_matrix('Z'); break;
            }
            oracle_detail::apply_single(v, n, x.qubit, m);
        }
        u.col(col) = v;
    }
    return u;
}

} // namespace ftspec
