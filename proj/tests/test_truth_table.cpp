#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "ftspec/truth_table.hpp"

using namespace ftspec;

namespace {

std::string read_fixture(const std::string& name) {
    std::ifstream in(std::string(FTSPEC_FIXTURES) + "/" + name);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> formatted(const StabiliserTruthTable& t) {
    std::vector<std::string> out;
    for (const TableRow& r : t.rows) out.push_back(row_format(r));
    return out;
}

StabiliserTruthTable table_of(std::initializer_list<std::pair<const char*, const char*>> rows) {
    StabiliserTruthTable t;
    for (const auto& [in, out] : rows) {
        t.rows.emplace_back(pauli_parse(in), pauli_parse(out));
        t.n = t.rows.back().size();
    }
    return t;
}

const StabiliserTruthTable kTableOne = table_of({{"XI", "XX"}, {"IX", "IX"}, {"ZI", "ZI"}, {"IZ", "ZZ"}});

// Random valid ICM circuit over a mix of qubit kinds; rules are chosen so every
// teleport ancilla is rotated exactly once.
IcmCircuit random_circuit(std::mt19937_64& rng, std::size_t max_qubits, std::size_t max_cnots) {
    IcmCircuit c;
    const std::size_t n = 1 + rng() % max_qubits;
    for (std::size_t i = 0; i < n; ++i) {
        QubitDecl q;
        q.id = "q" + std::to_string(i + 1);
        switch (rng() % 5) {
        case 0:
        case 1: q.kind = QubitKind::Io; break;
        case 2: q.kind = QubitKind::Computational; q.init = rng() % 2 ? Basis::X : Basis::Z; break;
        case 3: q.kind = QubitKind::Teleport; q.init = static_cast<Basis>(rng() % 4); break;
        default: q.kind = QubitKind::Distillation; q.init = Basis::A; break;
        }
        c.add_qubit(q);
    }
    if (n > 1)
        for (std::size_t g = rng() % (max_cnots + 1); g > 0; --g) {
            const std::size_t a = rng() % n;
            c.cnots.push_back({a, (a + 1 + rng() % (n - 1)) % n});
        }
    for (const QubitDecl& q : c.qubits) {
        if (q.kind == QubitKind::Teleport)
            c.rules.push_back({q.id, is_rotated(*q.init) ? Basis::Z : (rng() % 2 ? Basis::Y : Basis::A), std::nullopt});
        if (q.kind == QubitKind::Computational) c.rules.push_back({q.id, *q.init, std::nullopt});
        if (q.kind == QubitKind::Distillation) c.rules.push_back({q.id, Basis::Z, std::nullopt});
    }
    return c;
}

} // namespace

TEST(DeriveTruthTable, CnotGivesTableOne) {
    const auto t = derive_truth_table(parse_circuit(read_fixture("cnot.icm")));
    EXPECT_EQ(formatted(t), (std::vector<std::string>{"+ XI -> XX", "+ ZI -> ZI", "+ IX -> IX", "+ IZ -> ZZ"}));
    EXPECT_TRUE(table_equal(t, kTableOne));
}

TEST(DeriveTruthTable, TGateRows) {
    const auto t = derive_truth_table(parse_circuit(read_fixture("t_gate.icm")));
    EXPECT_EQ(formatted(t),
              (std::vector<std::string>{"+ XII -> XXX", "+ ZII -> ZII", "+ IZI -> ZZI", "+ IIZ -> IZZ"}));
    ASSERT_TRUE(t.rows[0].seed());
    EXPECT_EQ(t.rows[0].seed()->qubit, "q1");
    EXPECT_EQ(t.rows[3].seed()->qubit, "q3");
}

TEST(DeriveTruthTable, IdentityCircuit) {
    const auto t = derive_truth_table(parse_circuit("icm v1\nqubits 1\nio q1\n"));
    EXPECT_EQ(formatted(t), (std::vector<std::string>{"+ X -> X", "+ Z -> Z"}));
}

TEST(DeriveTruthTable, RotatedInitAncillaGetsTwoRows) {
    const auto c = parse_circuit("icm v1\nqubits 2\nio q1\nancilla a teleport init A\ncnot q1 a\nmeasure a Z\n");
    const auto t = derive_truth_table(c);
    EXPECT_EQ(formatted(t), (std::vector<std::string>{"+ XI -> XX", "+ ZI -> ZI", "+ IX -> IX", "+ IZ -> ZZ"}));
}

TEST(DeriveTruthTable, DistillationExcluded) {
    const auto c = parse_circuit(
        "icm v1\nqubits 3\nio q1\nancilla d distillation init A\nancilla a teleport init Z\n"
        "cnot q1 d\ncnot q1 a\nmeasure d Z\nmeasure a Y\n");
    const auto t = derive_truth_table(c);
    EXPECT_EQ(t.n, 2u);
    EXPECT_EQ(formatted(t), (std::vector<std::string>{"+ XI -> XX", "+ ZI -> ZI", "+ IZ -> ZZ"}));
}

TEST(DeriveTruthTable, InvalidCircuitRejected) {
    const auto c = parse_circuit("icm v1\nqubits 2\nio q1\nancilla a teleport init A\nmeasure a Y\n");
    EXPECT_THROW(derive_truth_table(c), ValidationError);
}

TEST(DeriveTruthTable, RowCountAndShapeInvariants) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 500; ++trial) {
        const IcmCircuit c = random_circuit(rng, 8, 12);
        ASSERT_TRUE(validate_icm(c).empty()) << format_violations(validate_icm(c));
        const auto t = derive_truth_table(c);
        EXPECT_EQ(t.rows.size(), expected_row_count(c));
        EXPECT_LE(t.rows.size(), 2 * t.n);
        for (const TableRow& r : t.rows) {
            EXPECT_EQ(r.input().weight(), 1u);
            EXPECT_TRUE(r.input().is_x_type() || r.input().is_z_type());
            EXPECT_EQ(r.input().phase(), 0u);
            EXPECT_EQ(r.sign(), 1);
        }
    }
}

TEST(Canonicalize, Idempotent) {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 200; ++trial) {
        const auto t = derive_truth_table(random_circuit(rng, 6, 10));
        const auto once = canonicalize_table(t);
        EXPECT_EQ(canonicalize_table(once), once);
    }
}

TEST(Canonicalize, RowPermutationInvariant) {
    StabiliserTruthTable shuffled = kTableOne;
    std::reverse(shuffled.rows.begin(), shuffled.rows.end());
    std::swap(shuffled.rows[0], shuffled.rows[2]);
    EXPECT_EQ(canonicalize_table(shuffled), canonicalize_table(kTableOne));
}

TEST(Canonicalize, ProductReplacementKeepsSpan) {
    StabiliserTruthTable t = kTableOne;
    t.rows[0] = row_multiply(kTableOne.rows[0], kTableOne.rows[1]);
    EXPECT_EQ(canonicalize_table(t), canonicalize_table(kTableOne));
}

TEST(Canonicalize, SpanEqualityAgreesWithBruteForce) {
    // Group spans computed by enumerating all products of the generators.
    auto span = [](const StabiliserTruthTable& t) {
        std::set<std::string> out;
        const std::size_t m = t.rows.size();
        for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
            TableRow acc(PauliOperator(t.n), PauliOperator(t.n));
            for (std::size_t i = 0; i < m; ++i)
                if (mask >> i & 1u) acc = row_multiply(acc, t.rows[i]);
            out.insert(row_format(acc));
        }
        return out;
    };
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const IcmCircuit c = random_circuit(rng, 4, 6);
        StabiliserTruthTable a = derive_truth_table(c);
        StabiliserTruthTable b = a;
        if (rng() % 2 && b.rows.size() >= 2) {
            const std::size_t i = rng() % b.rows.size();
            std::size_t j = rng() % b.rows.size();
            if (i == j) j = (j + 1) % b.rows.size();
            b.rows[i] = row_multiply(b.rows[i], b.rows[j]);
        } else if (c.size() > 1) {
            IcmCircuit m = c;
            const std::size_t q = rng() % m.size();
            m.cnots.push_back({q, (q + 1 + rng() % (m.size() - 1)) % m.size()});
            if (validate_icm(m).empty()) b = derive_truth_table(m);
        }
        EXPECT_EQ(span(a) == span(b), table_equal(a, b));
    }
}

TEST(TableEqual, Examples) {
    EXPECT_TRUE(table_equal(kTableOne, kTableOne));
    StabiliserTruthTable changed = kTableOne;
    changed.rows[0] = TableRow(pauli_parse("XI"), pauli_parse("XI"));
    EXPECT_FALSE(table_equal(kTableOne, changed));
    EXPECT_TRUE(table_equal(derive_truth_table(parse_circuit(read_fixture("t_gate.icm"))),
                            derive_truth_table(parse_circuit(read_fixture("t_variant.icm")))));
}

TEST(TableEqual, SignMatters) {
    StabiliserTruthTable neg = kTableOne;
    neg.rows[0] = TableRow::with_sign(pauli_parse("XI"), pauli_parse("XX"), -1);
    EXPECT_FALSE(table_equal(kTableOne, neg));
}

TEST(TableEqual, DimensionMismatch) {
    EXPECT_THROW(table_equal(kTableOne, table_of({{"X", "X"}})), DimensionError);
}

TEST(DeriveTruthTable, LinearCostAtScale) {
    // 500 qubits, 5000 CNOTs: one conjugation per seed.
    std::mt19937_64 rng(43);
    IcmCircuit c;
    for (std::size_t i = 0; i < 500; ++i) c.add_qubit({"q" + std::to_string(i), QubitKind::Io, std::nullopt});
    for (int g = 0; g < 5000; ++g) {
        const std::size_t a = rng() % 500;
        c.cnots.push_back({a, (a + 1 + rng() % 499) % 500});
    }
    const auto t = derive_truth_table(c);
    EXPECT_EQ(t.rows.size(), 1000u);
}
