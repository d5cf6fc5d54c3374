#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "ftspec/verifier.hpp"

using namespace ftspec;

namespace {

std::string read_fixture(const std::string& name) {
    std::ifstream in(std::string(FTSPEC_FIXTURES) + "/" + name);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

IcmCircuit fixture(const std::string& name) { return parse_circuit(read_fixture(name)); }

IcmCircuit random_circuit(std::mt19937_64& rng, std::size_t max_qubits, std::size_t max_cnots) {
    IcmCircuit c;
    const std::size_t n = 1 + rng() % max_qubits;
    for (std::size_t i = 0; i < n; ++i) {
        QubitDecl q;
        q.id = "q" + std::to_string(i + 1);
        switch (rng() % 4) {
        case 0:
        case 1: q.kind = QubitKind::Io; break;
        case 2: q.kind = QubitKind::Computational; q.init = rng() % 2 ? Basis::X : Basis::Z; break;
        default: q.kind = QubitKind::Teleport; q.init = static_cast<Basis>(rng() % 4); break;
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
            c.rules.push_back({q.id, is_rotated(*q.init) ? Basis::X : Basis::Y, std::nullopt});
        if (q.kind == QubitKind::Computational) c.rules.push_back({q.id, *q.init, std::nullopt});
    }
    return c;
}

} // namespace

TEST(Verify, SelfVerification) {
    const IcmCircuit c = fixture("t_gate.icm");
    const auto rep = verify(c, derive_specification(c));
    EXPECT_TRUE(rep.overall()) << format_report(rep);
}

TEST(Verify, CommutedVariantPasses) {
    const auto rep = verify(fixture("t_variant.icm"), derive_specification(fixture("t_gate.icm")));
    EXPECT_TRUE(rep.overall()) << format_report(rep);
}

TEST(Verify, ExtraCnotFailsCriterionTwoOnRowXII) {
    const auto rep = verify(fixture("t_mutated.icm"), derive_specification(fixture("t_gate.icm")));
    EXPECT_FALSE(rep.overall());
    EXPECT_TRUE(rep.criterion1.pass);
    EXPECT_FALSE(rep.criterion2.pass);
    EXPECT_TRUE(rep.criterion3.pass);
    ASSERT_FALSE(rep.criterion2.failures.empty());
    EXPECT_EQ(pauli_format(rep.criterion2.failures[0].input), "XII");
    EXPECT_EQ(pauli_format(rep.criterion2.failures[0].expected), "XXX");
    EXPECT_EQ(pauli_format(rep.criterion2.failures[0].actual), "XXI");
}

TEST(Verify, MutationSensitivityOnTGate) {
    const IcmCircuit base = fixture("t_gate.icm");
    const Specification spec = derive_specification(base);
    auto fails = [&](const IcmCircuit& m) { return !verify(m, spec).overall(); };

    IcmCircuit removed = base;
    removed.cnots.pop_back();
    EXPECT_TRUE(fails(removed));

    IcmCircuit flipped = base;
    std::swap(flipped.cnots[0].control, flipped.cnots[0].target);
    EXPECT_TRUE(fails(flipped));

    IcmCircuit reinit = base;
    reinit.qubits[1].init = Basis::X;
    EXPECT_TRUE(fails(reinit));
    EXPECT_FALSE(verify(reinit, spec).criterion1.pass);

    IcmCircuit reordered = parse_circuit(
        "icm v1\nqubits 3\nio q1\nancilla q2 teleport init Z\nancilla q3 teleport init Z\n"
        "cnot q1 q2\ncnot q2 q3\nmeasure q3 Y\nmeasure q2 A\n");
    Specification two_rules = spec;
    two_rules.rules = {{"q2", Basis::A, std::nullopt}, {"q3", Basis::Y, std::nullopt}};
    const auto rep = verify(reordered, two_rules);
    EXPECT_FALSE(rep.criterion3.pass);
    EXPECT_EQ(rep.criterion3.first_divergence, 0u);
}

TEST(Verify, SignMismatchFails) {
    const IcmCircuit c = fixture("cnot.icm");
    Specification s = derive_specification(c);
    s.table.rows[0] = TableRow::with_sign(s.table.rows[0].input(), s.table.rows[0].output(), -1);
    EXPECT_FALSE(verify(c, s).criterion2.pass);
}

TEST(Verify, RosterMismatch) {
    const auto rep = verify(fixture("cnot.icm"), derive_specification(fixture("t_gate.icm")));
    EXPECT_FALSE(rep.roster.ok);
    EXPECT_FALSE(rep.overall());
    EXPECT_NE(rep.roster.detail.find("q2"), std::string::npos);
}

TEST(Verify, InvalidCandidateRejected) {
    const auto bad = parse_circuit("icm v1\nqubits 2\nio q1\nancilla a teleport init A\nmeasure a Y\n");
    EXPECT_THROW(verify(bad, derive_specification(fixture("cnot.icm"))), ValidationError);
}

TEST(Verify, SelfVerificationProperty) {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 500; ++trial) {
        const IcmCircuit c = random_circuit(rng, 8, 14);
        ASSERT_TRUE(validate_icm(c).empty()) << format_violations(validate_icm(c));
        const auto rep = verify(c, derive_specification(c));
        EXPECT_TRUE(rep.overall()) << serialize_circuit(c) << format_report(rep);
    }
}

TEST(Verify, ReportRendering) {
    const auto rep = verify(fixture("t_mutated.icm"), derive_specification(fixture("t_gate.icm")));
    const std::string text = format_report(rep);
    EXPECT_NE(text.find("criterion 2 (truth table): fail"), std::string::npos);
    EXPECT_NE(text.find("row 0: expected + XII -> XXX, found + XII -> XXI"), std::string::npos);
    const std::string rec = format_report(rep, ReportFormat::Records);
    EXPECT_NE(rec.find("criterion2.row: 0 XII expected=+XXX actual=+XXI"), std::string::npos);
    EXPECT_NE(rec.find("overall: fail"), std::string::npos);
}

TEST(SpecEquiv, Reparsed) {
    const Specification s = derive_specification(fixture("t_gate.icm"));
    EXPECT_TRUE(spec_equiv(s, parse_spec(serialize_spec(s))).equal());
}

TEST(SpecEquiv, TwoTGateVariants) {
    EXPECT_TRUE(spec_equiv(derive_specification(fixture("t_gate.icm")), derive_specification(fixture("t_variant.icm")))
                    .equal());
}

TEST(SpecEquiv, SwappedRuleBases) {
    const Specification s = derive_specification(fixture("t_gate.icm"));
    Specification t = s;
    std::swap(t.rules[0].then->on_plus, t.rules[0].then->on_minus);
    const auto rep = spec_equiv(s, t);
    EXPECT_FALSE(rep.equal());
    EXPECT_EQ(rep.rules.first_divergence, 0u);
    EXPECT_TRUE(rep.table_equal);
}

TEST(SpecEquiv, ColumnOrderIndependent) {
    const IcmCircuit c = fixture("cnot.icm");
    const IcmCircuit swapped = parse_circuit("icm v1\nqubits 2\nio q2\nio q1\ncnot q1 q2\n");
    EXPECT_TRUE(spec_equiv(derive_specification(c), derive_specification(swapped)).equal());
}

TEST(SpecEquiv, DifferentTables) {
    const auto rep =
        spec_equiv(derive_specification(fixture("t_gate.icm")), derive_specification(fixture("t_mutated.icm")));
    EXPECT_FALSE(rep.table_equal);
    EXPECT_TRUE(rep.init_equal);
    EXPECT_NE(format_report(rep).find("equivalent no"), std::string::npos);
}
