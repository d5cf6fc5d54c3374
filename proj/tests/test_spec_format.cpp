#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "ftspec/spec_format.hpp"

using namespace ftspec;

namespace {

std::string read_fixture(const std::string& name) {
    std::ifstream in(std::string(FTSPEC_FIXTURES) + "/" + name);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const char* kTGateSpec =
    "spec v1\n"
    "qubits 3\n"
    "io q1\n"
    "init q2 Z\n"
    "init q3 Z\n"
    "table\n"
    "+ XII -> XXX\n"
    "+ ZII -> ZII\n"
    "+ IZI -> ZZI\n"
    "+ IIZ -> IZZ\n"
    "end\n"
    "measure q2 A ? q3 X : q3 Y\n";

} // namespace

TEST(DeriveSpecification, TGate) {
    const Specification s = derive_specification(parse_circuit(read_fixture("t_gate.icm")));
    EXPECT_EQ(s.n, 3u);
    EXPECT_EQ(s.io_ids, std::vector<std::string>{"q1"});
    EXPECT_EQ(s.init, (std::vector<InitEntry>{{"q2", Basis::Z}, {"q3", Basis::Z}}));
    ASSERT_EQ(s.rules.size(), 1u);
    EXPECT_EQ(rule_tuple(s.rules[0]), "(q2, A, q3, X, Y)");
    EXPECT_EQ(serialize_spec(s), kTGateSpec);
}

TEST(DeriveSpecification, BareCnot) {
    const Specification s = derive_specification(parse_circuit(read_fixture("cnot.icm")));
    EXPECT_TRUE(s.init.empty());
    EXPECT_TRUE(s.rules.empty());
    EXPECT_EQ(s.table.rows.size(), 4u);
}

TEST(DeriveSpecification, UncorrectedRotatedInitT) {
    const auto c = parse_circuit("icm v1\nqubits 2\nio q1\nancilla a teleport init A\ncnot q1 a\nmeasure a Z\n");
    const Specification s = derive_specification(c);
    EXPECT_EQ(s.init, (std::vector<InitEntry>{{"a", Basis::A}}));
    ASSERT_EQ(s.rules.size(), 1u);
    EXPECT_EQ(rule_tuple(s.rules[0]), "(a, Z, -, -, -)");
}

TEST(DeriveSpecification, IoRulesExcluded) {
    const auto c = parse_circuit("icm v1\nqubits 1\nio q1\nmeasure q1 X\n");
    EXPECT_TRUE(derive_specification(c).rules.empty());
}

TEST(DeriveSpecification, StableUnderReserialisation) {
    const auto c = parse_circuit(read_fixture("t_variant.icm"));
    EXPECT_EQ(derive_specification(c), derive_specification(parse_circuit(serialize_circuit(c))));
}

TEST(SpecText, RoundTrip) {
    const Specification s = derive_specification(parse_circuit(read_fixture("t_gate.icm")));
    const Specification back = parse_spec(serialize_spec(s));
    EXPECT_EQ(back, s);
    EXPECT_EQ(serialize_spec(back), serialize_spec(s));
}

TEST(SpecText, SignColumnPreserved) {
    std::string text = kTGateSpec;
    text.replace(text.find("+ ZII"), 1, "-");
    const Specification s = parse_spec(text);
    EXPECT_EQ(s.table.rows[1].sign(), -1);
    EXPECT_EQ(serialize_spec(s), text);
}

TEST(SpecText, InitNamingIoRejected) {
    std::string text = kTGateSpec;
    text.replace(text.find("init q2 Z"), 9, "init q1 Z");
    try {
        parse_spec(text);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("init-ancilla-only"), std::string::npos);
    }
}

TEST(SpecText, RuleNamingIoRejected) {
    std::string text = kTGateSpec;
    text += "measure q1 X\n";
    EXPECT_THROW(parse_spec(text), ValidationError);
}

TEST(SpecText, WrongRowWidthIsDimensionError) {
    std::string text = kTGateSpec;
    text.replace(text.find("+ XII -> XXX"), 12, "+ XIII -> XXXI");
    EXPECT_THROW(parse_spec(text), DimensionError);
}

TEST(SpecText, QubitCountMismatchIsDimensionError) {
    std::string text = kTGateSpec;
    text.replace(text.find("init q3 Z\n"), 10, "");
    EXPECT_THROW(parse_spec(text), DimensionError);
}

TEST(SpecText, LocatedParseErrors) {
    auto line_of = [](const std::string& text) -> std::size_t {
        try {
            parse_spec(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("spec v2\n"), 1u);
    EXPECT_EQ(line_of("spec v1\nqubits 1\nio q1\ntable\n+ X -> Q\nend\n"), 5u);
    EXPECT_EQ(line_of("spec v1\nqubits 1\nio q1\ntable\n+ X -> -X\nend\n"), 5u);
    EXPECT_EQ(line_of("spec v1\nqubits 1\nio q1\ntable\n* X -> X\nend\n"), 5u);
    EXPECT_EQ(line_of("spec v1\nqubits 1\nio q1\ntable\n+ X -> X\n"), 5u);
    EXPECT_EQ(line_of("spec v1\nqubits 1\nio q1\ninit a W\n"), 4u);
    EXPECT_EQ(line_of("spec v1\nqubits 1\nio q1\nfoo\n"), 4u);
    EXPECT_EQ(line_of("spec v1\nqubits 1\nio q1\n"), 3u);
}

TEST(SpecText, FuzzNeverCrashes) {
    std::mt19937_64 rng(47);
    const std::vector<std::string> words = {"spec", "v1", "qubits", "1", "2", "io", "q1", "init", "a", "Z",
                                            "table", "end", "+", "-", "X", "XI", "->", "measure", "?", ":", "\n"};
    for (int trial = 0; trial < 3000; ++trial) {
        std::string text = "spec v1\n";
        for (std::size_t k = rng() % 25; k > 0; --k) text += words[rng() % words.size()] + " ";
        try {
            parse_spec(text);
        } catch (const ParseError& e) {
            EXPECT_GE(e.line(), 1u);
        } catch (const DimensionError&) {
        } catch (const ValidationError&) {
        }
    }
}
