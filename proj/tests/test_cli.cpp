#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

#include "ftspec/cli.hpp"
#include "support.hpp"

using namespace ftspec;

namespace {

struct CliRun {
    int code = -1;
    std::string output;
};

// Runs the installed binary with stdout and stderr merged.
CliRun run(const std::string& args) {
    const std::string cmd = std::string(FTSPEC_CLI) + " " + args + " 2>&1";
    CliRun r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.output.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string fx(const std::string& name) { return std::string(FTSPEC_FIXTURES) + "/" + name; }

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("ftspec_cli_" + name)).string();
}

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

} // namespace

TEST(Cli, ParseEchoesCanonicalForm) {
    const CliRun r = run("parse " + fx("t_gate.icm"));
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(parse_circuit(r.output), test_support::fixture("t_gate.icm"));
}

TEST(Cli, ParseReportsLineOfUndeclaredQubit) {
    const CliRun r = run("parse " + fx("broken.icm"));
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(contains(r.output, "line 5")) << r.output;
    EXPECT_TRUE(contains(r.output, "q9"));
}

TEST(Cli, ParseRecords) {
    const CliRun r = run("--format records parse " + fx("cnot.icm"));
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.output, "status: valid\nqubits: 2\ncnots: 1\nrules: 0\n");
}

TEST(Cli, DeriveSpecMatchesFixture) {
    const CliRun r = run("derive-spec " + fx("t_gate.icm"));
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.output, test_support::read_fixture("t.spec"));

    const std::string out = temp_path("derived.spec");
    EXPECT_EQ(run("derive-spec " + fx("t_gate.icm") + " -o " + out).code, 0);
    EXPECT_EQ(run("spec-diff " + out + " " + fx("t.spec")).code, 0);
}

TEST(Cli, VerifyCommutedVariantPasses) {
    const CliRun r = run("verify " + fx("t_variant.icm") + " " + fx("t.spec"));
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(contains(r.output, "overall: PASS"));
}

TEST(Cli, VerifyMutantNamesCriterionAndRow) {
    const CliRun r = run("verify " + fx("t_mutated.icm") + " " + fx("t.spec"));
    EXPECT_EQ(r.code, 1);
    EXPECT_TRUE(contains(r.output, "criterion 2 (truth table): fail")) << r.output;
    EXPECT_TRUE(contains(r.output, "XII"));

    const CliRun rec = run("--format records verify " + fx("t_mutated.icm") + " " + fx("t.spec"));
    EXPECT_EQ(rec.code, 1);
    EXPECT_TRUE(contains(rec.output, "criterion2: fail\n"));
    EXPECT_TRUE(contains(rec.output, "criterion2.row: 0 XII expected=+XXX actual=+XXI\n")) << rec.output;
}

TEST(Cli, SpecDiff) {
    const std::string mutated = temp_path("mutated.spec");
    ASSERT_EQ(run("derive-spec " + fx("t_mutated.icm") + " -o " + mutated).code, 0);
    const CliRun r = run("--format records spec-diff " + fx("t.spec") + " " + mutated);
    EXPECT_EQ(r.code, 1);
    EXPECT_TRUE(contains(r.output, "equivalent: no")) << r.output;
}

TEST(Cli, EquivComparesChannels) {
    EXPECT_EQ(run("equiv " + fx("t_gate.icm") + " " + fx("t_variant.icm")).code, 0);
    const CliRun r = run("equiv --per-outcome " + fx("t_gate.icm") + " " + fx("t_mutated.icm"));
    EXPECT_EQ(r.code, 1);
    EXPECT_TRUE(contains(r.output, "per-outcome maps differ")) << r.output;
    // Different numbers of io qubits.
    EXPECT_EQ(run("equiv " + fx("t_gate.icm") + " " + fx("cnot.icm")).code, 1);
}

TEST(Cli, EquivSizeCap) {
    const CliRun r = run("equiv " + fx("wide.icm") + " " + fx("wide.icm"));
    EXPECT_EQ(r.code, 3);
    EXPECT_TRUE(contains(r.output, "error:"));
}

TEST(Cli, TransformDualAndDemote) {
    const std::string h = temp_path("h.icm");
    ASSERT_EQ(run("compile " + fx("h.gates") + " --flavour rotated_meas -o " + h).code, 0);
    const CliRun dual = run("transform " + h + " --dual");
    EXPECT_EQ(dual.code, 0);
    EXPECT_EQ(dual_rewrite(parse_circuit(dual.output)), parse_circuit(run("parse " + h).output));

    const CliRun demoted = run("transform " + h + " --demote a1");
    EXPECT_EQ(demoted.code, 0);
    const IcmCircuit d = parse_circuit(demoted.output);
    EXPECT_EQ(d.size(), 5u);
    EXPECT_EQ(d.cnots.size(), 4u);

    EXPECT_EQ(run("transform " + h + " --demote q1").code, 2);
    EXPECT_EQ(run("transform " + h).code, 2);
    EXPECT_EQ(run("transform " + h + " --dual --demote a1").code, 2);
}

TEST(Cli, CompileBothFlavours) {
    const CliRun meas = run("compile " + fx("t_cnot.gates") + " --flavour rotated_meas");
    EXPECT_EQ(meas.code, 0);
    const IcmCircuit cm = parse_circuit(meas.output);
    EXPECT_EQ(cm.ids_of_kind(QubitKind::Teleport).size(), 3u);
    EXPECT_TRUE(contains(meas.output, "# frame: "));

    const CliRun init = run("compile " + fx("t_cnot.gates") + " --flavour rotated_init");
    EXPECT_EQ(init.code, 0);
    EXPECT_TRUE(contains(init.output, "measure a1 Z ? a2 X : a2 Z")) << init.output;

    const CliRun unc = run("compile " + fx("t_cnot.gates") + " --flavour rotated_init --uncorrected");
    EXPECT_EQ(unc.code, 0);
    EXPECT_FALSE(contains(unc.output, "# frame"));
}

TEST(Cli, CompileErrors) {
    const CliRun bad = run("compile " + fx("bad.gates"));
    EXPECT_EQ(bad.code, 2);
    EXPECT_TRUE(contains(bad.output, "line 4")) << bad.output;
    EXPECT_EQ(run("compile " + fx("h.gates") + " --flavour sideways").code, 2);
}

TEST(Cli, SampleVerify) {
    const CliRun ok = run("sample-verify " + fx("t_variant.icm") + " " + fx("t.spec") + " --shots 100 --seed 9");
    EXPECT_EQ(ok.code, 0);
    EXPECT_TRUE(contains(ok.output, "overall: PASS"));

    const CliRun bad = run("--format records sample-verify " + fx("t_mutated.icm") + " " + fx("t.spec") + " --seed 9");
    EXPECT_EQ(bad.code, 1);
    EXPECT_TRUE(contains(bad.output, "shots: 100\n"));
    EXPECT_TRUE(contains(bad.output, "overall: fail\n"));

    // Same seed, same report.
    EXPECT_EQ(run("--format records sample-verify " + fx("t_mutated.icm") + " " + fx("t.spec") + " --seed 9").output,
              bad.output);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("verify " + fx("t_gate.icm")).code, 2);
    EXPECT_EQ(run("parse /nonexistent/file.icm").code, 2);
    EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, DispatchInProcess) {
    std::ostringstream out, err;
    EXPECT_EQ(cli::dispatch({"verify", fx("t_gate.icm"), fx("t.spec")}, out, err), 0);
    EXPECT_TRUE(contains(out.str(), "overall: PASS"));
    EXPECT_TRUE(err.str().empty());
}
