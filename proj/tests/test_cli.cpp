#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#ifndef PEPSIM_PATH
#define PEPSIM_PATH "pepsim"
#endif

namespace fs = std::filesystem;

namespace {

struct Result {
    int status;
    std::string out;
};

fs::path scratch() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("pepsim_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

Result run(const std::string& args) {
    const fs::path out = scratch() / "stdout.txt";
    const std::string cmd = std::string(PEPSIM_PATH) + " " + args + " > " + out.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, ss.str()};
}

std::string scenario(const char* name) { return (fs::path(PEP_SCENARIO_DIR) / name).string(); }
std::string dict() { return (fs::path(PEP_DATA_DIR) / "fixture.dict").string(); }

}  // namespace

TEST(Cli, TrustwordsExample) {
    const auto r = run("trustwords F482E9522F48618B01BC31DC5428D7FA 00000000000000000000000000000000 " + dict());
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "kite house brother town juice school dice broken\n");
}

TEST(Cli, TrustwordsAcceptsSeparatorsAndCase) {
    const auto r = run("trustwords 'f482 e952' '00:00:00:00' --dict " + dict());
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "kite house\n");
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run("").status, 2);
    EXPECT_EQ(run("frobnicate").status, 2);
    EXPECT_EQ(run("trustwords F4").status, 2);
    EXPECT_EQ(run("trustwords XYZW 0000 " + dict()).status, 2);
    EXPECT_EQ(run("check t.trace --format yaml").status, 2);
}

TEST(Cli, FileErrors) {
    EXPECT_EQ(run("trustwords 00 00 /nonexistent.dict").status, 3);
    EXPECT_EQ(run("run /nonexistent.yaml " + (scratch() / "x.trace").string()).status, 3);
    EXPECT_EQ(run("check /nonexistent.trace").status, 3);
}

TEST(Cli, HonestRunChecksClean) {
    const std::string trace = (scratch() / "honest.trace").string();
    auto r = run("run " + scenario("full_protocol.yaml") + " " + trace);
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("handshakeOk=4"), std::string::npos);
    r = run("check " + trace);
    EXPECT_EQ(r.status, 0) << r.out;
    std::size_t passes = 0;
    for (std::size_t p = r.out.find("PASS"); p != std::string::npos; p = r.out.find("PASS", p + 1)) ++passes;
    EXPECT_EQ(passes, 6u);
}

TEST(Cli, MitmTraceFailsConfidentiality) {
    const std::string trace = (scratch() / "mitm.trace").string();
    ASSERT_EQ(run("run " + scenario("key_distribution_mitm.yaml") + " " + trace).status, 0);
    auto r = run("check " + trace + " --properties confidentiality");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.out.find("FAIL  confidentiality"), std::string::npos);
    EXPECT_NE(r.out.find("[adec]"), std::string::npos);

    r = run("check " + trace + " --properties confidentiality --format lines");
    EXPECT_EQ(r.status, 1);
    EXPECT_EQ(r.out.rfind("confidentiality|fail|1\n", 0), 0u);
    EXPECT_NE(r.out.find("confidentiality|derivation|2|adec|"), std::string::npos);

    EXPECT_EQ(run("check " + trace + " --properties nonsense").status, 2);
}

TEST(Cli, ExploreWritesTraceSet) {
    const fs::path dir = scratch() / "sweep";
    auto r = run("explore " + scenario("full_protocol.yaml") + " " + dir.string() +
                 " --max-interventions 1 --max-term-depth 1 --branch-cap 20");
    EXPECT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("explored 20 branches (capped)"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir / "branches.trace"));
    EXPECT_TRUE(fs::exists(dir / "summary.txt"));
    r = run("check " + (dir / "branches.trace").string() + " --properties mitm-detection --format lines");
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("#branch|19\n"), std::string::npos);
}

TEST(Cli, DemoContrast) {
    const auto r = run("demo-mitm " + (scratch() / "demo").string());
    EXPECT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("B stores for A: pk(sk:E)"), std::string::npos);
    EXPECT_NE(r.out.find("attack succeeds"), std::string::npos);
    EXPECT_NE(r.out.find("attack detected"), std::string::npos);
}
