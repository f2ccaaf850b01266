#include <gtest/gtest.h>

#include <sstream>

#include "pep/checker.hpp"
#include "pep/trace_io.hpp"
#include "support.hpp"

using namespace pep;

namespace {

Trace mitmTrace() {
    auto cfg = scenarios::fullProtocol(support::fixturePath());
    cfg.strategy = ScriptedMitm{"A1", "B1"};
    cfg.seed = 3;
    return runScenario(cfg, support::fixture());
}

}  // namespace

TEST(TraceIo, EventLineFormat) {
    const Trace t = runScenario(scenarios::fullProtocol(support::fixturePath()), support::fixture());
    const std::string text = traceToString(t);
    EXPECT_EQ(text.rfind("#trace|0|\n", 0), 0u);
    EXPECT_NE(text.find("\n0|0|userKey|A1|pk(sk:A1)\n"), std::string::npos);
    EXPECT_NE(text.find("|1|endHandshakeOk|A1|B1|pk(sk:A1)|pk(sk:B1)|A1|B1\n"), std::string::npos);
}

TEST(TraceIo, RoundTripIsByteExact) {
    const Trace t = mitmTrace();
    const std::string text = traceToString(t, support::fixturePath());
    std::istringstream in(text);
    const LoadedTrace back = readTrace(in);
    EXPECT_EQ(back.dictionary, support::fixturePath());
    EXPECT_EQ(traceToString(back.trace, back.dictionary), text);
    EXPECT_EQ(back.trace.adversaryKnowledge, t.adversaryKnowledge);
}

TEST(TraceIo, VerdictsSurviveRoundTrip) {
    const Trace t = mitmTrace();
    std::istringstream in(traceToString(t));
    const LoadedTrace back = readTrace(in);
    EXPECT_EQ(renderReport(checkAll(back.trace), ReportFormat::Lines), renderReport(checkAll(t), ReportFormat::Lines));
    EXPECT_EQ(checkRedAbsorption(back.trace).pass, checkRedAbsorption(t).pass);
}

TEST(TraceIo, TraceSets) {
    const Trace a = mitmTrace();
    const Trace b = runScenario(scenarios::fullProtocol(support::fixturePath()), support::fixture());
    std::ostringstream os;
    writeBranch(os, 0, a);
    writeBranch(os, 1, b);
    std::istringstream in(os.str());
    const auto set = readTraceSet(in);
    ASSERT_EQ(set.size(), 2u);
    EXPECT_EQ(traceToString(set[0].trace), traceToString(a));
    EXPECT_EQ(traceToString(set[1].trace), traceToString(b));

    std::istringstream single(traceToString(a));
    EXPECT_EQ(readTraceSet(single).size(), 1u);
}

TEST(TraceIo, MalformedInputReportsLine) {
    const char* bad[] = {
        "#trace|x|\n",
        "0|0|userKey|A\n",
        "0|0|flyAway|A|B\n",
        "0|0|userKey|A|pk(sk:A\n",
        "#peer|A|B|GREEN|-\n",
        "#agent|A|sk:A|pk(sk:A)\n#peer|A|B|PURPLE|-\n",
        "#mystery|1\n",
    };
    for (const char* text : bad) {
        std::istringstream in(text);
        EXPECT_THROW(readTrace(in), TraceFormatError) << text;
    }
    std::istringstream in("#trace|0|\n\n0|0|userKey|A|oops(\n");
    try {
        readTrace(in);
        FAIL();
    } catch (const TraceFormatError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}
