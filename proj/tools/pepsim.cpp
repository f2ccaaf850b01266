// pepsim: trustwords utility, scenario runner, exploration sweeps and
// property reports for the symbolic pEp model.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "pep/checker.hpp"
#include "pep/harness.hpp"
#include "pep/trace_io.hpp"
#include "pep/trustwords.hpp"

#ifndef PEP_DATA_DIR
#define PEP_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace pep;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitFile = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::optional<std::uint64_t> seed;
    std::string dict;
    std::optional<std::size_t> maxInterventions;
    std::optional<std::size_t> maxTermDepth;
    std::optional<std::size_t> branchCap;
    std::string format = "text";

    std::string fp1, fp2, dictArg;
    std::string config, out, trace;
    std::vector<std::string> properties;
};

ReportFormat reportFormat(const Options& o) { return o.format == "lines" ? ReportFormat::Lines : ReportFormat::Text; }

fs::path defaultDictionary() { return fs::path(PEP_DATA_DIR) / "fixture.dict"; }

std::shared_ptr<const Dictionary> openDictionary(const fs::path& p) {
    try {
        return std::make_shared<const Dictionary>(Dictionary::load(p));
    } catch (const DictionaryError& e) {
        throw FileError(e.what());
    }
}

ScenarioConfig loadConfig(const Options& o) {
    ScenarioConfig cfg = ScenarioConfig::load(o.config);
    if (o.seed) cfg.seed = *o.seed;
    if (!o.dict.empty()) cfg.dictionary = o.dict;
    if (o.branchCap) cfg.branchCap = *o.branchCap;
    if (o.maxInterventions || o.maxTermDepth) {
        Explore e;
        if (const auto* cur = std::get_if<Explore>(&cfg.strategy)) e = *cur;
        if (o.maxInterventions) e.maxInterventions = *o.maxInterventions;
        if (o.maxTermDepth) e.maxTermDepth = *o.maxTermDepth;
        cfg.strategy = e;
    }
    if (cfg.dictionary.empty()) cfg.dictionary = defaultDictionary();
    cfg.validate();
    return cfg;
}

std::ofstream openOut(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw FileError("cannot write " + p.string());
    return out;
}

std::size_t count(const Trace& t, EventKind k) {
    return std::count_if(t.events.begin(), t.events.end(), [&](const TraceEvent& e) { return e.event.kind == k; });
}

std::string summary(const Trace& t) {
    std::string s = "events=" + std::to_string(t.events.size());
    s += " handshakeOk=" + std::to_string(count(t, EventKind::EndHandshakeOk));
    s += " handshakeUnsucc=" + std::to_string(count(t, EventKind::EndHandshakeUnsucc));
    s += " receiveGreen=" + std::to_string(count(t, EventKind::ReceiveGreen));
    s += " attackerKnows=" + std::to_string(count(t, EventKind::AttackerKnows));
    s += " interventions=" + std::to_string(t.interventions.size());
    return s;
}

std::vector<Verdict> select(const Trace& t, const std::vector<std::string>& props) {
    std::vector<Verdict> all = checkAll(t);
    if (props.empty()) return all;
    std::vector<Verdict> out;
    for (const auto& p : props) {
        auto it = std::find_if(all.begin(), all.end(), [&](const Verdict& v) { return v.property == p; });
        if (it == all.end()) throw UsageError("unknown property '" + p + "'");
        out.push_back(*it);
    }
    return out;
}

bool anyFailure(const std::vector<Verdict>& vs) {
    return std::any_of(vs.begin(), vs.end(), [](const Verdict& v) { return !v.pass; });
}

int cmdTrustwords(const Options& o) {
    const fs::path dictPath = !o.dictArg.empty() ? fs::path(o.dictArg) : !o.dict.empty() ? fs::path(o.dict) : defaultDictionary();
    auto dict = openDictionary(dictPath);
    try {
        const Fingerprint a = Fingerprint::parse(o.fp1);
        const Fingerprint b = Fingerprint::parse(o.fp2);
        std::cout << joinWords(mapToWords(combineFingerprints(a, b), *dict)) << "\n";
    } catch (const InvalidHex& e) {
        throw UsageError(e.what());
    }
    return 0;
}

int cmdRun(const Options& o) {
    ScenarioConfig cfg = loadConfig(o);
    if (std::holds_alternative<Explore>(cfg.strategy)) throw UsageError("explore strategy: use the explore command");
    auto dict = loadDictionary(cfg);
    Trace t = runScenario(cfg, dict);
    auto out = openOut(o.out);
    writeTrace(out, t, cfg.dictionary);
    std::cout << "trace " << o.out << " " << summary(t) << "\n";
    return 0;
}

int cmdExplore(const Options& o) {
    ScenarioConfig cfg = loadConfig(o);
    if (!std::holds_alternative<Explore>(cfg.strategy)) cfg.strategy = Explore{};
    auto dict = loadDictionary(cfg);
    const fs::path dir = o.out;
    fs::create_directories(dir);
    auto traces = openOut(dir / "branches.trace");
    std::size_t n = 0, failing = 0;
    auto stats = exploreScenario(cfg, dict, [&](Trace&& t) {
        writeBranch(traces, n, t, cfg.dictionary);
        const bool unsucc = count(t, EventKind::EndHandshakeUnsucc) > 0;
        std::vector<Verdict> vs = checkAll(t, t.secrets.postHandshake());
        bool ok = unsucc ? vs[4].pass && vs[5].pass : !anyFailure(vs);
        if (!ok) ++failing;
        std::cout << "branch " << n << " " << summary(t) << (ok ? " ok" : " VIOLATION") << "\n";
        ++n;
    });
    auto sum = openOut(dir / "summary.txt");
    sum << "strategy " << describeStrategy(cfg.strategy) << "\n"
        << "seed " << cfg.seed << "\n"
        << "intercept_points " << stats.interceptPoints << "\n"
        << "branches " << stats.branches << (stats.capped ? " (capped)" : "") << "\n"
        << "violations " << failing << "\n";
    std::cout << "explored " << stats.branches << " branches" << (stats.capped ? " (capped)" : "") << ", "
              << failing << " with violations\n";
    return failing ? kExitFail : 0;
}

int cmdCheck(const Options& o) {
    std::vector<LoadedTrace> set;
    try {
        set = readTraceSet(fs::path(o.trace));
    } catch (const TraceFormatError& e) {
        throw FileError(e.what());
    }
    std::shared_ptr<const Dictionary> override;
    if (!o.dict.empty()) override = openDictionary(o.dict);
    bool failed = false;
    for (std::size_t i = 0; i < set.size(); ++i) {
        Trace& t = set[i].trace;
        if (override) {
            t.adversaryKnowledge.knowDictionary(override);
        } else if (!set[i].dictionary.empty() && fs::exists(set[i].dictionary)) {
            t.adversaryKnowledge.knowDictionary(openDictionary(set[i].dictionary));
        }
        auto verdicts = select(t, o.properties);
        if (set.size() > 1) std::cout << (o.format == "lines" ? "#branch|" : "branch ") << i << "\n";
        std::cout << renderReport(verdicts, reportFormat(o));
        failed = failed || anyFailure(verdicts);
    }
    return failed ? kExitFail : 0;
}

int cmdDemoMitm(const Options& o) {
    const fs::path dictPath = o.dict.empty() ? defaultDictionary() : fs::path(o.dict);
    auto dict = openDictionary(dictPath);
    const fs::path dir = o.out;
    fs::create_directories(dir);

    ScenarioConfig kd = scenarios::keyDistributionOnly(dictPath);
    kd.strategy = ScriptedMitm{"A", "B"};
    if (o.seed) kd.seed = *o.seed;
    Trace t1 = runScenario(kd, dict);
    {
        auto out = openOut(dir / "key_distribution_mitm.trace");
        writeTrace(out, t1, dictPath);
    }
    Verdict conf = checkConfidentiality(t1, t1.secrets);
    const auto* rec = t1.finalStates.at("B").peer("A");
    std::cout << "== key distribution only, man in the middle between A and B\n";
    std::cout << "B stores for A: " << (rec && rec->pubkey ? rec->pubkey->render() : "-") << "\n";
    std::cout << renderReport({conf}, reportFormat(o));
    std::cout << "result: " << (conf.pass ? "secret kept" : "attack succeeds, secret derivable") << "\n\n";

    ScenarioConfig full = scenarios::fullProtocol(dictPath);
    full.strategy = ScriptedMitm{"A1", "B1"};
    if (o.seed) full.seed = *o.seed;
    Trace t2 = runScenario(full, dict);
    {
        auto out = openOut(dir / "full_protocol_mitm.trace");
        writeTrace(out, t2, dictPath);
    }
    auto verdicts = checkAll(t2, t2.secrets.postHandshake());
    verdicts.push_back(checkRedAbsorption(t2));
    std::cout << "== full protocol with handshake, same attacker between A1 and B1\n";
    std::cout << renderReport(verdicts, reportFormat(o));
    const bool detected = count(t2, EventKind::EndHandshakeUnsucc) > 0;
    std::cout << "result: " << (detected ? "attack detected by the handshake, pair rated RED" : "attack not detected")
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symbolic simulation of pEp key distribution and handshake"};
    app.require_subcommand(1);
    Options o;

    auto addCommon = [&](CLI::App* c) {
        c->add_option("--seed", o.seed, "Seed recorded in the trace");
        c->add_option("--dict", o.dict, "Trustwords dictionary file");
        c->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"text", "lines"}));
    };

    auto* tw = app.add_subcommand("trustwords", "Trustwords for two fingerprints");
    tw->add_option("f1", o.fp1)->required();
    tw->add_option("f2", o.fp2)->required();
    tw->add_option("dictionary", o.dictArg, "Dictionary file");
    addCommon(tw);

    auto* run = app.add_subcommand("run", "Run a scenario and write its trace");
    run->add_option("config", o.config)->required();
    run->add_option("out", o.out)->required();
    addCommon(run);

    auto* ex = app.add_subcommand("explore", "Bounded adversarial sweep of a scenario");
    ex->add_option("config", o.config)->required();
    ex->add_option("outdir", o.out)->required();
    ex->add_option("--max-interventions", o.maxInterventions, "Overrides the scenario bound on interventions per branch");
    ex->add_option("--max-term-depth", o.maxTermDepth, "Overrides the cost bound on forged payloads");
    ex->add_option("--branch-cap", o.branchCap, "Overrides the branch limit");
    addCommon(ex);

    auto* ck = app.add_subcommand("check", "Check properties on a trace file");
    ck->add_option("trace", o.trace)->required();
    ck->add_option("--properties", o.properties, "Subset of properties (default all)")->delimiter(',');
    addCommon(ck);

    auto* demo = app.add_subcommand("demo-mitm", "Attack on key distribution vs. detection by the handshake");
    demo->add_option("outdir", o.out)->required();
    addCommon(demo);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*tw) return cmdTrustwords(o);
        if (*run) return cmdRun(o);
        if (*ex) return cmdExplore(o);
        if (*ck) return cmdCheck(o);
        if (*demo) return cmdDemoMitm(o);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFile;
    } catch (const FileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFile;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFile;
    }
    return kExitUsage;
}
