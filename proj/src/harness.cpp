#include "pep/harness.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace pep {

std::string_view phaseName(Phase p) {
    switch (p) {
        case Phase::KeyDistribution: return "keyDistribution";
        case Phase::Handshake: return "handshake";
        case Phase::GreenExchange: return "greenExchange";
    }
    return "?";
}

namespace {

std::optional<Phase> phaseFromName(std::string_view name) {
    for (Phase p : {Phase::KeyDistribution, Phase::Handshake, Phase::GreenExchange})
        if (phaseName(p) == name) return p;
    return std::nullopt;
}

bool validAgentId(const AgentId& a) {
    if (a.empty()) return false;
    return std::all_of(a.begin(), a.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-';
    });
}

}  // namespace

void ScenarioConfig::validate() const {
    std::set<AgentId> declared;
    for (const auto& a : agents) {
        if (!validAgentId(a)) throw ConfigError("invalid agent id '" + a + "'");
        if (a == kAdversary) throw ConfigError("agent id '" + a + "' is reserved for the adversary");
        if (!declared.insert(a).second) throw ConfigError("duplicate agent '" + a + "'");
    }
    for (std::size_t i = 0; i < sessions.size(); ++i) {
        const auto& s = sessions[i];
        const std::string where = "session " + std::to_string(i + 1);
        if (!declared.contains(s.initiator)) throw ConfigError(where + ": undeclared initiator '" + s.initiator + "'");
        if (!declared.contains(s.responder)) throw ConfigError(where + ": undeclared responder '" + s.responder + "'");
        if (s.initiator == s.responder) throw ConfigError(where + ": initiator and responder coincide");
        if (s.script.empty()) throw ConfigError(where + ": empty script");
    }
    if (const auto* m = std::get_if<ScriptedMitm>(&strategy)) {
        if (!declared.contains(m->initiator) || !declared.contains(m->responder))
            throw ConfigError("mitm strategy targets undeclared agents");
    }
    if (std::holds_alternative<Explore>(strategy) && branchCap == 0)
        throw ConfigError("branch cap must be positive");
}

ScenarioConfig ScenarioConfig::parse(const std::string& yaml, const std::filesystem::path& baseDir) {
    ScenarioConfig cfg;
    try {
        YAML::Node root = YAML::Load(yaml);
        if (!root.IsMap()) throw ConfigError("scenario must be a mapping");
        for (const auto& a : root["agents"]) cfg.agents.push_back(a.as<std::string>());
        if (root["dictionary"]) {
            std::filesystem::path p = root["dictionary"].as<std::string>();
            cfg.dictionary = p.is_relative() && !baseDir.empty() ? baseDir / p : p;
        }
        if (root["seed"]) cfg.seed = root["seed"].as<std::uint64_t>();
        if (root["branch_cap"]) cfg.branchCap = root["branch_cap"].as<std::size_t>();
        if (YAML::Node st = root["strategy"]) {
            const std::string kind = st.IsScalar() ? st.as<std::string>() : st["kind"].as<std::string>();
            if (kind == "passive") {
                cfg.strategy = Passive{};
            } else if (kind == "mitm") {
                cfg.strategy = ScriptedMitm{st["initiator"].as<std::string>(), st["responder"].as<std::string>()};
            } else if (kind == "explore") {
                Explore e;
                if (st.IsMap() && st["max_interventions"]) e.maxInterventions = st["max_interventions"].as<std::size_t>();
                if (st.IsMap() && st["max_term_depth"]) e.maxTermDepth = st["max_term_depth"].as<std::size_t>();
                cfg.strategy = e;
            } else {
                throw ConfigError("unknown strategy '" + kind + "'");
            }
        }
        for (const auto& s : root["sessions"]) {
            SessionSpec spec{s["initiator"].as<std::string>(), s["responder"].as<std::string>(), {}};
            for (const auto& ph : s["script"]) {
                const std::string name = ph.as<std::string>();
                auto p = phaseFromName(name);
                if (!p) throw ConfigError("unknown phase '" + name + "'");
                spec.script.push_back(*p);
            }
            cfg.sessions.push_back(std::move(spec));
        }
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("malformed scenario: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.parent_path());
}

SecretRegistry SecretRegistry::postHandshake() const {
    SecretRegistry out;
    for (const auto& e : entries)
        if (e.afterHandshakeOk) out.entries.push_back(e);
    return out;
}

std::shared_ptr<const Dictionary> loadDictionary(const ScenarioConfig& cfg) {
    if (cfg.dictionary.empty()) throw ConfigError("scenario names no dictionary");
    try {
        return std::make_shared<const Dictionary>(Dictionary::load(cfg.dictionary));
    } catch (const DictionaryError& e) {
        throw ConfigError(e.what());
    }
}

namespace {

/// One branch of execution. next() runs the script up to the next email on
/// the public channel; resolve() applies the adversary's choice to it.
class World {
public:
    World(const ScenarioConfig& cfg, std::shared_ptr<const Dictionary> dict, Strategy strategy)
        : cfg_(&cfg),
          dict_(dict),
          adversary_(std::move(strategy), Term::secretKey(kAdversary),
                     initialKnowledge(Term::secretKey(kAdversary), dict)) {
        for (const auto& a : cfg.agents) {
            EventLog log;
            agents_.emplace(a, initInstance(a, keys_, log));
            append(log, 0);
        }
    }

    Adversary& adversary() { return adversary_; }
    std::size_t wireCount() const { return wireCount_; }

    std::optional<WireMessage> next() {
        while (!pending_) {
            if (session_ >= cfg_->sessions.size()) return std::nullopt;
            const SessionSpec& ss = cfg_->sessions[session_];
            if (phase_ >= ss.script.size()) {
                ++session_;
                phase_ = step_ = 0;
                continue;
            }
            const std::size_t sid = session_ + 1;
            const std::string tag = ".s" + std::to_string(sid);
            PeerState& ini = agents_.at(ss.initiator);
            PeerState& res = agents_.at(ss.responder);
            EventLog log;
            switch (ss.script[phase_]) {
                case Phase::KeyDistribution:
                    if (step_ == 0) {
                        pending_ = composeMessage(ini, res.self, Term::freshName("m" + tag, ini.self), log);
                    } else if (step_ == 1) {
                        pending_ = composeMessage(res, ini.self, Term::freshName("resp" + tag, res.self), log);
                    } else {
                        nextPhase();
                    }
                    break;
                case Phase::Handshake:
                    handshake(ini, res, log);
                    nextPhase();
                    break;
                case Phase::GreenExchange:
                    if (step_ == 0) {
                        Term secret = Term::freshName("mssg" + tag, ini.self);
                        secrets_.entries.push_back({secret, sid, ini.self, res.self, handshakeOk(ini.self, res.self)});
                        pending_ = composeMessage(ini, res.self, secret, log);
                    } else {
                        nextPhase();
                    }
                    break;
            }
            append(log, sid);
            if (pending_) adversary_.knowledge().learn(pending_->payload);
        }
        return pending_;
    }

    void resolve(const Intervention& iv) {
        const WireMessage w = *pending_;
        pending_.reset();
        const std::size_t position = wireCount_++;
        ++step_;
        if (iv.kind != Intervention::Kind::Deliver)
            interventions_.push_back(std::to_string(position) + ":" + iv.describe());
        switch (iv.kind) {
            case Intervention::Kind::Deliver: deliver(w); break;
            case Intervention::Kind::Drop: break;
            case Intervention::Kind::Replace: deliver({w.from, w.to, *iv.payload}); break;
            case Intervention::Kind::Inject:
                deliver(w);
                deliver({iv.from, iv.to, *iv.payload});
                break;
        }
    }

    Trace finish() && {
        const Knowledge& k = adversary_.knowledge();
        for (const auto& s : secrets_.entries) {
            if (k.derivable(s.secret)) events_.push_back({events_.size(), s.session, Event::attackerKnows(s.secret)});
        }
        Trace t;
        t.events = std::move(events_);
        t.finalStates = std::move(agents_);
        t.adversaryKnowledge = k;
        t.secrets = std::move(secrets_);
        t.interventions = std::move(interventions_);
        t.seed = cfg_->seed;
        return t;
    }

private:
    void nextPhase() {
        ++phase_;
        step_ = 0;
    }

    void append(const EventLog& log, std::size_t session) {
        for (const auto& e : log) events_.push_back({events_.size(), session, e});
    }

    void deliver(const WireMessage& w) {
        auto it = agents_.find(w.to);
        if (it == agents_.end()) return;
        EventLog log;
        receiveMessage(it->second, w, log);
        append(log, session_ + 1);
    }

    // Out-of-band: the adversary neither sees nor touches this step.
    void handshake(PeerState& ini, PeerState& res, EventLog& log) {
        bool ready = true;
        for (auto [self, peer] : {std::pair{&ini, &res}, std::pair{&res, &ini}}) {
            try {
                startHandshake(*self, peer->self, *dict_, log);
            } catch (const NoPeerKey&) {
                ready = false;
            }
        }
        if (ready) completeHandshake(ini, res, *dict_, log);
    }

    bool handshakeOk(const AgentId& a, const AgentId& b) const {
        return std::any_of(events_.begin(), events_.end(), [&](const TraceEvent& te) {
            if (te.event.kind != EventKind::EndHandshakeOk) return false;
            const auto& s = te.event.agent(0);
            const auto& r = te.event.agent(1);
            return (s == a && r == b) || (s == b && r == a);
        });
    }

    const ScenarioConfig* cfg_;
    std::shared_ptr<const Dictionary> dict_;
    KeyGenerator keys_;
    std::map<AgentId, PeerState> agents_;
    Adversary adversary_;
    std::vector<TraceEvent> events_;
    SecretRegistry secrets_;
    std::vector<std::string> interventions_;
    std::size_t session_ = 0, phase_ = 0, step_ = 0, wireCount_ = 0;
    std::optional<WireMessage> pending_;
};

std::size_t interceptPoints(const ScenarioConfig& cfg) {
    std::size_t n = 0;
    for (const auto& s : cfg.sessions) {
        for (Phase p : s.script) {
            if (p == Phase::KeyDistribution) n += 2;
            if (p == Phase::GreenExchange) n += 1;
        }
    }
    return n;
}

}  // namespace

Trace runScenario(const ScenarioConfig& cfg, std::shared_ptr<const Dictionary> dict) {
    cfg.validate();
    if (std::holds_alternative<Explore>(cfg.strategy))
        throw ConfigError("explore strategy needs exploreScenario");
    World world(cfg, std::move(dict), cfg.strategy);
    while (auto w = world.next()) world.resolve(world.adversary().intervene(*w, world.wireCount()));
    return std::move(world).finish();
}

Trace replayScenario(const ScenarioConfig& cfg, std::shared_ptr<const Dictionary> dict,
                     const std::map<std::size_t, Intervention>& script) {
    cfg.validate();
    World world(cfg, std::move(dict), Passive{});
    while (auto w = world.next()) {
        auto it = script.find(world.wireCount());
        world.resolve(it == script.end() ? Intervention::deliver() : it->second);
    }
    return std::move(world).finish();
}

ExploreStats exploreScenario(const ScenarioConfig& cfg, std::shared_ptr<const Dictionary> dict,
                             const std::function<void(Trace&&)>& visit) {
    cfg.validate();
    Explore bounds;
    if (const auto* e = std::get_if<Explore>(&cfg.strategy)) bounds = *e;

    ExploreStats stats;
    stats.interceptPoints = interceptPoints(cfg);
    const std::size_t cap = cfg.branchCap;

    std::function<void(World, std::size_t)> dfs = [&](World w, std::size_t remaining) {
        if (stats.branches >= cap) return;
        auto msg = w.next();
        if (!msg) {
            if (remaining == 0) {
                visit(std::move(w).finish());
                ++stats.branches;
            }
            return;
        }
        if (remaining > stats.interceptPoints - w.wireCount()) return;
        if (remaining > 0) {
            for (const auto& choice : exploreChoices(w.adversary().knowledge(), *msg, bounds.maxTermDepth)) {
                if (stats.branches >= cap) return;
                World child = w;
                child.resolve(choice);
                dfs(std::move(child), remaining - 1);
            }
        }
        w.resolve(Intervention::deliver());
        dfs(std::move(w), remaining);
    };

    for (std::size_t k = 0; k <= bounds.maxInterventions && stats.branches < cap; ++k)
        dfs(World(cfg, dict, Passive{}), k);
    stats.capped = stats.branches >= cap;
    return stats;
}

std::vector<Trace> exploreScenario(const ScenarioConfig& cfg, std::shared_ptr<const Dictionary> dict) {
    std::vector<Trace> out;
    exploreScenario(cfg, std::move(dict), [&](Trace&& t) { out.push_back(std::move(t)); });
    return out;
}

namespace scenarios {

ScenarioConfig fullProtocol(const std::filesystem::path& dictionary) {
    ScenarioConfig cfg;
    cfg.agents = {"A1", "A2", "B1", "B2"};
    const std::vector<Phase> script{Phase::KeyDistribution, Phase::Handshake, Phase::GreenExchange};
    for (const char* a : {"A1", "A2"})
        for (const char* b : {"B1", "B2"}) cfg.sessions.push_back({a, b, script});
    cfg.dictionary = dictionary;
    return cfg;
}

ScenarioConfig keyDistributionOnly(const std::filesystem::path& dictionary) {
    ScenarioConfig cfg;
    cfg.agents = {"A", "B"};
    cfg.sessions.push_back({"A", "B", {Phase::KeyDistribution, Phase::GreenExchange}});
    cfg.dictionary = dictionary;
    return cfg;
}

}  // namespace scenarios

}  // namespace pep
