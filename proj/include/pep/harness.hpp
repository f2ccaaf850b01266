#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pep/adversary.hpp"
#include "pep/engine.hpp"
#include "pep/event.hpp"

namespace pep {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Phase { KeyDistribution, Handshake, GreenExchange };

std::string_view phaseName(Phase p);

struct SessionSpec {
    AgentId initiator;
    AgentId responder;
    std::vector<Phase> script;
};

struct ScenarioConfig {
    std::vector<AgentId> agents;
    std::vector<SessionSpec> sessions;
    Strategy strategy = Passive{};
    std::filesystem::path dictionary;
    std::uint64_t seed = 0;
    std::size_t branchCap = 10000;  // Explore only

    /// Throws ConfigError.
    void validate() const;

    /// YAML scenario file; a relative dictionary path is resolved against the
    /// file's directory. Throws ConfigError.
    static ScenarioConfig load(const std::filesystem::path& path);
    static ScenarioConfig parse(const std::string& yaml, const std::filesystem::path& baseDir = {});
};

/// A message designated as must-stay-secret.
struct SecretEntry {
    Term secret;
    std::size_t session;
    AgentId sender;
    AgentId recipient;
    bool afterHandshakeOk;  // sent after endHandshakeOk between the pair
};

struct SecretRegistry {
    std::vector<SecretEntry> entries;

    SecretRegistry postHandshake() const;
    bool empty() const noexcept { return entries.empty(); }
};

struct TraceEvent {
    std::size_t index;
    std::size_t session;  // 0 = instance setup
    Event event;
};

struct Trace {
    std::vector<TraceEvent> events;
    std::map<AgentId, PeerState> finalStates;
    Knowledge adversaryKnowledge;
    SecretRegistry secrets;
    std::vector<std::string> interventions;  // non-Deliver choices, "position:description"
    std::uint64_t seed = 0;
};

/// Executes a Passive or ScriptedMitm scenario. Explore configs are rejected;
/// use exploreScenario.
Trace runScenario(const ScenarioConfig& cfg, std::shared_ptr<const Dictionary> dict);

/// Runs the scenario with the given interventions at wire positions (0-based
/// count of public-channel messages) and delivers everything else. Replays a
/// branch found by exploreScenario.
Trace replayScenario(const ScenarioConfig& cfg, std::shared_ptr<const Dictionary> dict,
                     const std::map<std::size_t, Intervention>& script);

/// Loads the dictionary named by the config.
std::shared_ptr<const Dictionary> loadDictionary(const ScenarioConfig& cfg);

struct ExploreStats {
    std::size_t branches = 0;
    bool capped = false;
    std::size_t interceptPoints = 0;
};

/// Bounded exploration: one Trace per branch, fewest interventions first and
/// within a count lexicographic on (intervention positions, choice order).
/// Stops after cfg.branchCap branches.
ExploreStats exploreScenario(const ScenarioConfig& cfg, std::shared_ptr<const Dictionary> dict,
                             const std::function<void(Trace&&)>& visit);

std::vector<Trace> exploreScenario(const ScenarioConfig& cfg,
                                   std::shared_ptr<const Dictionary> dict);

/// Built-in scenarios.
namespace scenarios {
/// 2 initiators x 2 responders, every pair runs keyDistribution, handshake, greenExchange.
ScenarioConfig fullProtocol(const std::filesystem::path& dictionary);
/// One pair, keyDistribution then a secret message, no handshake.
ScenarioConfig keyDistributionOnly(const std::filesystem::path& dictionary);
}  // namespace scenarios

}  // namespace pep
