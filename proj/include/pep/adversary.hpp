#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "pep/engine.hpp"
#include "pep/term.hpp"
#include "pep/trustwords.hpp"

namespace pep {

/// How a term was obtained. Rules: known, fst, snd, getMssg, adec, pair,
/// aenc, sign, pubKey, trustwords.
struct Derivation {
    Term term;
    std::string rule;
    std::vector<std::shared_ptr<const Derivation>> premises;
};
using DerivationPtr = std::shared_ptr<const Derivation>;

std::string renderDerivation(const Derivation& d);

/// The attacker's observations. Derivability is answered by saturating the
/// analysis rules (fst, snd, getMssg, adec) and then checking the goal by
/// composition (pair, aenc, sign, pubKey, trustwords) on demand.
class Knowledge {
public:
    Knowledge() = default;

    void learn(const Term& t);
    /// The public trustwords database; enables the trustwords constructor.
    void knowDictionary(std::shared_ptr<const Dictionary> d);
    const Dictionary* dictionary() const noexcept { return dict_.get(); }

    const std::set<Term>& base() const noexcept { return base_; }

    bool derivable(const Term& goal) const { return derive(goal) != nullptr; }
    /// A derivation tree for goal, or nullptr.
    DerivationPtr derive(const Term& goal) const;

    /// Analysis closure of the base with one derivation per term.
    const std::map<Term, DerivationPtr>& closure() const;

    /// All terms built from the closure with at most `depth` additional
    /// constructor applications, ordered by cost then term order.
    std::vector<Term> synthesize(std::size_t depth) const;

    friend bool operator==(const Knowledge& a, const Knowledge& b) { return a.base_ == b.base_; }

private:
    std::set<Term> base_;
    std::shared_ptr<const Dictionary> dict_;
    mutable std::optional<std::map<Term, DerivationPtr>> closure_;
};

Knowledge learn(Knowledge k, const Term& t);

/// Replays a derivation with the term-algebra operations; true iff every
/// step is a valid rule application and all leaves are in `k.base()`.
bool checkDerivation(const Derivation& d, const Knowledge& k);

struct Passive {};
struct ScriptedMitm {
    AgentId initiator;
    AgentId responder;
};
struct Explore {
    std::size_t maxInterventions = 3;
    std::size_t maxTermDepth = 3;
};
using Strategy = std::variant<Passive, ScriptedMitm, Explore>;

std::string describeStrategy(const Strategy& s);

struct Intervention {
    enum class Kind { Deliver, Drop, Replace, Inject };
    Kind kind = Kind::Deliver;
    std::optional<Term> payload;  // Replace / Inject
    AgentId from;                 // Inject
    AgentId to;                   // Inject

    static Intervention deliver() { return {}; }
    static Intervention drop() { return {Kind::Drop, std::nullopt, {}, {}}; }
    static Intervention replace(Term p) { return {Kind::Replace, std::move(p), {}, {}}; }
    static Intervention inject(AgentId from, AgentId to, Term p) {
        return {Kind::Inject, std::move(p), std::move(from), std::move(to)};
    }

    std::string describe() const;
};

inline const AgentId kAdversary = "E";

/// Eve's own keypair, the absent-key constant and the dictionary.
Knowledge initialKnowledge(const Term& adversarySecret, std::shared_ptr<const Dictionary> d);

/// Replace candidates for an intercepted message: synthesized payloads with
/// the shape of a wire message (clear pair, replayed observation, or an
/// encryption of a known or Eve-built signature), at most `depth` new
/// constructors, deterministic order.
std::vector<Term> candidatePayloads(const Knowledge& k, const WireMessage& w, std::size_t depth);

/// Every non-Deliver choice Explore considers at one intercept point.
std::vector<Intervention> exploreChoices(const Knowledge& k, const WireMessage& w,
                                         std::size_t depth);

/// Dolev-Yao network attacker running one strategy over one branch.
class Adversary {
public:
    Adversary(Strategy s, Term secretKey, Knowledge k);

    const Strategy& strategy() const noexcept { return strategy_; }
    const Knowledge& knowledge() const noexcept { return knowledge_; }
    Knowledge& knowledge() noexcept { return knowledge_; }

    /// Observes w and picks the intervention. Explore is driven by the
    /// harness through exploreChoices(), so here it always delivers.
    Intervention intervene(const WireMessage& w, std::size_t step);

private:
    Intervention mitm(const ScriptedMitm& s, const WireMessage& w);

    Strategy strategy_;
    Term secretKey_;
    Term publicKey_;
    Knowledge knowledge_;
    std::map<AgentId, Term> observedKeys_;
};

}  // namespace pep
