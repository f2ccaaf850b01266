#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pep/adversary.hpp"
#include "pep/event.hpp"
#include "pep/harness.hpp"

namespace pep {

class QueryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Matches an event argument: a variable, a constant, or a constructor
/// applied to sub-patterns (e.g. aenc(m, pkB)).
struct Pattern {
    enum class Kind { Variable, Constant, Ctor };
    Kind kind = Kind::Variable;
    std::string var;
    std::optional<Value> constant;
    TermKind ctor = TermKind::Pair;
    std::vector<Pattern> args;

    static Pattern v(std::string name) { return {Kind::Variable, std::move(name), std::nullopt, {}, {}}; }
    static Pattern c(Value value) { return {Kind::Constant, {}, std::move(value), {}, {}}; }
    static Pattern aenc(Pattern m, Pattern k) { return {Kind::Ctor, {}, std::nullopt, TermKind::AEnc, {std::move(m), std::move(k)}}; }
    static Pattern sign(Pattern m, Pattern k) { return {Kind::Ctor, {}, std::nullopt, TermKind::Sign, {std::move(m), std::move(k)}}; }
    static Pattern pk(Pattern sk) { return {Kind::Ctor, {}, std::nullopt, TermKind::PubKey, {std::move(sk)}}; }
    static Pattern pair(Pattern a, Pattern b) { return {Kind::Ctor, {}, std::nullopt, TermKind::Pair, {std::move(a), std::move(b)}}; }

    std::string describe() const;
};

struct EventPattern {
    EventKind kind;
    std::vector<Pattern> args;

    std::string describe() const;
};

/// One conjunct of a correspondence conclusion.
struct Requirement {
    enum class Kind {
        Occurs,     // event matched strictly before the trigger
        Equals,     // var = pattern
        NotEquals,  // var != var2
        Never,      // event matched nowhere in the whole trace
    };
    Kind kind = Kind::Occurs;
    EventPattern event{EventKind::StartHandshake, {}};
    bool injective = false;
    std::string var;
    Pattern pattern;
    std::string var2;

    static Requirement occurs(EventPattern e, bool injective = false);
    static Requirement equals(std::string var, Pattern p);
    static Requirement notEquals(std::string a, std::string b);
    static Requirement never(EventPattern e);

    std::string describe() const;
};

/// trigger ==> (conj_1) or ... or (conj_n)
struct Query {
    std::string name;
    EventPattern trigger;
    std::vector<std::vector<Requirement>> alternatives;

    /// Throws QueryError if some variable is used before it is bound.
    void validate() const;
};

struct Witness {
    std::size_t triggerIndex = 0;
    std::string trigger;
    std::string reason;
};

struct Verdict {
    std::string property;
    bool pass = true;
    std::size_t triggers = 0;  // trigger matches, or secrets checked
    std::vector<Witness> witnesses;
    std::vector<DerivationPtr> derivations;  // confidentiality failures

    bool vacuous() const noexcept { return pass && triggers == 0; }
};

Verdict checkCorrespondence(const std::vector<TraceEvent>& events, const Query& q);
inline Verdict checkCorrespondence(const Trace& t, const Query& q) { return checkCorrespondence(t.events, q); }

namespace queries {
Query fullAgreement();
Query trustByHandshake();
Query privacyFromTrusted();        // receiveGreen part
Query privacyNoDecryptFailure();   // decryptionFails part
Query integrityFromTrusted();      // receiveGreen part
Query integrityNoSignFailure();    // signVerifFails part
Query mitmDetection();
}  // namespace queries

Verdict checkFullAgreement(const Trace& t);
Verdict checkTrustByHandshake(const Trace& t);
Verdict checkPrivacyFromTrusted(const Trace& t);
Verdict checkIntegrityFromTrusted(const Trace& t);
Verdict checkMITMDetection(const Trace& t);
Verdict checkConfidentiality(const Trace& t, const SecretRegistry& reg);

/// The six properties in order; confidentiality over `reg`.
std::vector<Verdict> checkAll(const Trace& t, const SecretRegistry& reg);
std::vector<Verdict> checkAll(const Trace& t);

/// After endHandshakeUnsucc for a pair no later event shows the pair trusted
/// and both final ratings are RED.
Verdict checkRedAbsorption(const Trace& t);

/// Keys accepted by name: full-agreement, trust-by-handshake,
/// privacy-from-trusted, integrity-from-trusted, mitm-detection, confidentiality.
const std::vector<std::string>& propertyNames();

enum class ReportFormat { Text, Lines };
std::string renderReport(const std::vector<Verdict>& verdicts, ReportFormat f);

}  // namespace pep
