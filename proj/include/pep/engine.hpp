#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "pep/event.hpp"
#include "pep/term.hpp"
#include "pep/trustwords.hpp"

namespace pep {

/// Per-peer privacy rating as shown by the colored icons.
enum class Rating { Red, Grey, Yellow, Green };

std::string_view ratingName(Rating r);
std::optional<Rating> ratingFromName(std::string_view name);

struct IdentityRecord {
    std::string localId;
    AgentId email;
    std::optional<Term> pubkey;
    Rating rating = Rating::Grey;

    /// Stores a received key. GREEN and RED freeze the record.
    void storeKey(const Term& key);
};

/// One device's instance: own keypair and the local database of peers.
struct PeerState {
    AgentId self;
    Term secretKey;
    Term publicKey;
    std::map<AgentId, IdentityRecord> peers;
    std::set<AgentId> sentKeyTo;  // peers that already received our key
    std::uint64_t runCounter = 0;

    const IdentityRecord* peer(const AgentId& email) const;
    Rating ratingOf(const AgentId& email) const;
};

/// An email on the public channel.
struct WireMessage {
    AgentId from;
    AgentId to;
    Term payload;
};

struct DisplayedMessage {
    Term body;
    AgentId peer;
    Rating rating;
};

using EventLog = std::vector<Event>;

class NoPeerKey : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hands out fresh secret-key atoms: the first key of agent A is sk:A, later
/// ones sk:A.1, sk:A.2, ...
class KeyGenerator {
public:
    Term fresh(const AgentId& owner);

private:
    std::map<AgentId, unsigned> issued_;
};

PeerState initInstance(const AgentId& self, KeyGenerator& keys, EventLog& events);

/// Clear text with our key attached while no key for `to` is known; otherwise
/// signed with our secret key and encrypted to the stored key.
WireMessage composeMessage(PeerState& st, const AgentId& to, const Term& body, EventLog& events);

/// Processes an incoming email. Crypto failures become events, never errors.
DisplayedMessage receiveMessage(PeerState& st, const WireMessage& w, EventLog& events);

/// Trustwords shown to `st.self` for the handshake with `peer`. Throws NoPeerKey.
WordList startHandshake(const PeerState& st, const AgentId& peer, const Dictionary& d,
                        EventLog& events);

struct HandshakeOutcome {
    bool matched;
    WordList wordsA;
    WordList wordsB;
};

/// Both users compare trustwords over the out-of-band channel in one step.
HandshakeOutcome completeHandshake(PeerState& a, PeerState& b, const Dictionary& d,
                                   EventLog& events);

}  // namespace pep
