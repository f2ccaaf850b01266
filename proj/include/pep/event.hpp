#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pep/term.hpp"

namespace pep {

/// Agent identity; one email account per agent, so this doubles as the address.
using AgentId = std::string;

/// An event argument: an agent/email or a message term.
using Value = std::variant<AgentId, Term>;

std::string renderValue(const Value& v);

enum class EventKind {
    EndHandshakeOk,      // (s, r, pk_s, pk_r, e_s, e_r)
    StartHandshake,      // (s, r)
    UserKey,             // (s, pk_s)
    UserEmail,           // (s, e_s)
    ReceiveGreen,        // (r, s, m)
    ReceiverTrustsS,     // (r, s)
    SendGreen,           // (s, r, m)
    DecryptionFails,     // (r, s, m)
    SignVerifFails,      // (r, s, m)
    EndHandshakeUnsucc,  // (s, r, pk_s, pk_r)
    AttackerKnows,       // (m)
};

enum class ArgType { Agent, Message };

std::string_view eventName(EventKind k);
std::optional<EventKind> eventKindFromName(std::string_view name);
const std::vector<ArgType>& eventSignature(EventKind k);

struct Event {
    EventKind kind;
    std::vector<Value> args;

    /// Throws std::invalid_argument if the arguments do not fit the signature.
    Event(EventKind k, std::vector<Value> a);

    const AgentId& agent(std::size_t i) const { return std::get<AgentId>(args.at(i)); }
    const Term& term(std::size_t i) const { return std::get<Term>(args.at(i)); }

    friend bool operator==(const Event&, const Event&) = default;

    static Event endHandshakeOk(AgentId s, AgentId r, Term pkS, Term pkR, AgentId eS, AgentId eR);
    static Event startHandshake(AgentId s, AgentId r);
    static Event userKey(AgentId s, Term pk);
    static Event userEmail(AgentId s, AgentId e);
    static Event receiveGreen(AgentId r, AgentId s, Term m);
    static Event receiverTrustsS(AgentId r, AgentId s);
    static Event sendGreen(AgentId s, AgentId r, Term m);
    static Event decryptionFails(AgentId r, AgentId s, Term m);
    static Event signVerifFails(AgentId r, AgentId s, Term m);
    static Event endHandshakeUnsucc(AgentId s, AgentId r, Term pkS, Term pkR);
    static Event attackerKnows(Term m);
};

/// eventName|arg1|arg2|...
std::string renderEvent(const Event& e);

}  // namespace pep
