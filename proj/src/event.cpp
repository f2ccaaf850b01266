#include "pep/event.hpp"

#include <array>
#include <stdexcept>

namespace pep {

namespace {

struct Info {
    EventKind kind;
    std::string_view name;
    std::vector<ArgType> sig;
};

const std::array<Info, 11>& table() {
    using enum ArgType;
    static const std::array<Info, 11> t{{
        {EventKind::EndHandshakeOk, "endHandshakeOk", {Agent, Agent, Message, Message, Agent, Agent}},
        {EventKind::StartHandshake, "startHandshake", {Agent, Agent}},
        {EventKind::UserKey, "userKey", {Agent, Message}},
        {EventKind::UserEmail, "userEmail", {Agent, Agent}},
        {EventKind::ReceiveGreen, "receiveGreen", {Agent, Agent, Message}},
        {EventKind::ReceiverTrustsS, "receiverTrustsS", {Agent, Agent}},
        {EventKind::SendGreen, "sendGreen", {Agent, Agent, Message}},
        {EventKind::DecryptionFails, "decryptionFails", {Agent, Agent, Message}},
        {EventKind::SignVerifFails, "signVerifFails", {Agent, Agent, Message}},
        {EventKind::EndHandshakeUnsucc, "endHandshakeUnsucc", {Agent, Agent, Message, Message}},
        {EventKind::AttackerKnows, "attackerKnows", {Message}},
    }};
    return t;
}

const Info& info(EventKind k) {
    for (const auto& i : table())
        if (i.kind == k) return i;
    throw std::logic_error("unknown event kind");
}

}  // namespace

std::string renderValue(const Value& v) {
    if (const auto* a = std::get_if<AgentId>(&v)) return *a;
    return std::get<Term>(v).render();
}

std::string_view eventName(EventKind k) { return info(k).name; }

std::optional<EventKind> eventKindFromName(std::string_view name) {
    for (const auto& i : table())
        if (i.name == name) return i.kind;
    return std::nullopt;
}

const std::vector<ArgType>& eventSignature(EventKind k) { return info(k).sig; }

Event::Event(EventKind k, std::vector<Value> a) : kind(k), args(std::move(a)) {
    const auto& sig = eventSignature(k);
    if (sig.size() != args.size()) {
        throw std::invalid_argument(std::string(eventName(k)) + ": wrong number of arguments");
    }
    for (std::size_t i = 0; i < sig.size(); ++i) {
        bool isAgent = std::holds_alternative<AgentId>(args[i]);
        if (isAgent != (sig[i] == ArgType::Agent)) {
            throw std::invalid_argument(std::string(eventName(k)) + ": argument " +
                                        std::to_string(i) + " has the wrong type");
        }
    }
}

Event Event::endHandshakeOk(AgentId s, AgentId r, Term pkS, Term pkR, AgentId eS, AgentId eR) {
    return Event(EventKind::EndHandshakeOk, {std::move(s), std::move(r), std::move(pkS),
                                             std::move(pkR), std::move(eS), std::move(eR)});
}
Event Event::startHandshake(AgentId s, AgentId r) {
    return Event(EventKind::StartHandshake, {std::move(s), std::move(r)});
}
Event Event::userKey(AgentId s, Term pk) {
    return Event(EventKind::UserKey, {std::move(s), std::move(pk)});
}
Event Event::userEmail(AgentId s, AgentId e) {
    return Event(EventKind::UserEmail, {std::move(s), std::move(e)});
}
Event Event::receiveGreen(AgentId r, AgentId s, Term m) {
    return Event(EventKind::ReceiveGreen, {std::move(r), std::move(s), std::move(m)});
}
Event Event::receiverTrustsS(AgentId r, AgentId s) {
    return Event(EventKind::ReceiverTrustsS, {std::move(r), std::move(s)});
}
Event Event::sendGreen(AgentId s, AgentId r, Term m) {
    return Event(EventKind::SendGreen, {std::move(s), std::move(r), std::move(m)});
}
Event Event::decryptionFails(AgentId r, AgentId s, Term m) {
    return Event(EventKind::DecryptionFails, {std::move(r), std::move(s), std::move(m)});
}
Event Event::signVerifFails(AgentId r, AgentId s, Term m) {
    return Event(EventKind::SignVerifFails, {std::move(r), std::move(s), std::move(m)});
}
Event Event::endHandshakeUnsucc(AgentId s, AgentId r, Term pkS, Term pkR) {
    return Event(EventKind::EndHandshakeUnsucc,
                 {std::move(s), std::move(r), std::move(pkS), std::move(pkR)});
}
Event Event::attackerKnows(Term m) { return Event(EventKind::AttackerKnows, {std::move(m)}); }

std::string renderEvent(const Event& e) {
    std::string out(eventName(e.kind));
    for (const auto& a : e.args) {
        out += '|';
        out += renderValue(a);
    }
    return out;
}

}  // namespace pep
