#include "pep/engine.hpp"

namespace pep {

std::string_view ratingName(Rating r) {
    switch (r) {
        case Rating::Red: return "RED";
        case Rating::Grey: return "GREY";
        case Rating::Yellow: return "YELLOW";
        case Rating::Green: return "GREEN";
    }
    return "?";
}

std::optional<Rating> ratingFromName(std::string_view name) {
    for (Rating r : {Rating::Red, Rating::Grey, Rating::Yellow, Rating::Green})
        if (ratingName(r) == name) return r;
    return std::nullopt;
}

void IdentityRecord::storeKey(const Term& key) {
    if (rating == Rating::Green || rating == Rating::Red) return;
    pubkey = key;
    rating = Rating::Yellow;
}

const IdentityRecord* PeerState::peer(const AgentId& email) const {
    auto it = peers.find(email);
    return it == peers.end() ? nullptr : &it->second;
}

Rating PeerState::ratingOf(const AgentId& email) const {
    const auto* rec = peer(email);
    return rec ? rec->rating : Rating::Grey;
}

Term KeyGenerator::fresh(const AgentId& owner) {
    unsigned n = issued_[owner]++;
    return Term::secretKey(n == 0 ? owner : owner + "." + std::to_string(n));
}

namespace {

IdentityRecord& recordFor(PeerState& st, const AgentId& email) {
    auto [it, inserted] = st.peers.try_emplace(email);
    if (inserted) {
        it->second.localId = "id" + email + "_" + st.self;
        it->second.email = email;
    }
    return it->second;
}

Rating displayRating(const PeerState& st, const AgentId& from, Rating otherwise) {
    return st.ratingOf(from) == Rating::Red ? Rating::Red : otherwise;
}

}  // namespace

PeerState initInstance(const AgentId& self, KeyGenerator& keys, EventLog& events) {
    Term sk = keys.fresh(self);
    PeerState st{self, sk, pubKey(sk), {}, {}, 0};
    events.push_back(Event::userKey(self, st.publicKey));
    events.push_back(Event::userEmail(self, self));
    return st;
}

WireMessage composeMessage(PeerState& st, const AgentId& to, const Term& body, EventLog& events) {
    ++st.runCounter;
    IdentityRecord& rec = recordFor(st, to);
    if (!rec.pubkey) {
        st.sentKeyTo.insert(to);
        return {st.self, to, pair(body, st.publicKey)};
    }
    const Term attached = st.sentKeyTo.contains(to) ? absentKey() : st.publicKey;
    st.sentKeyTo.insert(to);
    Term payload = aenc(sign(pair(body, attached), st.secretKey), *rec.pubkey);
    if (rec.rating == Rating::Green) events.push_back(Event::sendGreen(st.self, to, payload));
    return {st.self, to, std::move(payload)};
}

DisplayedMessage receiveMessage(PeerState& st, const WireMessage& w, EventLog& events) {
    const Term& payload = w.payload;

    if (payload.is(TermKind::Pair)) {
        IdentityRecord& rec = recordFor(st, w.from);
        const Term& key = payload.arg(1);
        if (key != absentKey()) rec.storeKey(key);
        return {payload.arg(0), w.from, displayRating(st, w.from, Rating::Grey)};
    }

    if (!payload.is(TermKind::AEnc)) {
        return {payload, w.from, displayRating(st, w.from, Rating::Grey)};
    }

    std::optional<Term> inner = adec(payload, st.secretKey);
    if (!inner) {
        events.push_back(Event::decryptionFails(st.self, w.from, payload));
        return {payload, w.from, displayRating(st, w.from, Rating::Grey)};
    }

    // First contact over an encrypted message: the only key available is the
    // one attached inside the signed content.
    std::optional<Term> verificationKey;
    if (const auto* rec = st.peer(w.from); rec && rec->pubkey) {
        verificationKey = rec->pubkey;
    } else if (auto content = getMssg(*inner)) {
        if (auto attached = snd(*content); attached && *attached != absentKey())
            verificationKey = attached;
    }

    std::optional<Term> content;
    if (verificationKey) content = verifSign(*inner, *verificationKey);
    if (!content) {
        events.push_back(Event::signVerifFails(st.self, w.from, payload));
        return {payload, w.from, displayRating(st, w.from, Rating::Grey)};
    }

    Term body = *content;
    Term attached = absentKey();
    if (content->is(TermKind::Pair)) {
        body = content->arg(0);
        attached = content->arg(1);
    }

    IdentityRecord& rec = recordFor(st, w.from);
    if (attached != absentKey()) rec.storeKey(attached);
    if (rec.rating == Rating::Green) events.push_back(Event::receiveGreen(st.self, w.from, payload));
    return {body, w.from, rec.rating};
}

WordList startHandshake(const PeerState& st, const AgentId& peer, const Dictionary& d,
                        EventLog& events) {
    const auto* rec = st.peer(peer);
    if (!rec || !rec->pubkey) {
        throw NoPeerKey(st.self + " has no key for " + peer);
    }
    events.push_back(Event::startHandshake(st.self, peer));
    return trustwords(st.publicKey, *rec->pubkey, d);
}

HandshakeOutcome completeHandshake(PeerState& a, PeerState& b, const Dictionary& d,
                                   EventLog& events) {
    const auto* recAB = a.peer(b.self);
    const auto* recBA = b.peer(a.self);
    if (!recAB || !recAB->pubkey) throw NoPeerKey(a.self + " has no key for " + b.self);
    if (!recBA || !recBA->pubkey) throw NoPeerKey(b.self + " has no key for " + a.self);

    HandshakeOutcome out{false, trustwords(a.publicKey, *recAB->pubkey, d),
                         trustwords(b.publicKey, *recBA->pubkey, d)};
    out.matched = trustwordsMatch(out.wordsA, out.wordsB);

    IdentityRecord& ab = a.peers.at(b.self);
    IdentityRecord& ba = b.peers.at(a.self);
    const Term keyOfA = *ba.pubkey;
    const Term keyOfB = *ab.pubkey;

    if (out.matched) {
        if (ba.rating != Rating::Red) {
            ba.rating = Rating::Green;
            events.push_back(Event::receiverTrustsS(b.self, a.self));
        }
        if (ab.rating != Rating::Red) {
            ab.rating = Rating::Green;
            events.push_back(Event::receiverTrustsS(a.self, b.self));
        }
        if (ab.rating == Rating::Green && ba.rating == Rating::Green)
            events.push_back(Event::endHandshakeOk(a.self, b.self, keyOfA, keyOfB, a.self, b.self));
    } else {
        ab.rating = Rating::Red;
        ba.rating = Rating::Red;
        events.push_back(Event::endHandshakeUnsucc(a.self, b.self, keyOfA, keyOfB));
    }
    return out;
}

}  // namespace pep
