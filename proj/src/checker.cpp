#include "pep/checker.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace pep {

using Bindings = std::map<std::string, Value>;

namespace {

bool match(const Pattern& p, const Value& v, Bindings& b) {
    switch (p.kind) {
        case Pattern::Kind::Variable: {
            auto [it, inserted] = b.try_emplace(p.var, v);
            return inserted || it->second == v;
        }
        case Pattern::Kind::Constant:
            return *p.constant == v;
        case Pattern::Kind::Ctor: {
            const auto* t = std::get_if<Term>(&v);
            if (!t || t->kind() != p.ctor || t->args().size() != p.args.size()) return false;
            for (std::size_t i = 0; i < p.args.size(); ++i)
                if (!match(p.args[i], Value{t->arg(i)}, b)) return false;
            return true;
        }
    }
    return false;
}

bool matchEvent(const EventPattern& p, const Event& e, Bindings& b) {
    if (p.kind != e.kind || p.args.size() != e.args.size()) return false;
    for (std::size_t i = 0; i < p.args.size(); ++i)
        if (!match(p.args[i], e.args[i], b)) return false;
    return true;
}

void collectVars(const Pattern& p, std::set<std::string>& out) {
    if (p.kind == Pattern::Kind::Variable) out.insert(p.var);
    for (const auto& a : p.args) collectVars(a, out);
}

void collectVars(const EventPattern& p, std::set<std::string>& out) {
    for (const auto& a : p.args) collectVars(a, out);
}

std::string describeEvent(const TraceEvent& te) {
    return "#" + std::to_string(te.index) + " " + renderEvent(te.event);
}

/// Search state for one conjunction under one trigger.
struct Solver {
    const std::vector<TraceEvent>& events;
    const std::vector<Requirement>& reqs;
    std::size_t triggerPos;
    const std::vector<std::set<std::size_t>>& used;  // per requirement
    std::vector<std::size_t> chosen;                 // event position per requirement
    std::size_t deepest = 0;
    std::string failure;

    bool solve(std::size_t idx, const Bindings& b) {
        if (idx > deepest || failure.empty()) {
            deepest = std::max(deepest, idx);
        }
        if (idx == reqs.size()) return true;
        const Requirement& r = reqs[idx];
        auto fail = [&](std::string why) {
            if (idx >= deepest) {
                deepest = idx;
                failure = std::move(why);
            }
            return false;
        };
        switch (r.kind) {
            case Requirement::Kind::Occurs: {
                bool sawUsed = false;
                for (std::size_t j = 0; j < triggerPos; ++j) {
                    Bindings nb = b;
                    if (!matchEvent(r.event, events[j].event, nb)) continue;
                    if (r.injective && used[idx].contains(j)) {
                        sawUsed = true;
                        continue;
                    }
                    chosen[idx] = j;
                    if (solve(idx + 1, nb)) return true;
                }
                return fail(sawUsed ? "injectivity: every earlier " + r.event.describe() +
                                          " is already matched to another trigger"
                                    : "missing earlier " + r.event.describe());
            }
            case Requirement::Kind::Equals: {
                Bindings nb = b;
                if (!match(r.pattern, b.at(r.var), nb)) {
                    return fail("equation fails: " + r.var + " = " + r.pattern.describe() + " with " +
                                r.var + " = " + renderValue(b.at(r.var)));
                }
                return solve(idx + 1, nb);
            }
            case Requirement::Kind::NotEquals:
                if (b.at(r.var) == b.at(r.var2)) {
                    return fail("disequality fails: " + r.var + " = " + r.var2 + " = " +
                                renderValue(b.at(r.var)));
                }
                return solve(idx + 1, b);
            case Requirement::Kind::Never:
                for (const auto& te : events) {
                    Bindings nb = b;
                    if (matchEvent(r.event, te.event, nb))
                        return fail("forbidden event occurred: " + describeEvent(te));
                }
                return solve(idx + 1, b);
        }
        return false;
    }
};

Verdict combine(std::string name, const std::vector<Verdict>& parts) {
    Verdict v;
    v.property = std::move(name);
    for (const auto& p : parts) {
        v.pass = v.pass && p.pass;
        v.triggers += p.triggers;
        v.witnesses.insert(v.witnesses.end(), p.witnesses.begin(), p.witnesses.end());
    }
    return v;
}

EventPattern ev(EventKind k, std::vector<Pattern> args) { return {k, std::move(args)}; }
Pattern V(const char* n) { return Pattern::v(n); }

}  // namespace

std::string Pattern::describe() const {
    switch (kind) {
        case Kind::Variable: return var;
        case Kind::Constant: return renderValue(*constant);
        case Kind::Ctor: {
            std::string name = ctor == TermKind::AEnc ? "aenc" : ctor == TermKind::Sign ? "sign"
                             : ctor == TermKind::PubKey ? "pk" : "pair";
            std::string out = name + "(";
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (i) out += ",";
                out += args[i].describe();
            }
            return out + ")";
        }
    }
    return "?";
}

std::string EventPattern::describe() const {
    std::string out(eventName(kind));
    out += "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ",";
        out += args[i].describe();
    }
    return out + ")";
}

Requirement Requirement::occurs(EventPattern e, bool injective) {
    Requirement r;
    r.kind = Kind::Occurs;
    r.event = std::move(e);
    r.injective = injective;
    return r;
}

Requirement Requirement::equals(std::string var, Pattern p) {
    Requirement r;
    r.kind = Kind::Equals;
    r.var = std::move(var);
    r.pattern = std::move(p);
    return r;
}

Requirement Requirement::notEquals(std::string a, std::string b) {
    Requirement r;
    r.kind = Kind::NotEquals;
    r.var = std::move(a);
    r.var2 = std::move(b);
    return r;
}

Requirement Requirement::never(EventPattern e) {
    Requirement r;
    r.kind = Kind::Never;
    r.event = std::move(e);
    return r;
}

std::string Requirement::describe() const {
    switch (kind) {
        case Kind::Occurs: return (injective ? "inj-" : "") + event.describe();
        case Kind::Equals: return var + " = " + pattern.describe();
        case Kind::NotEquals: return var + " != " + var2;
        case Kind::Never: return "not " + event.describe();
    }
    return "?";
}

void Query::validate() const {
    std::set<std::string> fromTrigger;
    collectVars(trigger, fromTrigger);
    for (const auto& conj : alternatives) {
        std::set<std::string> bound = fromTrigger;
        for (const auto& r : conj) {
            switch (r.kind) {
                case Requirement::Kind::Occurs: collectVars(r.event, bound); break;
                case Requirement::Kind::Equals:
                    if (!bound.contains(r.var)) throw QueryError(name + ": unbound variable " + r.var);
                    collectVars(r.pattern, bound);
                    break;
                case Requirement::Kind::NotEquals:
                    if (!bound.contains(r.var)) throw QueryError(name + ": unbound variable " + r.var);
                    if (!bound.contains(r.var2)) throw QueryError(name + ": unbound variable " + r.var2);
                    break;
                case Requirement::Kind::Never: {
                    std::set<std::string> vars;
                    collectVars(r.event, vars);
                    for (const auto& v : vars)
                        if (!bound.contains(v)) throw QueryError(name + ": unbound variable " + v);
                    break;
                }
            }
        }
    }
}

Verdict checkCorrespondence(const std::vector<TraceEvent>& events, const Query& q) {
    q.validate();
    Verdict v;
    v.property = q.name;
    std::vector<std::vector<std::set<std::size_t>>> used;
    for (const auto& conj : q.alternatives) used.emplace_back(conj.size());

    for (std::size_t i = 0; i < events.size(); ++i) {
        Bindings b;
        if (!matchEvent(q.trigger, events[i].event, b)) continue;
        ++v.triggers;

        bool satisfied = false;
        std::string reasons;
        for (std::size_t a = 0; a < q.alternatives.size() && !satisfied; ++a) {
            const auto& conj = q.alternatives[a];
            Solver s{events, conj, i, used[a], std::vector<std::size_t>(conj.size()), 0, {}};
            if (s.solve(0, b)) {
                satisfied = true;
                for (std::size_t r = 0; r < conj.size(); ++r)
                    if (conj[r].injective) used[a][r].insert(s.chosen[r]);
            } else {
                if (!reasons.empty()) reasons += "; or ";
                reasons += s.failure;
            }
        }
        if (q.alternatives.empty()) satisfied = true;
        if (!satisfied) {
            v.pass = false;
            v.witnesses.push_back({events[i].index, renderEvent(events[i].event), reasons});
        }
    }
    return v;
}

namespace queries {

Query fullAgreement() {
    using R = Requirement;
    return {"full-agreement",
            ev(EventKind::EndHandshakeOk, {V("a"), V("b"), V("pkA"), V("pkB"), V("eA"), V("eB")}),
            {{R::occurs(ev(EventKind::StartHandshake, {V("a"), V("b")}), true),
              R::occurs(ev(EventKind::StartHandshake, {V("b"), V("a")}), true),
              R::occurs(ev(EventKind::UserKey, {V("a"), V("pkA")})),
              R::occurs(ev(EventKind::UserKey, {V("b"), V("pkB")})),
              R::occurs(ev(EventKind::UserEmail, {V("a"), V("eA")})),
              R::occurs(ev(EventKind::UserEmail, {V("b"), V("eB")}))}}};
}

Query trustByHandshake() {
    return {"trust-by-handshake", ev(EventKind::ReceiveGreen, {V("b"), V("a"), V("m")}),
            {{Requirement::occurs(ev(EventKind::ReceiverTrustsS, {V("b"), V("a")}))}}};
}

Query privacyFromTrusted() {
    using R = Requirement;
    return {"privacy-from-trusted", ev(EventKind::ReceiveGreen, {V("b"), V("a"), V("z")}),
            {{R::occurs(ev(EventKind::SendGreen, {V("a"), V("b"), V("z")})),
              R::equals("z", Pattern::aenc(V("m"), V("pkB"))),
              R::occurs(ev(EventKind::UserKey, {V("b"), V("pkB")}))}}};
}

Query privacyNoDecryptFailure() {
    return {"privacy-from-trusted", ev(EventKind::DecryptionFails, {V("b"), V("a"), V("m")}),
            {{Requirement::never(ev(EventKind::SendGreen, {V("a"), V("b"), V("m")}))}}};
}

Query integrityFromTrusted() {
    using R = Requirement;
    return {"integrity-from-trusted", ev(EventKind::ReceiveGreen, {V("b"), V("a"), V("z")}),
            {{R::occurs(ev(EventKind::SendGreen, {V("a"), V("b"), V("z")})),
              R::equals("z", Pattern::aenc(Pattern::sign(V("m"), V("skA")), V("kb"))),
              R::occurs(ev(EventKind::UserKey, {V("a"), V("pkA")})),
              R::equals("pkA", Pattern::pk(V("skA")))}}};
}

Query integrityNoSignFailure() {
    return {"integrity-from-trusted", ev(EventKind::SignVerifFails, {V("b"), V("a"), V("m")}),
            {{Requirement::never(ev(EventKind::SendGreen, {V("a"), V("b"), V("m")}))}}};
}

Query mitmDetection() {
    using R = Requirement;
    return {"mitm-detection", ev(EventKind::EndHandshakeUnsucc, {V("a"), V("b"), V("ka"), V("kb")}),
            {{R::occurs(ev(EventKind::UserKey, {V("a"), V("pkA")})), R::notEquals("pkA", "ka")},
             {R::occurs(ev(EventKind::UserKey, {V("b"), V("pkB")})), R::notEquals("pkB", "kb")}}};
}

}  // namespace queries

Verdict checkFullAgreement(const Trace& t) { return checkCorrespondence(t, queries::fullAgreement()); }

Verdict checkTrustByHandshake(const Trace& t) {
    return checkCorrespondence(t, queries::trustByHandshake());
}

Verdict checkPrivacyFromTrusted(const Trace& t) {
    return combine("privacy-from-trusted", {checkCorrespondence(t, queries::privacyFromTrusted()),
                                            checkCorrespondence(t, queries::privacyNoDecryptFailure())});
}

Verdict checkIntegrityFromTrusted(const Trace& t) {
    return combine("integrity-from-trusted", {checkCorrespondence(t, queries::integrityFromTrusted()),
                                              checkCorrespondence(t, queries::integrityNoSignFailure())});
}

Verdict checkMITMDetection(const Trace& t) { return checkCorrespondence(t, queries::mitmDetection()); }

Verdict checkConfidentiality(const Trace& t, const SecretRegistry& reg) {
    Verdict v;
    v.property = "confidentiality";
    for (const auto& s : reg.entries) {
        ++v.triggers;
        if (auto d = t.adversaryKnowledge.derive(s.secret)) {
            v.pass = false;
            v.witnesses.push_back({0, s.secret.render(),
                                   "attacker derives secret of session " + std::to_string(s.session) +
                                       " (" + s.sender + " -> " + s.recipient + ")"});
            v.derivations.push_back(d);
        }
    }
    return v;
}

std::vector<Verdict> checkAll(const Trace& t, const SecretRegistry& reg) {
    return {checkFullAgreement(t),       checkTrustByHandshake(t), checkPrivacyFromTrusted(t),
            checkIntegrityFromTrusted(t), checkMITMDetection(t),    checkConfidentiality(t, reg)};
}

std::vector<Verdict> checkAll(const Trace& t) { return checkAll(t, t.secrets); }

Verdict checkRedAbsorption(const Trace& t) {
    Verdict v;
    v.property = "red-absorption";
    auto samePair = [](const Event& e, const AgentId& a, const AgentId& b) {
        const auto& x = e.agent(0);
        const auto& y = e.agent(1);
        return (x == a && y == b) || (x == b && y == a);
    };
    for (std::size_t i = 0; i < t.events.size(); ++i) {
        const Event& e = t.events[i].event;
        if (e.kind != EventKind::EndHandshakeUnsucc) continue;
        ++v.triggers;
        const AgentId a = e.agent(0), b = e.agent(1);
        for (std::size_t j = i + 1; j < t.events.size(); ++j) {
            const Event& later = t.events[j].event;
            switch (later.kind) {
                case EventKind::SendGreen:
                case EventKind::ReceiveGreen:
                case EventKind::ReceiverTrustsS:
                case EventKind::EndHandshakeOk:
                    if (samePair(later, a, b)) {
                        v.pass = false;
                        v.witnesses.push_back({t.events[i].index, renderEvent(e),
                                               "trusted again at " + describeEvent(t.events[j])});
                    }
                    break;
                default:
                    break;
            }
        }
        for (auto [self, peer] : {std::pair{a, b}, std::pair{b, a}}) {
            auto it = t.finalStates.find(self);
            if (it != t.finalStates.end() && it->second.ratingOf(peer) != Rating::Red) {
                v.pass = false;
                v.witnesses.push_back({t.events[i].index, renderEvent(e),
                                       "final rating of " + peer + " at " + self + " is " +
                                           std::string(ratingName(it->second.ratingOf(peer)))});
            }
        }
    }
    return v;
}

const std::vector<std::string>& propertyNames() {
    static const std::vector<std::string> names{"full-agreement",         "trust-by-handshake",
                                                "privacy-from-trusted",   "integrity-from-trusted",
                                                "mitm-detection",         "confidentiality"};
    return names;
}

namespace {

void derivationLines(const Derivation& d, std::size_t depth, const std::string& prop, std::string& out) {
    out += prop + "|derivation|" + std::to_string(depth) + "|" + d.rule + "|" + d.term.render() + "\n";
    for (const auto& p : d.premises) derivationLines(*p, depth + 1, prop, out);
}

}  // namespace

std::string renderReport(const std::vector<Verdict>& verdicts, ReportFormat f) {
    std::string out;
    for (const auto& v : verdicts) {
        const std::string status = !v.pass ? "fail" : v.vacuous() ? "vacuous" : "pass";
        if (f == ReportFormat::Lines) {
            out += v.property + "|" + status + "|" + std::to_string(v.triggers) + "\n";
            for (const auto& w : v.witnesses)
                out += v.property + "|witness|" + std::to_string(w.triggerIndex) + "|" + w.trigger + "|" + w.reason + "\n";
            for (const auto& d : v.derivations) derivationLines(*d, 0, v.property, out);
            continue;
        }
        std::string line = v.pass ? "PASS  " : "FAIL  ";
        line += v.property;
        line += std::string(v.property.size() < 24 ? 24 - v.property.size() : 1, ' ');
        if (v.vacuous()) {
            line += "(vacuous: no trigger occurred)";
        } else {
            const std::string noun = v.property == "confidentiality" ? " secret" : " trigger";
            line += "(" + std::to_string(v.triggers) + noun + (v.triggers == 1 ? "" : "s") + ")";
        }
        out += line + "\n";
        for (const auto& w : v.witnesses) {
            out += "      witness: " + (v.property == "confidentiality" ? w.trigger : "#" + std::to_string(w.triggerIndex) + " " + w.trigger) + "\n";
            out += "        " + w.reason + "\n";
        }
        for (const auto& d : v.derivations) {
            out += "      derivation:\n";
            std::string tree = renderDerivation(*d);
            std::size_t start = 0;
            while (start < tree.size()) {
                std::size_t end = tree.find('\n', start);
                out += "        " + tree.substr(start, end - start) + "\n";
                start = end + 1;
            }
        }
    }
    return out;
}

}  // namespace pep
