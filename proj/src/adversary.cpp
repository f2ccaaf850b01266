#include "pep/adversary.hpp"

#include <algorithm>
#include <functional>

namespace pep {

namespace {

DerivationPtr node(Term t, std::string rule, std::vector<DerivationPtr> premises = {}) {
    return std::make_shared<const Derivation>(
        Derivation{std::move(t), std::move(rule), std::move(premises)});
}

DerivationPtr lookup(const std::map<Term, DerivationPtr>& s, const Term& t) {
    auto it = s.find(t);
    return it == s.end() ? nullptr : it->second;
}

/// Composition check of goal over an analysed set.
DerivationPtr synthesizeGoal(const Term& goal, const std::map<Term, DerivationPtr>& s,
                             const Dictionary* dict) {
    if (auto d = lookup(s, goal)) return d;
    switch (goal.kind()) {
        case TermKind::FreshName:
        case TermKind::SecretKey:
            return nullptr;
        case TermKind::PubKey: {
            auto d = synthesizeGoal(goal.arg(0), s, dict);
            return d ? node(goal, "pubKey", {d}) : nullptr;
        }
        case TermKind::Pair:
        case TermKind::AEnc:
        case TermKind::Sign: {
            auto a = synthesizeGoal(goal.arg(0), s, dict);
            if (!a) return nullptr;
            auto b = synthesizeGoal(goal.arg(1), s, dict);
            if (!b) return nullptr;
            const char* rule = goal.is(TermKind::Pair) ? "pair" : goal.is(TermKind::AEnc) ? "aenc" : "sign";
            return node(goal, rule, {a, b});
        }
        case TermKind::WordList: {
            if (!dict) return nullptr;
            // trustwords is public code over any two derivable keys; candidates
            // are the analysed terms and their public keys.
            std::vector<std::pair<Term, DerivationPtr>> cands;
            for (const auto& [t, d] : s) {
                cands.emplace_back(t, d);
                if (!s.contains(pubKey(t))) cands.emplace_back(pubKey(t), node(pubKey(t), "pubKey", {d}));
            }
            for (std::size_t i = 0; i < cands.size(); ++i) {
                for (std::size_t j = i; j < cands.size(); ++j) {
                    if (trustwords(cands[i].first, cands[j].first, *dict) == goal.words()) {
                        return node(goal, "trustwords", {cands[i].second, cands[j].second});
                    }
                }
            }
            return nullptr;
        }
    }
    return nullptr;
}

void renderInto(const Derivation& d, std::size_t indent, std::string& out) {
    out += std::string(indent * 2, ' ');
    out += d.term.render();
    out += "  [";
    out += d.rule;
    out += "]\n";
    for (const auto& p : d.premises) renderInto(*p, indent + 1, out);
}

}  // namespace

std::string renderDerivation(const Derivation& d) {
    std::string out;
    renderInto(d, 0, out);
    return out;
}

void Knowledge::learn(const Term& t) {
    if (base_.insert(t).second) closure_.reset();
}

void Knowledge::knowDictionary(std::shared_ptr<const Dictionary> d) { dict_ = std::move(d); }

const std::map<Term, DerivationPtr>& Knowledge::closure() const {
    if (closure_) return *closure_;
    std::map<Term, DerivationPtr> s;
    for (const auto& t : base_) s.emplace(t, node(t, "known"));

    bool changed = true;
    auto add = [&](const Term& t, const char* rule, std::vector<DerivationPtr> prem) {
        if (s.contains(t)) return;
        s.emplace(t, node(t, rule, std::move(prem)));
        changed = true;
    };
    while (changed) {
        changed = false;
        std::vector<std::pair<Term, DerivationPtr>> snapshot(s.begin(), s.end());
        for (const auto& [t, d] : snapshot) {
            switch (t.kind()) {
                case TermKind::Pair:
                    add(t.arg(0), "fst", {d});
                    add(t.arg(1), "snd", {d});
                    break;
                case TermKind::Sign:
                    add(t.arg(0), "getMssg", {d});
                    break;
                case TermKind::AEnc:
                    if (!s.contains(t.arg(0)) && t.arg(1).is(TermKind::PubKey)) {
                        if (auto dk = synthesizeGoal(t.arg(1).arg(0), s, nullptr))
                            add(t.arg(0), "adec", {d, dk});
                    }
                    break;
                default:
                    break;
            }
        }
    }
    closure_ = std::move(s);
    return *closure_;
}

DerivationPtr Knowledge::derive(const Term& goal) const {
    return synthesizeGoal(goal, closure(), dict_.get());
}

std::vector<Term> Knowledge::synthesize(std::size_t depth) const {
    std::map<Term, std::size_t> cost;
    std::vector<std::vector<Term>> byCost(depth + 1);
    for (const auto& [t, d] : closure()) {
        cost.emplace(t, 0);
        byCost[0].push_back(t);
    }
    auto add = [&](Term t, std::size_t c) {
        if (cost.emplace(t, c).second) byCost[c].push_back(std::move(t));
    };
    for (std::size_t n = 1; n <= depth; ++n) {
        for (const auto& x : std::vector<Term>(byCost[n - 1])) add(pubKey(x), n);
        for (std::size_t cx = 0; cx < n; ++cx) {
            const std::size_t cy = n - 1 - cx;
            const auto xs = byCost[cx];
            const auto ys = byCost[cy];
            for (const auto& x : xs) {
                for (const auto& y : ys) {
                    add(pair(x, y), n);
                    add(aenc(x, y), n);
                    add(sign(x, y), n);
                    if (dict_) add(toTerm(trustwords(x, y, *dict_)), n);
                }
            }
        }
    }
    std::vector<Term> out;
    for (auto& bucket : byCost) {
        std::sort(bucket.begin(), bucket.end());
        out.insert(out.end(), bucket.begin(), bucket.end());
    }
    return out;
}

Knowledge learn(Knowledge k, const Term& t) {
    k.learn(t);
    return k;
}

bool checkDerivation(const Derivation& d, const Knowledge& k) {
    for (const auto& p : d.premises)
        if (!p || !checkDerivation(*p, k)) return false;
    auto prem = [&](std::size_t i) -> const Term& { return d.premises.at(i)->term; };
    auto arity = [&](std::size_t n) { return d.premises.size() == n; };
    const std::string& r = d.rule;
    if (r == "known") return arity(0) && k.base().contains(d.term);
    if (r == "fst") return arity(1) && fst(prem(0)) == d.term;
    if (r == "snd") return arity(1) && snd(prem(0)) == d.term;
    if (r == "getMssg") return arity(1) && getMssg(prem(0)) == d.term;
    if (r == "adec") return arity(2) && adec(prem(0), prem(1)) == d.term;
    if (r == "pair") return arity(2) && pair(prem(0), prem(1)) == d.term;
    if (r == "aenc") return arity(2) && aenc(prem(0), prem(1)) == d.term;
    if (r == "sign") return arity(2) && sign(prem(0), prem(1)) == d.term;
    if (r == "pubKey") return arity(1) && pubKey(prem(0)) == d.term;
    if (r == "trustwords") {
        return arity(2) && k.dictionary() &&
               toTerm(trustwords(prem(0), prem(1), *k.dictionary())) == d.term;
    }
    return false;
}

std::string describeStrategy(const Strategy& s) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Passive>) {
                return "passive";
            } else if constexpr (std::is_same_v<T, ScriptedMitm>) {
                return "mitm(" + v.initiator + "," + v.responder + ")";
            } else {
                return "explore(" + std::to_string(v.maxInterventions) + "," +
                       std::to_string(v.maxTermDepth) + ")";
            }
        },
        s);
}

std::string Intervention::describe() const {
    switch (kind) {
        case Kind::Deliver: return "deliver";
        case Kind::Drop: return "drop";
        case Kind::Replace: return "replace:" + payload->render();
        case Kind::Inject: return "inject:" + from + ">" + to + ":" + payload->render();
    }
    return "?";
}

Knowledge initialKnowledge(const Term& adversarySecret, std::shared_ptr<const Dictionary> d) {
    Knowledge k;
    k.learn(adversarySecret);
    k.learn(pubKey(adversarySecret));
    k.learn(absentKey());
    k.knowDictionary(std::move(d));
    return k;
}

std::vector<Term> candidatePayloads(const Knowledge& k, const WireMessage& w, std::size_t depth) {
    const auto& s = k.closure();

    std::vector<Term> bodies, signatures, secretKeys;
    std::vector<std::pair<Term, std::size_t>> publicKeys;  // with construction cost
    for (const auto& [t, d] : s) {
        switch (t.kind()) {
            case TermKind::FreshName:
                if (t != absentKey()) bodies.push_back(t);
                break;
            case TermKind::Sign: signatures.push_back(t); break;
            case TermKind::SecretKey: secretKeys.push_back(t); break;
            case TermKind::PubKey: publicKeys.emplace_back(t, 0); break;
            default: break;
        }
    }
    for (const auto& sk : secretKeys)
        if (!s.contains(pubKey(sk))) publicKeys.emplace_back(pubKey(sk), 1);
    std::vector<std::pair<Term, std::size_t>> attachable = publicKeys;
    attachable.emplace_back(absentKey(), 0);

    std::map<Term, std::size_t> cost;
    auto add = [&](Term t, std::size_t c) {
        if (c > depth || t == w.payload) return;
        auto [it, inserted] = cost.emplace(t, c);
        if (!inserted && c < it->second) it->second = c;
    };

    for (const auto& t : k.base())
        if (t.is(TermKind::Pair) || t.is(TermKind::AEnc)) add(t, 0);
    for (const auto& b : bodies)
        for (const auto& [key, c] : attachable) add(pair(b, key), 1 + c);
    for (const auto& sig : signatures)
        for (const auto& [ek, c] : publicKeys) add(aenc(sig, ek), 1 + c);
    if (depth >= 3) {
        for (const auto& sk : secretKeys)
            for (const auto& b : bodies)
                for (const auto& [key, c1] : attachable)
                    for (const auto& [ek, c2] : publicKeys)
                        add(aenc(sign(pair(b, key), sk), ek), 3 + c1 + c2);
    }

    std::vector<std::pair<std::size_t, Term>> ordered;
    ordered.reserve(cost.size());
    for (const auto& [t, c] : cost) ordered.emplace_back(c, t);
    std::sort(ordered.begin(), ordered.end());
    std::vector<Term> out;
    out.reserve(ordered.size());
    for (auto& [c, t] : ordered) out.push_back(std::move(t));
    return out;
}

std::vector<Intervention> exploreChoices(const Knowledge& k, const WireMessage& w,
                                         std::size_t depth) {
    std::vector<Intervention> out{Intervention::drop()};
    for (auto& p : candidatePayloads(k, w, depth)) out.push_back(Intervention::replace(std::move(p)));
    return out;
}

Adversary::Adversary(Strategy s, Term secretKey, Knowledge k)
    : strategy_(std::move(s)),
      secretKey_(secretKey),
      publicKey_(pubKey(secretKey)),
      knowledge_(std::move(k)) {}

Intervention Adversary::intervene(const WireMessage& w, std::size_t /*step*/) {
    knowledge_.learn(w.payload);
    if (const auto* m = std::get_if<ScriptedMitm>(&strategy_)) return mitm(*m, w);
    return Intervention::deliver();
}

Intervention Adversary::mitm(const ScriptedMitm& s, const WireMessage& w) {
    const bool targeted = (w.from == s.initiator && w.to == s.responder) ||
                          (w.from == s.responder && w.to == s.initiator);
    if (!targeted) return Intervention::deliver();

    // Clear first contact: swap the attached key for ours.
    if (w.payload.is(TermKind::Pair)) {
        const Term& key = w.payload.arg(1);
        if (key == absentKey() || key == publicKey_) return Intervention::deliver();
        observedKeys_.insert_or_assign(w.from, key);
        return Intervention::replace(pair(w.payload.arg(0), publicKey_));
    }

    // Encrypted to us: open, learn, re-sign and forward to the real recipient.
    auto inner = adec(w.payload, secretKey_);
    if (!inner) return Intervention::deliver();
    auto content = getMssg(*inner);
    if (!content) return Intervention::deliver();
    Term body = *content;
    Term attached = absentKey();
    if (content->is(TermKind::Pair)) {
        body = content->arg(0);
        attached = content->arg(1);
    }
    if (attached != absentKey()) observedKeys_.insert_or_assign(w.from, attached);

    auto target = observedKeys_.find(w.to);
    if (target == observedKeys_.end()) return Intervention::drop();
    const Term forwardedKey = attached == absentKey() ? absentKey() : publicKey_;
    return Intervention::replace(aenc(sign(pair(body, forwardedKey), secretKey_), target->second));
}

}  // namespace pep
