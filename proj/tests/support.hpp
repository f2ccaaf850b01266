#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <random>
#include <set>
#include <vector>

#include "pep/adversary.hpp"
#include "pep/term.hpp"
#include "pep/trustwords.hpp"

#ifndef PEP_DATA_DIR
#define PEP_DATA_DIR "data"
#endif

namespace pep::support {

inline std::filesystem::path fixturePath() { return std::filesystem::path(PEP_DATA_DIR) / "fixture.dict"; }

inline std::shared_ptr<const Dictionary> fixture() {
    static auto d = std::make_shared<const Dictionary>(Dictionary::load(fixturePath()));
    return d;
}

// Random terms over a small atom pool so that keys and names collide often.
class TermGen {
public:
    explicit TermGen(std::uint64_t seed, std::size_t names = 4, std::size_t keys = 3)
        : rng_(seed), names_(names), keys_(keys) {}

    Term atom() {
        if (pick(3) == 0) return secretKey();
        return Term::freshName("n" + std::to_string(pick(names_)), pick(2) ? "A" : "B");
    }

    Term secretKey() { return Term::secretKey("k" + std::to_string(pick(keys_))); }

    Term publicKey() { return pubKey(secretKey()); }

    // Depth at most maxDepth; leans towards the honest shapes aenc(_, pk(sk))
    // and sign(_, sk) but also produces arbitrary argument shapes.
    Term term(std::size_t maxDepth) {
        if (maxDepth == 0 || pick(4) == 0) return atom();
        const std::size_t d = maxDepth - 1;
        switch (pick(6)) {
            case 0: return pair(term(d), term(d));
            case 1: return aenc(term(d), pick(3) ? publicKey() : term(d));
            case 2: return sign(term(d), pick(3) ? secretKey() : term(d));
            case 3: return pubKey(pick(2) ? secretKey() : term(d));
            case 4: return pair(term(d), atom());
            default: return aenc(term(d), publicKey());
        }
    }

    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

    std::string hex(std::size_t len) {
        static constexpr char digits[] = "0123456789ABCDEF";
        std::string s;
        for (std::size_t i = 0; i < len; ++i) s += digits[pick(16)];
        return s;
    }

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
    std::size_t names_, keys_;
};

// Brute-force deducibility, written independently of Knowledge: a fixpoint
// over the finite universe of subterms of the knowledge and the goal. Every
// rule is tried on every element until nothing changes. Trustwords goals are
// built from terms reachable by destructors alone and their public keys.
class BruteForceOracle {
public:
    BruteForceOracle(std::vector<Term> base, const Dictionary* dict) : base_(std::move(base)), dict_(dict) {}

    bool derivable(const Term& goal) const {
        std::set<Term> universe;
        for (const auto& b : base_) addSubterms(b, universe);
        addSubterms(goal, universe);

        std::set<Term> analysed(base_.begin(), base_.end());
        std::set<Term> known = analysed;
        for (bool changed = true; changed;) {
            changed = false;
            auto add = [&](const Term& t) { changed = known.insert(t).second || changed; };
            for (const Term& t : std::vector<Term>(known.begin(), known.end())) {
                if (auto x = fst(t)) add(*x);
                if (auto x = snd(t)) add(*x);
                if (auto x = getMssg(t)) add(*x);
                for (const Term& k : std::vector<Term>(known.begin(), known.end())) {
                    if (auto x = adec(t, k)) add(*x);
                }
            }
            for (const Term& u : universe) {
                if (known.contains(u)) continue;
                if (composable(u, known)) add(u);
            }
        }
        // destructor-only closure for the trustwords candidates
        for (bool changed = true; changed;) {
            changed = false;
            for (const Term& t : std::vector<Term>(analysed.begin(), analysed.end())) {
                for (auto x : {fst(t), snd(t), getMssg(t)})
                    if (x) changed = analysed.insert(*x).second || changed;
                if (t.is(TermKind::AEnc) && t.arg(1).is(TermKind::PubKey) && known.contains(t.arg(1).arg(0)))
                    changed = analysed.insert(t.arg(0)).second || changed;
            }
        }
        if (known.contains(goal)) return true;
        return wordListReachable(goal, known, analysed);
    }

private:
    static void addSubterms(const Term& t, std::set<Term>& out) {
        if (!out.insert(t).second) return;
        for (const auto& a : t.args()) addSubterms(a, out);
    }

    bool composable(const Term& u, const std::set<Term>& known) const {
        switch (u.kind()) {
            case TermKind::Pair:
            case TermKind::AEnc:
            case TermKind::Sign:
                return known.contains(u.arg(0)) && known.contains(u.arg(1));
            case TermKind::PubKey:
                return known.contains(u.arg(0));
            default:
                return false;
        }
    }

    bool wordListReachable(const Term& goal, const std::set<Term>& known, const std::set<Term>& analysed) const {
        if (!dict_) return false;
        std::function<bool(const Term&)> build = [&](const Term& t) -> bool {
            if (known.contains(t)) return true;
            if (t.is(TermKind::WordList)) {
                std::vector<Term> cands(analysed.begin(), analysed.end());
                for (const auto& a : analysed) cands.push_back(pubKey(a));
                for (const auto& x : cands)
                    for (const auto& y : cands)
                        if (trustwords(x, y, *dict_) == t.words()) return true;
                return false;
            }
            if (t.args().empty()) return false;
            for (const auto& a : t.args())
                if (!build(a)) return false;
            return true;
        };
        return build(goal);
    }

    std::vector<Term> base_;
    const Dictionary* dict_;
};

}  // namespace pep::support
