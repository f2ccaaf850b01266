#include "pep/term.hpp"

#include <algorithm>
#include <functional>

namespace pep {

struct Term::Node {
    TermKind kind;
    std::string label;
    std::string origin;
    std::vector<std::string> words;
    std::vector<Term> args;
    std::size_t depth = 0;
    std::size_t ctors = 0;
    std::size_t hash = 0;
};

namespace {

void checkLabel(std::string_view s, const char* what) {
    if (s.empty()) throw std::invalid_argument(std::string(what) + " must not be empty");
    for (char c : s) {
        if (c == ',' || c == '(' || c == ')' || c == '@' || c == '|' || c == ':' || c == ' ' ||
            c == '\t' || c == '\n' || c == '\r') {
            throw std::invalid_argument(std::string(what) + " contains reserved character: " +
                                        std::string(s));
        }
    }
}

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

std::shared_ptr<Term::Node> Term::make(TermKind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return n;
}

std::shared_ptr<const Term::Node> Term::finish(std::shared_ptr<Term::Node> n) {
    std::size_t h = static_cast<std::size_t>(n->kind) + 1;
    h = mix(h, std::hash<std::string>{}(n->label));
    h = mix(h, std::hash<std::string>{}(n->origin));
    for (const auto& w : n->words) h = mix(h, std::hash<std::string>{}(w));
    for (const auto& a : n->args) {
        h = mix(h, a.hash());
        n->depth = std::max(n->depth, a.depth() + 1);
        n->ctors += a.constructorCount();
    }
    if (!n->args.empty() || n->kind == TermKind::WordList) n->ctors += 1;
    n->hash = h;
    return n;
}

Term Term::freshName(std::string label, std::string origin) {
    checkLabel(label, "name label");
    checkLabel(origin, "name origin");
    auto n = make(TermKind::FreshName);
    n->label = std::move(label);
    n->origin = std::move(origin);
    return Term(finish(std::move(n)));
}

Term Term::secretKey(std::string label) {
    checkLabel(label, "key label");
    auto n = make(TermKind::SecretKey);
    n->label = std::move(label);
    return Term(finish(std::move(n)));
}

Term Term::pubKey(Term of) {
    auto n = make(TermKind::PubKey);
    n->args = {std::move(of)};
    return Term(finish(std::move(n)));
}

Term Term::pair(Term left, Term right) {
    auto n = make(TermKind::Pair);
    n->args = {std::move(left), std::move(right)};
    return Term(finish(std::move(n)));
}

Term Term::aenc(Term plaintext, Term key) {
    auto n = make(TermKind::AEnc);
    n->args = {std::move(plaintext), std::move(key)};
    return Term(finish(std::move(n)));
}

Term Term::sign(Term message, Term key) {
    auto n = make(TermKind::Sign);
    n->args = {std::move(message), std::move(key)};
    return Term(finish(std::move(n)));
}

Term Term::wordList(std::vector<std::string> words) {
    if (words.empty()) throw std::invalid_argument("word list must not be empty");
    for (const auto& w : words) checkLabel(w, "word");
    auto n = make(TermKind::WordList);
    n->words = std::move(words);
    return Term(finish(std::move(n)));
}

TermKind Term::kind() const noexcept { return node_->kind; }
const std::string& Term::label() const noexcept { return node_->label; }
const std::string& Term::origin() const noexcept { return node_->origin; }
const std::vector<std::string>& Term::words() const noexcept { return node_->words; }
const std::vector<Term>& Term::args() const noexcept { return node_->args; }
std::size_t Term::depth() const noexcept { return node_->depth; }
std::size_t Term::constructorCount() const noexcept { return node_->ctors; }
std::size_t Term::hash() const noexcept { return node_->hash; }

static void renderInto(const Term& t, std::string& out) {
    auto binary = [&](const char* name) {
        out += name;
        out += '(';
        renderInto(t.arg(0), out);
        out += ',';
        renderInto(t.arg(1), out);
        out += ')';
    };
    switch (t.kind()) {
        case TermKind::FreshName:
            out += "name:";
            out += t.label();
            out += '@';
            out += t.origin();
            break;
        case TermKind::SecretKey:
            out += "sk:";
            out += t.label();
            break;
        case TermKind::PubKey:
            out += "pk(";
            renderInto(t.arg(0), out);
            out += ')';
            break;
        case TermKind::Pair: binary("pair"); break;
        case TermKind::AEnc: binary("aenc"); break;
        case TermKind::Sign: binary("sign"); break;
        case TermKind::WordList:
            out += "words(";
            for (std::size_t i = 0; i < t.words().size(); ++i) {
                if (i) out += ',';
                out += t.words()[i];
            }
            out += ')';
            break;
    }
}

std::string Term::render() const {
    std::string out;
    renderInto(*this, out);
    return out;
}

bool Term::hasSubterm(const Term& t) const {
    if (*this == t) return true;
    return std::any_of(args().begin(), args().end(),
                       [&](const Term& a) { return a.hasSubterm(t); });
}

bool operator==(const Term& a, const Term& b) noexcept {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash()) return false;
    return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) noexcept {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (auto c = x.kind <=> y.kind; c != 0) return c;
    if (auto c = x.label <=> y.label; c != 0) return c;
    if (auto c = x.origin <=> y.origin; c != 0) return c;
    if (auto c = x.words <=> y.words; c != 0) return c;
    if (auto c = x.args.size() <=> y.args.size(); c != 0) return c;
    for (std::size_t i = 0; i < x.args.size(); ++i) {
        if (auto c = x.args[i] <=> y.args[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

std::optional<Term> adec(const Term& c, const Term& sk) {
    if (!c.is(TermKind::AEnc)) return std::nullopt;
    const Term& key = c.arg(1);
    if (!key.is(TermKind::PubKey) || key.arg(0) != sk) return std::nullopt;
    return c.arg(0);
}

std::optional<Term> verifSign(const Term& s, const Term& pk) {
    if (!s.is(TermKind::Sign) || !pk.is(TermKind::PubKey)) return std::nullopt;
    if (s.arg(1) != pk.arg(0)) return std::nullopt;
    return s.arg(0);
}

std::optional<Term> getMssg(const Term& s) {
    if (!s.is(TermKind::Sign)) return std::nullopt;
    return s.arg(0);
}

std::optional<Term> fst(const Term& p) {
    if (!p.is(TermKind::Pair)) return std::nullopt;
    return p.arg(0);
}

std::optional<Term> snd(const Term& p) {
    if (!p.is(TermKind::Pair)) return std::nullopt;
    return p.arg(1);
}

bool looksLikePublicKey(const Term& t) {
    return t.is(TermKind::PubKey) && t.arg(0).is(TermKind::SecretKey);
}

const Term& absentKey() {
    static const Term k = Term::freshName("nokey", "pub");
    return k;
}

// Recursive-descent parser for the canonical rendering.
namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Term parseAll() {
        Term t = parseOne();
        if (pos_ != s_.size()) fail("trailing input");
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError("term parse error at " + std::to_string(pos_) + ": " + why + " in '" +
                         std::string(s_) + "'");
    }

    bool startsWith(std::string_view p) const { return s_.substr(pos_).starts_with(p); }

    void expect(char c) {
        if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string ident() {
        std::size_t start = pos_;
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == ',' || c == '(' || c == ')' || c == '@' || c == '|' || c == ':') break;
            ++pos_;
        }
        if (pos_ == start) fail("expected identifier");
        return std::string(s_.substr(start, pos_ - start));
    }

    Term binaryArgs(Term (*make)(Term, Term)) {
        Term a = parseOne();
        expect(',');
        Term b = parseOne();
        expect(')');
        return make(std::move(a), std::move(b));
    }

    Term parseOne() {
        if (startsWith("name:")) {
            pos_ += 5;
            std::string label = ident();
            expect('@');
            std::string origin = ident();
            return Term::freshName(std::move(label), std::move(origin));
        }
        if (startsWith("sk:")) {
            pos_ += 3;
            return Term::secretKey(ident());
        }
        if (startsWith("pk(")) {
            pos_ += 3;
            Term a = parseOne();
            expect(')');
            return Term::pubKey(std::move(a));
        }
        if (startsWith("pair(")) {
            pos_ += 5;
            return binaryArgs(&Term::pair);
        }
        if (startsWith("aenc(")) {
            pos_ += 5;
            return binaryArgs(&Term::aenc);
        }
        if (startsWith("sign(")) {
            pos_ += 5;
            return binaryArgs(&Term::sign);
        }
        if (startsWith("words(")) {
            pos_ += 6;
            std::vector<std::string> words;
            for (;;) {
                words.push_back(ident());
                if (pos_ < s_.size() && s_[pos_] == ',') {
                    ++pos_;
                    continue;
                }
                expect(')');
                break;
            }
            return Term::wordList(std::move(words));
        }
        fail("unknown constructor");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

Term parseTerm(std::string_view text) {
    try {
        return Parser(text).parseAll();
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

}  // namespace pep
