#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pep {

/// Constructor tags of the symbolic message algebra.
enum class TermKind : unsigned char {
    FreshName,  // atomic nonce / plaintext
    SecretKey,  // atomic secret key
    PubKey,     // pk(sk)
    Pair,
    AEnc,       // aenc(message, public key)
    Sign,       // sign(message, secret key)
    WordList,   // trustwords lifted into the algebra
};

/// An immutable symbolic term. Copies share structure; equality is structural.
class Term {
public:
    static Term freshName(std::string label, std::string origin);
    static Term secretKey(std::string label);
    static Term pubKey(Term of);
    static Term pair(Term left, Term right);
    static Term aenc(Term plaintext, Term key);
    static Term sign(Term message, Term key);
    static Term wordList(std::vector<std::string> words);

    TermKind kind() const noexcept;
    bool is(TermKind k) const noexcept { return kind() == k; }

    /// Label of a FreshName or SecretKey; empty otherwise.
    const std::string& label() const noexcept;
    /// Creating agent of a FreshName; empty otherwise.
    const std::string& origin() const noexcept;
    /// Words of a WordList; empty otherwise.
    const std::vector<std::string>& words() const noexcept;

    /// Constructor arguments (0, 1 or 2 of them).
    const std::vector<Term>& args() const noexcept;
    const Term& arg(std::size_t i) const { return args().at(i); }

    /// Nesting depth; atoms have depth 0.
    std::size_t depth() const noexcept;
    /// Number of constructor applications (non-atom nodes).
    std::size_t constructorCount() const noexcept;
    std::size_t hash() const noexcept;

    /// Canonical prefix rendering, e.g. aenc(sign(name:m@A,sk:B),pk(sk:A)).
    std::string render() const;

    /// True for t a subterm of *this (including *this).
    bool hasSubterm(const Term& t) const;

    friend bool operator==(const Term& a, const Term& b) noexcept;
    friend std::strong_ordering operator<=>(const Term& a, const Term& b) noexcept;

private:
    struct Node;
    static std::shared_ptr<Node> make(TermKind k);
    static std::shared_ptr<const Node> finish(std::shared_ptr<Node> n);
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

inline std::ostream& operator<<(std::ostream& os, const Term& t) { return os << t.render(); }

// Constructors and destructors of the equational theory. Destructors return
// nullopt when no equation applies.

inline Term aenc(Term m, Term pk) { return Term::aenc(std::move(m), std::move(pk)); }
inline Term sign(Term m, Term sk) { return Term::sign(std::move(m), std::move(sk)); }
inline Term pair(Term a, Term b) { return Term::pair(std::move(a), std::move(b)); }
inline Term pubKey(Term sk) { return Term::pubKey(std::move(sk)); }

/// adec(aenc(M, pubKey(SK)), SK) = M
std::optional<Term> adec(const Term& c, const Term& sk);
/// verifSign(sign(M, SK), pubKey(SK)) = M
std::optional<Term> verifSign(const Term& s, const Term& pk);
/// getMssg(sign(M, SK)) = M, no key needed.
std::optional<Term> getMssg(const Term& s);
std::optional<Term> fst(const Term& p);
std::optional<Term> snd(const Term& p);

/// Shape predicate only; honest agents do not call it before storing keys.
bool looksLikePublicKey(const Term& t);

/// Public constant signed in place of an attached key after first contact.
const Term& absentKey();

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inverse of Term::render().
Term parseTerm(std::string_view text);

struct TermHash {
    std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

}  // namespace pep
