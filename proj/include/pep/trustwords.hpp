#pragma once

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pep/term.hpp"

namespace pep {

class InvalidHex : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DictionaryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Uppercase hex fingerprint without separators.
class Fingerprint {
public:
    /// Accepts any case, ignores spaces and colons. Throws InvalidHex.
    static Fingerprint parse(std::string_view text);

    const std::string& hex() const noexcept { return hex_; }
    /// Blocks of four separated by single spaces, e.g. "F482 E952".
    std::string grouped() const;

    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;

private:
    explicit Fingerprint(std::string hex) : hex_(std::move(hex)) {}
    std::string hex_;
};

/// A trustwords dictionary: line N of the file is the word for block value N.
struct Dictionary {
    static constexpr std::size_t kFullSize = 65536;

    std::string language;
    std::vector<std::string> words;

    std::size_t size() const noexcept { return words.size(); }
    bool fullFidelity() const noexcept { return words.size() == kFullSize; }

    static Dictionary parse(std::istream& in);
    static Dictionary load(const std::filesystem::path& path);
};

using WordList = std::vector<std::string>;

/// Nibble-wise XOR; the shorter input is left-zero-padded.
Fingerprint combineFingerprints(const Fingerprint& a, const Fingerprint& b);

/// One word per 4-hex-char block: words[block mod size].
WordList mapToWords(const Fingerprint& f, const Dictionary& d);

/// Fingerprint of the unordered key pair {pk1, pk2}: the first 128 bits of
/// SHA-256 over the two canonical renderings in sorted order.
Fingerprint pairFingerprint(const Term& pk1, const Term& pk2);

/// Symbolic trustwords; symmetric in the two keys.
WordList trustwords(const Term& pk1, const Term& pk2, const Dictionary& d);

/// Users compare word for word.
bool trustwordsMatch(const WordList& w1, const WordList& w2);

Term toTerm(const WordList& w);
std::string joinWords(const WordList& w);

}  // namespace pep
