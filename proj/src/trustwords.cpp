#include "pep/trustwords.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <set>

namespace pep {

namespace {

int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    return c - 'A' + 10;
}

constexpr char kHexDigits[] = "0123456789ABCDEF";

std::string leftPad(const std::string& s, std::size_t width) {
    if (s.size() >= width) return s;
    return std::string(width - s.size(), '0') + s;
}

std::string trim(std::string s) {
    auto notSpace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notSpace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notSpace).base(), s.end());
    return s;
}

}  // namespace

Fingerprint Fingerprint::parse(std::string_view text) {
    std::string hex;
    hex.reserve(text.size());
    for (char c : text) {
        if (c == ' ' || c == ':') continue;
        char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (!((u >= '0' && u <= '9') || (u >= 'A' && u <= 'F'))) {
            throw InvalidHex("invalid hex character '" + std::string(1, c) + "' in fingerprint");
        }
        hex.push_back(u);
    }
    if (hex.empty()) throw InvalidHex("empty fingerprint");
    if (hex.size() % 2 != 0) throw InvalidHex("fingerprint has odd length: " + hex);
    return Fingerprint(std::move(hex));
}

std::string Fingerprint::grouped() const {
    std::string padded = leftPad(hex_, (hex_.size() + 3) / 4 * 4);
    std::string out;
    for (std::size_t i = 0; i < padded.size(); i += 4) {
        if (i) out += ' ';
        out += padded.substr(i, 4);
    }
    return out;
}

Dictionary Dictionary::parse(std::istream& in) {
    Dictionary d;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        line = trim(std::move(line));
        if (first && line.starts_with("#lang:")) {
            d.language = trim(line.substr(6));
            first = false;
            continue;
        }
        first = false;
        if (line.empty()) continue;
        std::transform(line.begin(), line.end(), line.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        d.words.push_back(std::move(line));
    }
    if (d.words.empty()) throw DictionaryError("dictionary has no words");
    if (d.fullFidelity()) {
        std::set<std::string> seen(d.words.begin(), d.words.end());
        if (seen.size() != d.words.size()) {
            throw DictionaryError("full 65536-word dictionary contains duplicate words");
        }
    }
    for (const auto& w : d.words) {
        if (w.find_first_of(",()@|: \t") != std::string::npos) {
            throw DictionaryError("dictionary word contains reserved character: " + w);
        }
    }
    return d;
}

Dictionary Dictionary::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DictionaryError("cannot open dictionary: " + path.string());
    return parse(in);
}

Fingerprint combineFingerprints(const Fingerprint& a, const Fingerprint& b) {
    const std::size_t width = std::max(a.hex().size(), b.hex().size());
    const std::string x = leftPad(a.hex(), width);
    const std::string y = leftPad(b.hex(), width);
    std::string out(width, '0');
    for (std::size_t i = 0; i < width; ++i) out[i] = kHexDigits[nibble(x[i]) ^ nibble(y[i])];
    return Fingerprint::parse(out);
}

WordList mapToWords(const Fingerprint& f, const Dictionary& d) {
    if (d.words.empty()) throw DictionaryError("dictionary has no words");
    const std::string padded = leftPad(f.hex(), (f.hex().size() + 3) / 4 * 4);
    WordList out;
    out.reserve(padded.size() / 4);
    for (std::size_t i = 0; i < padded.size(); i += 4) {
        std::size_t block = 0;
        for (std::size_t j = 0; j < 4; ++j) block = block * 16 + nibble(padded[i + j]);
        out.push_back(d.words[block % d.size()]);
    }
    return out;
}

Fingerprint pairFingerprint(const Term& pk1, const Term& pk2) {
    std::string r1 = pk1.render();
    std::string r2 = pk2.render();
    if (r2 < r1) std::swap(r1, r2);
    const std::string input = r1 + "|" + r2;

    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(input.data(), input.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    std::string hex;
    for (unsigned int i = 0; i < 16; ++i) {
        hex.push_back(kHexDigits[md[i] >> 4]);
        hex.push_back(kHexDigits[md[i] & 0xF]);
    }
    return Fingerprint::parse(hex);
}

WordList trustwords(const Term& pk1, const Term& pk2, const Dictionary& d) {
    return mapToWords(pairFingerprint(pk1, pk2), d);
}

bool trustwordsMatch(const WordList& w1, const WordList& w2) { return w1 == w2; }

Term toTerm(const WordList& w) { return Term::wordList(w); }

std::string joinWords(const WordList& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += w[i];
    }
    return out;
}

}  // namespace pep
