#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "pep/trustwords.hpp"
#include "support.hpp"

using namespace pep;

namespace {

Dictionary dictOf(std::vector<std::string> words) { return Dictionary{"en", std::move(words)}; }

}  // namespace

TEST(Fingerprint, ParseNormalises) {
    EXPECT_EQ(Fingerprint::parse("f482 e952").hex(), "F482E952");
    EXPECT_EQ(Fingerprint::parse("F4:82:E9:52").hex(), "F482E952");
    EXPECT_EQ(Fingerprint::parse("F482E9522F48618B01BC31DC5428D7FA").grouped(),
              "F482 E952 2F48 618B 01BC 31DC 5428 D7FA");
}

TEST(Fingerprint, ParseRejects) {
    EXPECT_THROW(Fingerprint::parse(""), InvalidHex);
    EXPECT_THROW(Fingerprint::parse("  "), InvalidHex);
    EXPECT_THROW(Fingerprint::parse("F48"), InvalidHex);
    EXPECT_THROW(Fingerprint::parse("G482"), InvalidHex);
    EXPECT_THROW(Fingerprint::parse("F4-82"), InvalidHex);
}

TEST(Combine, XorExamples) {
    EXPECT_EQ(combineFingerprints(Fingerprint::parse("F482"), Fingerprint::parse("0001")).hex(), "F483");
    EXPECT_EQ(combineFingerprints(Fingerprint::parse("ABCD"), Fingerprint::parse("ABCD")).hex(), "0000");
}

TEST(Combine, ShorterInputIsLeftPadded) {
    EXPECT_EQ(combineFingerprints(Fingerprint::parse("12345678"), Fingerprint::parse("FF")).hex(), "12345687");
    EXPECT_EQ(combineFingerprints(Fingerprint::parse("FF"), Fingerprint::parse("12345678")).hex(), "12345687");
}

TEST(Combine, RandomFingerprintsCommuteAndSelfCancel) {
    support::TermGen gen(5);
    for (int i = 0; i < 300; ++i) {
        const auto a = Fingerprint::parse(gen.hex(2 * (1 + gen.pick(20))));
        const auto b = Fingerprint::parse(gen.hex(2 * (1 + gen.pick(20))));
        EXPECT_EQ(combineFingerprints(a, b), combineFingerprints(b, a));
        EXPECT_EQ(combineFingerprints(a, a).hex(), std::string(a.hex().size(), '0'));
    }
}

TEST(MapToWords, KnownFingerprintWithFixture) {
    const auto words = mapToWords(Fingerprint::parse("F482 E952 2F48 618B 01BC 31DC 5428 D7FA"), *support::fixture());
    EXPECT_EQ(joinWords(words), "kite house brother town juice school dice broken");
}

TEST(MapToWords, ZeroAndRepeatedBlocks) {
    const auto& d = *support::fixture();
    EXPECT_EQ(mapToWords(Fingerprint::parse("0000"), d), WordList{d.words[0]});
    EXPECT_EQ(mapToWords(Fingerprint::parse("00010001"), d), (WordList{d.words[1], d.words[1]}));
}

TEST(MapToWords, BlockModuloSize) {
    const auto d = dictOf({"a", "b", "c"});
    // 0x0005 mod 3 = 2, 0xFFFF mod 3 = 0
    EXPECT_EQ(mapToWords(Fingerprint::parse("0005FFFF"), d), (WordList{"c", "a"}));
    // two hex chars pad to one block
    EXPECT_EQ(mapToWords(Fingerprint::parse("04"), d), WordList{"b"});
}

TEST(MapToWords, EmptyDictionaryRejected) {
    EXPECT_THROW(mapToWords(Fingerprint::parse("00"), Dictionary{}), DictionaryError);
}

TEST(Dictionary, ParsesLanguageTag) {
    std::istringstream in("#lang:de\napfel\nbirne\n");
    const auto d = Dictionary::parse(in);
    EXPECT_EQ(d.language, "de");
    EXPECT_EQ(d.words, (std::vector<std::string>{"apfel", "birne"}));
}

TEST(Dictionary, FixtureShape) {
    const auto& d = *support::fixture();
    EXPECT_EQ(d.language, "en");
    EXPECT_EQ(d.size(), 256u);
    EXPECT_FALSE(d.fullFidelity());
}

TEST(Dictionary, RejectsEmptyAndMissing) {
    std::istringstream empty("#lang:en\n");
    EXPECT_THROW(Dictionary::parse(empty), DictionaryError);
    EXPECT_THROW(Dictionary::load("/nonexistent/words.dict"), DictionaryError);
}

TEST(Dictionary, FullFidelityRequiresUniqueWords) {
    std::ostringstream os;
    for (std::size_t i = 0; i < Dictionary::kFullSize; ++i) os << "w" << i << "\n";
    std::istringstream good(os.str());
    const auto d = Dictionary::parse(good);
    EXPECT_TRUE(d.fullFidelity());
    // identity mapping in full-fidelity mode
    EXPECT_EQ(mapToWords(Fingerprint::parse("FFFF0001"), d), (WordList{"w65535", "w1"}));

    std::string dup = os.str();
    dup.replace(dup.find("w1\n"), 3, "w0\n");
    std::istringstream bad(dup);
    EXPECT_THROW(Dictionary::parse(bad), DictionaryError);
}

TEST(SymbolicTrustwords, SymmetricAndKeyDependent) {
    const auto& d = *support::fixture();
    const Term pkA = pubKey(Term::secretKey("A"));
    const Term pkB = pubKey(Term::secretKey("B"));
    const Term pkE = pubKey(Term::secretKey("E"));
    EXPECT_EQ(trustwords(pkA, pkB, d), trustwords(pkB, pkA, d));
    EXPECT_TRUE(trustwordsMatch(trustwords(pkA, pkB, d), trustwords(pkB, pkA, d)));
    EXPECT_FALSE(trustwordsMatch(trustwords(pkA, pkE, d), trustwords(pkE, pkB, d)));
    EXPECT_EQ(trustwords(pkA, pkB, d).size(), 8u);
}

TEST(SymbolicTrustwords, FingerprintIsTruncatedDigest) {
    const Term pkA = pubKey(Term::secretKey("A"));
    const Term pkB = pubKey(Term::secretKey("B"));
    // first 16 bytes of SHA-256("pk(sk:A)|pk(sk:B)"), computed with hashlib
    EXPECT_EQ(pairFingerprint(pkA, pkB).hex(), "DB2464F98DA6B1A1F40BF6E1F9F2D6B1");
    EXPECT_EQ(pairFingerprint(pkB, pkA).hex(), "DB2464F98DA6B1A1F40BF6E1F9F2D6B1");
}

// Distinct key pairs over a pool give distinct 8-word lists with the fixture.
TEST(SymbolicTrustwords, DistinctPairsGiveDistinctWords) {
    const auto& d = *support::fixture();
    std::vector<Term> keys;
    for (int i = 0; i < 30; ++i) keys.push_back(pubKey(Term::secretKey("K" + std::to_string(i))));
    std::set<WordList> seen;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < keys.size(); ++i)
        for (std::size_t j = i + 1; j < keys.size(); ++j, ++pairs) seen.insert(trustwords(keys[i], keys[j], d));
    EXPECT_EQ(seen.size(), pairs);
}
