#include <gtest/gtest.h>

#include <sstream>

#include "pep/term.hpp"
#include "support.hpp"

using namespace pep;

namespace {

const Term skA = Term::secretKey("A");
const Term skB = Term::secretKey("B");
const Term m = Term::freshName("m", "A");
const Term n = Term::freshName("n", "B");

}  // namespace

TEST(Term, ConstructorsDoNotEvaluate) {
    const Term c = aenc(m, pubKey(skA));
    EXPECT_EQ(c.kind(), TermKind::AEnc);
    EXPECT_EQ(c.arg(0), m);
    EXPECT_EQ(c.arg(1), pubKey(skA));
    EXPECT_EQ(aenc(pair(m, n), pubKey(skA)).arg(0), pair(m, n));
}

TEST(Term, DoubleEncryptionIsDistinct) {
    const Term once = aenc(m, pubKey(skA));
    const Term twice = aenc(once, pubKey(skA));
    EXPECT_NE(once, twice);
    EXPECT_EQ(adec(twice, skA), once);
}

TEST(Term, AtomsCompareByLabelAndOrigin) {
    EXPECT_EQ(Term::freshName("m", "A"), m);
    EXPECT_NE(Term::freshName("m", "B"), m);
    EXPECT_NE(Term::freshName("A", "A"), Term::secretKey("A"));
}

TEST(Term, AdecEquation) {
    EXPECT_EQ(adec(aenc(m, pubKey(skA)), skA), m);
    EXPECT_EQ(adec(aenc(m, pubKey(skA)), skB), std::nullopt);
    EXPECT_EQ(adec(m, skA), std::nullopt);
    EXPECT_EQ(adec(sign(m, skA), skA), std::nullopt);
    // the key slot must hold pk(sk), not sk itself
    EXPECT_EQ(adec(aenc(m, skA), skA), std::nullopt);
    EXPECT_EQ(adec(aenc(m, pubKey(skA)), pubKey(skA)), std::nullopt);
}

TEST(Term, VerifSignEquation) {
    EXPECT_EQ(verifSign(sign(m, skA), pubKey(skA)), m);
    EXPECT_EQ(verifSign(sign(m, skA), pubKey(skB)), std::nullopt);
    EXPECT_EQ(verifSign(sign(m, skA), skA), std::nullopt);
    EXPECT_EQ(verifSign(aenc(m, pubKey(skA)), pubKey(skA)), std::nullopt);
}

TEST(Term, GetMssgNeedsNoKey) {
    EXPECT_EQ(getMssg(sign(m, skA)), m);
    EXPECT_EQ(getMssg(sign(pair(m, n), skB)), pair(m, n));
    EXPECT_EQ(getMssg(m), std::nullopt);
    EXPECT_EQ(getMssg(aenc(m, pubKey(skA))), std::nullopt);
}

TEST(Term, Projections) {
    EXPECT_EQ(fst(pair(m, n)), m);
    EXPECT_EQ(snd(pair(m, n)), n);
    EXPECT_EQ(fst(m), std::nullopt);
    EXPECT_EQ(snd(sign(m, skA)), std::nullopt);
}

TEST(Term, DepthAndSize) {
    EXPECT_EQ(m.depth(), 0u);
    EXPECT_EQ(pubKey(skA).depth(), 1u);
    const Term t = aenc(sign(pair(m, pubKey(skA)), skA), pubKey(skB));
    EXPECT_EQ(t.depth(), 4u);
    EXPECT_EQ(t.constructorCount(), 5u);
    EXPECT_TRUE(t.hasSubterm(pubKey(skA)));
    EXPECT_FALSE(t.hasSubterm(n));
}

TEST(Term, CanonicalRendering) {
    EXPECT_EQ(aenc(sign(m, skB), pubKey(skA)).render(), "aenc(sign(name:m@A,sk:B),pk(sk:A))");
    EXPECT_EQ(Term::wordList({"kite", "house"}).render(), "words(kite,house)");
    std::ostringstream os;
    os << pair(m, n);
    EXPECT_EQ(os.str(), "pair(name:m@A,name:n@B)");
}

TEST(Term, ParseRejectsMalformed) {
    for (const char* bad : {"", "pair(", "pk(sk:A", "aenc(name:m@A)", "name:m", "sk:", "foo(sk:A)",
                            "pk(sk:A))", "words()", "pair(sk:A,sk:B,sk:C)"}) {
        EXPECT_THROW(parseTerm(bad), ParseError) << bad;
    }
}

TEST(Term, LabelsRejectReservedCharacters) {
    EXPECT_THROW(Term::freshName("a|b", "A"), std::invalid_argument);
    EXPECT_THROW(Term::secretKey("x y"), std::invalid_argument);
    EXPECT_THROW(Term::freshName("m", "A,B"), std::invalid_argument);
}

TEST(Term, AbsentKeyIsNotAKey) {
    EXPECT_FALSE(looksLikePublicKey(absentKey()));
    EXPECT_TRUE(looksLikePublicKey(pubKey(skA)));
    EXPECT_FALSE(looksLikePublicKey(pubKey(m)));
}

TEST(Term, OrderIsTotalAndConsistentWithEquality) {
    support::TermGen gen(11);
    for (int i = 0; i < 500; ++i) {
        const Term a = gen.term(3), b = gen.term(3);
        EXPECT_EQ(a == b, (a <=> b) == 0);
        EXPECT_EQ((a <=> b) < 0, (b <=> a) > 0);
        if (a == b) EXPECT_EQ(a.hash(), b.hash());
    }
}

// Round trips and mismatch cases of the three equations over random terms.
TEST(TermProperty, EquationsOverRandomTerms) {
    support::TermGen gen(2024);
    for (int i = 0; i < 2000; ++i) {
        const Term t = gen.term(5);
        const Term k = gen.secretKey();
        Term other = gen.secretKey();
        while (other == k) other = gen.secretKey();

        EXPECT_EQ(adec(aenc(t, pubKey(k)), k), t);
        EXPECT_EQ(adec(aenc(t, pubKey(k)), other), std::nullopt);
        EXPECT_EQ(verifSign(sign(t, k), pubKey(k)), t);
        EXPECT_EQ(verifSign(sign(t, k), pubKey(other)), std::nullopt);
        EXPECT_EQ(getMssg(sign(t, k)), t);
        EXPECT_EQ(parseTerm(t.render()), t);
        if (!t.is(TermKind::AEnc)) EXPECT_EQ(adec(t, k), std::nullopt);
        if (!t.is(TermKind::Sign)) EXPECT_EQ(getMssg(t), std::nullopt);
    }
}
