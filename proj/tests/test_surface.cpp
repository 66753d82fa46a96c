#include <gtest/gtest.h>

#include "dehn/json.hpp"

using namespace dehn;

namespace {

Word random_word(int genus, int length, Rng& rng) {
    std::vector<int> letters;
    for (int i = 0; i < length; ++i) {
        int x = rng.uniform_int(1, 2 * genus);
        letters.push_back(rng.uniform() < 0.5 ? x : -x);
    }
    return Word::reduce(genus, letters);
}

}  // namespace

TEST(Word, Reduce) {
    EXPECT_TRUE(Word::reduce(1, {1, -1}).empty());
    EXPECT_EQ(Word::reduce(2, {1, 2, -2, 3}).letters(), (std::vector<int>{1, 3}));
    EXPECT_EQ(Word::reduce(2, {1, 2, -2, -1, 4}).letters(), (std::vector<int>{4}));
    EXPECT_THROW(Word::reduce(1, {3}), InvalidArgument);
    EXPECT_THROW(Word::reduce(1, {0}), InvalidArgument);
}

TEST(Word, FreeGroupAxioms) {
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        const int p = rng.uniform_int(1, 4);
        const Word w = random_word(p, rng.uniform_int(0, 20), rng);
        EXPECT_TRUE((w * w.inverse()).empty());
        EXPECT_TRUE((w.inverse() * w).empty());
        const Word u = random_word(p, 10, rng), v = random_word(p, 10, rng);
        EXPECT_EQ(((u * v) * w).letters(), (u * (v * w)).letters());
        for (std::size_t k = 1; k < w.letters().size(); ++k) EXPECT_NE(w.letters()[k], -w.letters()[k - 1]);
    }
}

TEST(Word, GenusMismatch) { EXPECT_THROW(Word::generator(1, 1) * Word::generator(2, 1), InvalidArgument); }

TEST(Relation, Examples) {
    EXPECT_EQ(surface_relation(1).letters(), (std::vector<int>{1, 2, -1, -2}));
    EXPECT_EQ(surface_relation(2).letters(), (std::vector<int>{1, 3, -1, -3, 2, 4, -2, -4}));
    for (int p = 1; p <= 10; ++p) EXPECT_EQ(surface_relation(p).size(), std::size_t(4 * p));
}

TEST(Curves, Words) {
    EXPECT_EQ(curve_word(CurveId::gen(2, 3)).letters(), (std::vector<int>{3}));
    EXPECT_EQ(curve_word(CurveId::sep(2, 1)).letters(), (std::vector<int>{1, 3, -1, -3}));
    for (int p = 2; p <= 6; ++p) {
        const Word joined = curve_word(CurveId::sep(p, p - 1)) * commutator_word(p, p, 2 * p);
        EXPECT_EQ(joined.letters(), surface_relation(p).letters());
    }
    EXPECT_THROW(CurveId::sep(1, 1), InvalidArgument);
    EXPECT_THROW(CurveId::sep(3, 3), InvalidArgument);
    EXPECT_THROW(CurveId::gen(2, 5), InvalidArgument);
}

TEST(Curves, SeparatingIsNullHomologous) {
    for (int p = 2; p <= 6; ++p)
        for (int k = 1; k < p; ++k) {
            const Word w = curve_word(CurveId::sep(p, k));
            for (int i = 1; i <= 2 * p; ++i) EXPECT_EQ(w.exponent_sum(i), 0);
        }
}

TEST(Curves, Disjointness) {
    for (int p = 2; p <= 4; ++p) {
        EXPECT_TRUE(curves_disjoint(CurveId::gen(p, 1), CurveId::gen(p, p + 2)));
        EXPECT_FALSE(curves_disjoint(CurveId::gen(p, 1), CurveId::gen(p, p + 1)));
    }
    EXPECT_TRUE(curves_disjoint(CurveId::sep(2, 1), CurveId::gen(2, 2)));
}

TEST(Curves, DisjointnessSymmetricIrreflexive) {
    for (int p = 1; p <= 4; ++p) {
        const auto curves = registry_curves(p);
        EXPECT_EQ(curves.size(), std::size_t(2 * p + (p - 1)));
        for (const auto& a : curves) {
            EXPECT_FALSE(curves_disjoint(a, a)) << a.label();
            for (const auto& b : curves) EXPECT_EQ(curves_disjoint(a, b), curves_disjoint(b, a));
        }
    }
}

TEST(Json, WordAndCurve) {
    const Word w = surface_relation(2);
    const auto j = io::to_json(w);
    EXPECT_EQ(j.dump(), R"({"genus":2,"letters":[1,3,-1,-3,2,4,-2,-4]})");
    EXPECT_EQ(io::word_from_json(j).letters(), w.letters());
    EXPECT_EQ(io::to_json(CurveId::gen(2, 1)).dump(), R"({"i":1,"kind":"Gen"})");
    EXPECT_EQ(io::to_json(CurveId::sep(3, 2)).dump(), R"({"k":2,"kind":"Sep"})");
    const CurveId c = io::curve_from_json(nlohmann::json::parse(R"({"kind":"Sep","k":1})"), 2);
    EXPECT_EQ(c.label(), CurveId::sep(2, 1).label());
    EXPECT_THROW(io::curve_from_json(nlohmann::json::parse(R"({"kind":"Arc","i":1})"), 2), InvalidArgument);
}
