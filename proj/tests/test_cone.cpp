#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace dpcox;

namespace {

std::vector<DivisorClass> nef_generators(const Surface& s)
{
    std::vector<DivisorClass> g = enumerate_conics(s).classes();
    const auto cubics = enumerate_twisted_cubics(s).classes();
    g.insert(g.end(), cubics.begin(), cubics.end());
    g.push_back(s.context().anticanonical());
    return g;
}

} // namespace

TEST(Cone, H0AnchorsInDegreeOne)
{
    const Surface& s = surface_of_degree(1);
    const SurfaceContext& ctx = s.context();
    const DivisorClass mk = ctx.anticanonical();
    const DivisorClass e = s.curves()[0];
    const DivisorClass q = enumerate_conics(s)[0];
    EXPECT_EQ(h0(s, q), 2);
    EXPECT_EQ(h0(s, mk), 2);
    EXPECT_EQ(h0(s, 2 * mk), 4);
    EXPECT_EQ(h0(s, 3 * mk), 7);
    EXPECT_EQ(h0(s, mk + e), 3);
    EXPECT_EQ(h0(s, 2 * mk + e), 6);
    EXPECT_EQ(h0(s, mk + q), 5);
    EXPECT_EQ(h0(s, e), 1);
    EXPECT_EQ(h0(s, ctx.zero()), 1);
    EXPECT_EQ(h0(s, -1 * e), 0);
    EXPECT_EQ(h0(s, ctx.canonical()), 0);
}

TEST(Cone, H0OfPlaneCurves)
{
    // d L on the plane blown up: h0 = (d+1)(d+2)/2 for d >= 0
    for (int deg = 1; deg <= 7; ++deg) {
        const Surface& s = surface_of_degree(deg);
        for (std::int64_t n = 0; n <= 6; ++n)
            EXPECT_EQ(h0(s, n * s.context().line()), (n + 1) * (n + 2) / 2);
    }
}

TEST(Cone, FixedPartReduction)
{
    const Surface& s = surface_of_degree(3);
    const SurfaceContext& ctx = s.context();
    const DivisorClass e1 = ctx.exceptional(1);
    const DivisorClass d = ctx.line() + 2 * e1;
    const FixedPartDecomposition f = fixed_part_reduce(s, d);
    ASSERT_TRUE(f.effective);
    EXPECT_EQ(f.fixed.size(), 2u);
    EXPECT_EQ(f.nef_part, ctx.line());
    EXPECT_TRUE(is_effective(s, d));
    EXPECT_FALSE(is_effective(s, ctx.line() - 2 * e1 - ctx.exceptional(2)));
    EXPECT_FALSE(fixed_part_reduce(s, -1 * ctx.line()).effective);
}

TEST(Cone, PredicatesAndErrors)
{
    const Surface& s = surface_of_degree(2);
    const SurfaceContext& ctx = s.context();
    EXPECT_TRUE(is_ample(s, ctx.anticanonical()));
    EXPECT_TRUE(is_nef(s, ctx.line()));
    EXPECT_FALSE(is_ample(s, ctx.line()));
    EXPECT_TRUE(is_big_nef(s, ctx.line()));
    EXPECT_FALSE(is_big_nef(s, ctx.line() - ctx.exceptional(1)));
    EXPECT_THROW(is_big_nef(s, ctx.exceptional(1)), PreconditionError);
    EXPECT_THROW(h0(s, SurfaceContext(3).line()), ContextError);
    EXPECT_THROW(nef_decompose(s, ctx.exceptional(1)), PreconditionError);
}

TEST(ConeProperty, NegatiDropsNegativeCurves)
{
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> deg_dist(1, 5);
    std::size_t checked = 0;
    while (checked < 10'000) {
        const Surface& s = surface_of_degree(deg_dist(rng));
        const DivisorClass d = oracle::random_class(rng, s.context(), 6) + 2 * s.context().anticanonical();
        const DivisorClass& e = s.curves()[rng() % s.curve_count()];
        if (intersect(d, e) >= 0)
            continue;
        ASSERT_EQ(h0(s, d), h0(s, d - e)) << d.to_string() << " " << e.to_string();
        ++checked;
    }
}

TEST(ConeProperty, NefDecompositionReconstructs)
{
    std::mt19937_64 rng(32);
    for (int d = 1; d <= 7; ++d) {
        const Surface& s = surface_of_degree(d);
        const auto gens = nef_generators(s);
        for (int t = 0; t < 300; ++t) {
            const DivisorClass x = oracle::random_nef(rng, s, 30, gens);
            const NefDecomposition dec = nef_decompose(s, x);
            ASSERT_TRUE(verify_nef_decomposition(s, x, dec)) << x.to_string();
            for (const NefTerm& term : dec.terms)
                EXPECT_GT(term.coefficient, 0);
        }
    }
}

TEST(Cone, DecompositionOfAnticanonicalMultiples)
{
    for (int d = 1; d <= 7; ++d) {
        const Surface& s = surface_of_degree(d);
        const DivisorClass x = 3 * s.context().anticanonical();
        EXPECT_TRUE(verify_nef_decomposition(s, x, nef_decompose(s, x)));
    }
    const Surface& s1 = surface_of_degree(1);
    const NefDecomposition dec = nef_decompose(s1, 2 * s1.context().anticanonical());
    ASSERT_EQ(dec.terms.size(), 1u);
    EXPECT_EQ(dec.terms[0].coefficient, 2);
    EXPECT_EQ(dec.terms[0].kind, NefKind::minimal_ample);
}

TEST(Cone, DegreeTwoClassification)
{
    const std::map<int, std::map<DegreeTwoKind, std::size_t>> expected{
        {1, {{DegreeTwoKind::conic, 2160}, {DegreeTwoKind::anticanonical_plus_curve, 240}, {DegreeTwoKind::twice_anticanonical, 1}}},
        {2, {{DegreeTwoKind::conic, 126}, {DegreeTwoKind::anticanonical, 1}}},
        {3, {{DegreeTwoKind::conic, 27}}},
        {4, {{DegreeTwoKind::conic, 10}}},
        {5, {{DegreeTwoKind::conic, 5}}},
    };
    for (const auto& [d, want] : expected) {
        const Surface& s = surface_of_degree(d);
        std::map<DegreeTwoKind, std::size_t> got;
        for (const DegreeTwoClass& c : classify_nef_degree2(s)) {
            ++got[c.kind];
            EXPECT_EQ(anticanonical_degree(c.cls), 2);
            EXPECT_TRUE(oracle::nef(s.curves().classes(), c.cls));
        }
        EXPECT_EQ(got, want) << "degree " << d;
    }
}
