#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace dpcox;

TEST(Lattice, CanonicalSquareIsDegree)
{
    for (int d = 1; d <= 9; ++d) {
        SurfaceContext ctx(d);
        EXPECT_EQ(self_intersection(ctx.canonical()), d);
        EXPECT_EQ(anticanonical_degree(ctx.anticanonical()), d);
        EXPECT_EQ(ctx.rank(), 9 - d);
    }
}

TEST(Lattice, RejectsBadDegreesAndLengths)
{
    EXPECT_THROW(SurfaceContext(0), UnsupportedError);
    EXPECT_THROW(SurfaceContext(10), UnsupportedError);
    SurfaceContext a(1), b(2);
    EXPECT_THROW(intersect(a.line(), b.line()), ContextError);
    EXPECT_THROW(a.require_member(b.line()), ContextError);
    EXPECT_THROW((void)a.exceptional(9), ContextError);
}

TEST(Lattice, CheckedArithmetic)
{
    SurfaceContext ctx(8);
    const DivisorClass big({2'000'000'000, 0});
    EXPECT_THROW(big + big, std::overflow_error);
    const DivisorClass wide({2'000'000'000, 2'000'000'000});
    EXPECT_EQ(self_intersection(wide), 0);
    EXPECT_EQ(intersect(ctx.line(), 5 * ctx.line() - ctx.exceptional(1)), 5);
}

TEST(Lattice, BasisPairings)
{
    SurfaceContext ctx(3);
    EXPECT_EQ(self_intersection(ctx.line()), 1);
    for (int i = 1; i <= ctx.rank(); ++i) {
        EXPECT_EQ(self_intersection(ctx.exceptional(i)), -1);
        EXPECT_EQ(anticanonical_degree(ctx.exceptional(i)), 1);
        EXPECT_EQ(intersect(ctx.line(), ctx.exceptional(i)), 0);
    }
    EXPECT_EQ(anticanonical_degree(ctx.line()), 3);
}

TEST(LatticeProperty, FormIsSymmetricAndBilinear)
{
    std::mt19937_64 rng(11);
    for (int d = 1; d <= 9; ++d) {
        SurfaceContext ctx(d);
        for (int t = 0; t < 500; ++t) {
            const auto a = oracle::random_class(rng, ctx, 50);
            const auto b = oracle::random_class(rng, ctx, 50);
            const auto c = oracle::random_class(rng, ctx, 50);
            EXPECT_EQ(intersect(a, b), intersect(b, a));
            EXPECT_EQ(intersect(a + b, c), intersect(a, c) + intersect(b, c));
            EXPECT_EQ(intersect(3 * a, b), 3 * intersect(a, b));
            EXPECT_EQ(anticanonical_degree(a), -intersect(ctx.canonical(), a));
        }
    }
}

TEST(LatticeProperty, ReflectionsAreIsometricInvolutions)
{
    std::mt19937_64 rng(12);
    for (int d = 1; d <= 6; ++d) {
        SurfaceContext ctx(d);
        for (int s = 0; s < ctx.rank(); ++s) {
            const Root root = simple_root(ctx, s);
            EXPECT_EQ(reflect(ctx.canonical(), root), ctx.canonical());
            for (int t = 0; t < 200; ++t) {
                const auto a = oracle::random_class(rng, ctx, 40);
                const auto b = oracle::random_class(rng, ctx, 40);
                const auto ra = reflect(a, root);
                EXPECT_EQ(intersect(ra, reflect(b, root)), intersect(a, b));
                EXPECT_EQ(reflect(ra, root), a);
                EXPECT_EQ(WeylWord::apply_simple(a, s), ra);
            }
        }
    }
}

TEST(Lattice, RootRejectsNonRoots)
{
    SurfaceContext ctx(1);
    EXPECT_THROW(Root(ctx.exceptional(1)), PreconditionError);
    EXPECT_NO_THROW(Root(ctx.exceptional(1) - ctx.exceptional(2)));
}

TEST(Lattice, NormalizingWordSendsCurvesToLastBasisVector)
{
    for (int d = 1; d <= 7; ++d) {
        SurfaceContext ctx(d);
        const auto curves = oracle::box_search(ctx, -1, 1, -1, 7, -4, 2);
        for (const DivisorClass& e : curves) {
            if (ctx.rank() == 2 && e[0] == 1) {
                EXPECT_THROW(normalizing_word(ctx, e), PreconditionError);
                continue;
            }
            const WeylWord w = normalizing_word(ctx, e);
            EXPECT_EQ(w.apply(e), ctx.exceptional(ctx.rank()));
            EXPECT_EQ(w.apply_inverse(w.apply(e)), e);
        }
    }
}

TEST(Lattice, ContractionPullBackRespectsTheForm)
{
    SurfaceContext ctx(1);
    const DivisorClass e = ctx.make({6, -3, -2, -2, -2, -2, -2, -2, -2});
    const DivisorClass x = ctx.make({4, -1, -1, -1, -1, -2, 0, 0, -1});
    const std::vector<DivisorClass> classes{x};
    const Contraction c = contract(ctx, e, classes);
    EXPECT_EQ(c.target.degree(), 2);
    const DivisorClass back = c.pull_back(c.images[0]);
    EXPECT_EQ(intersect(back, e), 0);
    EXPECT_EQ(back, x + intersect(x, e) * e);
    EXPECT_EQ(self_intersection(c.images[0]), self_intersection(x) + intersect(x, e) * intersect(x, e));
}
