#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace dpcox;

namespace {

const std::map<int, std::size_t> paper_exceptional{{1, 240}, {2, 56}, {3, 27}, {4, 16}, {5, 10}, {6, 6}, {7, 3}};
const std::map<int, std::size_t> paper_conics{{1, 2160}, {2, 126}, {3, 27}, {4, 10}, {5, 5}};

std::vector<DivisorClass> nef_filter(const Surface& s, std::vector<DivisorClass> in)
{
    std::erase_if(in, [&](const DivisorClass& d) { return !oracle::nef(s.curves().classes(), d); });
    return in;
}

} // namespace

// Oracle first: a plain box search with generous bounds.
TEST(CurvesOracle, ExceptionalMatchesBoxSearch)
{
    for (int d = 1; d <= 7; ++d) {
        SurfaceContext ctx(d);
        const CurveSet cs = enumerate_exceptional(ctx);
        EXPECT_EQ(cs.classes(), oracle::box_search(ctx, -1, 1, -1, 8, -4, 2)) << "degree " << d;
    }
}

TEST(CurvesOracle, ConicsAndCubicsMatchBoxSearch)
{
    for (int d = 2; d <= 7; ++d) {
        const Surface& s = surface_of_degree(d);
        EXPECT_EQ(enumerate_conics(s).classes(), nef_filter(s, oracle::box_search(s.context(), 0, 2, -1, 8, -4, 2)));
        EXPECT_EQ(enumerate_twisted_cubics(s).classes(),
                  nef_filter(s, oracle::box_search(s.context(), 1, 3, -1, 8, -4, 2)));
    }
}

TEST(Curves, ExceptionalCountsMatchTable1)
{
    for (const auto& [d, n] : paper_exceptional)
        EXPECT_EQ(enumerate_exceptional(SurfaceContext(d)).size(), n) << "degree " << d;
}

TEST(Curves, Table1LCoefficientHistogram)
{
    const CurveSet cs = enumerate_exceptional(SurfaceContext(1));
    std::map<int, int> hist;
    for (const DivisorClass& c : cs)
        ++hist[c[0]];
    const std::map<int, int> expected{{0, 8}, {1, 28}, {2, 56}, {3, 56}, {4, 56}, {5, 28}, {6, 8}};
    EXPECT_EQ(hist, expected);
}

TEST(Curves, DegreeSevenCurvesAreExplicit)
{
    SurfaceContext ctx(7);
    const CurveSet cs = enumerate_exceptional(ctx);
    const std::set<DivisorClass> got(cs.begin(), cs.end());
    const std::set<DivisorClass> want{ctx.exceptional(1), ctx.exceptional(2),
                                      ctx.line() - ctx.exceptional(1) - ctx.exceptional(2)};
    EXPECT_EQ(got, want);
}

TEST(Curves, ConicCountsMatchTable2)
{
    for (const auto& [d, n] : paper_conics)
        EXPECT_EQ(enumerate_conics(surface_of_degree(d)).size(), n) << "degree " << d;
}

TEST(Curves, ConicsAtDegreeSix)
{
    // not in the paper; recorded from the oracle
    EXPECT_EQ(enumerate_conics(surface_of_degree(6)).size(), 3u);
    EXPECT_EQ(enumerate_conics(surface_of_degree(7)).size(), 2u);
}

TEST(Curves, TwistedCubicsContainLineAndSatisfyInvariants)
{
    for (int d = 1; d <= 7; ++d) {
        const Surface& s = surface_of_degree(d);
        const CurveSet cs = enumerate_twisted_cubics(s);
        EXPECT_TRUE(cs.contains(s.context().line()));
        for (const DivisorClass& t : cs) {
            EXPECT_EQ(self_intersection(t), 1);
            EXPECT_EQ(anticanonical_degree(t), 3);
            EXPECT_TRUE(s.nef(t));
        }
    }
}

TEST(Curves, SetsAreSortedAndIndexed)
{
    const Surface& s = surface_of_degree(2);
    for (CurveKind k : {CurveKind::exceptional, CurveKind::conic, CurveKind::twisted_cubic}) {
        const CurveSet cs = enumerate(s, k);
        EXPECT_TRUE(std::is_sorted(cs.begin(), cs.end()));
        for (std::size_t i = 0; i < cs.size(); ++i)
            EXPECT_EQ(cs.index_of(cs[i]), static_cast<int>(i));
    }
    EXPECT_THROW(enumerate_exceptional(SurfaceContext(8)), UnsupportedError);
}

TEST(Curves, PartnerIsAnInvolution)
{
    const Surface& s1 = surface_of_degree(1);
    for (const DivisorClass& c : s1.curves()) {
        const DivisorClass p = partner(s1, c);
        EXPECT_TRUE(s1.curves().contains(p));
        EXPECT_EQ(partner(s1, p), c);
        EXPECT_EQ(intersect(c, p), 3);
    }
    const Surface& s2 = surface_of_degree(2);
    for (const DivisorClass& c : s2.curves()) {
        const DivisorClass p = partner(s2, c);
        EXPECT_TRUE(s2.curves().contains(p));
        EXPECT_EQ(intersect(c, p), 2);
    }
    EXPECT_THROW(partner(surface_of_degree(3), surface_of_degree(3).curves()[0]), UnsupportedError);
    EXPECT_THROW(partner(s1, s1.context().line()), PreconditionError);
}

TEST(Curves, ReducibleFibersPerConic)
{
    for (int d = 1; d <= 5; ++d) {
        const Surface& s = surface_of_degree(d);
        for (const DivisorClass& q : enumerate_conics(s)) {
            const auto fibers = reducible_fibers(s, q);
            ASSERT_EQ(fibers.size(), static_cast<std::size_t>(8 - d));
            for (const auto& f : fibers) {
                EXPECT_EQ(f.s + f.t, q);
                EXPECT_EQ(intersect(f.s, f.t), 1);
                EXPECT_EQ(intersect(f.s, q), 0);
            }
        }
    }
    EXPECT_THROW(reducible_fibers(surface_of_degree(1), surface_of_degree(1).context().line()), PreconditionError);
}

TEST(Curves, DoseSplit)
{
    const std::map<int, DoseSplit> expected{{1, {5, 2}}, {2, {5, 1}}, {3, {5, 0}}};
    for (const auto& [d, want] : expected) {
        const Surface& s = surface_of_degree(d);
        std::size_t pairs = 0;
        for (const DivisorClass& q : enumerate_conics(s))
            for (const DivisorClass& c : s.curves())
                if (intersect(c, q) == 2) {
                    EXPECT_EQ(dose_split(s, q, c), want);
                    ++pairs;
                }
        EXPECT_GT(pairs, 0u) << "degree " << d;
    }
    const Surface& s = surface_of_degree(1);
    const DivisorClass q = s.context().line() - s.context().exceptional(1);
    EXPECT_THROW(dose_split(s, q, s.context().exceptional(2)), PreconditionError);
}

TEST(Curves, TritangentPairs)
{
    const Surface& s = surface_of_degree(1);
    const auto pairs = tritangent_pairs(s);
    ASSERT_EQ(pairs.size(), 120u);
    std::set<DivisorClass> seen;
    for (const auto& [e, f] : pairs) {
        EXPECT_EQ(e + f, -2 * s.context().canonical());
        EXPECT_EQ(intersect(e, f), 3);
        seen.insert(e);
        seen.insert(f);
    }
    EXPECT_EQ(seen.size(), 240u);
    EXPECT_THROW(tritangent_pairs(surface_of_degree(2)), UnsupportedError);
}

TEST(CurvesProperty, KernelsAgreeWithScalarPairings)
{
    std::mt19937_64 rng(21);
    for (int d = 1; d <= 7; ++d) {
        const Surface& s = surface_of_degree(d);
        const auto& curves = s.curves().classes();
        std::vector<std::int32_t> out(s.curve_count());
        for (std::int64_t bound : {3, 20, 700, 40'000, 30'000'000}) {
            for (int t = 0; t < 300; ++t) {
                const DivisorClass raw = oracle::random_class(rng, s.context(), bound);
                // shifted toward the nef cone
                for (const DivisorClass& x : {raw, raw + (2 * bound) * s.context().anticanonical()}) {
                    const std::int64_t m = oracle::min_pairing(curves, x);
                    EXPECT_EQ(s.min_pairing(x).first, m);
                    EXPECT_EQ(s.nef(x), m >= 0);
                    EXPECT_EQ(s.ample(x), m > 0);
                    if (bound <= 40'000) {
                        s.pairings(x, out);
                        for (std::size_t c = 0; c < curves.size(); ++c)
                            ASSERT_EQ(out[c], intersect(x, curves[c]));
                    }
                }
            }
        }
    }
}

TEST(Curves, CacheRoundTrip)
{
    const auto dir = std::filesystem::temp_directory_path() / "dpcox_cache_test";
    std::filesystem::remove_all(dir);
    const Surface& s = surface_of_degree(3);
    const CurveSet fresh = load_curve_set(s, CurveKind::conic, dir);
    const auto path = curve_cache_path(dir, 3, CurveKind::conic);
    ASSERT_TRUE(std::filesystem::exists(path));
    EXPECT_EQ(read_curve_cache(path).classes(), fresh.classes());
    EXPECT_EQ(load_curve_set(s, CurveKind::conic, dir).classes(), fresh.classes());

    std::ofstream(path) << R"({"format_version": 2, "degree": 3, "kind": "conic", "classes": []})";
    EXPECT_THROW(read_curve_cache(path), CacheFormatError);
    EXPECT_EQ(load_curve_set(s, CurveKind::conic, dir).classes(), fresh.classes());
    EXPECT_EQ(read_curve_cache(path).classes(), fresh.classes());

    std::ofstream(path) << "not json";
    EXPECT_THROW(read_curve_cache(path), CacheFormatError);
    std::filesystem::remove_all(dir);
}
