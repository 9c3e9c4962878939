#ifndef DPCOX_CONE_HPP
#define DPCOX_CONE_HPP

// Nef/ample predicates, fixed-part reduction, section dimensions, and the
// contraction-driven nef decomposition.

#include "curves.hpp"

#include <array>
#include <mutex>

namespace dpcox {

inline bool is_nef(const Surface& s, const DivisorClass& d) { return s.nef(d); }
inline bool is_ample(const Surface& s, const DivisorClass& d) { return s.ample(d); }

inline bool is_big_nef(const Surface& s, const DivisorClass& d)
{
    if (!s.nef(d))
        throw PreconditionError("is_big_nef: class is not nef: " + d.to_string());
    return self_intersection(d) > 0;
}

struct FixedPartDecomposition {
    std::vector<DivisorClass> fixed; // exceptional classes, with repetition
    DivisorClass nef_part;
    bool effective = false;
};

/// Strips exceptional curves that meet the class negatively until it is nef
/// (effective) or has non-positive degree while nonzero (not effective).
inline FixedPartDecomposition fixed_part_reduce(const Surface& s, const DivisorClass& d)
{
    s.context().require_member(d);
    FixedPartDecomposition out;
    DivisorClass cur = d;
    for (;;) {
        if (cur.is_zero()) {
            out.effective = true;
            out.nef_part = cur;
            return out;
        }
        if (anticanonical_degree(cur) <= 0) {
            return {{}, s.context().zero(), false};
        }
        auto [m, c] = s.min_pairing(cur);
        if (m >= 0) {
            out.effective = true;
            out.nef_part = cur;
            return out;
        }
        out.fixed.push_back(s.curves()[c]);
        cur -= s.curves()[c];
    }
}

/// Same loop as fixed_part_reduce without recording the fixed part.
inline bool is_effective(const Surface& s, DivisorClass d)
{
    s.context().require_member(d);
    for (;;) {
        if (d.is_zero())
            return true;
        if (anticanonical_degree(d) <= 0)
            return false;
        if (s.nef(d))
            return true;
        // any curve with negative pairing is a fixed component
        d -= s.curves()[s.min_pairing(d).second];
    }
}

/// Riemann-Roch on a nef class: (N^2 + deg N) / 2 + 1.
inline std::int64_t euler_characteristic(const DivisorClass& n)
{
    return (self_intersection(n) + anticanonical_degree(n)) / 2 + 1;
}

inline std::int64_t h0(const Surface& s, const DivisorClass& d)
{
    const FixedPartDecomposition f = fixed_part_reduce(s, d);
    if (!f.effective)
        return 0;
    if (f.nef_part.is_zero())
        return 1;
    return euler_characteristic(f.nef_part);
}

// --- nef decomposition -----------------------------------------------------

enum class NefKind { conic, twisted_cubic, anticanonical_pullback, minimal_ample };

inline std::string to_string(NefKind k)
{
    switch (k) {
    case NefKind::conic:
        return "conic";
    case NefKind::twisted_cubic:
        return "twisted_cubic";
    case NefKind::anticanonical_pullback:
        return "anticanonical_pullback";
    case NefKind::minimal_ample:
        return "minimal_ample";
    }
    return "?";
}

struct NefTerm {
    std::int64_t coefficient = 0;
    DivisorClass generator;
    NefKind kind = NefKind::conic;
};

struct NefDecomposition {
    std::vector<NefTerm> terms;

    [[nodiscard]] DivisorClass sum(const SurfaceContext& ctx) const
    {
        DivisorClass out = ctx.zero();
        for (const NefTerm& t : terms)
            out += t.coefficient * t.generator;
        return out;
    }
};

/// Shared surfaces of degree 1..7, built on first use.
inline const Surface& surface_of_degree(int degree)
{
    if (degree < 1 || degree > 7)
        throw UnsupportedError("no surface cache entry for degree " + std::to_string(degree));
    static std::array<std::unique_ptr<Surface>, 8> surfaces;
    static std::array<std::once_flag, 8> flags;
    const auto i = static_cast<std::size_t>(degree);
    std::call_once(flags[i], [&] { surfaces[i] = std::make_unique<Surface>(degree); });
    return *surfaces[i];
}

/// Whether (square, degree) is the signature of a generator of the given kind on
/// a surface of the given degree.
inline bool nef_kind_signature_ok(NefKind kind, const DivisorClass& g)
{
    const std::int64_t sq = self_intersection(g);
    const std::int64_t deg = anticanonical_degree(g);
    switch (kind) {
    case NefKind::conic:
        return sq == 0 && deg == 2;
    case NefKind::twisted_cubic:
        return sq == 1 && deg == 3;
    case NefKind::anticanonical_pullback:
    case NefKind::minimal_ample:
        return sq == deg && deg >= 1 && deg <= 3;
    }
    return false;
}

namespace detail {

struct DecompositionBuilder {
    const SurfaceContext& origin;
    std::vector<WeylWord> words; // one per contraction, outermost first
    NefDecomposition out;

    DivisorClass pull_back(DivisorClass y) const
    {
        for (auto it = words.rbegin(); it != words.rend(); ++it)
            y = it->apply_inverse(y.extended());
        return y;
    }

    void emit(std::int64_t coefficient, const DivisorClass& generator_here, NefKind kind)
    {
        if (coefficient < 0)
            throw std::logic_error("negative coefficient in nef decomposition");
        if (coefficient == 0)
            return;
        DivisorClass g = pull_back(generator_here);
        for (NefTerm& t : out.terms) {
            if (t.generator == g && t.kind == kind) {
                t.coefficient += coefficient;
                return;
            }
        }
        out.terms.push_back({coefficient, std::move(g), kind});
    }

    // -K of the current level; anticanonical classes of degree >= 4 are
    // split into conics and twisted cubics on the same level.
    void emit_anticanonical(std::int64_t n, const SurfaceContext& here)
    {
        const int r = here.rank();
        const DivisorClass l = here.line();
        auto e = [&](int i) { return here.exceptional(i); };
        if (here.degree() <= 3) {
            emit(n, here.anticanonical(), words.empty() ? NefKind::minimal_ample : NefKind::anticanonical_pullback);
            return;
        }
        switch (r) {
        case 5:
            emit(n, l - e(1), NefKind::conic);
            emit(n, 2 * l - e(2) - e(3) - e(4) - e(5), NefKind::conic);
            return;
        case 4:
            emit(n, l - e(1), NefKind::conic);
            emit(n, 2 * l - e(2) - e(3) - e(4), NefKind::twisted_cubic);
            return;
        case 3:
            emit(n, l - e(1), NefKind::conic);
            emit(n, l - e(2), NefKind::conic);
            emit(n, l - e(3), NefKind::conic);
            return;
        case 2:
            emit(n, l - e(1), NefKind::conic);
            emit(n, l - e(2), NefKind::conic);
            emit(n, l, NefKind::twisted_cubic);
            return;
        default:
            throw std::logic_error("anticanonical split requested below rank 2");
        }
    }
};

} // namespace detail

/// Peels off the nef threshold times -K, contracts a curve the remainder is
/// trivial on (lexicographically smallest), and recurses; every generator is
/// pulled back to the original basis.
inline NefDecomposition nef_decompose(const Surface& s, const DivisorClass& d)
{
    if (!s.nef(d))
        throw PreconditionError("nef_decompose: class is not nef: " + d.to_string());
    detail::DecompositionBuilder b{s.context(), {}, {}};
    DivisorClass x = d;
    int degree = s.degree();
    while (9 - degree >= 2) {
        const Surface& here = b.words.empty() ? s : surface_of_degree(degree);
        const SurfaceContext& ctx = here.context();
        const std::int64_t n = here.min_pairing(x).first;
        b.emit_anticanonical(n, ctx);
        x += n * ctx.canonical();
        if (x.is_zero())
            return std::move(b.out);
        if (self_intersection(x) == 0) {
            const std::int64_t m = anticanonical_degree(x) / 2;
            DivisorClass q = x;
            for (std::size_t i = 0; i < q.size(); ++i) {
                if (q[i] % m != 0)
                    throw std::logic_error("square-zero remainder is not a conic multiple");
                q.set(i, q[i] / m);
            }
            b.emit(m, q, NefKind::conic);
            return std::move(b.out);
        }
        std::size_t c0 = here.curve_count();
        for (std::size_t c = 0; c < here.curve_count(); ++c) {
            if (here.pairing(x, c) == 0) {
                c0 = c;
                break;
            }
        }
        if (c0 == here.curve_count())
            throw std::logic_error("nef remainder meets every curve positively");
        const DivisorClass& curve = here.curves()[c0];
        if (ctx.rank() == 2 && curve[0] == 1) {
            // L - E1 - E2 on the plane blown up twice: the contraction is
            // P1 x P1 and x = alpha (L - E1) + beta (L - E2).
            b.emit(-x[1], ctx.line() - ctx.exceptional(1), NefKind::conic);
            b.emit(-x[2], ctx.line() - ctx.exceptional(2), NefKind::conic);
            return std::move(b.out);
        }
        WeylWord w = normalizing_word(ctx, curve);
        x = w.apply(x).truncated();
        b.words.push_back(std::move(w));
        ++degree;
    }
    SurfaceContext here(degree);
    if (here.rank() == 1) {
        // a L - b E with 0 <= b <= a; minimal ample 2L - E = L + (L - E)
        const std::int64_t a = x[0];
        const std::int64_t e = -std::int64_t{x[1]};
        const DivisorClass l = here.line();
        const DivisorClass fiber = l - here.exceptional(1);
        if (a >= 2 * e) {
            b.emit(e, l, NefKind::twisted_cubic);
            b.emit(e, fiber, NefKind::conic);
            b.emit(a - 2 * e, l, NefKind::twisted_cubic);
        }
        else {
            b.emit(a - e, l, NefKind::twisted_cubic);
            b.emit(a - e, fiber, NefKind::conic);
            b.emit(2 * e - a, fiber, NefKind::conic);
        }
    }
    else {
        b.emit(x[0], here.line(), NefKind::twisted_cubic);
    }
    return std::move(b.out);
}

/// Exact re-sum, nonnegative coefficients, nef generators with the right signature.
inline bool verify_nef_decomposition(const Surface& s, const DivisorClass& d, const NefDecomposition& dec)
{
    if (dec.sum(s.context()) != d)
        return false;
    for (const NefTerm& t : dec.terms) {
        if (t.coefficient < 0 || !s.nef(t.generator) || !nef_kind_signature_ok(t.kind, t.generator))
            return false;
    }
    return true;
}

// --- degree two nef classes ------------------------------------------------

enum class DegreeTwoKind { conic, anticanonical, anticanonical_plus_curve, twice_anticanonical };

inline std::string to_string(DegreeTwoKind k)
{
    switch (k) {
    case DegreeTwoKind::conic:
        return "Q";
    case DegreeTwoKind::anticanonical:
        return "-K";
    case DegreeTwoKind::anticanonical_plus_curve:
        return "-K+E";
    case DegreeTwoKind::twice_anticanonical:
        return "-2K";
    }
    return "?";
}

struct DegreeTwoClass {
    DivisorClass cls;
    DegreeTwoKind kind;
};

/// Every nef class of anticanonical degree two, sorted by class.
inline std::vector<DegreeTwoClass> classify_nef_degree2(const Surface& s)
{
    const int d = s.degree();
    if (d < 1 || d > 5)
        throw UnsupportedError("classify_nef_degree2 covers degrees 1..5");
    const SurfaceContext& ctx = s.context();
    std::vector<DegreeTwoClass> out;
    // Hodge index: D^2 <= (D.K)^2 / K^2 = 4 / d
    for (std::int64_t sq = 0; sq <= 4 / d; ++sq) {
        for_each_class(ctx, sq, 2, [&](const DivisorClass& c) {
            if (!s.nef(c))
                return;
            DegreeTwoKind kind;
            if (sq == 0)
                kind = DegreeTwoKind::conic;
            else if (d == 2 && c == ctx.anticanonical())
                kind = DegreeTwoKind::anticanonical;
            else if (d == 1 && c == 2 * ctx.anticanonical())
                kind = DegreeTwoKind::twice_anticanonical;
            else if (d == 1 && s.curves().contains(c + ctx.canonical()))
                kind = DegreeTwoKind::anticanonical_plus_curve;
            else
                throw std::logic_error("unexpected nef class of degree two: " + c.to_string());
            out.push_back({c, kind});
        });
    }
    std::sort(out.begin(), out.end(), [](const DegreeTwoClass& a, const DegreeTwoClass& b) { return a.cls < b.cls; });
    return out;
}

} // namespace dpcox

#endif
