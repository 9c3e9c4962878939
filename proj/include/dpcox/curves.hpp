#ifndef DPCOX_CURVES_HPP
#define DPCOX_CURVES_HPP

#include "lattice.hpp"

#include <json.hpp>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace dpcox {

/// Visits every class with the given self-intersection and anticanonical
/// degree. The L-coefficient range comes from Cauchy-Schwarz on the E-part,
/// (deg - 3a)^2 <= r (a^2 - square); the E-coordinates are filled by
/// backtracking with the same bound on every suffix.
template <typename Visitor>
void for_each_class(const SurfaceContext& ctx, std::int64_t square, std::int64_t degree, Visitor&& visit)
{
    const int r = ctx.rank();
    const std::int64_t g = degree;
    auto admissible = [&](std::int64_t a) {
        const std::int64_t q = a * a - square;
        const std::int64_t s = g - 3 * a;
        return q >= 0 && s * s <= r * q;
    };
    // (9 - r) a^2 - 6 g a + g^2 + r s <= 0
    const double qa = 9.0 - r;
    const double disc = 36.0 * g * g - 4.0 * qa * (double(g) * g + double(r) * square);
    if (disc < 0)
        return;
    const auto lo = static_cast<std::int64_t>(std::floor((6.0 * g - std::sqrt(disc)) / (2 * qa))) - 1;
    const auto hi = static_cast<std::int64_t>(std::ceil((6.0 * g + std::sqrt(disc)) / (2 * qa))) + 1;

    std::array<std::int64_t, DivisorClass::max_length> buf{};
    // rem_sum / rem_sq: what the coordinates i..r still have to contribute
    auto rec = [&](auto&& self, int i, std::int64_t rem_sum, std::int64_t rem_sq) -> void {
        const int left = r - i + 1;
        if (left == 0) {
            if (rem_sum == 0 && rem_sq == 0)
                visit(DivisorClass(std::span<const std::int64_t>(buf.data(), static_cast<std::size_t>(r) + 1)));
            return;
        }
        if (rem_sq < 0 || rem_sum * rem_sum > left * rem_sq || ((rem_sum - rem_sq) & 1))
            return;
        const auto bound = static_cast<std::int64_t>(std::sqrt(static_cast<double>(rem_sq)) + 1e-9);
        for (std::int64_t v = -bound; v <= bound; ++v) {
            const std::int64_t s2 = rem_sum - v;
            const std::int64_t q2 = rem_sq - v * v;
            if (q2 < 0)
                continue;
            if (s2 * s2 > (left - 1) * q2)
                continue;
            buf[static_cast<std::size_t>(i)] = v;
            self(self, i + 1, s2, q2);
        }
    };
    for (std::int64_t a = lo; a <= hi; ++a) {
        if (!admissible(a))
            continue;
        buf[0] = a;
        rec(rec, 1, g - 3 * a, a * a - square);
    }
}

enum class CurveKind { exceptional, conic, twisted_cubic };

inline std::string to_string(CurveKind k)
{
    switch (k) {
    case CurveKind::exceptional:
        return "exceptional";
    case CurveKind::conic:
        return "conic";
    case CurveKind::twisted_cubic:
        return "twisted_cubic";
    }
    return "?";
}

inline CurveKind curve_kind_from_string(const std::string& s)
{
    if (s == "exceptional")
        return CurveKind::exceptional;
    if (s == "conic")
        return CurveKind::conic;
    if (s == "twisted_cubic" || s == "cubic")
        return CurveKind::twisted_cubic;
    throw std::invalid_argument("unknown curve kind '" + s + "'");
}

/// Sorted, deduplicated classes of one kind with stable ids (position in the sorted list).
class CurveSet {
public:
    CurveSet(SurfaceContext ctx, CurveKind kind, std::vector<DivisorClass> classes)
        : context_(ctx)
        , kind_(kind)
        , classes_(std::move(classes))
    {
        std::sort(classes_.begin(), classes_.end());
        classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
        index_.reserve(classes_.size());
        for (std::size_t i = 0; i < classes_.size(); ++i) {
            ctx.require_member(classes_[i]);
            index_.emplace(classes_[i], static_cast<int>(i));
        }
    }

    [[nodiscard]] const SurfaceContext& context() const noexcept { return context_; }
    [[nodiscard]] CurveKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::vector<DivisorClass>& classes() const noexcept { return classes_; }
    [[nodiscard]] std::size_t size() const noexcept { return classes_.size(); }
    [[nodiscard]] const DivisorClass& operator[](std::size_t i) const { return classes_.at(i); }
    [[nodiscard]] auto begin() const noexcept { return classes_.begin(); }
    [[nodiscard]] auto end() const noexcept { return classes_.end(); }

    [[nodiscard]] std::optional<int> index_of(const DivisorClass& d) const
    {
        auto it = index_.find(d);
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }
    [[nodiscard]] bool contains(const DivisorClass& d) const { return index_.contains(d); }

    friend bool operator==(const CurveSet& a, const CurveSet& b)
    {
        return a.context_ == b.context_ && a.kind_ == b.kind_ && a.classes_ == b.classes_;
    }

private:
    SurfaceContext context_;
    CurveKind kind_;
    std::vector<DivisorClass> classes_;
    std::unordered_map<DivisorClass, int, DivisorClassHash> index_;
};

inline void require_supported_degree(const SurfaceContext& ctx)
{
    if (ctx.degree() < 1 || ctx.degree() > 7)
        throw UnsupportedError("curve enumeration needs degree 1..7, got " + std::to_string(ctx.degree()));
}

inline CurveSet enumerate_exceptional(const SurfaceContext& ctx)
{
    require_supported_degree(ctx);
    std::vector<DivisorClass> out;
    for_each_class(ctx, -1, 1, [&](const DivisorClass& d) { out.push_back(d); });
    return CurveSet(ctx, CurveKind::exceptional, std::move(out));
}

/// A degree 1..7 surface with its exceptional curves and a dense
/// intersection table, shared by every predicate that sweeps over curves.
class Surface {
public:
    explicit Surface(int degree)
        : Surface(SurfaceContext(degree))
    {
    }

    explicit Surface(const SurfaceContext& ctx)
        : Surface(enumerate_exceptional(ctx))
    {
    }

    explicit Surface(CurveSet exceptional)
        : context_(exceptional.context())
        , curves_(std::move(exceptional))
    {
        if (curves_.kind() != CurveKind::exceptional)
            throw PreconditionError("Surface needs the exceptional curve set");
        const std::size_t n = curves_.size();
        const std::size_t len = context_.length();
        dual_.resize(n * len);
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t i = 0; i < len; ++i)
                dual_[c * len + i] = (i == 0 ? 1 : -1) * curves_[c][i];
        meet_.resize(n * n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                meet_[a * n + b] = static_cast<std::int8_t>(intersect(curves_[a], curves_[b]));
        // Column j holds coordinate j of every dual row; padding repeats curve 0.
        padded_ = (n + block - 1) / block * block;
        columns_.resize(len * padded_);
        columns16_.resize(len * padded_);
        for (std::size_t j = 0; j < len; ++j)
            for (std::size_t c = 0; c < padded_; ++c) {
                columns_[j * padded_ + c] = dual_[(c < n ? c : 0) * len + j];
                columns16_[j * padded_ + c] = static_cast<std::int16_t>(columns_[j * padded_ + c]);
            }
    }

    [[nodiscard]] const SurfaceContext& context() const noexcept { return context_; }
    [[nodiscard]] int degree() const noexcept { return context_.degree(); }
    [[nodiscard]] const CurveSet& curves() const noexcept { return curves_; }
    [[nodiscard]] std::size_t curve_count() const noexcept { return curves_.size(); }

    /// <d, C_i> without overflow checks; |coords| <= 1e4 keeps this far from int64 limits.
    [[nodiscard]] std::int64_t pairing(const DivisorClass& d, std::size_t curve) const noexcept
    {
        const std::size_t len = context_.length();
        const std::int32_t* w = dual_.data() + curve * len;
        std::int64_t s = 0;
        for (std::size_t i = 0; i < len; ++i)
            s += std::int64_t{d[i]} * w[i];
        return s;
    }

    /// Intersection number of two exceptional curves, by id.
    [[nodiscard]] int meet(std::size_t a, std::size_t b) const noexcept { return meet_[a * curves_.size() + b]; }
    [[nodiscard]] const std::int8_t* meet_row(std::size_t a) const noexcept { return meet_.data() + a * curves_.size(); }

    /// Smallest pairing with an exceptional curve, and the first curve attaining it.
    [[nodiscard]] std::pair<std::int64_t, std::size_t> min_pairing(const DivisorClass& d) const
    {
        context_.require_member(d);
        std::int64_t best = std::numeric_limits<std::int64_t>::max();
        std::size_t arg = 0;
        if (small(d)) {
            std::array<std::int32_t, block> acc{};
            for (std::size_t c0 = 0; c0 < curves_.size(); c0 += block) {
                const std::int32_t m = block_pairings(d, c0, acc);
                if (m < best) {
                    best = m;
                    arg = c0 + static_cast<std::size_t>(std::find(acc.begin(), acc.end(), m) - acc.begin());
                }
            }
            return {best, arg};
        }
        for (std::size_t c = 0; c < curves_.size(); ++c) {
            const std::int64_t v = pairing(d, c);
            if (v < best) {
                best = v;
                arg = c;
            }
        }
        return {best, arg};
    }

    /// out[i] = <d, C_i> for every curve; throws if a value leaves int32.
    void pairings(const DivisorClass& d, std::span<std::int32_t> out) const
    {
        context_.require_member(d);
        if (out.size() < curves_.size())
            throw PreconditionError("pairings: output too short");
        if (small(d)) {
            const std::size_t width = padded_;
            std::array<std::int32_t, max_padded> acc{};
            std::int32_t* sum = acc.data();
            for (std::size_t j = 0; j < d.size(); ++j) {
                const std::int32_t dj = d[j];
                const std::int32_t* col = columns_.data() + j * width;
                for (std::size_t k = 0; k < width; ++k)
                    sum[k] += dj * col[k];
            }
            std::copy_n(acc.begin(), curves_.size(), out.begin());
            return;
        }
        for (std::size_t c = 0; c < curves_.size(); ++c)
            out[c] = detail::narrow_checked(pairing(d, c));
    }

    [[nodiscard]] bool nef(const DivisorClass& d) const { return min_pairing_at_least(d, 0); }
    [[nodiscard]] bool ample(const DivisorClass& d) const { return min_pairing_at_least(d, 1); }

private:
    static constexpr std::size_t block = 32;
    static constexpr std::size_t max_padded = 256; // 240 curves in degree one

    // Coordinates this small keep every pairing inside int32.
    static bool small(const DivisorClass& d) noexcept
    {
        for (std::size_t i = 0; i < d.size(); ++i)
            if (d[i] > (1 << 24) || d[i] < -(1 << 24))
                return false;
        return true;
    }

    std::int32_t block_pairings(const DivisorClass& d, std::size_t c0, std::array<std::int32_t, block>& acc) const
    {
        acc.fill(0);
        for (std::size_t j = 0; j < d.size(); ++j) {
            const std::int32_t dj = d[j];
            const std::int32_t* col = columns_.data() + j * padded_ + c0;
            for (std::size_t k = 0; k < block; ++k)
                acc[k] += dj * col[k];
        }
        return *std::min_element(acc.begin(), acc.end());
    }

    // |coords| <= 600 keeps every pairing inside int16 (curve coords are at most 6).
    static bool tiny(const DivisorClass& d) noexcept
    {
        for (std::size_t i = 0; i < d.size(); ++i)
            if (d[i] > 600 || d[i] < -600)
                return false;
        return true;
    }

    // 32 curves at a time in four 8-lane registers.
    template <std::size_t Len>
    bool tiny_at_least(const DivisorClass& d, std::int16_t lim) const
    {
        using v8 = std::int16_t __attribute__((vector_size(16)));
        std::array<v8, Len> dj;
        for (std::size_t j = 0; j < Len; ++j)
            dj[j] = v8{} + static_cast<std::int16_t>(d[j]);
        const std::size_t width = padded_;
        for (std::size_t c0 = 0; c0 < width; c0 += block) {
            v8 acc[4] = {};
            for (std::size_t j = 0; j < Len; ++j) {
                const std::int16_t* col = columns16_.data() + j * width + c0;
                for (int q = 0; q < 4; ++q) {
                    v8 cv;
                    std::memcpy(&cv, col + 8 * q, sizeof cv);
                    acc[q] += dj[j] * cv;
                }
            }
            const v8 low = (acc[0] < lim) | (acc[1] < lim) | (acc[2] < lim) | (acc[3] < lim);
            std::uint64_t bits[2];
            std::memcpy(bits, &low, sizeof bits);
            if ((bits[0] | bits[1]) != 0)
                return false;
        }
        return true;
    }

    bool min_pairing_at_least(const DivisorClass& d, std::int64_t bound) const
    {
        context_.require_member(d);
        if (tiny(d)) {
            const auto lim = static_cast<std::int16_t>(bound);
            switch (d.size()) {
            case 1: return tiny_at_least<1>(d, lim);
            case 2: return tiny_at_least<2>(d, lim);
            case 3: return tiny_at_least<3>(d, lim);
            case 4: return tiny_at_least<4>(d, lim);
            case 5: return tiny_at_least<5>(d, lim);
            case 6: return tiny_at_least<6>(d, lim);
            case 7: return tiny_at_least<7>(d, lim);
            case 8: return tiny_at_least<8>(d, lim);
            default: return tiny_at_least<9>(d, lim);
            }
        }
        if (small(d)) {
            std::array<std::int32_t, block> acc{};
            for (std::size_t c0 = 0; c0 < curves_.size(); c0 += block)
                if (block_pairings(d, c0, acc) < bound)
                    return false;
            return true;
        }
        for (std::size_t c = 0; c < curves_.size(); ++c)
            if (pairing(d, c) < bound)
                return false;
        return true;
    }

    SurfaceContext context_;
    CurveSet curves_;
    std::vector<std::int32_t> dual_;
    std::vector<std::int8_t> meet_;
    std::vector<std::int32_t> columns_;
    std::vector<std::int16_t> columns16_;
    std::size_t padded_ = 0;
};

inline CurveSet enumerate_conics(const Surface& s)
{
    std::vector<DivisorClass> out;
    for_each_class(s.context(), 0, 2, [&](const DivisorClass& d) {
        if (s.nef(d))
            out.push_back(d);
    });
    return CurveSet(s.context(), CurveKind::conic, std::move(out));
}

inline CurveSet enumerate_twisted_cubics(const Surface& s)
{
    std::vector<DivisorClass> out;
    for_each_class(s.context(), 1, 3, [&](const DivisorClass& d) {
        if (s.nef(d))
            out.push_back(d);
    });
    return CurveSet(s.context(), CurveKind::twisted_cubic, std::move(out));
}

inline CurveSet enumerate(const Surface& s, CurveKind kind)
{
    switch (kind) {
    case CurveKind::exceptional:
        return s.curves();
    case CurveKind::conic:
        return enumerate_conics(s);
    case CurveKind::twisted_cubic:
        return enumerate_twisted_cubics(s);
    }
    throw std::logic_error("unreachable");
}

inline void require_exceptional(const Surface& s, const DivisorClass& c)
{
    s.context().require_member(c);
    if (!is_exceptional_class(c))
        throw PreconditionError("not an exceptional class: " + c.to_string());
}

inline bool is_conic_class(const Surface& s, const DivisorClass& q)
{
    return self_intersection(q) == 0 && anticanonical_degree(q) == 2 && s.nef(q);
}

/// -2K - c in degree 1, -K - c in degree 2.
inline DivisorClass partner(const Surface& s, const DivisorClass& c)
{
    const int d = s.degree();
    if (d != 1 && d != 2)
        throw UnsupportedError("partner curves exist only in degree 1 and 2");
    require_exceptional(s, c);
    const DivisorClass minus_k = s.context().anticanonical();
    return (d == 1 ? 2 * minus_k : minus_k) - c;
}

struct ReducibleFiber {
    DivisorClass s;
    DivisorClass t;
};

/// Unordered pairs {S, T} of exceptional classes with S + T = q, ordered by S < T.
inline std::vector<ReducibleFiber> reducible_fibers(const Surface& s, const DivisorClass& q)
{
    s.context().require_member(q);
    if (!is_conic_class(s, q))
        throw PreconditionError("not a conic: " + q.to_string());
    std::vector<ReducibleFiber> out;
    for (const DivisorClass& c : s.curves()) {
        const DivisorClass other = q - c;
        if (c < other && s.curves().contains(other))
            out.push_back({c, other});
    }
    return out;
}

struct DoseSplit {
    int both = 0;
    int onesided = 0;
    friend bool operator==(const DoseSplit&, const DoseSplit&) = default;
};

inline DoseSplit dose_split(const Surface& s, const DivisorClass& q, const DivisorClass& c)
{
    require_exceptional(s, c);
    if (s.degree() > 3)
        throw PreconditionError("no exceptional curve meets a conic twice above degree 3");
    if (intersect(c, q) != 2)
        throw PreconditionError("dose_split needs C.Q = 2");
    DoseSplit out;
    for (const ReducibleFiber& f : reducible_fibers(s, q)) {
        if (intersect(c, f.s) >= 1 && intersect(c, f.t) >= 1)
            ++out.both;
        else
            ++out.onesided;
    }
    return out;
}

/// Pairs {E, -2K - E} on a degree one surface, ordered by E < E'.
inline std::vector<std::pair<DivisorClass, DivisorClass>> tritangent_pairs(const Surface& s)
{
    if (s.degree() != 1)
        throw UnsupportedError("tritangent pairs need a degree one surface");
    std::vector<std::pair<DivisorClass, DivisorClass>> out;
    for (const DivisorClass& e : s.curves()) {
        DivisorClass p = partner(s, e);
        if (e < p)
            out.emplace_back(e, std::move(p));
    }
    return out;
}

// --- cache -----------------------------------------------------------------

inline constexpr int curve_cache_format_version = 1;

struct CacheFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline nlohmann::json curve_set_to_json(const CurveSet& cs)
{
    nlohmann::json classes = nlohmann::json::array();
    for (const DivisorClass& d : cs)
        classes.push_back(d.to_vector());
    return {{"format_version", curve_cache_format_version},
            {"degree", cs.context().degree()},
            {"kind", to_string(cs.kind())},
            {"classes", std::move(classes)}};
}

inline CurveSet curve_set_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object() || !doc.contains("format_version"))
        throw CacheFormatError("curve cache: missing format_version");
    if (doc.at("format_version") != curve_cache_format_version)
        throw CacheFormatError("curve cache: unsupported format_version " + doc.at("format_version").dump());
    SurfaceContext ctx(doc.at("degree").get<int>());
    const CurveKind kind = curve_kind_from_string(doc.at("kind").get<std::string>());
    std::vector<DivisorClass> classes;
    for (const auto& row : doc.at("classes")) {
        DivisorClass d(row.get<std::vector<std::int64_t>>());
        ctx.require_member(d);
        classes.push_back(d);
    }
    if (!std::is_sorted(classes.begin(), classes.end()) ||
        std::adjacent_find(classes.begin(), classes.end()) != classes.end())
        throw CacheFormatError("curve cache: classes not strictly sorted");
    return CurveSet(ctx, kind, std::move(classes));
}

inline std::filesystem::path curve_cache_path(const std::filesystem::path& dir, int degree, CurveKind kind)
{
    return dir / ("dp" + std::to_string(degree) + "_" + to_string(kind) + "_v" +
                  std::to_string(curve_cache_format_version) + ".json");
}

inline void write_curve_cache(const std::filesystem::path& dir, const CurveSet& cs)
{
    std::filesystem::create_directories(dir);
    const auto path = curve_cache_path(dir, cs.context().degree(), cs.kind());
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        out << curve_set_to_json(cs).dump() << '\n';
        if (!out)
            throw std::runtime_error("cannot write " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

inline CurveSet read_curve_cache(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw CacheFormatError("cannot open " + file.string());
    nlohmann::json doc;
    try {
        in >> doc;
    }
    catch (const nlohmann::json::exception& e) {
        throw CacheFormatError(std::string("curve cache: ") + e.what());
    }
    return curve_set_from_json(doc);
}

/// Reads (degree, kind) from the cache directory, regenerating the file on a
/// miss or on any mismatch (version, degree, kind, malformed content).
inline CurveSet load_curve_set(const Surface& s, CurveKind kind, const std::optional<std::filesystem::path>& cache_dir)
{
    if (!cache_dir)
        return enumerate(s, kind);
    const auto path = curve_cache_path(*cache_dir, s.degree(), kind);
    if (std::filesystem::exists(path)) {
        try {
            CurveSet cached = read_curve_cache(path);
            if (cached.context() == s.context() && cached.kind() == kind)
                return cached;
        }
        catch (const std::exception&) {
            // fall through and regenerate
        }
    }
    CurveSet fresh = enumerate(s, kind);
    write_curve_cache(*cache_dir, fresh);
    return fresh;
}

} // namespace dpcox

#endif
