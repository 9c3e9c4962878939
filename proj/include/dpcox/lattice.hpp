#ifndef DPCOX_LATTICE_HPP
#define DPCOX_LATTICE_HPP

// Exact integer model of the Picard lattice of a blow-up of the plane in
// r <= 8 points: basis (L, E_1, .., E_r), form diag(1, -1, .., -1).

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dpcox {

struct ContextError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct UnsupportedError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::int32_t narrow_checked(std::int64_t v)
{
    if (v > std::numeric_limits<std::int32_t>::max() || v < std::numeric_limits<std::int32_t>::min())
        throw std::overflow_error("divisor coordinate overflow");
    return static_cast<std::int32_t>(v);
}

inline std::int64_t mul_checked(std::int64_t a, std::int64_t b)
{
    std::int64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out))
        throw std::overflow_error("intersection overflow");
    return out;
}

inline std::int64_t add_checked(std::int64_t a, std::int64_t b)
{
    std::int64_t out = 0;
    if (__builtin_add_overflow(a, b, &out))
        throw std::overflow_error("intersection overflow");
    return out;
}

} // namespace detail

/// Integer vector in Pic(X) w.r.t. the basis (L, E_1, .., E_r).
/// Coordinate 0 is the L-coefficient. Unused trailing slots are kept zero so
/// the defaulted comparison is lexicographic on the live coordinates.
class DivisorClass {
public:
    static constexpr std::size_t max_length = 9;

    DivisorClass() = default;

    DivisorClass(std::initializer_list<std::int64_t> coords)
        : DivisorClass(std::span<const std::int64_t>(coords.begin(), coords.size()))
    {
    }

    explicit DivisorClass(std::span<const std::int64_t> coords)
    {
        if (coords.size() > max_length)
            throw ContextError("divisor class longer than 9 coordinates");
        length_ = static_cast<std::uint8_t>(coords.size());
        for (std::size_t i = 0; i < coords.size(); ++i)
            coords_[i] = detail::narrow_checked(coords[i]);
    }

    explicit DivisorClass(const std::vector<std::int64_t>& coords)
        : DivisorClass(std::span<const std::int64_t>(coords))
    {
    }

    static DivisorClass zero(std::size_t length)
    {
        if (length > max_length)
            throw ContextError("divisor class longer than 9 coordinates");
        DivisorClass d;
        d.length_ = static_cast<std::uint8_t>(length);
        return d;
    }

    /// Unit vector: index 0 is L, index i is E_i.
    static DivisorClass basis(std::size_t length, std::size_t index)
    {
        DivisorClass d = zero(length);
        if (index >= length)
            throw ContextError("basis index out of range");
        d.coords_[index] = 1;
        return d;
    }

    [[nodiscard]] std::size_t size() const noexcept { return length_; }
    [[nodiscard]] std::int32_t operator[](std::size_t i) const noexcept { return coords_[i]; }
    [[nodiscard]] std::span<const std::int32_t> coords() const noexcept { return {coords_.data(), length_}; }

    void set(std::size_t i, std::int64_t v)
    {
        if (i >= length_)
            throw ContextError("coordinate index out of range");
        coords_[i] = detail::narrow_checked(v);
    }

    [[nodiscard]] bool is_zero() const noexcept
    {
        return std::all_of(coords_.begin(), coords_.begin() + length_, [](std::int32_t c) { return c == 0; });
    }

    [[nodiscard]] std::vector<std::int64_t> to_vector() const { return {coords_.begin(), coords_.begin() + length_}; }

    /// Drops the last coordinate (push-forward along the contraction of E_r
    /// once a class has been normalized).
    [[nodiscard]] DivisorClass truncated() const
    {
        if (length_ == 0)
            throw ContextError("cannot truncate an empty class");
        DivisorClass d = *this;
        d.coords_[length_ - 1] = 0;
        --d.length_;
        return d;
    }

    /// Appends a zero E-coordinate (pull-back along a blow-up).
    [[nodiscard]] DivisorClass extended() const
    {
        if (length_ >= max_length)
            throw ContextError("cannot extend a class of length 9");
        DivisorClass d = *this;
        ++d.length_;
        return d;
    }

    DivisorClass& operator+=(const DivisorClass& o)
    {
        check_same(o);
        for (std::size_t i = 0; i < length_; ++i)
            coords_[i] = detail::narrow_checked(std::int64_t{coords_[i]} + o.coords_[i]);
        return *this;
    }

    DivisorClass& operator-=(const DivisorClass& o)
    {
        check_same(o);
        for (std::size_t i = 0; i < length_; ++i)
            coords_[i] = detail::narrow_checked(std::int64_t{coords_[i]} - o.coords_[i]);
        return *this;
    }

    DivisorClass& operator*=(std::int64_t k)
    {
        for (std::size_t i = 0; i < length_; ++i)
            coords_[i] = detail::narrow_checked(detail::mul_checked(coords_[i], k));
        return *this;
    }

    friend DivisorClass operator+(DivisorClass a, const DivisorClass& b) { return a += b; }
    friend DivisorClass operator-(DivisorClass a, const DivisorClass& b) { return a -= b; }
    friend DivisorClass operator-(DivisorClass a) { return a *= -1; }
    friend DivisorClass operator*(std::int64_t k, DivisorClass a) { return a *= k; }
    friend DivisorClass operator*(DivisorClass a, std::int64_t k) { return a *= k; }

    friend bool operator==(const DivisorClass&, const DivisorClass&) = default;
    friend auto operator<=>(const DivisorClass& a, const DivisorClass& b)
    {
        if (auto c = a.length_ <=> b.length_; c != 0)
            return c;
        return a.coords_ <=> b.coords_;
    }

    [[nodiscard]] std::string to_string() const
    {
        std::string s = "(";
        for (std::size_t i = 0; i < length_; ++i) {
            if (i)
                s += ',';
            s += std::to_string(coords_[i]);
        }
        return s + ")";
    }

private:
    void check_same(const DivisorClass& o) const
    {
        if (o.length_ != length_)
            throw ContextError("divisor classes from different surfaces");
    }

    std::array<std::int32_t, max_length> coords_{};
    std::uint8_t length_ = 0;
};

struct DivisorClassHash {
    std::size_t operator()(const DivisorClass& d) const noexcept
    {
        std::size_t h = d.size();
        for (std::int32_t c : d.coords())
            h = h * 1000003u ^ static_cast<std::size_t>(static_cast<std::uint32_t>(c));
        return h;
    }
};

/// <a, b> = a0 b0 - sum a_i b_i.
inline std::int64_t intersect(const DivisorClass& a, const DivisorClass& b)
{
    if (a.size() != b.size())
        throw ContextError("intersect: divisor classes from different surfaces");
    if (a.size() == 0)
        return 0;
    std::int64_t s = detail::mul_checked(a[0], b[0]);
    for (std::size_t i = 1; i < a.size(); ++i)
        s = detail::add_checked(s, -detail::mul_checked(a[i], b[i]));
    return s;
}

inline std::int64_t self_intersection(const DivisorClass& a) { return intersect(a, a); }

/// <-K, d> = 3 d0 + sum d_i.
inline std::int64_t anticanonical_degree(const DivisorClass& d)
{
    if (d.size() == 0)
        return 0;
    std::int64_t s = detail::mul_checked(3, d[0]);
    for (std::size_t i = 1; i < d.size(); ++i)
        s = detail::add_checked(s, d[i]);
    return s;
}

/// Degree d = 9 - r together with the canonical class. Degrees 8 and 9
/// (r = 1, 0) only occur as intermediate targets of repeated contraction.
class SurfaceContext {
public:
    explicit SurfaceContext(int degree)
        : degree_(degree)
    {
        if (degree < 1 || degree > 9)
            throw UnsupportedError("surface degree must lie in 1..9, got " + std::to_string(degree));
        rank_ = 9 - degree;
        canonical_ = DivisorClass::zero(static_cast<std::size_t>(rank_) + 1);
        canonical_.set(0, -3);
        for (int i = 1; i <= rank_; ++i)
            canonical_.set(static_cast<std::size_t>(i), 1);
    }

    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] int rank() const noexcept { return rank_; }
    [[nodiscard]] std::size_t length() const noexcept { return static_cast<std::size_t>(rank_) + 1; }
    [[nodiscard]] const DivisorClass& canonical() const noexcept { return canonical_; }
    [[nodiscard]] DivisorClass anticanonical() const { return -canonical_; }

    [[nodiscard]] DivisorClass zero() const { return DivisorClass::zero(length()); }
    [[nodiscard]] DivisorClass line() const { return DivisorClass::basis(length(), 0); }
    [[nodiscard]] DivisorClass exceptional(int i) const
    {
        if (i < 1 || i > rank_)
            throw ContextError("E_" + std::to_string(i) + " does not exist at rank " + std::to_string(rank_));
        return DivisorClass::basis(length(), static_cast<std::size_t>(i));
    }

    [[nodiscard]] DivisorClass make(std::initializer_list<std::int64_t> coords) const
    {
        DivisorClass d(coords);
        require_member(d);
        return d;
    }

    void require_member(const DivisorClass& d) const
    {
        if (d.size() != length())
            throw ContextError("class " + d.to_string() + " does not belong to a degree " + std::to_string(degree_) +
                               " surface");
    }

    friend bool operator==(const SurfaceContext& a, const SurfaceContext& b) { return a.degree_ == b.degree_; }

private:
    int degree_;
    int rank_;
    DivisorClass canonical_;
};

inline bool is_exceptional_class(const DivisorClass& d)
{
    return self_intersection(d) == -1 && anticanonical_degree(d) == 1;
}

/// A (-2)-class orthogonal to K.
class Root {
public:
    explicit Root(DivisorClass cls)
        : class_(std::move(cls))
    {
        if (self_intersection(class_) != -2 || anticanonical_degree(class_) != 0)
            throw PreconditionError("not a root: " + class_.to_string());
    }

    [[nodiscard]] const DivisorClass& cls() const noexcept { return class_; }

private:
    DivisorClass class_;
};

/// d + <d, R> R. An isometry fixing K; an involution.
inline DivisorClass reflect(const DivisorClass& d, const Root& root)
{
    return d + intersect(d, root.cls()) * root.cls();
}

/// Simple roots: index i in [1, r) is E_i - E_{i+1}; index 0 is L - E_1 - E_2 - E_3 (r >= 3).
inline Root simple_root(const SurfaceContext& ctx, int index)
{
    const int r = ctx.rank();
    if (index == 0) {
        if (r < 3)
            throw PreconditionError("L - E1 - E2 - E3 needs rank >= 3");
        return Root(ctx.line() - ctx.exceptional(1) - ctx.exceptional(2) - ctx.exceptional(3));
    }
    if (index < 1 || index >= r)
        throw PreconditionError("simple root index out of range");
    return Root(ctx.exceptional(index) - ctx.exceptional(index + 1));
}

/// Product of simple reflections, applied left to right.
class WeylWord {
public:
    void push(int simple_index) { letters_.push_back(simple_index); }
    [[nodiscard]] const std::vector<int>& letters() const noexcept { return letters_; }
    [[nodiscard]] bool empty() const noexcept { return letters_.empty(); }

    [[nodiscard]] DivisorClass apply(const DivisorClass& d) const
    {
        DivisorClass out = d;
        for (int s : letters_)
            out = apply_simple(out, s);
        return out;
    }

    [[nodiscard]] DivisorClass apply_inverse(const DivisorClass& d) const
    {
        DivisorClass out = d;
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
            out = apply_simple(out, *it);
        return out;
    }

    // Simple reflections act by coordinate permutation or a closed formula,
    // so no Root object is materialized here.
    static DivisorClass apply_simple(const DivisorClass& d, int s)
    {
        DivisorClass out = d;
        if (s == 0) {
            // <d, L-E1-E2-E3> = d0 + d1 + d2 + d3
            const std::int64_t k = std::int64_t{d[0]} + d[1] + d[2] + d[3];
            out.set(0, d[0] + k);
            for (std::size_t i = 1; i <= 3; ++i)
                out.set(i, d[i] - k);
        }
        else {
            out.set(static_cast<std::size_t>(s), d[static_cast<std::size_t>(s) + 1]);
            out.set(static_cast<std::size_t>(s) + 1, d[static_cast<std::size_t>(s)]);
        }
        return out;
    }

private:
    std::vector<int> letters_;
};

/// Greedy descent moving an exceptional class to E_r: sort multiplicities,
/// reflect in L-E1-E2-E3 while the L-coefficient is positive, then move the
/// resulting E_j to the last slot. Throws if e is not exceptional, or if it
/// cannot be normalized (rank 2, class L-E1-E2: the contraction is P1 x P1).
inline WeylWord normalizing_word(const SurfaceContext& ctx, const DivisorClass& e)
{
    ctx.require_member(e);
    if (!is_exceptional_class(e))
        throw PreconditionError("not an exceptional class: " + e.to_string());
    const int r = ctx.rank();
    WeylWord word;
    DivisorClass cur = e;
    auto bubble = [&](int from, int to) {
        // move coordinate at `from` to `to` by adjacent transpositions
        while (from < to) {
            word.push(from);
            cur = WeylWord::apply_simple(cur, from);
            ++from;
        }
        while (from > to) {
            word.push(from - 1);
            cur = WeylWord::apply_simple(cur, from - 1);
            --from;
        }
    };
    while (cur[0] > 0) {
        if (r < 3)
            throw PreconditionError("exceptional class " + e.to_string() + " contracts to P1 x P1");
        // bring the three most negative E-coefficients into slots 1..3
        for (int slot = 1; slot <= 3; ++slot) {
            int best = slot;
            for (int i = slot + 1; i <= r; ++i)
                if (cur[static_cast<std::size_t>(i)] < cur[static_cast<std::size_t>(best)])
                    best = i;
            bubble(best, slot);
        }
        const std::int32_t before = cur[0];
        word.push(0);
        cur = WeylWord::apply_simple(cur, 0);
        if (cur[0] >= before)
            throw std::logic_error("Weyl descent failed to decrease the L-coefficient");
    }
    int j = 0;
    for (int i = 1; i <= r; ++i)
        if (cur[static_cast<std::size_t>(i)] == 1)
            j = i;
    if (j == 0 || cur != ctx.exceptional(j))
        throw std::logic_error("Weyl descent did not reach a basis vector");
    bubble(j, r);
    return word;
}

/// Result of blowing down one exceptional class.
struct Contraction {
    SurfaceContext target;
    WeylWord word;
    std::vector<DivisorClass> images;

    /// Pull-back of a class on the target surface into the source basis.
    [[nodiscard]] DivisorClass pull_back(const DivisorClass& y) const
    {
        target.require_member(y);
        return word.apply_inverse(y.extended());
    }
};

inline Contraction contract(const SurfaceContext& ctx, const DivisorClass& e, std::span<const DivisorClass> classes)
{
    if (ctx.rank() < 1)
        throw PreconditionError("nothing to contract at rank 0");
    WeylWord word = normalizing_word(ctx, e);
    Contraction out{SurfaceContext(ctx.degree() + 1), std::move(word), {}};
    out.images.reserve(classes.size());
    for (const DivisorClass& c : classes) {
        ctx.require_member(c);
        out.images.push_back(out.word.apply(c).truncated());
    }
    return out;
}

} // namespace dpcox

template <>
struct std::hash<dpcox::DivisorClass> : dpcox::DivisorClassHash {};

#endif
