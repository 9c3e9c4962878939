#ifndef DPCOX_COX_HPP
#define DPCOX_COX_HPP

// Monomials in the polynomial ring on the Cox generators, counted by Picard
// degree; first Betti numbers in anticanonical degree two.

#include "cone.hpp"

namespace dpcox {

enum class GeneratorType { curve, k1, k2 };

struct Generator {
    GeneratorType type = GeneratorType::curve;
    int curve_id = -1; // into Surface::curves() when type == curve
    DivisorClass cls;

    [[nodiscard]] std::string name() const
    {
        switch (type) {
        case GeneratorType::k1:
            return "k1";
        case GeneratorType::k2:
            return "k2";
        case GeneratorType::curve:
            break;
        }
        return "c" + std::to_string(curve_id);
    }
    [[nodiscard]] bool is_curve() const noexcept { return type == GeneratorType::curve; }
};

/// Exceptional curves, plus two formal anticanonical symbols in degree one.
/// Monomial identity uses positions in this list, never classes.
class GeneratorSet {
public:
    explicit GeneratorSet(const Surface& s)
        : surface_(&s)
    {
        if (s.degree() < 1 || s.degree() > 6)
            throw UnsupportedError("Cox generators by exceptional curves need degree 1..6");
        for (std::size_t c = 0; c < s.curve_count(); ++c)
            generators_.push_back({GeneratorType::curve, static_cast<int>(c), s.curves()[c]});
        if (s.degree() == 1) {
            generators_.push_back({GeneratorType::k1, -1, s.context().anticanonical()});
            generators_.push_back({GeneratorType::k2, -1, s.context().anticanonical()});
        }
        rebuild_index();
    }

    /// Same generators, listed in a different order.
    [[nodiscard]] GeneratorSet permuted(std::span<const std::size_t> order) const
    {
        if (order.size() != generators_.size())
            throw PreconditionError("permutation size mismatch");
        GeneratorSet out = *this;
        std::vector<bool> seen(order.size(), false);
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (order[i] >= order.size() || seen[order[i]])
                throw PreconditionError("not a permutation");
            seen[order[i]] = true;
            out.generators_[i] = generators_[order[i]];
        }
        out.rebuild_index();
        return out;
    }

    [[nodiscard]] const Surface& surface() const noexcept { return *surface_; }
    [[nodiscard]] std::size_t size() const noexcept { return generators_.size(); }
    [[nodiscard]] const Generator& operator[](std::size_t i) const { return generators_.at(i); }
    [[nodiscard]] const std::vector<Generator>& generators() const noexcept { return generators_; }

    /// Positions (ascending) of generators with exactly this class.
    [[nodiscard]] const std::vector<std::size_t>* positions_of(const DivisorClass& d) const
    {
        auto it = by_class_.find(d);
        return it == by_class_.end() ? nullptr : &it->second;
    }

private:
    void rebuild_index()
    {
        by_class_.clear();
        for (std::size_t i = 0; i < generators_.size(); ++i)
            by_class_[generators_[i].cls].push_back(i);
    }

    const Surface* surface_;
    std::vector<Generator> generators_;
    std::unordered_map<DivisorClass, std::vector<std::size_t>, DivisorClassHash> by_class_;
};

/// Multiset of generator positions, ascending.
struct Monomial {
    std::vector<std::size_t> factors;

    [[nodiscard]] DivisorClass degree(const GeneratorSet& gs) const
    {
        DivisorClass out = gs.surface().context().zero();
        for (std::size_t f : factors)
            out += gs[f].cls;
        return out;
    }

    [[nodiscard]] std::string to_string(const GeneratorSet& gs) const
    {
        std::string s;
        for (std::size_t f : factors) {
            if (!s.empty())
                s += '*';
            s += gs[f].name();
        }
        return s.empty() ? "1" : s;
    }
};

namespace detail {

// Ordered DFS: factor positions are non-decreasing, and every partial
// remainder has to stay effective. Each generator has degree one, so the
// number of factors still to place is the remainder's degree.
template <typename Sink>
void monomial_dfs(const GeneratorSet& gs, std::size_t from, const DivisorClass& rem, std::int64_t left,
                  std::vector<std::size_t>& prefix, Sink& sink)
{
    if (left == 0) {
        if (rem.is_zero())
            sink(prefix);
        return;
    }
    if (left == 1) {
        if (const auto* pos = gs.positions_of(rem)) {
            for (std::size_t p : *pos) {
                if (p < from)
                    continue;
                prefix.push_back(p);
                sink(prefix);
                prefix.pop_back();
            }
        }
        return;
    }
    for (std::size_t i = from; i < gs.size(); ++i) {
        DivisorClass next = rem - gs[i].cls;
        if (!is_effective(gs.surface(), next))
            continue;
        prefix.push_back(i);
        monomial_dfs(gs, i, next, left - 1, prefix, sink);
        prefix.pop_back();
    }
}

} // namespace detail

inline std::uint64_t count_monomials(const GeneratorSet& gs, const DivisorClass& d)
{
    gs.surface().context().require_member(d);
    const std::int64_t n = anticanonical_degree(d);
    if (n < 0)
        return 0;
    std::uint64_t count = 0;
    std::vector<std::size_t> prefix;
    auto sink = [&](const std::vector<std::size_t>&) { ++count; };
    detail::monomial_dfs(gs, 0, d, n, prefix, sink);
    return count;
}

inline constexpr std::int64_t max_materialized_degree = 4;

inline std::vector<Monomial> enumerate_monomials(const GeneratorSet& gs, const DivisorClass& d)
{
    gs.surface().context().require_member(d);
    const std::int64_t n = anticanonical_degree(d);
    if (n > max_materialized_degree)
        throw PreconditionError("enumerate_monomials is limited to anticanonical degree <= 4");
    std::vector<Monomial> out;
    if (n < 0)
        return out;
    std::vector<std::size_t> prefix;
    auto sink = [&](const std::vector<std::size_t>& f) { out.push_back({f}); };
    detail::monomial_dfs(gs, 0, d, n, prefix, sink);
    return out;
}

// --- Betti numbers in degree two -------------------------------------------

struct BettiRow {
    std::string divisor_kind;
    std::uint64_t divisor_count = 0;
    std::uint64_t monomials_per_divisor = 0;
    std::int64_t h0 = 0;
    std::int64_t b1 = 0;
    friend bool operator==(const BettiRow&, const BettiRow&) = default;
};

struct BettiTable {
    int degree = 0;
    std::vector<BettiRow> rows;
    std::uint64_t total_monomials = 0;
    std::int64_t total_b1 = 0;
    std::uint64_t total_divisors = 0;
};

/// b1 = #monomials - h0 for every nef class of degree two, aggregated by kind.
inline BettiTable betti_table_degree2(const Surface& s)
{
    const GeneratorSet gs(s);
    const auto classes = classify_nef_degree2(s);
    const std::array kinds{DegreeTwoKind::conic, DegreeTwoKind::anticanonical, DegreeTwoKind::anticanonical_plus_curve,
                           DegreeTwoKind::twice_anticanonical};
    BettiTable table;
    table.degree = s.degree();
    for (DegreeTwoKind kind : kinds) {
        std::optional<BettiRow> row;
        for (const DegreeTwoClass& c : classes) {
            if (c.kind != kind)
                continue;
            const std::uint64_t m = count_monomials(gs, c.cls);
            const std::int64_t h = h0(s, c.cls);
            const std::int64_t b1 = static_cast<std::int64_t>(m) - h;
            if (b1 < 0)
                throw std::logic_error("negative b1 at " + c.cls.to_string());
            if (!row) {
                row = BettiRow{to_string(kind), 0, m, h, b1};
            }
            else if (row->monomials_per_divisor != m || row->h0 != h) {
                throw std::logic_error("non-uniform row for kind " + to_string(kind));
            }
            ++row->divisor_count;
            table.total_monomials += m;
            table.total_b1 += b1;
            ++table.total_divisors;
        }
        if (row)
            table.rows.push_back(*row);
    }
    return table;
}

// --- degree three monomial tables on degree one surfaces ---------------------

enum class TripleTable { minus_three_k, minus_two_k_plus_e, minus_k_plus_q };

inline std::string to_string(TripleTable t)
{
    switch (t) {
    case TripleTable::minus_three_k:
        return "-3K";
    case TripleTable::minus_two_k_plus_e:
        return "-2K+E";
    case TripleTable::minus_k_plus_q:
        return "-K+Q";
    }
    return "?";
}

struct TripleClassification {
    TripleTable table = TripleTable::minus_three_k;
    DivisorClass target;
    std::map<std::string, std::uint64_t> histogram; // form tag -> monomial count
    std::uint64_t monomials = 0;
    std::vector<std::string> unmatched;
    std::vector<std::string> ambiguous;

    [[nodiscard]] bool clean() const noexcept { return unmatched.empty() && ambiguous.empty(); }
};

struct ClassificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline bool is_k(const Generator& g) { return !g.is_curve(); }

// Runs pred over the 6 orderings of three slots.
template <typename Pred>
bool any_labelling(const std::array<std::size_t, 3>& f, Pred&& pred)
{
    std::array<int, 3> idx{0, 1, 2};
    do {
        if (pred(f[static_cast<std::size_t>(idx[0])], f[static_cast<std::size_t>(idx[1])],
                 f[static_cast<std::size_t>(idx[2])]))
            return true;
    } while (std::next_permutation(idx.begin(), idx.end()));
    return false;
}

} // namespace detail

/// Tags every degree three monomial of class -3K, -2K+E or -K+Q with the
/// forms of the corresponding table; records monomials matching zero or
/// several forms. Use classify_triples for the throwing variant.
inline TripleClassification tag_triples(const GeneratorSet& gs, const DivisorClass& d)
{
    const Surface& s = gs.surface();
    if (s.degree() != 1)
        throw UnsupportedError("triple tables are stated for degree one surfaces");
    s.context().require_member(d);
    const DivisorClass k = s.context().canonical();
    const DivisorClass minus_k = -k;

    TripleClassification out;
    out.target = d;
    DivisorClass special; // E or Q
    if (d == -3 * k)
        out.table = TripleTable::minus_three_k;
    else if (s.curves().contains(d + 2 * k)) {
        out.table = TripleTable::minus_two_k_plus_e;
        special = d + 2 * k;
    }
    else if (is_conic_class(s, d + k)) {
        out.table = TripleTable::minus_k_plus_q;
        special = d + k;
    }
    else
        throw UnsupportedError("no monomial table for class " + d.to_string());

    auto cls = [&](std::size_t g) -> const DivisorClass& { return gs[g].cls; };
    auto dot = [&](std::size_t a, std::size_t b) { return intersect(cls(a), cls(b)); };
    auto dot_s = [&](std::size_t a) { return intersect(cls(a), special); };
    auto curve = [&](std::size_t g) { return gs[g].is_curve(); };

    using Form = std::pair<const char*, std::function<bool(const std::array<std::size_t, 3>&)>>;
    std::vector<Form> forms;
    switch (out.table) {
    case TripleTable::minus_three_k:
        forms = {
            {"h1h2h3",
             [&](const auto& f) { return detail::is_k(gs[f[0]]) && detail::is_k(gs[f[1]]) && detail::is_k(gs[f[2]]); }},
            {"haa'",
             [&](const auto& f) {
                 return detail::any_labelling(f, [&](std::size_t h, std::size_t a, std::size_t b) {
                     return detail::is_k(gs[h]) && curve(a) && curve(b) && cls(a) + cls(b) == 2 * minus_k;
                 });
             }},
            {"abc",
             [&](const auto& f) {
                 return curve(f[0]) && curve(f[1]) && curve(f[2]) && dot(f[0], f[1]) == 2 && dot(f[0], f[2]) == 2 &&
                        dot(f[1], f[2]) == 2;
             }},
        };
        break;
    case TripleTable::minus_two_k_plus_e:
        forms = {
            {"ks",
             [&](const auto& f) {
                 return detail::any_labelling(f, [&](std::size_t h, std::size_t a, std::size_t b) {
                     return detail::is_k(gs[h]) && cls(a) + cls(b) == minus_k + special;
                 });
             }},
            {"aa'e",
             [&](const auto& f) {
                 return detail::any_labelling(f, [&](std::size_t a, std::size_t b, std::size_t e) {
                     return curve(a) && curve(b) && curve(e) && cls(e) == special && dot(a, b) == 3;
                 });
             }},
            {"abc",
             [&](const auto& f) {
                 return detail::any_labelling(f, [&](std::size_t a, std::size_t b, std::size_t c) {
                     return curve(a) && curve(b) && curve(c) && dot_s(a) == 1 && dot_s(b) == 0 && dot_s(c) == 0 &&
                            dot(a, b) == 2 && dot(a, c) == 2 && dot(b, c) == 1;
                 });
             }},
        };
        break;
    case TripleTable::minus_k_plus_q:
        forms = {
            {"ks",
             [&](const auto& f) {
                 return detail::any_labelling(f, [&](std::size_t h, std::size_t a, std::size_t b) {
                     return detail::is_k(gs[h]) && cls(a) + cls(b) == special;
                 });
             }},
            {"efe1",
             [&](const auto& f) {
                 return detail::any_labelling(f, [&](std::size_t e, std::size_t ff, std::size_t e1) {
                     return curve(e) && curve(ff) && curve(e1) && dot_s(e1) == 0 && dot(e, ff) == 2 &&
                            dot(e1, e) + dot(e1, ff) == 2 && dot_s(e) == 1 && dot_s(ff) == 1;
                 });
             }},
            {"ee1e2",
             [&](const auto& f) {
                 return detail::any_labelling(f, [&](std::size_t e, std::size_t e1, std::size_t e2) {
                     return curve(e) && curve(e1) && curve(e2) && dot_s(e1) == 0 && dot_s(e2) == 0 &&
                            dot(e1, e2) == 0 && dot_s(e) == 2 && dot(e1, e) == 2 && dot(e2, e) == 2;
                 });
             }},
        };
        break;
    }
    for (const auto& [tag, pred] : forms)
        out.histogram[tag] = 0;

    for (const Monomial& m : enumerate_monomials(gs, d)) {
        if (m.factors.size() != 3)
            throw std::logic_error("degree three class with a monomial of length " + std::to_string(m.factors.size()));
        const std::array<std::size_t, 3> f{m.factors[0], m.factors[1], m.factors[2]};
        ++out.monomials;
        const char* hit = nullptr;
        int hits = 0;
        for (const auto& [tag, pred] : forms) {
            if (pred(f)) {
                ++hits;
                hit = tag;
            }
        }
        if (hits == 0)
            out.unmatched.push_back(m.to_string(gs));
        else if (hits > 1)
            out.ambiguous.push_back(m.to_string(gs));
        else
            ++out.histogram[hit];
    }
    return out;
}

inline TripleClassification classify_triples(const GeneratorSet& gs, const DivisorClass& d)
{
    TripleClassification out = tag_triples(gs, d);
    if (!out.unmatched.empty())
        throw ClassificationError("monomial matches no form: " + out.unmatched.front());
    if (!out.ambiguous.empty())
        throw ClassificationError("monomial matches several forms: " + out.ambiguous.front());
    return out;
}

} // namespace dpcox

#endif
