#ifndef DPCOX_CAPTURE_HPP
#define DPCOX_CAPTURE_HPP

// Capture moves and the search for capture sequences ending in a remaining
// set of at most two generators.

#include "cox.hpp"

#include <atomic>
#include <thread>
#include <variant>

namespace dpcox {

struct VacuousMove {
    std::size_t captured = 0;
    friend bool operator==(const VacuousMove&, const VacuousMove&) = default;
};

struct PairMove {
    std::size_t captured = 0;
    std::size_t a = 0;
    std::size_t b = 0;
    DivisorClass witness;
    friend bool operator==(const PairMove&, const PairMove&) = default;
};

struct AnticanonicalMove {
    std::size_t captured = 0;
    friend bool operator==(const AnticanonicalMove&, const AnticanonicalMove&) = default;
};

using CaptureMove = std::variant<VacuousMove, PairMove, AnticanonicalMove>;

inline std::size_t captured_generator(const CaptureMove& m)
{
    return std::visit([](const auto& v) { return v.captured; }, m);
}

struct CaptureSequence {
    DivisorClass target;
    std::vector<CaptureMove> moves;
    std::vector<std::size_t> remaining; // ascending generator positions
    bool sweeping_assumed = false;      // true iff an anticanonical move is used
    friend bool operator==(const CaptureSequence&, const CaptureSequence&) = default;
};

// --- move predicates --------------------------------------------------------

/// Pair moves for one target D. The witness pairs with E_i as
/// (-K + D).E_i - A.E_i - B.E_i - C.E_i, so one pairing vector serves
/// every move.
class PairMoveChecker {
public:
    PairMoveChecker(const GeneratorSet& gs, const DivisorClass& d)
        : gs_(&gs)
        , big_(gs.surface().context().anticanonical() + d)
        , big_pairing_(gs.surface().curve_count())
    {
        gs.surface().pairings(big_, big_pairing_);
    }

    /// Witness -K + D - A - B - C when ({a,b}, c) is a capture move.
    [[nodiscard]] std::optional<DivisorClass> operator()(std::size_t a, std::size_t b, std::size_t c) const
    {
        const GeneratorSet& gs = *gs_;
        require_curve(a);
        require_curve(b);
        require_curve(c);
        if (a == b || a == c || b == c)
            throw PreconditionError("pair move needs three distinct generators");
        const Surface& s = gs.surface();
        const auto ia = static_cast<std::size_t>(gs[a].curve_id);
        const auto ib = static_cast<std::size_t>(gs[b].curve_id);
        const auto ic = static_cast<std::size_t>(gs[c].curve_id);
        if (s.meet(ia, ib) != 0)
            return std::nullopt;
        const std::int8_t* ra = s.meet_row(ia);
        const std::int8_t* rb = s.meet_row(ib);
        const std::int8_t* rc = s.meet_row(ic);
        const std::int32_t* bp = big_pairing_.data();
        std::uint32_t neg = 0;
        for (std::size_t i = 0; i < big_pairing_.size(); ++i)
            neg |= static_cast<std::uint32_t>(bp[i] - ra[i] - rb[i] - rc[i]);
        if (neg & 0x80000000u)
            return std::nullopt;
        DivisorClass w = big_ - gs[a].cls - gs[b].cls - gs[c].cls;
        if (self_intersection(w) > 0 || anticanonical_degree(w) == 2)
            return w;
        return std::nullopt;
    }

private:
    void require_curve(std::size_t g) const
    {
        if (g >= gs_->size() || !(*gs_)[g].is_curve())
            throw PreconditionError("generator " + std::to_string(g) + " is not an exceptional curve");
    }

    const GeneratorSet* gs_;
    DivisorClass big_;
    std::vector<std::int32_t> big_pairing_;
};

/// Witness -K + D - A - B - C when ({a,b}, c) is a capture move for d.
inline std::optional<DivisorClass> pair_move_valid(const GeneratorSet& gs, const DivisorClass& d, std::size_t a,
                                                   std::size_t b, std::size_t c)
{
    return PairMoveChecker(gs, d)(a, b, c);
}

inline bool vacuous_valid(const GeneratorSet& gs, const DivisorClass& d, std::size_t c)
{
    if (c >= gs.size())
        throw PreconditionError("generator out of range");
    return !fixed_part_reduce(gs.surface(), d - gs[c].cls).effective;
}

/// remaining is indexed by generator position.
inline bool anticanonical_valid(const GeneratorSet& gs, const DivisorClass& d, const std::vector<bool>& remaining)
{
    const Surface& s = gs.surface();
    if (s.degree() != 1)
        throw UnsupportedError("anticanonical capture moves exist only in degree one");
    if (remaining.size() != gs.size())
        throw PreconditionError("remaining set has the wrong size");
    if (d == -2 * s.context().canonical())
        return false;
    for (std::size_t g = 0; g < gs.size(); ++g)
        if (gs[g].is_curve() && !remaining[g])
            return false;
    return true;
}

/// Replays seq from the full generator set; empty when every move is valid
/// at its turn and the stopping criterion holds at the end.
inline std::optional<std::string> sequence_error(const GeneratorSet& gs, const CaptureSequence& seq)
{
    gs.surface().context().require_member(seq.target);
    const PairMoveChecker pair_valid(gs, seq.target);
    std::vector<bool> remaining(gs.size(), true);
    bool uses_k = false;
    for (std::size_t i = 0; i < seq.moves.size(); ++i) {
        const CaptureMove& m = seq.moves[i];
        const std::size_t c = captured_generator(m);
        const auto at = [i](const char* what) { return "move " + std::to_string(i) + ": " + what; };
        if (c >= gs.size() || !remaining[c])
            return at("captured generator is not remaining");
        if (const auto* p = std::get_if<PairMove>(&m)) {
            if (p->a >= gs.size() || p->b >= gs.size() || !remaining[p->a] || !remaining[p->b])
                return at("pair not in remaining set");
            if (!gs[c].is_curve() || !gs[p->a].is_curve() || !gs[p->b].is_curve() || p->a == p->b || p->a == c ||
                p->b == c)
                return at("pair move on invalid generators");
            const auto w = pair_valid(p->a, p->b, c);
            if (!w)
                return at("pair move conditions fail");
            if (*w != p->witness)
                return at("witness mismatch");
        }
        else if (std::holds_alternative<VacuousMove>(m)) {
            if (!vacuous_valid(gs, seq.target, c))
                return at("target minus captured generator is effective");
        }
        else {
            if (gs[c].is_curve())
                return at("anticanonical move must capture k1 or k2");
            if (!anticanonical_valid(gs, seq.target, remaining))
                return at("anticanonical move not allowed");
            uses_k = true;
        }
        remaining[c] = false;
    }
    std::vector<std::size_t> left;
    for (std::size_t g = 0; g < gs.size(); ++g)
        if (remaining[g])
            left.push_back(g);
    if (left.size() > 2)
        return "stopping criterion fails with " + std::to_string(left.size()) + " generators remaining";
    if (left != seq.remaining)
        return std::string("remaining set does not match the replay");
    if (uses_k != seq.sweeping_assumed)
        return std::string("sweeping flag does not match the moves");
    return std::nullopt;
}

inline bool validate_sequence(const GeneratorSet& gs, const CaptureSequence& seq) { return !sequence_error(gs, seq); }

// --- search -----------------------------------------------------------------

inline constexpr std::size_t default_capture_budget = 64;

enum class CaptureStatus { captured, unresolved };

inline std::string to_string(CaptureStatus s) { return s == CaptureStatus::captured ? "captured" : "unresolved"; }

struct CaptureResult {
    CaptureStatus status = CaptureStatus::unresolved;
    std::optional<CaptureSequence> sequence;
    std::size_t attempts = 0; // terminal pairs tried
};

/// Searches backwards from a terminal pair R: a curve joins the closure once
/// two disjoint members certify it by a pair move. The closure from a fixed R
/// does not depend on the order of additions, so only R is searched; the
/// budget bounds the number of terminal pairs tried.
class CaptureEngine {
public:
    struct Scratch {
        std::vector<std::int32_t> base;
        std::vector<std::int8_t> cap, pv; // base clamped to int8, and base - X - Y
        std::vector<std::uint8_t> in_t, vacuous_known, vacuous;
        std::vector<std::size_t> order, pending, ranked, candidates;
        std::vector<std::pair<std::size_t, std::size_t>> witness_pair;
    };

    explicit CaptureEngine(const GeneratorSet& gs)
        : gs_(&gs)
        , s_(&gs.surface())
        , n_(gs.surface().curve_count())
    {
        if (s_->degree() < 1 || s_->degree() > 6)
            throw UnsupportedError("capture search needs degree 1..6");
        for (std::size_t c = 0; c < gs.size(); ++c)
            if (gs[c].is_curve() && gs[c].curve_id != static_cast<int>(c))
                throw PreconditionError("capture search needs the curves first, in surface order");
        stride_ = (n_ + 31) / 32 * 32;
        meet_.assign(n_ * stride_, 0);
        for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t b = 0; b < n_; ++b)
                meet_[a * stride_ + b] = static_cast<std::int8_t>(s_->meet(a, b));
    }

    [[nodiscard]] const GeneratorSet& generators() const noexcept { return *gs_; }

    [[nodiscard]] CaptureResult search(const DivisorClass& d, std::size_t budget = default_capture_budget) const
    {
        Scratch sc;
        return search(d, budget, sc);
    }

    [[nodiscard]] CaptureResult search(const DivisorClass& d, std::size_t budget, Scratch& sc) const
    {
        s_->context().require_member(d);
        CaptureResult res;
        const bool degree_one = s_->degree() == 1;
        if (degree_one && d == -2 * s_->context().canonical())
            return res; // k1, k2 stay, so no curve may remain

        sc.base.resize(n_);
        sc.cap.assign(stride_, cap_limit);
        s_->pairings(d, sc.base);
        for (std::size_t i = 0; i < n_; ++i) {
            sc.base[i] += 1;
            sc.cap[i] = static_cast<std::int8_t>(std::min<std::int32_t>(sc.base[i], cap_limit));
        }
        const std::int64_t deg = anticanonical_degree(d);
        const DivisorClass big = s_->context().anticanonical() + d;
        const std::int64_t big_sq = self_intersection(big);
        sc.vacuous_known.assign(n_, 0);
        sc.vacuous.assign(n_, 0);

        auto finish = [&](std::vector<std::size_t> terminal) {
            CaptureSequence seq;
            seq.target = d;
            if (degree_one) {
                seq.moves.emplace_back(AnticanonicalMove{n_});
                seq.moves.emplace_back(AnticanonicalMove{n_ + 1});
                seq.sweeping_assumed = true;
            }
            std::vector<std::size_t> vac;
            for (std::size_t k = sc.order.size(); k-- > 0;) {
                const std::size_t c = sc.order[k];
                if (contains(terminal, c))
                    continue;
                const auto [a, b] = sc.witness_pair[c];
                if (a == npos) {
                    vac.push_back(c);
                    continue;
                }
                const DivisorClass w = big - s_->curves()[a] - s_->curves()[b] - s_->curves()[c];
                seq.moves.emplace_back(PairMove{c, std::min(a, b), std::max(a, b), w});
            }
            std::sort(vac.begin(), vac.end());
            for (std::size_t c : vac)
                seq.moves.emplace_back(VacuousMove{c});
            std::sort(terminal.begin(), terminal.end());
            seq.remaining = std::move(terminal);
            res.status = CaptureStatus::captured;
            res.sequence = std::move(seq);
            return res;
        };

        // At most two curves that are not vacuous: nothing to search.
        {
            std::vector<std::size_t> hard;
            for (std::size_t i = 0; i < n_ && hard.size() <= 2; ++i)
                if (!is_vacuous(d, i, sc))
                    hard.push_back(i);
            if (hard.size() <= 2) {
                reset(sc);
                for (std::size_t i = 0; i < n_; ++i)
                    add(sc, i, npos, npos);
                return finish(hard);
            }
        }

        sc.ranked.resize(n_);
        std::iota(sc.ranked.begin(), sc.ranked.end(), std::size_t{0});
        std::stable_sort(sc.ranked.begin(), sc.ranked.end(),
                         [&](std::size_t x, std::size_t y) { return sc.base[x] < sc.base[y]; });
        for (std::size_t ri = 0; ri < n_ && res.attempts < budget; ++ri) {
            const std::size_t s = sc.ranked[ri];
            for (std::size_t rj = ri + 1; rj < n_ && res.attempts < budget; ++rj) {
                const std::size_t t = sc.ranked[rj];
                if (meet_[s * stride_ + t] != 0)
                    continue;
                ++res.attempts;
                if (closure(d, deg, big_sq, s, t, sc)) {
                    const std::size_t attempts = res.attempts;
                    finish({s, t});
                    res.attempts = attempts;
                    return res;
                }
            }
        }
        return res;
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    static bool contains(const std::vector<std::size_t>& v, std::size_t x)
    {
        return std::find(v.begin(), v.end(), x) != v.end();
    }

    bool is_vacuous(const DivisorClass& d, std::size_t c, Scratch& sc) const
    {
        if (!sc.vacuous_known[c]) {
            sc.vacuous[c] = !is_effective(*s_, d - s_->curves()[c]);
            sc.vacuous_known[c] = 1;
        }
        return sc.vacuous[c] != 0;
    }

    void reset(Scratch& sc) const
    {
        sc.in_t.assign(n_, 0);
        sc.order.clear();
        sc.witness_pair.assign(n_, {npos, npos});
    }

    static void add(Scratch& sc, std::size_t c, std::size_t a, std::size_t b)
    {
        sc.in_t[c] = 1;
        sc.order.push_back(c);
        sc.witness_pair[c] = {a, b};
    }

    // Moves every pending curve certified by the disjoint pair (x, y) into
    // the closure. pv[i] is (-K + D - X - Y).E_i, clamped from above; the
    // witness for c is nef iff pv[i] >= C.E_i for every curve i.
    void certify(std::size_t x, std::size_t y, std::int64_t deg, std::int64_t big_sq, Scratch& sc) const
    {
        const std::int8_t* mx = meet_.data() + x * stride_;
        const std::int8_t* my = meet_.data() + y * stride_;
        const std::int64_t p_sq = big_sq - 2 * sc.base[x] - 2 * sc.base[y] - 2;
        const bool degree_two = deg - 2 == 2;

        // Scalar tests first: the witness against C, X and Y, and bigness.
        sc.candidates.clear();
        for (std::size_t k = 0; k < sc.pending.size(); ++k) {
            const std::size_t c = sc.pending[k];
            const std::int64_t pc = std::int64_t{sc.base[c]} - mx[c] - my[c];
            if (pc < -1 || meet_[c * stride_ + x] > sc.base[x] + 1 || meet_[c * stride_ + y] > sc.base[y] + 1)
                continue;
            if (!degree_two && p_sq - 2 * pc - 1 <= 0)
                continue;
            sc.candidates.push_back(k);
        }
        if (sc.candidates.empty())
            return;

        sc.pv.resize(stride_);
        std::int8_t* out = sc.pv.data();
        const std::int8_t* cap = sc.cap.data();
        const std::size_t width = stride_;
        std::uint8_t below = 0; // sign bit set iff some pv[i] < -1
        for (std::size_t i = 0; i < width; ++i) {
            const auto v = static_cast<std::int8_t>(cap[i] - mx[i] - my[i]);
            out[i] = v;
            below |= static_cast<std::uint8_t>(v + 1);
        }
        if (below & 0x80)
            return;
        const std::int8_t* pv = sc.pv.data();
        for (std::size_t k : sc.candidates) {
            const std::size_t c = sc.pending[k];
            const std::int8_t* mc = meet_.data() + c * stride_;
            std::uint8_t neg = 0;
            for (std::size_t i = 0; i < width; ++i)
                neg |= static_cast<std::uint8_t>(pv[i] - mc[i]);
            if ((neg & 0x80) == 0) {
                add(sc, c, x, y);
                sc.pending[k] = npos;
            }
        }
        std::erase(sc.pending, npos);
    }

    bool closure(const DivisorClass& d, std::int64_t deg, std::int64_t big_sq, std::size_t s, std::size_t t,
                 Scratch& sc) const
    {
        reset(sc);
        add(sc, s, npos, npos);
        add(sc, t, npos, npos);
        sc.pending.clear();
        for (std::size_t i = 0; i < n_; ++i)
            if (!sc.in_t[i])
                sc.pending.push_back(i);
        bool vacuous_added = false;
        std::size_t next = 1; // order[next] gets paired with every earlier member
        while (true) {
            for (; next < sc.order.size() && !sc.pending.empty(); ++next) {
                const std::size_t x = sc.order[next];
                for (std::size_t k = 0; k < next && !sc.pending.empty(); ++k) {
                    const std::size_t y = sc.order[k];
                    if (meet_[x * stride_ + y] == 0)
                        certify(x, y, deg, big_sq, sc);
                }
            }
            if (sc.pending.empty())
                return true;
            if (vacuous_added)
                return false;
            // Vacuous moves do not depend on the remaining set, so those
            // curves can sit in the closure and be captured last.
            vacuous_added = true;
            std::size_t keep = 0;
            for (std::size_t k = 0; k < sc.pending.size(); ++k) {
                const std::size_t c = sc.pending[k];
                if (is_vacuous(d, c, sc))
                    add(sc, c, npos, npos);
                else
                    sc.pending[keep++] = c;
            }
            if (keep == sc.pending.size())
                return false;
            sc.pending.resize(keep);
        }
    }

    const GeneratorSet* gs_;
    const Surface* s_;
    std::size_t n_;
    static constexpr std::int8_t cap_limit = 64;

    std::size_t stride_ = 0;
    std::vector<std::int8_t> meet_; // rows padded with zeros to stride_
};

inline CaptureResult find_capture_sequence(const GeneratorSet& gs, const DivisorClass& d,
                                           std::size_t budget = default_capture_budget)
{
    return CaptureEngine(gs).search(d, budget);
}

// --- ample enumeration --------------------------------------------------------

/// Calls visit(D) once per ample class with lo <= -K.D <= hi whose E_i
/// coordinates are nondecreasing. Ampleness is invariant under permuting
/// the E_i.
template <typename Visitor>
void for_each_sorted_ample(const Surface& s, std::int64_t lo, std::int64_t hi, Visitor&& visit)
{
    const int r = s.context().rank();
    const std::int64_t dd = s.degree();
    std::vector<std::int64_t> c(static_cast<std::size_t>(r) + 1);
    for (std::int64_t n = std::max<std::int64_t>(lo, 1); n <= hi; ++n) {
        // D^2 > 0 with Cauchy-Schwarz on the multiplicities: -d a^2 + 6 a n - n^2 > 0
        for (std::int64_t a = 1;; ++a) {
            const std::int64_t q = -dd * a * a + 6 * a * n - n * n;
            if (q <= 0) {
                if (a > n)
                    break;
                continue;
            }
            const std::int64_t total = 3 * a - n;
            c[0] = a;
            if (r == 0) {
                if (total == 0 && s.ample(DivisorClass(c)))
                    visit(DivisorClass(c));
                continue;
            }
            if (total < r)
                continue;
            // m_1 >= ... >= m_r >= 1 summing to total, stored as c[i] = -m_i.
            // Pairings with the exceptional curve types only involve the
            // largest multiplicities, so prefixes can be rejected early.
            auto prefix_ok = [&](int len) {
                auto m = [&](int i) { return -c[static_cast<std::size_t>(i)]; };
                auto sum = [&](int from, int to) {
                    std::int64_t t = 0;
                    for (int i = from; i <= to; ++i)
                        t += m(i);
                    return t;
                };
                switch (len) {
                case 2:
                    return a - sum(1, 2) > 0;
                case 5:
                    return 2 * a - sum(1, 5) > 0;
                case 7:
                    return 3 * a - m(1) - sum(1, 7) > 0;
                case 8:
                    return 4 * a - sum(1, 3) - sum(1, 8) > 0 && 5 * a - sum(1, 6) - sum(1, 8) > 0 &&
                           6 * a - m(1) - sum(1, 8) - sum(2, 8) > 0;
                default:
                    return true;
                }
            };
            auto rec = [&](auto&& self, int pos, std::int64_t left, std::int64_t cap) -> void {
                const int rest = r - pos;
                if (rest == 0) {
                    const DivisorClass d(c);
                    if (s.ample(d))
                        visit(d);
                    return;
                }
                for (std::int64_t v = std::min(cap, left - (rest - 1)); v >= 1 && v * rest >= left; --v) {
                    c[static_cast<std::size_t>(pos) + 1] = -v;
                    if (prefix_ok(pos + 1))
                        self(self, pos + 1, left - v, v);
                }
            };
            rec(rec, 0, total, a - 1);
        }
    }
}

/// Calls visit(D) for every distinct rearrangement of the E_i coordinates.
template <typename Visitor>
void for_each_arrangement(const DivisorClass& d, Visitor&& visit)
{
    std::vector<std::int64_t> c = d.to_vector();
    std::sort(c.begin() + 1, c.end());
    do {
        visit(DivisorClass(c));
    } while (std::next_permutation(c.begin() + 1, c.end()));
}

/// Every ample class with lo <= -K.D <= hi, each once.
template <typename Visitor>
void for_each_ample(const Surface& s, std::int64_t lo, std::int64_t hi, Visitor&& visit)
{
    for_each_sorted_ample(s, lo, hi, [&](const DivisorClass& rep) { for_each_arrangement(rep, visit); });
}

inline std::vector<DivisorClass> enumerate_ample(const Surface& s, std::int64_t lo, std::int64_t hi)
{
    std::vector<DivisorClass> out;
    for_each_ample(s, lo, hi, [&](const DivisorClass& d) { out.push_back(d); });
    std::sort(out.begin(), out.end());
    return out;
}

// --- scans --------------------------------------------------------------------

struct ScanOptions {
    std::int64_t min_degree = 1;
    std::int64_t max_degree = 1;
    std::size_t budget = default_capture_budget;
    unsigned jobs = 1;
    bool validate = true;        // replay every sequence with the generic predicates
    bool keep_sequences = false; // also store sequences of captured classes
};

struct ScanEntry {
    DivisorClass target;
    CaptureStatus status = CaptureStatus::unresolved;
    std::optional<CaptureSequence> sequence;
};

struct ScanReport {
    int degree = 0;
    std::int64_t min_degree = 0;
    std::int64_t max_degree = 0;
    std::uint64_t classes = 0;
    std::uint64_t captured = 0;
    std::uint64_t validated = 0;
    std::uint64_t invalid = 0;
    std::map<std::int64_t, std::uint64_t> classes_by_degree;
    std::vector<ScanEntry> entries; // unresolved and invalid ones always; sorted by class
    std::vector<std::string> validation_errors;
    bool sweeping_assumed = false;

    [[nodiscard]] std::uint64_t unresolved() const noexcept { return classes - captured; }
};

inline ScanReport scan_ample(const GeneratorSet& gs, const ScanOptions& opt)
{
    const Surface& s = gs.surface();
    if (s.degree() < 1 || s.degree() > 6)
        throw UnsupportedError("scan_ample needs degree 1..6");
    if (opt.min_degree > opt.max_degree)
        throw PreconditionError("empty degree range");
    const CaptureEngine engine(gs);

    std::vector<DivisorClass> reps;
    for_each_sorted_ample(s, opt.min_degree, opt.max_degree, [&](const DivisorClass& d) { reps.push_back(d); });

    const unsigned jobs = std::max(1u, opt.jobs);
    std::vector<ScanReport> parts(jobs);
    std::atomic<std::size_t> cursor{0};
    auto work = [&](unsigned w) {
        ScanReport& part = parts[w];
        CaptureEngine::Scratch sc;
        for (std::size_t k = cursor++; k < reps.size(); k = cursor++) {
            for_each_arrangement(reps[k], [&](const DivisorClass& d) {
                ++part.classes;
                ++part.classes_by_degree[anticanonical_degree(d)];
                CaptureResult res = engine.search(d, opt.budget, sc);
                bool keep = res.status != CaptureStatus::captured || opt.keep_sequences;
                if (res.status == CaptureStatus::captured) {
                    ++part.captured;
                    part.sweeping_assumed = part.sweeping_assumed || res.sequence->sweeping_assumed;
                    if (opt.validate) {
                        if (auto err = sequence_error(gs, *res.sequence)) {
                            ++part.invalid;
                            part.validation_errors.push_back(d.to_string() + ": " + *err);
                            keep = true;
                        }
                        else {
                            ++part.validated;
                        }
                    }
                }
                if (keep)
                    part.entries.push_back({d, res.status, std::move(res.sequence)});
            });
        }
    };
    if (jobs == 1) {
        work(0);
    }
    else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w)
            pool.emplace_back(work, w);
        for (auto& th : pool)
            th.join();
    }

    ScanReport out;
    out.degree = s.degree();
    out.min_degree = opt.min_degree;
    out.max_degree = opt.max_degree;
    for (ScanReport& p : parts) {
        out.classes += p.classes;
        out.captured += p.captured;
        out.validated += p.validated;
        out.invalid += p.invalid;
        out.sweeping_assumed = out.sweeping_assumed || p.sweeping_assumed;
        for (const auto& [k, v] : p.classes_by_degree)
            out.classes_by_degree[k] += v;
        std::move(p.entries.begin(), p.entries.end(), std::back_inserter(out.entries));
        std::move(p.validation_errors.begin(), p.validation_errors.end(), std::back_inserter(out.validation_errors));
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const ScanEntry& x, const ScanEntry& y) { return x.target < y.target; });
    std::sort(out.validation_errors.begin(), out.validation_errors.end());
    return out;
}

} // namespace dpcox

#endif
