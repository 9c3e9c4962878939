#ifndef DPCOX_REPORT_HPP
#define DPCOX_REPORT_HPP

// Command reports: what each CLI subcommand computes, the values it is
// checked against, and the json / csv / table renderings.

#include "capture.hpp"

#include <cctype>
#include <charconv>
#include <chrono>
#include <functional>
#include <iomanip>
#include <sstream>

namespace dpcox {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr int report_version = 1;

enum class ReportStatus { success, partial, failure };

inline std::string to_string(ReportStatus s)
{
    switch (s) {
    case ReportStatus::success:
        return "success";
    case ReportStatus::partial:
        return "partial";
    case ReportStatus::failure:
        return "failure";
    }
    return "?";
}

inline ReportStatus report_status_from_string(const std::string& s)
{
    if (s == "success")
        return ReportStatus::success;
    if (s == "partial")
        return ReportStatus::partial;
    if (s == "failure")
        return ReportStatus::failure;
    throw std::invalid_argument("unknown report status '" + s + "'");
}

/// payload is {"summary": {...}, "rows": [...]}; rows share one set of keys.
struct Report {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    nlohmann::json payload = {{"summary", nlohmann::json::object()}, {"rows", nlohmann::json::array()}};
    ReportStatus status = ReportStatus::success;
    std::map<std::string, double> timings;

    friend bool operator==(const Report&, const Report&) = default;

    nlohmann::json& summary() { return payload["summary"]; }
    nlohmann::json& rows() { return payload["rows"]; }
};

/// 0 success, 2 mismatch against a reference value, 3 unresolved capture.
inline int exit_code(const Report& r)
{
    switch (r.status) {
    case ReportStatus::success:
        return 0;
    case ReportStatus::partial:
        return 3;
    case ReportStatus::failure:
        return 2;
    }
    return 2;
}

// --- serialization --------------------------------------------------------------

inline nlohmann::json report_to_json(const Report& r, bool with_timings)
{
    nlohmann::json doc = {{"report_version", report_version},
                          {"command", r.command},
                          {"parameters", r.parameters},
                          {"status", to_string(r.status)},
                          {"payload", r.payload}};
    if (with_timings)
        doc["timings"] = r.timings;
    return doc;
}

inline Report report_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object() || doc.value("report_version", 0) != report_version)
        throw std::invalid_argument("not a version 1 report");
    Report r;
    r.command = doc.at("command").get<std::string>();
    r.parameters = doc.at("parameters");
    r.status = report_status_from_string(doc.at("status").get<std::string>());
    r.payload = doc.at("payload");
    if (doc.contains("timings"))
        r.timings = doc.at("timings").get<std::map<std::string, double>>();
    return r;
}

namespace detail {

inline std::string cell(const nlohmann::json& v)
{
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_array()) {
        std::string s;
        for (const auto& x : v) {
            if (!s.empty())
                s += ' ';
            s += cell(x);
        }
        return s;
    }
    return v.dump();
}

inline std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    return out + "\"";
}

inline std::vector<std::string> row_columns(const nlohmann::json& rows)
{
    std::vector<std::string> cols;
    if (!rows.empty())
        for (const auto& [k, v] : rows.front().items())
            cols.push_back(k);
    return cols;
}

} // namespace detail

/// Rows when there are any, otherwise the summary as key,value lines.
inline std::string render_csv(const Report& r)
{
    std::ostringstream out;
    const nlohmann::json& rows = r.payload.at("rows");
    if (rows.empty()) {
        out << "key,value\n";
        for (const auto& [k, v] : r.payload.at("summary").items())
            out << detail::csv_escape(k) << ',' << detail::csv_escape(detail::cell(v)) << '\n';
        return out.str();
    }
    const auto cols = detail::row_columns(rows);
    for (std::size_t i = 0; i < cols.size(); ++i)
        out << (i ? "," : "") << detail::csv_escape(cols[i]);
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < cols.size(); ++i)
            out << (i ? "," : "") << detail::csv_escape(detail::cell(row.at(cols[i])));
        out << '\n';
    }
    return out.str();
}

inline std::string render_table(const Report& r)
{
    std::ostringstream out;
    out << r.command << ": " << to_string(r.status) << '\n';
    std::size_t w = 0;
    for (const auto& [k, v] : r.payload.at("summary").items())
        w = std::max(w, k.size());
    for (const auto& [k, v] : r.payload.at("summary").items())
        out << "  " << std::left << std::setw(static_cast<int>(w)) << k << "  " << detail::cell(v) << '\n';
    const nlohmann::json& rows = r.payload.at("rows");
    if (rows.empty())
        return out.str();
    const auto cols = detail::row_columns(rows);
    std::vector<std::size_t> width(cols.size());
    std::vector<std::vector<std::string>> cells;
    for (std::size_t i = 0; i < cols.size(); ++i)
        width[i] = cols[i].size();
    for (const auto& row : rows) {
        auto& line = cells.emplace_back();
        for (std::size_t i = 0; i < cols.size(); ++i) {
            line.push_back(detail::cell(row.at(cols[i])));
            width[i] = std::max(width[i], line.back().size());
        }
    }
    out << '\n';
    auto emit = [&](const std::vector<std::string>& line) {
        for (std::size_t i = 0; i < line.size(); ++i)
            out << "  " << std::left << std::setw(static_cast<int>(width[i])) << line[i];
        out << '\n';
    };
    emit(cols);
    for (const auto& line : cells)
        emit(line);
    return out.str();
}

inline std::string render(const Report& r, const std::string& format, bool with_timings = false)
{
    if (format == "json")
        return report_to_json(r, with_timings).dump(2) + '\n';
    if (format == "csv")
        return render_csv(r);
    if (format == "table")
        return render_table(r);
    throw UsageError("unknown format '" + format + "' (json, csv, table)");
}

// --- reference values -------------------------------------------------------------

namespace reference {

inline std::optional<std::uint64_t> curve_count(int degree, CurveKind kind)
{
    static const std::map<int, std::uint64_t> exceptional{{1, 240}, {2, 56}, {3, 27}, {4, 16},
                                                          {5, 10},  {6, 6},  {7, 3}};
    static const std::map<int, std::uint64_t> conic{{1, 2160}, {2, 126}, {3, 27}, {4, 10}, {5, 5}};
    const auto& m = kind == CurveKind::exceptional ? exceptional : conic;
    if (kind == CurveKind::twisted_cubic || !m.contains(degree))
        return std::nullopt;
    return m.at(degree);
}

/// Table 2 rows by degree, keyed by divisor kind.
inline const std::map<std::string, BettiRow>& table2_rows(int degree)
{
    static const std::map<int, std::map<std::string, BettiRow>> rows{
        {1, {{"Q", {"Q", 2160, 7, 2, 5}}, {"-K+E", {"-K+E", 240, 30, 3, 27}}, {"-2K", {"-2K", 1, 123, 4, 119}}}},
        {2, {{"Q", {"Q", 126, 6, 2, 4}}, {"-K", {"-K", 1, 28, 3, 25}}}},
        {3, {{"Q", {"Q", 27, 5, 2, 3}}}},
        {4, {{"Q", {"Q", 10, 4, 2, 2}}}},
        {5, {{"Q", {"Q", 5, 3, 2, 1}}}},
    };
    return rows.at(degree);
}

struct Table2Totals {
    std::uint64_t monomials;
    std::int64_t b1;
    std::uint64_t divisors;
};

inline Table2Totals table2_totals(int degree)
{
    static const std::map<int, Table2Totals> t{
        {1, {22443, 17399, 2401}}, {2, {784, 529, 127}}, {3, {135, 81, 27}}, {4, {40, 20, 10}}, {5, {15, 5, 5}}};
    return t.at(degree);
}

inline std::int64_t triple_h0(TripleTable t)
{
    switch (t) {
    case TripleTable::minus_three_k:
        return 7;
    case TripleTable::minus_two_k_plus_e:
        return 6;
    case TripleTable::minus_k_plus_q:
        return 5;
    }
    return -1;
}

} // namespace reference

// --- class input ------------------------------------------------------------------

/// "c0,c1,...,cr" or a signed sum of terms [n]K, [n]L, [n]E<i>, [n]C:<id>,
/// [n]Q:<id>, [n]T:<id> (exceptional curve, conic, twisted cubic by stable id).
class ClassParser {
public:
    explicit ClassParser(const Surface& s, std::optional<std::filesystem::path> cache_dir = std::nullopt)
        : s_(&s)
        , cache_dir_(std::move(cache_dir))
    {
    }

    [[nodiscard]] DivisorClass parse(std::string_view text) const
    {
        std::string t;
        for (char ch : text)
            if (!std::isspace(static_cast<unsigned char>(ch)))
                t += ch;
        if (t.empty())
            throw UsageError("empty class");
        const bool symbolic = std::any_of(t.begin(), t.end(), [](char ch) { return std::isalpha(static_cast<unsigned char>(ch)); });
        return symbolic ? parse_symbolic(t) : parse_raw(t);
    }

private:
    static std::int64_t number(std::string_view t, std::size_t& pos, bool& found)
    {
        std::int64_t v = 0;
        const auto [end, ec] = std::from_chars(t.data() + pos, t.data() + t.size(), v);
        found = ec == std::errc{};
        if (ec == std::errc::result_out_of_range)
            throw UsageError("number out of range in '" + std::string(t) + "'");
        if (found)
            pos = static_cast<std::size_t>(end - t.data());
        return v;
    }

    [[nodiscard]] DivisorClass parse_raw(std::string_view t) const
    {
        std::vector<std::int64_t> coords;
        std::size_t pos = 0;
        for (;;) {
            bool found = false;
            coords.push_back(number(t, pos, found));
            if (!found)
                throw UsageError("bad coordinate list '" + std::string(t) + "'");
            if (pos == t.size())
                break;
            if (t[pos] != ',')
                throw UsageError("bad coordinate list '" + std::string(t) + "'");
            ++pos;
        }
        if (coords.size() != s_->context().length())
            throw UsageError("expected " + std::to_string(s_->context().length()) + " coordinates, got " +
                             std::to_string(coords.size()));
        try {
            return DivisorClass(coords);
        }
        catch (const std::exception& e) {
            throw UsageError(e.what());
        }
    }

    const CurveSet& set(CurveKind kind) const
    {
        if (kind == CurveKind::exceptional)
            return s_->curves();
        auto& slot = sets_[static_cast<std::size_t>(kind)];
        if (!slot)
            slot = std::make_unique<CurveSet>(load_curve_set(*s_, kind, cache_dir_));
        return *slot;
    }

    [[nodiscard]] DivisorClass parse_symbolic(std::string_view t) const
    {
        const SurfaceContext& ctx = s_->context();
        DivisorClass sum = ctx.zero();
        std::size_t pos = 0;
        auto bad = [&] { return UsageError("cannot parse class '" + std::string(t) + "'"); };
        while (pos < t.size()) {
            std::int64_t sign = 1;
            if (t[pos] == '+' || t[pos] == '-') {
                sign = t[pos] == '-' ? -1 : 1;
                ++pos;
            }
            else if (pos != 0) {
                throw bad();
            }
            bool found = false;
            std::int64_t coef = number(t, pos, found);
            if (!found)
                coef = 1;
            if (pos >= t.size())
                throw bad();
            const char atom = t[pos++];
            DivisorClass term;
            auto index = [&]() {
                bool ok = false;
                const std::int64_t i = number(t, pos, ok);
                if (!ok)
                    throw bad();
                return i;
            };
            auto from_set = [&](CurveKind kind) {
                if (pos >= t.size() || t[pos] != ':')
                    throw bad();
                ++pos;
                const std::int64_t i = index();
                const CurveSet& cs = set(kind);
                if (i < 0 || static_cast<std::size_t>(i) >= cs.size())
                    throw UsageError(to_string(kind) + " index " + std::to_string(i) + " out of range (" +
                                     std::to_string(cs.size()) + " classes)");
                return cs[static_cast<std::size_t>(i)];
            };
            switch (atom) {
            case 'K':
                term = ctx.canonical();
                break;
            case 'L':
                term = ctx.line();
                break;
            case 'E': {
                const std::int64_t i = index();
                if (i < 1 || i > ctx.rank())
                    throw UsageError("E" + std::to_string(i) + " does not exist in degree " +
                                     std::to_string(ctx.degree()));
                term = ctx.exceptional(static_cast<int>(i));
                break;
            }
            case 'C':
                term = from_set(CurveKind::exceptional);
                break;
            case 'Q':
                term = from_set(CurveKind::conic);
                break;
            case 'T':
                term = from_set(CurveKind::twisted_cubic);
                break;
            default:
                throw bad();
            }
            sum += (sign * coef) * term;
        }
        return sum;
    }

    const Surface* s_;
    std::optional<std::filesystem::path> cache_dir_;
    mutable std::array<std::unique_ptr<CurveSet>, 3> sets_;
};

// --- commands ---------------------------------------------------------------------

struct CommandOptions {
    int degree = 1;
    std::string kind = "exceptional";
    bool list = false;
    std::string cls;
    std::optional<std::pair<std::int64_t, std::int64_t>> scan;
    std::size_t budget = default_capture_budget;
    unsigned jobs = 1;
    std::optional<std::filesystem::path> cache_dir;
};

namespace detail {

inline nlohmann::json coords(const DivisorClass& d) { return d.to_vector(); }

inline const Surface& surface_for(int degree)
{
    if (degree < 1 || degree > 7)
        throw UsageError("--degree must be in 1..7, got " + std::to_string(degree));
    return surface_of_degree(degree);
}

template <typename F>
Report timed(F&& f)
{
    const auto t0 = std::chrono::steady_clock::now();
    Report r = f();
    r.timings["elapsed_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline DivisorClass require_class(const Surface& s, const CommandOptions& o)
{
    if (o.cls.empty())
        throw UsageError("--class is required");
    return ClassParser(s, o.cache_dir).parse(o.cls);
}

inline nlohmann::json sequence_json(const GeneratorSet& gs, const CaptureSequence& seq)
{
    nlohmann::json moves = nlohmann::json::array();
    for (std::size_t i = 0; i < seq.moves.size(); ++i) {
        const CaptureMove& m = seq.moves[i];
        nlohmann::json row = {{"step", i},
                              {"captured", gs[captured_generator(m)].name()},
                              {"type", ""},
                              {"a", ""},
                              {"b", ""},
                              {"witness", nlohmann::json::array()}};
        if (const auto* p = std::get_if<PairMove>(&m)) {
            row["type"] = "pair";
            row["a"] = gs[p->a].name();
            row["b"] = gs[p->b].name();
            row["witness"] = coords(p->witness);
        }
        else if (std::holds_alternative<VacuousMove>(m)) {
            row["type"] = "vacuous";
        }
        else {
            row["type"] = "anticanonical";
        }
        moves.push_back(std::move(row));
    }
    return moves;
}

inline bool expected_unresolved(const Surface& s, const DivisorClass& d)
{
    return s.degree() == 2 && d == s.context().anticanonical();
}

} // namespace detail

inline Report cmd_curves(const CommandOptions& o)
{
    return detail::timed([&] {
        const Surface& s = detail::surface_for(o.degree);
        const CurveKind kind = curve_kind_from_string(o.kind);
        const CurveSet cs = load_curve_set(s, kind, o.cache_dir);
        Report r;
        r.command = "curves";
        r.parameters = {{"degree", o.degree}, {"kind", to_string(kind)}, {"list", o.list}};
        const auto expected = reference::curve_count(o.degree, kind);
        r.summary() = {{"degree", o.degree},
                       {"kind", to_string(kind)},
                       {"count", cs.size()},
                       {"expected", expected ? nlohmann::json(*expected) : nlohmann::json(nullptr)}};
        if (o.list)
            for (std::size_t i = 0; i < cs.size(); ++i)
                r.rows().push_back({{"id", i}, {"class", detail::coords(cs[i])}});
        if (expected && *expected != cs.size())
            r.status = ReportStatus::failure;
        return r;
    });
}

inline Report cmd_betti(const CommandOptions& o)
{
    return detail::timed([&] {
        if (o.degree < 1 || o.degree > 5)
            throw UsageError("betti needs --degree 1..5");
        const Surface& s = surface_of_degree(o.degree);
        const BettiTable t = betti_table_degree2(s);
        const auto& ref = reference::table2_rows(o.degree);
        const auto tot = reference::table2_totals(o.degree);
        Report r;
        r.command = "betti";
        r.parameters = {{"degree", o.degree}};
        std::vector<std::string> mismatches;
        std::vector<BettiRow> rows = t.rows;
        std::sort(rows.begin(), rows.end(), [](const BettiRow& a, const BettiRow& b) {
            return a.divisor_kind < b.divisor_kind;
        });
        for (const BettiRow& row : rows) {
            const auto it = ref.find(row.divisor_kind);
            const bool ok = it != ref.end() && it->second == row;
            if (!ok)
                mismatches.push_back("row " + row.divisor_kind);
            r.rows().push_back({{"kind", row.divisor_kind},
                                {"divisors", row.divisor_count},
                                {"monomials", row.monomials_per_divisor},
                                {"h0", row.h0},
                                {"b1", row.b1},
                                {"matches", ok}});
        }
        if (rows.size() != ref.size())
            mismatches.push_back("row count");
        if (t.total_monomials != tot.monomials)
            mismatches.push_back("total monomials");
        if (t.total_b1 != tot.b1)
            mismatches.push_back("total b1");
        if (t.total_divisors != tot.divisors)
            mismatches.push_back("total divisors");
        r.summary() = {{"degree", o.degree},
                       {"total_monomials", t.total_monomials},
                       {"total_b1", t.total_b1},
                       {"total_divisors", t.total_divisors},
                       {"mismatches", mismatches}};
        if (!mismatches.empty())
            r.status = ReportStatus::failure;
        return r;
    });
}

inline Report cmd_capture(const CommandOptions& o)
{
    return detail::timed([&] {
        if (o.degree < 1 || o.degree > 6)
            throw UsageError("capture needs --degree 1..6");
        const Surface& s = surface_of_degree(o.degree);
        const GeneratorSet gs(s);
        Report r;
        r.command = "capture";
        r.parameters = {{"degree", o.degree}, {"budget", o.budget}};
        if (o.scan && !o.cls.empty())
            throw UsageError("--class and --scan are exclusive");
        if (o.scan) {
            const auto [lo, hi] = *o.scan;
            if (lo < 1 || lo > hi)
                throw UsageError("--scan needs 1 <= a <= b");
            r.parameters["scan"] = {lo, hi};
            ScanOptions so;
            so.min_degree = lo;
            so.max_degree = hi;
            so.budget = o.budget;
            so.jobs = o.jobs;
            const ScanReport rep = scan_ample(gs, so);
            std::uint64_t unexpected = 0;
            nlohmann::json unresolved = nlohmann::json::array();
            for (const ScanEntry& e : rep.entries) {
                if (e.status == CaptureStatus::captured)
                    continue;
                const bool expected = detail::expected_unresolved(s, e.target);
                unexpected += expected ? 0 : 1;
                unresolved.push_back({{"class", detail::coords(e.target)}, {"expected", expected}});
            }
            for (const auto& [k, v] : rep.classes_by_degree) {
                r.rows().push_back({{"anticanonical_degree", k}, {"classes", v}});
            }
            r.summary() = {{"degree", o.degree},
                           {"classes", rep.classes},
                           {"captured", rep.captured},
                           {"validated", rep.validated},
                           {"invalid", rep.invalid},
                           {"unresolved", rep.unresolved()},
                           {"unresolved_classes", unresolved},
                           {"validation_errors", rep.validation_errors},
                           {"sweeping_assumed", rep.sweeping_assumed}};
            if (rep.invalid > 0)
                r.status = ReportStatus::failure;
            else if (unexpected > 0)
                r.status = ReportStatus::partial;
            return r;
        }
        const DivisorClass d = detail::require_class(s, o);
        r.parameters["class"] = detail::coords(d);
        const CaptureResult res = find_capture_sequence(gs, d, o.budget);
        r.summary() = {{"class", detail::coords(d)},
                       {"status", to_string(res.status)},
                       {"attempts", res.attempts},
                       {"expected_unresolved", detail::expected_unresolved(s, d)}};
        if (res.sequence) {
            const auto err = sequence_error(gs, *res.sequence);
            nlohmann::json remaining = nlohmann::json::array();
            for (std::size_t g : res.sequence->remaining)
                remaining.push_back(gs[g].name());
            r.summary()["moves"] = res.sequence->moves.size();
            r.summary()["remaining"] = remaining;
            r.summary()["sweeping_assumed"] = res.sequence->sweeping_assumed;
            r.summary()["valid"] = !err;
            r.rows() = detail::sequence_json(gs, *res.sequence);
            if (err)
                r.status = ReportStatus::failure;
        }
        else {
            r.status = ReportStatus::partial;
        }
        return r;
    });
}

inline Report cmd_h0(const CommandOptions& o)
{
    return detail::timed([&] {
        const Surface& s = detail::surface_for(o.degree);
        const DivisorClass d = detail::require_class(s, o);
        const FixedPartDecomposition f = fixed_part_reduce(s, d);
        Report r;
        r.command = "h0";
        r.parameters = {{"degree", o.degree}, {"class", detail::coords(d)}};
        r.summary() = {{"class", detail::coords(d)},
                       {"h0", h0(s, d)},
                       {"effective", f.effective},
                       {"nef_part", detail::coords(f.nef_part)}};
        for (const DivisorClass& c : f.fixed)
            r.rows().push_back({{"fixed_curve", detail::coords(c)}, {"id", *s.curves().index_of(c)}});
        return r;
    });
}

inline Report cmd_nef(const CommandOptions& o)
{
    return detail::timed([&] {
        const Surface& s = detail::surface_for(o.degree);
        const DivisorClass d = detail::require_class(s, o);
        const auto [m, c] = s.min_pairing(d);
        const bool nef = m >= 0;
        Report r;
        r.command = "nef";
        r.parameters = {{"degree", o.degree}, {"class", detail::coords(d)}};
        r.summary() = {{"class", detail::coords(d)},
                       {"nef", nef},
                       {"ample", m > 0},
                       {"big_nef", nef && self_intersection(d) > 0},
                       {"min_pairing", m},
                       {"min_curve", detail::coords(s.curves()[c])},
                       {"self_intersection", self_intersection(d)},
                       {"anticanonical_degree", anticanonical_degree(d)}};
        return r;
    });
}

inline Report cmd_decompose(const CommandOptions& o)
{
    return detail::timed([&] {
        const Surface& s = detail::surface_for(o.degree);
        const DivisorClass d = detail::require_class(s, o);
        const FixedPartDecomposition f = fixed_part_reduce(s, d);
        if (!f.effective)
            throw UsageError("class " + d.to_string() + " is not effective");
        Report r;
        r.command = "decompose";
        r.parameters = {{"degree", o.degree}, {"class", detail::coords(d)}};
        const NefDecomposition dec = nef_decompose(s, f.nef_part);
        const bool ok = verify_nef_decomposition(s, f.nef_part, dec);
        for (const DivisorClass& c : f.fixed)
            r.rows().push_back({{"coefficient", 1}, {"generator", detail::coords(c)}, {"kind", "fixed_curve"}});
        for (const NefTerm& t : dec.terms)
            r.rows().push_back(
                {{"coefficient", t.coefficient}, {"generator", detail::coords(t.generator)}, {"kind", to_string(t.kind)}});
        r.summary() = {{"class", detail::coords(d)},
                       {"nef", f.fixed.empty()},
                       {"nef_part", detail::coords(f.nef_part)},
                       {"reconstructs", ok}};
        if (!ok)
            r.status = ReportStatus::failure;
        return r;
    });
}

inline Report cmd_triples(const CommandOptions& o)
{
    return detail::timed([&] {
        if (o.degree != 1)
            throw UsageError("triples needs --degree 1");
        const Surface& s = surface_of_degree(1);
        const DivisorClass d = detail::require_class(s, o);
        const GeneratorSet gs(s);
        const TripleClassification tc = tag_triples(gs, d);
        const std::int64_t dim = h0(s, d);
        const std::int64_t expected = reference::triple_h0(tc.table);
        Report r;
        r.command = "triples";
        r.parameters = {{"degree", 1}, {"class", detail::coords(d)}};
        r.summary() = {{"class", detail::coords(d)},
                       {"table", to_string(tc.table)},
                       {"monomials", tc.monomials},
                       {"unmatched", tc.unmatched.size()},
                       {"ambiguous", tc.ambiguous.size()},
                       {"h0", dim},
                       {"expected_h0", expected}};
        for (const auto& [form, n] : tc.histogram)
            r.rows().push_back({{"form", form}, {"monomials", n}});
        if (!tc.clean() || dim != expected)
            r.status = ReportStatus::failure;
        return r;
    });
}

/// Writes every curve set for one degree (or all of 1..7) into the cache.
inline Report cmd_cache(const CommandOptions& o, bool all_degrees)
{
    return detail::timed([&] {
        if (!o.cache_dir)
            throw UsageError("cache needs --cache-dir or DPCOX_CACHE_DIR");
        Report r;
        r.command = "cache";
        r.parameters = {{"degree", all_degrees ? nlohmann::json("all") : nlohmann::json(o.degree)}};
        int lo = o.degree, hi = o.degree;
        if (all_degrees) {
            lo = 1;
            hi = 7;
        }
        std::size_t files = 0;
        for (int deg = lo; deg <= hi; ++deg) {
            const Surface& s = detail::surface_for(deg);
            for (CurveKind kind : {CurveKind::exceptional, CurveKind::conic, CurveKind::twisted_cubic}) {
                const CurveSet cs = load_curve_set(s, kind, o.cache_dir);
                const auto path = curve_cache_path(*o.cache_dir, deg, kind);
                r.rows().push_back({{"degree", deg},
                                    {"kind", to_string(kind)},
                                    {"count", cs.size()},
                                    {"file", path.filename().string()}});
                ++files;
            }
        }
        r.summary() = {{"files", files}};
        return r;
    });
}

} // namespace dpcox

#endif
