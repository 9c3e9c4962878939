#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <sys/wait.h>

using namespace dpcox;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun run_cli(const std::string& args)
{
    const std::string cmd = std::string(DPCOX_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p)
        throw std::runtime_error("popen failed");
    CliRun r;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0)
        r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

CommandOptions opts(int degree, std::string cls = {})
{
    CommandOptions o;
    o.degree = degree;
    o.cls = std::move(cls);
    return o;
}

} // namespace

TEST(ClassParser, RawAndSymbolic)
{
    const Surface& s = surface_of_degree(1);
    const SurfaceContext& ctx = s.context();
    const ClassParser p(s);
    EXPECT_EQ(p.parse("3,-1,-1,-1,-1,-1,-1,-1,-1"), ctx.anticanonical());
    EXPECT_EQ(p.parse(" 3, -1,-1,-1,-1,-1,-1,-1,-1 "), ctx.anticanonical());
    EXPECT_EQ(p.parse("-3K"), 3 * ctx.anticanonical());
    EXPECT_EQ(p.parse("-2K+E1"), 2 * ctx.anticanonical() + ctx.exceptional(1));
    EXPECT_EQ(p.parse("2L-E1-E2"), 2 * ctx.line() - ctx.exceptional(1) - ctx.exceptional(2));
    EXPECT_EQ(p.parse("-K+Q:0"), ctx.anticanonical() + enumerate_conics(s)[0]);
    EXPECT_EQ(p.parse("C:5"), s.curves()[5]);
    EXPECT_EQ(p.parse("T:0"), enumerate_twisted_cubics(s)[0]);
    EXPECT_EQ(p.parse("K"), ctx.canonical());
}

TEST(ClassParser, Errors)
{
    const ClassParser p(surface_of_degree(3));
    for (const char* bad : {"", "1,2", "1,,2", "E9", "Q:27", "Q0", "-K*2", "3K K", "X", "1,2,3,4,5,6,x"})
        EXPECT_THROW((void)p.parse(bad), UsageError) << bad;
}

TEST(Report, JsonRoundTrip)
{
    for (const Report& r : {cmd_curves(opts(4)), cmd_betti(opts(3)), cmd_nef(opts(1, "E1")),
                            cmd_decompose(opts(2, "-2K+E1")), cmd_capture(opts(3, "-2K"))}) {
        const nlohmann::json doc = report_to_json(r, true);
        EXPECT_EQ(doc.at("report_version"), 1);
        const Report back = report_from_json(nlohmann::json::parse(doc.dump()));
        EXPECT_EQ(back, r);
        const Report stable = report_from_json(report_to_json(r, false));
        EXPECT_TRUE(stable.timings.empty());
        EXPECT_EQ(stable.payload, r.payload);
    }
    EXPECT_THROW(report_from_json({{"report_version", 2}}), std::invalid_argument);
}

TEST(Report, Renderings)
{
    const Report r = cmd_betti(opts(2));
    const std::string csv = render(r, "csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "b1,divisors,h0,kind,matches,monomials");
    EXPECT_NE(csv.find("4,126,2,Q,true,6"), std::string::npos);
    EXPECT_NE(csv.find("25,1,3,-K,true,28"), std::string::npos);
    const std::string table = render(r, "table");
    EXPECT_EQ(table.rfind("betti: success", 0), 0u);
    EXPECT_THROW(render(r, "xml"), UsageError);
    EXPECT_EQ(render(cmd_nef(opts(1, "E1")), "csv").substr(0, 10), "key,value\n");
}

TEST(Commands, Curves)
{
    CommandOptions o = opts(1);
    Report r = cmd_curves(o);
    EXPECT_EQ(r.payload["summary"]["count"], 240);
    EXPECT_EQ(exit_code(r), 0);
    o.degree = 5;
    o.kind = "conic";
    EXPECT_EQ(cmd_curves(o).payload["summary"]["count"], 5);
    o.degree = 7;
    o.kind = "exceptional";
    o.list = true;
    r = cmd_curves(o);
    EXPECT_EQ(r.payload["summary"]["count"], 3);
    EXPECT_EQ(r.payload["rows"].size(), 3u);
    o.kind = "cubic";
    r = cmd_curves(o);
    EXPECT_TRUE(r.payload["summary"]["expected"].is_null());
    EXPECT_EQ(r.status, ReportStatus::success);
    o.degree = 8;
    EXPECT_THROW(cmd_curves(o), UsageError);
}

TEST(Commands, BettiTotals)
{
    const std::map<int, std::array<int, 3>> want{
        {1, {22443, 17399, 2401}}, {2, {784, 529, 127}}, {3, {135, 81, 27}}, {4, {40, 20, 10}}, {5, {15, 5, 5}}};
    for (const auto& [d, w] : want) {
        const Report r = cmd_betti(opts(d));
        EXPECT_EQ(r.status, ReportStatus::success) << "degree " << d;
        EXPECT_EQ(r.payload["summary"]["total_monomials"], w[0]);
        EXPECT_EQ(r.payload["summary"]["total_b1"], w[1]);
        EXPECT_EQ(r.payload["summary"]["total_divisors"], w[2]);
    }
    EXPECT_THROW(cmd_betti(opts(6)), UsageError);
}

TEST(Commands, Capture)
{
    Report r = cmd_capture(opts(1, "-4K"));
    EXPECT_EQ(r.status, ReportStatus::success);
    EXPECT_EQ(r.payload["summary"]["valid"], true);
    EXPECT_EQ(r.payload["summary"]["sweeping_assumed"], true);
    EXPECT_EQ(r.payload["rows"].size(), r.payload["summary"]["moves"].get<std::size_t>());

    r = cmd_capture(opts(2, "-K"));
    EXPECT_EQ(r.payload["summary"]["status"], "unresolved");
    EXPECT_EQ(r.payload["summary"]["expected_unresolved"], true);
    EXPECT_EQ(exit_code(r), 3);

    CommandOptions o = opts(2);
    o.scan = std::pair<std::int64_t, std::int64_t>{2, 4};
    r = cmd_capture(o);
    EXPECT_EQ(r.status, ReportStatus::success);
    EXPECT_EQ(r.payload["summary"]["classes"], 128);
    EXPECT_EQ(r.payload["summary"]["unresolved"], 1);
    EXPECT_EQ(r.payload["summary"]["unresolved_classes"][0]["expected"], true);

    o.cls = "-K";
    EXPECT_THROW(cmd_capture(o), UsageError);
    EXPECT_THROW(cmd_capture(opts(7, "-K")), UsageError);
}

TEST(Commands, SectionsAndCones)
{
    EXPECT_EQ(cmd_h0(opts(1, "-2K")).payload["summary"]["h0"], 4);
    const Report nef = cmd_nef(opts(1, "E1"));
    EXPECT_EQ(nef.payload["summary"]["nef"], false);
    EXPECT_EQ(nef.payload["summary"]["min_pairing"], -1);

    const Report dec = cmd_decompose(opts(1, "-2K"));
    EXPECT_EQ(dec.payload["summary"]["reconstructs"], true);
    const SurfaceContext ctx(1);
    DivisorClass sum = ctx.zero();
    for (const auto& row : dec.payload["rows"])
        sum += row["coefficient"].get<std::int64_t>() * DivisorClass(row["generator"].get<std::vector<std::int64_t>>());
    EXPECT_EQ(sum, 2 * ctx.anticanonical());

    const Report fixed = cmd_decompose(opts(3, "L+2E1"));
    EXPECT_EQ(fixed.payload["summary"]["nef"], false);
    EXPECT_EQ(fixed.payload["rows"].size(), 3u);
    EXPECT_THROW(cmd_decompose(opts(3, "-L")), UsageError);
    EXPECT_THROW(cmd_h0(opts(3)), UsageError);
}

TEST(Commands, Triples)
{
    const std::map<std::string, int> want{{"-3K", 7}, {"-2K+E1", 6}, {"-K+Q:0", 5}};
    for (const auto& [cls, h] : want) {
        const Report r = cmd_triples(opts(1, cls));
        EXPECT_EQ(r.status, ReportStatus::success) << cls;
        EXPECT_EQ(r.payload["summary"]["unmatched"], 0);
        EXPECT_EQ(r.payload["summary"]["ambiguous"], 0);
        EXPECT_EQ(r.payload["summary"]["h0"], h);
    }
    EXPECT_THROW(cmd_triples(opts(2, "-3K")), UsageError);
}

TEST(Commands, CacheWritesFiles)
{
    const auto dir = std::filesystem::temp_directory_path() / "dpcox_cmd_cache";
    std::filesystem::remove_all(dir);
    CommandOptions o = opts(4);
    EXPECT_THROW(cmd_cache(o, false), UsageError);
    o.cache_dir = dir;
    const Report r = cmd_cache(o, false);
    EXPECT_EQ(r.payload["summary"]["files"], 3);
    EXPECT_TRUE(std::filesystem::exists(curve_cache_path(dir, 4, CurveKind::twisted_cubic)));
    std::filesystem::remove_all(dir);
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(run_cli("curves --degree 1").code, 0);
    EXPECT_EQ(run_cli("capture --degree 2 --class=-K").code, 3);
    EXPECT_EQ(run_cli("nef --degree 1 --class 1,2").code, 1);
    EXPECT_EQ(run_cli("bogus").code, 1);
    EXPECT_EQ(run_cli("curves --degree 1 --format xml").code, 1);
    EXPECT_EQ(run_cli("capture --degree 1 --scan 4-8").code, 1);
    EXPECT_EQ(run_cli("--help").code, 0);
}

TEST(Cli, OutputIsDeterministicAndParses)
{
    for (const char* args : {"betti --degree 3", "capture --degree 1 --class=-4K", "curves --degree 2 --list",
                             "capture --degree 3 --scan 1..5 --jobs 2", "decompose --degree 2 --class=-2K+E3"}) {
        const CliRun a = run_cli(args);
        const CliRun b = run_cli(args);
        ASSERT_EQ(a.code, 0) << args;
        EXPECT_EQ(a.out, b.out) << args;
        const Report r = report_from_json(nlohmann::json::parse(a.out));
        EXPECT_EQ(render(r, "json"), a.out);
    }
}

TEST(Cli, EnvironmentCacheDirectory)
{
    const auto dir = std::filesystem::temp_directory_path() / "dpcox_env_cache";
    std::filesystem::remove_all(dir);
    const std::string cmd = "DPCOX_CACHE_DIR=" + dir.string() + " " + DPCOX_CLI_PATH + " cache --degree 6 >/dev/null";
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    EXPECT_TRUE(std::filesystem::exists(curve_cache_path(dir, 6, CurveKind::conic)));
    std::filesystem::remove_all(dir);
}
