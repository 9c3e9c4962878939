#include <dpcox/report.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <thread>

namespace {

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text)
{
    const auto dots = text.find("..");
    if (dots == std::string::npos)
        throw dpcox::UsageError("--scan expects a..b, got '" + text + "'");
    try {
        std::size_t used = 0;
        const std::string lo = text.substr(0, dots), hi = text.substr(dots + 2);
        const std::int64_t a = std::stoll(lo, &used);
        if (used != lo.size())
            throw std::invalid_argument(lo);
        const std::int64_t b = std::stoll(hi, &used);
        if (used != hi.size())
            throw std::invalid_argument(hi);
        return {a, b};
    }
    catch (const std::logic_error&) {
        throw dpcox::UsageError("--scan expects a..b, got '" + text + "'");
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exceptional curves, Cox ring relations and capture sequences on del Pezzo surfaces"};
    app.require_subcommand(1);
    app.fallthrough();

    dpcox::CommandOptions opt;
    opt.jobs = std::max(1u, std::thread::hardware_concurrency());
    std::string format = "json";
    std::string cache_dir;
    std::string scan;
    bool timings = false;
    bool all = false;

    app.add_option("--degree,-d", opt.degree, "Degree of the surface")->capture_default_str();
    app.add_option("--format,-f", format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "table"}))
        ->capture_default_str();
    app.add_option("--cache-dir", cache_dir, "Directory for cached curve sets")->envname("DPCOX_CACHE_DIR");
    app.add_option("--jobs,-j", opt.jobs, "Worker threads for scans")->check(CLI::PositiveNumber);
    app.add_option("--budget", opt.budget, "Terminal pairs tried per capture search")->capture_default_str();
    app.add_flag("--timings", timings, "Add wall-clock timings to json output");

    auto* curves = app.add_subcommand("curves", "Exceptional curves, conics or twisted cubics");
    curves->add_option("--kind", opt.kind, "exceptional, conic or cubic")
        ->check(CLI::IsMember({"exceptional", "conic", "cubic", "twisted_cubic"}))
        ->capture_default_str();
    curves->add_flag("--list", opt.list, "Include the classes");

    auto* betti = app.add_subcommand("betti", "Monomials, h0 and first Betti numbers in anticanonical degree two");

    auto* capture = app.add_subcommand("capture", "Capture sequence for one class, or a scan over ample classes");
    capture->add_option("--class,-c", opt.cls, "Target class");
    capture->add_option("--scan", scan, "Anticanonical degree range a..b");

    auto* h0 = app.add_subcommand("h0", "Dimension of the space of sections");
    auto* nef = app.add_subcommand("nef", "Nef, ample and big tests");
    auto* decompose = app.add_subcommand("decompose", "Fixed part plus nef generators");
    auto* triples = app.add_subcommand("triples", "Classify degree three monomials in degree one");
    for (auto* sub : {h0, nef, decompose, triples})
        sub->add_option("--class,-c", opt.cls, "Target class")->required();

    auto* cache = app.add_subcommand("cache", "Write curve sets into the cache directory");
    cache->add_flag("--all", all, "Every degree 1..7");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (!cache_dir.empty())
            opt.cache_dir = cache_dir;
        if (!scan.empty())
            opt.scan = parse_range(scan);
        dpcox::Report r;
        if (*curves)
            r = dpcox::cmd_curves(opt);
        else if (*betti)
            r = dpcox::cmd_betti(opt);
        else if (*capture)
            r = dpcox::cmd_capture(opt);
        else if (*h0)
            r = dpcox::cmd_h0(opt);
        else if (*nef)
            r = dpcox::cmd_nef(opt);
        else if (*decompose)
            r = dpcox::cmd_decompose(opt);
        else if (*triples)
            r = dpcox::cmd_triples(opt);
        else
            r = dpcox::cmd_cache(opt, all);
        std::cout << dpcox::render(r, format, timings);
        return dpcox::exit_code(r);
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
