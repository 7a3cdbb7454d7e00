// bqg: build the R-matrices and representations, run the verification
// suite, list the registered checks.
//
// Exit codes: 0 all checks pass, 1 at least one check fails, 2 usage or
// internal error.
#include <bqg/verify.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

struct Options {
    int rank = 2;
    std::string backend = "exact";
    std::string checks = "*";
    int z_samples = 0;
    int series_order = 8;
    std::uint64_t seed = 0;
    int jobs = 1;
    int mode_bound = 3;
    bool timing = false;
    std::string out;
    std::string dump_dir;

    bqg::Config config() const {
        bqg::Config c;
        c.rank = rank;
        c.backend = bqg::Backend::parse(backend);
        c.checks = checks;
        c.z_samples = z_samples;
        c.series_order = series_order;
        c.seed = seed;
        c.jobs = jobs;
        c.mode_bound = mode_bound;
        c.timing = timing;
        c.validate();
        return c;
    }
};

void add_common(CLI::App* app, Options& o) {
    app->add_option("--rank", o.rank, "rank n of so(2n+1), n >= 2")->capture_default_str();
    app->add_option("--backend", o.backend, "exact | numeric | numeric:BITS (BITS >= 64)")->capture_default_str();
    app->add_option("--seed", o.seed, "seed for the numeric sample point and the mutation test")->capture_default_str();
    app->add_option("--mode-bound", o.mode_bound, "largest |mode| of the affine vector representation")
        ->capture_default_str();
}

void write_text(const std::string& path, const std::string& body) {
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << body;
}

int cmd_build(const Options& o) {
    bqg::Context cx(o.config());
    const std::string dir = o.dump_dir.empty() ? "bqg-dump" : o.dump_dir;
    auto files = bqg::dump_artifacts(cx, dir);
    for (const auto& f : files) std::cout << (std::filesystem::path(dir) / f).string() << "\n";
    return kExitPass;
}

int cmd_verify(const Options& o) {
    const bqg::Config cfg = o.config();
    bqg::Context cx(cfg);
    auto reports = bqg::run_suite(cx);
    const std::string json = bqg::report_json(cfg, reports).dump(2) + "\n";
    if (!o.out.empty()) write_text(o.out, json);
    if (!o.dump_dir.empty()) bqg::dump_artifacts(cx, o.dump_dir);

    int pass = 0, fail = 0, skipped = 0;
    for (const auto& r : reports) {
        switch (r.outcome.status) {
            case bqg::Status::pass: ++pass; break;
            case bqg::Status::fail: ++fail; break;
            case bqg::Status::skipped: ++skipped; break;
        }
        // With the report going to stdout, keep stdout pure JSON.
        std::ostream& log = o.out == "-" ? std::cerr : std::cout;
        log << bqg::status_name(r.outcome.status) << "  " << r.id;
        if (r.outcome.status == bqg::Status::fail) log << "  " << r.outcome.witness;
        log << "\n";
    }
    std::ostream& log = o.out == "-" ? std::cerr : std::cout;
    log << pass << " passed, " << fail << " failed, " << skipped << " skipped\n";
    if (reports.empty()) log << "no check matches '" << cfg.checks << "'\n";
    return fail ? kExitFail : kExitPass;
}

int cmd_list(const std::string& checks) {
    const auto globs = bqg::split_globs(checks);
    for (const auto& c : bqg::registry())
        if (bqg::selected(c, globs)) std::cout << c.id << "\t" << c.paper_tag << "\n";
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-parameter quantum affine algebra of type B: construction and verification"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(bqg::kVersion));
    Options o;

    auto* build = app.add_subcommand("build", "write R, R^-1, K, C, projectors, spectral R, representations and L-matrices");
    add_common(build, o);
    build->add_option("--out,--dump-dir", o.dump_dir, "output directory")->default_str("bqg-dump");

    auto* verify = app.add_subcommand("verify", "run the verification suite");
    add_common(verify, o);
    verify->add_option("--checks", o.checks, "comma-separated globs over check ids and paper tags")->capture_default_str();
    verify->add_option("--z-samples", o.z_samples, "spectral sample points (0 = automatic, 7)")->capture_default_str();
    verify->add_option("--series-order", o.series_order, "truncation order T of spectral series")->capture_default_str();
    verify->add_option("--out", o.out, "JSON report path, '-' for stdout")->default_str("none");
    verify->add_option("--dump-dir", o.dump_dir, "also write artifact dumps here")->default_str("none");
    verify->add_option("--jobs", o.jobs, "worker threads")->capture_default_str();
    verify->add_flag("--timing", o.timing, "record runtime_ms (reports are then not reproducible)");

    auto* list = app.add_subcommand("list", "print id and paper tag of every registered check");
    list->add_option("--checks", o.checks, "comma-separated globs over check ids and paper tags")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitError;
    }

    try {
        if (*build) return cmd_build(o);
        if (*verify) return cmd_verify(o);
        if (*list) return cmd_list(o.checks);
    } catch (const bqg::ConfigError& e) {
        std::cerr << "bqg: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "bqg: internal error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
