// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion holds.  Each line is backed by registered checks, run in a
// fresh context per configuration.
#include <bqg/verify.hpp>

#include <iostream>

namespace {

using namespace bqg;

struct Run {
    int rank;
    std::string backend;
    std::string checks;
};

struct Criterion {
    int number;
    std::string title;
    std::vector<Run> runs;
};

std::vector<CheckReport> run(const Run& r) {
    Config c;
    c.rank = r.rank;
    c.backend = Backend::parse(r.backend);
    c.checks = r.checks;
    return run_suite(c);
}

// Pass when at least one check ran, none failed, and every skipped check is
// one that has no instance at this rank.
bool judge(const std::vector<CheckReport>& reports, std::string& detail, int& ran) {
    for (const auto& r : reports) {
        if (r.outcome.status == Status::fail) {
            detail = r.id + ": " + r.outcome.witness;
            return false;
        }
        if (r.outcome.status == Status::pass) ++ran;
    }
    return true;
}

bool files_equal(const std::filesystem::path& a, const std::filesystem::path& b) {
    std::ifstream x(a, std::ios::binary), y(b, std::ios::binary);
    std::string sx((std::istreambuf_iterator<char>(x)), {}), sy((std::istreambuf_iterator<char>(y)), {});
    return x.good() == y.good() && sx == sy;
}

bool determinism(std::string& detail) {
    namespace fs = std::filesystem;
    Config c;  // n = 2, exact, every check
    std::string reports[2];
    std::vector<std::string> files;
    const fs::path base = fs::temp_directory_path() / "bqg-acceptance";
    fs::remove_all(base);
    for (int k = 0; k < 2; ++k) {
        Context cx(c);
        reports[k] = report_json(c, run_suite(cx)).dump(2);
        files = dump_artifacts(cx, base / std::to_string(k));
    }
    bool ok = reports[0] == reports[1];
    if (!ok) detail = "JSON reports differ";
    for (const auto& f : files)
        if (ok && !files_equal(base / "0" / f, base / "1" / f)) {
            ok = false;
            detail = "dump " + f + " differs";
        }
    fs::remove_all(base);
    return ok;
}

}  // namespace

int main() {
    const std::string rank2_suite =
        "rmat/braid,rmat/minimal-polynomial,rmat/projectors,rmat/skein,rmat/K-quasi-idempotent,rmat/KR,rmat/Kij,"
        "rmat/KR-cross,rmat/bwm,rmat/bwm-e-square,rmat/crossing-finite";
    const std::string spectral =
        "rmat/qybe-*,rmat/R-at-one,rmat/unitarity-*,rmat/symmetry-*,rmat/limits,rmat/crossing-affine,"
        "rmat/yang-baxterize-*";
    const std::string reps = "reps/B*,reps/D*";
    const std::string lyndon = "lyndon/*,appendix/*";
    const std::string gauss_exact = "rll/*,thm-relations/*,drinfeld/*";
    const std::string gauss_numeric = "rll/gauss,thm-relations/*";

    const std::vector<Criterion> criteria = {
        {1, "exact rank-2 R-matrix suite", {{2, "exact", rank2_suite}}},
        {2, "spectral identities, n=2 exact", {{2, "exact", spectral}}},
        {3, "representation suites (B1)-(B5), (D1)-(D9), n=2,3 exact", {{2, "exact", reps}, {3, "exact", reps}}},
        {4, "intertwining and nonintertwining, n=2,3 exact",
         {{2, "exact", "intert,nonintert"}, {3, "exact", "intert,nonintert"}}},
        {5, "Lyndon basis and L-matrix block, n=2,3 exact", {{2, "exact", lyndon}, {3, "exact", lyndon}}},
        {6, "Gauss/RLL block (n=2 exact, n=3 exact and numeric:128)",
         {{2, "exact", gauss_exact}, {3, "exact", gauss_exact}, {3, "numeric:128", gauss_numeric}}},
        {7, "mutation sensitivity, 20 single-entry mutations", {{2, "exact", "rmat/mutation-sensitivity"}}},
    };

    bool all = true;
    for (const auto& c : criteria) {
        bool ok = true;
        int ran = 0;
        std::string detail;
        for (const auto& r : c.runs) {
            if (!ok) break;
            try {
                ok = judge(run(r), detail, ran);
                if (!ok) detail = "n=" + std::to_string(r.rank) + " " + r.backend + ": " + detail;
            } catch (const std::exception& e) {
                ok = false;
                detail = e.what();
            }
        }
        if (ok && ran == 0) {
            ok = false;
            detail = "no check ran";
        }
        all = all && ok;
        std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << c.number << ": " << c.title << " (" << ran
                  << " checks)";
        if (!ok) std::cout << "  [" << detail << "]";
        std::cout << std::endl;
    }

    std::string detail;
    bool ok = false;
    try {
        ok = determinism(detail);
    } catch (const std::exception& e) {
        detail = e.what();
    }
    all = all && ok;
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion 8: determinism of reports and dumps";
    if (!ok) std::cout << "  [" << detail << "]";
    std::cout << std::endl;
    return all ? 0 : 1;
}
