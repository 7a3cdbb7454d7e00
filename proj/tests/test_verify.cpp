#include <bqg/verify.hpp>

#include <gtest/gtest.h>

#include <set>

using namespace bqg;

namespace {

const CheckSpec* find(const std::string& id) {
    for (const auto& c : registry())
        if (c.id == id) return &c;
    return nullptr;
}

TEST(Registry, CatalogueContents) {
    EXPECT_GE(registry().size(), 40u);
    EXPECT_NE(find("rmat/braid"), nullptr);
    EXPECT_NE(find("appendix/metric-condition"), nullptr);
    EXPECT_NE(find("intert"), nullptr);
    EXPECT_NE(find("nonintert"), nullptr);
}

TEST(Registry, IdsAreUnique) {
    std::set<std::string> ids;
    for (const auto& c : registry()) EXPECT_TRUE(ids.insert(c.id).second) << c.id;
}

TEST(Selection, GlobsMatchIdsAndTags) {
    const auto by_id = split_globs("thm-relations/*");
    const auto by_tag = split_globs("prop nonintert");
    int n_id = 0, n_tag = 0;
    for (const auto& c : registry()) {
        if (selected(c, by_id)) {
            ++n_id;
            EXPECT_EQ(c.id.rfind("thm-relations/", 0), 0u);
        }
        if (selected(c, by_tag)) ++n_tag;
    }
    EXPECT_EQ(n_id, 17);
    EXPECT_EQ(n_tag, 1);
    EXPECT_TRUE(selected(*find("rmat/braid"), split_globs("nothing,rmat/br*")));
}

TEST(Config, Validation) {
    Config c;
    EXPECT_NO_THROW(c.validate());
    c.rank = 1;
    EXPECT_THROW(c.validate(), ConfigError);
    c = Config{};
    c.z_samples = 3;
    EXPECT_THROW(c.validate(), ConfigError);
    c = Config{};
    c.backend = Backend::parse("numeric:32");
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, BackendParsing) {
    EXPECT_FALSE(Backend::parse("exact").numeric);
    const Backend b = Backend::parse("numeric:256");
    EXPECT_TRUE(b.numeric);
    EXPECT_EQ(b.bits, 256u);
    EXPECT_EQ(b.str(), "numeric:256");
    EXPECT_EQ(Backend::parse("numeric").bits, kDefaultPrecisionBits);
    EXPECT_THROW(Backend::parse("float"), ConfigError);
    EXPECT_THROW(Backend::parse("numeric:abc"), ConfigError);
}

TEST(Suite, SelectedChecksPassInRegistryOrder) {
    Config c;
    c.checks = "rmat/braid,rmat/skein,rmat/KR";
    c.jobs = 2;
    const auto reports = run_suite(c);
    ASSERT_EQ(reports.size(), 3u);
    EXPECT_EQ(reports[0].id, "rmat/braid");
    EXPECT_EQ(reports[1].id, "rmat/skein");
    EXPECT_EQ(reports[2].id, "rmat/KR");
    EXPECT_FALSE(any_failed(reports));
}

TEST(Suite, CorruptedEntryFailsBraidWithWitness) {
    RBundle b = build_basic_R(2);
    b.R.set(0, 0, b.R.get(0, 0) * FieldElem(2L));
    const CheckOutcome o = checks::braid(b.R, 5);
    EXPECT_EQ(o.status, Status::fail);
    EXPECT_FALSE(o.witness.empty());
    EXPECT_EQ(o.residual, "nonzero");
}

TEST(Suite, NonintertwiningPassesByDetectingTheInequality) {
    Config c;
    c.checks = "nonintert";
    const auto reports = run_suite(c);
    ASSERT_EQ(reports.size(), 1u);
    EXPECT_EQ(reports[0].outcome.status, Status::pass) << reports[0].outcome.witness;
    EXPECT_NE(reports[0].outcome.note.find("LHS"), std::string::npos);
}

TEST(Suite, ExceptionsBecomeFailuresWithWitness) {
    Context cx(Config{});
    const CheckSpec boom{"test/boom", "none", [](Context&) -> CheckOutcome { throw std::runtime_error("boom"); }};
    const CheckReport r = run_check(boom, cx);
    EXPECT_EQ(r.outcome.status, Status::fail);
    EXPECT_EQ(r.outcome.witness, "exception: boom");
}

TEST(Report, SchemaAndDeterminism) {
    Config c;
    c.checks = "rmat/*-C,rmat/K*,reps/B1,thm-relations/X-X-far";
    const std::string a = report_json(c, run_suite(c)).dump(2);
    const std::string b = report_json(c, run_suite(c)).dump(2);
    EXPECT_EQ(a, b);
    const auto j = nlohmann::json::parse(a);
    EXPECT_EQ(j["meta"]["rank"], 2);
    EXPECT_EQ(j["meta"]["backend"], "exact");
    EXPECT_EQ(j["meta"]["seed"], 0);
    EXPECT_EQ(j["meta"]["version"], kVersion);
    ASSERT_FALSE(j["checks"].empty());
    for (const auto& ch : j["checks"]) {
        for (const char* key : {"id", "paper_tag", "status", "residual", "witness", "runtime_ms"})
            EXPECT_TRUE(ch.contains(key)) << key;
        EXPECT_TRUE(ch["runtime_ms"].is_null());
    }
    EXPECT_EQ(j["checks"].back()["status"], "skipped");
}

TEST(Report, NumericResidualIsAMagnitude) {
    Config c;
    c.rank = 2;
    c.backend = Backend::parse("numeric:128");
    c.checks = "rll/gauss";
    const auto reports = run_suite(c);
    ASSERT_EQ(reports.size(), 1u);
    EXPECT_EQ(reports[0].outcome.status, Status::pass);
    EXPECT_NE(reports[0].outcome.residual.find("max entry"), std::string::npos);
}

TEST(Dumps, ReproducibleAndComplete) {
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "bqg-test-dumps";
    fs::remove_all(base);
    Context a(Config{}), b(Config{});
    const auto files = dump_artifacts(a, base / "a");
    dump_artifacts(b, base / "b");
    for (const char* f : {"R.txt", "R_inv.txt", "K.txt", "C.txt", "P_plus.txt", "spectral_R_standard.txt",
                          "spectral_R_alternate.txt", "rep_T1.txt", "L_plus.txt"})
        EXPECT_NE(std::find(files.begin(), files.end(), f), files.end()) << f;
    for (const auto& f : files) {
        std::ifstream x(base / "a" / f, std::ios::binary), y(base / "b" / f, std::ios::binary);
        std::string sx((std::istreambuf_iterator<char>(x)), {}), sy((std::istreambuf_iterator<char>(y)), {});
        EXPECT_EQ(sx, sy) << f;
    }
    std::ifstream r(base / "a" / "R.txt");
    std::string header;
    std::getline(r, header);
    EXPECT_EQ(header, "ringmatrix 25 25 field");
    fs::remove_all(base);
}

}  // namespace
