#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "ecacm.h"

namespace {

struct Config {
    ecacm_config* p = nullptr;
    Config() { REQUIRE(ecacm_config_create(&p) == ECACM_OK); }
    ~Config() { ecacm_config_destroy(p); }
};

}  // namespace

TEST_CASE("version and status strings") {
    CHECK(std::string(ecacm_version()) == "1.0.0");
    CHECK(std::string(ecacm_status_string(ECACM_OK)) == "ok");
    CHECK(ecacm_status_string(static_cast<ecacm_status>(99)) != nullptr);
}

TEST_CASE("rules") {
    size_t count = 0;
    CHECK(ecacm_canonical_rules(nullptr, 0, &count) == ECACM_ERR_BUFFER_TOO_SMALL);
    CHECK(count == 88);
    std::vector<int> rules(count);
    CHECK(ecacm_canonical_rules(rules.data(), rules.size(), &count) == ECACM_OK);
    CHECK(rules.front() == 0);

    int orbit[4];
    size_t n = 0;
    CHECK(ecacm_rule_orbit(110, orbit, &n) == ECACM_OK);
    CHECK(n == 4);
    CHECK(std::vector<int>(orbit, orbit + n) == std::vector<int>{110, 124, 137, 193});
    CHECK(ecacm_rule_orbit(256, orbit, &n) == ECACM_ERR_DOMAIN);
    CHECK(std::strlen(ecacm_last_error()) > 0);
}

TEST_CASE("config handles") {
    Config c;
    CHECK(ecacm_config_set(c.p, "width", "1000") == ECACM_OK);
    CHECK(ecacm_config_set(c.p, "nope", "1") == ECACM_ERR_INVALID_ARGUMENT);
    CHECK(std::string(ecacm_last_error()).find("nope") != std::string::npos);
    CHECK(ecacm_config_set(nullptr, "width", "1") == ECACM_ERR_INVALID_ARGUMENT);
    CHECK(ecacm_config_load_file(c.p, "/nonexistent/x.cfg") == ECACM_ERR_IO);
    CHECK(ecacm_config_validate(c.p) == ECACM_OK);
    CHECK(ecacm_config_set(c.p, "window-l", "20") == ECACM_OK);
    CHECK(ecacm_config_validate(c.p) == ECACM_ERR_DOMAIN);

    char* dump = nullptr;
    REQUIRE(ecacm_config_dump(c.p, &dump) == ECACM_OK);
    CHECK(std::string(dump).find("width = 1000\n") != std::string::npos);
    ecacm_free_string(dump);
}

TEST_CASE("run and inspect an experiment") {
    Config c;
    ecacm_config_set(c.p, "rules", "110,30");
    ecacm_config_set(c.p, "width", "1000");
    ecacm_config_set(c.p, "tmax", "20");
    ecacm_config_set(c.p, "seeds", "1,2");

    int calls = 0;
    auto progress = [](int, uint64_t, int ok, void* user) {
        CHECK(ok == 1);
        ++*static_cast<int*>(user);
    };
    ecacm_experiment* exp = nullptr;
    REQUIRE(ecacm_run(c.p, progress, &calls, &exp) == ECACM_OK);
    CHECK(calls == 4);
    CHECK(ecacm_experiment_trace_count(exp) == 4);

    int rule = 0, ok = 0;
    uint64_t seed = 0;
    size_t n_points = 0;
    const char* err = nullptr;
    REQUIRE(ecacm_experiment_trace(exp, 0, &rule, &seed, &n_points, &ok, &err) == ECACM_OK);
    CHECK(rule == 30);
    CHECK(seed == 1);
    CHECK(n_points == 11);
    CHECK(ok == 1);
    CHECK(ecacm_experiment_trace(exp, 4, &rule, &seed, &n_points, &ok, &err) == ECACM_ERR_INVALID_ARGUMENT);

    ecacm_point pt{};
    REQUIRE(ecacm_experiment_point(exp, 0, 10, &pt) == ECACM_OK);
    CHECK(pt.t == 20);
    CHECK(pt.c_q >= 0.0);
    CHECK(pt.c_q <= pt.past_entropy + 1e-9);
    CHECK(std::abs(pt.gram_trace - 1.0) <= 1e-9);
    CHECK(ecacm_experiment_point(exp, 0, 11, &pt) == ECACM_ERR_INVALID_ARGUMENT);

    int ranked[2];
    double rates[2];
    size_t count = 0;
    REQUIRE(ecacm_experiment_ranking(exp, ranked, rates, 2, &count) == ECACM_OK);
    CHECK(count == 2);
    CHECK(ecacm_experiment_ranking(exp, ranked, rates, 1, &count) == ECACM_ERR_BUFFER_TOO_SMALL);

    char* csv = nullptr;
    REQUIRE(ecacm_experiment_csv(exp, &csv) == ECACM_OK);
    CHECK(std::string(csv).rfind("rule,seed,t,c_q,c_mu,n_states,gram_dim\n", 0) == 0);
    ecacm_free_string(csv);

    const auto dir = std::filesystem::temp_directory_path() / "ecacm_capi_out";
    std::filesystem::remove_all(dir);
    CHECK(ecacm_experiment_write(exp, dir.string().c_str()) == ECACM_OK);
    CHECK(std::filesystem::exists(dir / "complexity.csv"));
    CHECK(std::filesystem::exists(dir / "rule110.svg"));
    CHECK(ecacm_experiment_write(exp, "/dev/null/sub") == ECACM_ERR_IO);
    std::filesystem::remove_all(dir);
    ecacm_experiment_destroy(exp);

    ecacm_config_set(c.p, "tmax", "0");
    CHECK(ecacm_run(c.p, nullptr, nullptr, &exp) == ECACM_ERR_DOMAIN);
}

TEST_CASE("single rows and evolution") {
    std::vector<uint8_t> alt(4000);
    for (size_t i = 0; i < alt.size(); ++i) alt[i] = static_cast<uint8_t>(i % 2);
    ecacm_point pt{};
    REQUIRE(ecacm_analyze_row(alt.data(), alt.size(), 6, 0.05, 1, &pt) == ECACM_OK);
    CHECK(pt.n_states == 2);
    CHECK(pt.c_q == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(pt.c_mu == doctest::Approx(1.0).epsilon(1e-9));
    REQUIRE(ecacm_analyze_row(alt.data(), alt.size(), 6, 0.05, 0, &pt) == ECACM_OK);
    CHECK(std::isnan(pt.c_mu));
    CHECK(ecacm_analyze_row(alt.data(), 5, 6, 0.05, 1, &pt) == ECACM_ERR_DOMAIN);

    char* machine = nullptr;
    char* gram = nullptr;
    REQUIRE(ecacm_dump_row(alt.data(), alt.size(), 2, 0.05, &machine, &gram) == ECACM_OK);
    CHECK(std::string(machine).rfind("# states 2", 0) == 0);
    CHECK(std::string(gram).find("# spectrum") != std::string::npos);
    ecacm_free_string(machine);
    ecacm_free_string(gram);

    std::vector<uint8_t> rows(5 * 64);
    REQUIRE(ecacm_evolve(0, 64, 5, 1, 0, rows.data()) == ECACM_OK);
    for (auto v : rows) CHECK(v == 0);
    std::vector<uint8_t> a(10 * 100), b(10 * 100);
    REQUIRE(ecacm_evolve(110, 100, 10, 42, 0, a.data()) == ECACM_OK);
    REQUIRE(ecacm_evolve(110, 100, 10, 42, 0, b.data()) == ECACM_OK);
    CHECK(a == b);
}
