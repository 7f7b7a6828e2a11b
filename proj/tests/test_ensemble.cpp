#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "widthlab/corr/parse.hpp"
#include "widthlab/ensemble/experiment.hpp"
#include "widthlab/presets.hpp"

using namespace widthlab;
using namespace widthlab::ensemble;

TEST_CASE("slope fit on exact power laws") {
    // v = c n^p reproduces p with zero residual
    std::vector<std::pair<double, double>> points;
    for (double n : {8.0, 16.0, 32.0, 64.0}) points.emplace_back(n, 3.7 * std::pow(n, -1.5));
    const auto fit = fit_slope(points);
    CHECK(fit.slope == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(fit.stderror == doctest::Approx(0.0));

    points.clear();
    for (double n : {8.0, 16.0, 32.0}) points.emplace_back(n, 42.0);
    CHECK(fit_slope(points).slope == doctest::Approx(0.0));

    points.clear();
    for (double n : {32.0, 64.0, 128.0}) points.emplace_back(n, 1.0 / n);
    CHECK(fit_slope(points).slope == doctest::Approx(-1.0).epsilon(1e-12));

    points.pop_back();
    CHECK_THROWS_AS(fit_slope(points), LowSignal);
}

TEST_CASE("sample stats") {
    const auto stats = sample_stats({1.0, 2.0, 3.0, 4.0});
    CHECK(stats.mean == doctest::Approx(2.5));
    CHECK(stats.variance == doctest::Approx(5.0 / 3.0));
    CHECK(stats.stderror == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig cfg;
    cfg.name = "ntk";
    cfg.spec = corr::parse("E[ d(m) f(x1) d(m) f(x2) ]");
    cfg.net.activation = net::Activation::linear;
    cfg.net.hidden_layers = 2;
    cfg.widths = {8, 16, 32};
    cfg.seeds_per_width = 3000;
    cfg.master_seed = 12;
    return cfg;
}

}  // namespace

TEST_CASE("kernel scan is flat and respects the bound") {
    const auto result = run(tiny_config());
    CHECK(!result.mean_low_signal);
    CHECK(std::abs(result.mean_fit.slope) < 0.25);
    CHECK(result.bound == Rational(0));
    CHECK(!result.mean_bound_violated);
    // kernel variance falls like 1/n, well below its 2 s_C = 0 bound
    CHECK(result.variance_fit.slope < -0.5);
    CHECK(!result.variance_bound_violated);
}

TEST_CASE("identical config reproduces identical report bytes") {
    namespace fs = std::filesystem;
    const auto cfg = tiny_config();
    auto read = [](const std::string& path) {
        std::ifstream is(path);
        std::stringstream ss;
        ss << is.rdbuf();
        return ss.str();
    };
    const auto r1 = run(cfg);
    emit_report({r1}, "scan_a", "{}");
    const auto r2 = run(cfg);
    emit_report({r2}, "scan_b", "{}");
    CHECK(read("scan_a/ntk.csv") == read("scan_b/ntk.csv"));
    CHECK(read("scan_a/summary.json") == read("scan_b/summary.json"));
    CHECK(read("scan_a/ntk.csv").rfind("n,mean,variance,stderr,count\n", 0) == 0);

    // round trip through a plain csv parse
    std::istringstream csv(read("scan_a/ntk.csv"));
    std::string line;
    std::getline(csv, line);
    for (const auto& ws : r1.per_width) {
        REQUIRE(std::getline(csv, line));
        std::istringstream fields(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(fields, cell, ',')) row.push_back(std::stod(cell));
        REQUIRE(row.size() == 5);
        CHECK(row[0] == ws.width);
        CHECK(row[1] == ws.stats.mean);
        CHECK(row[2] == ws.stats.variance);
        CHECK(row[3] == ws.stats.stderror);
        CHECK(row[4] == ws.stats.count);
    }
    fs::remove_all("scan_a");
    fs::remove_all("scan_b");
}

TEST_CASE("results are independent of the worker count") {
    auto cfg = tiny_config();
    cfg.workers = 1;
    const auto serial = run(cfg);
    cfg.workers = 4;
    const auto parallel = run(cfg);
    for (std::size_t w = 0; w < serial.per_width.size(); ++w) {
        CHECK(serial.per_width[w].stats.mean == parallel.per_width[w].stats.mean);
        CHECK(serial.per_width[w].stats.variance == parallel.per_width[w].stats.variance);
    }
}

TEST_CASE("doubling the seed count shrinks the standard error by about sqrt(2)") {
    auto cfg = tiny_config();
    cfg.seeds_per_width = 400;
    const auto wide = run(cfg);
    cfg.seeds_per_width = 200;
    const auto narrow = run(cfg);
    const double ratio = narrow.per_width[0].stats.stderror / wide.per_width[0].stats.stderror;
    CHECK(ratio == doctest::Approx(std::sqrt(2.0)).epsilon(0.2));
}

TEST_CASE("suite shares draws across rows") {
    auto shared = tiny_config();
    const auto rows = builtin_rows();
    const std::vector<std::pair<std::string, corr::CorrelationSpec>> two = {rows[0], rows[2]};
    const auto suite = run_suite(two, shared);
    REQUIRE(suite.size() == 2);
    // the kernel row in the suite matches a standalone run with the same seed
    auto solo = shared;
    solo.spec = rows[2].second;
    const auto alone = run(solo);
    for (std::size_t w = 0; w < suite[1].per_width.size(); ++w)
        CHECK(suite[1].per_width[w].stats.mean ==
              doctest::Approx(alone.per_width[w].stats.mean).epsilon(1e-12));
}

TEST_CASE("bound violation flag trips on a fabricated slope") {
    // fabricate growing means with tiny errors: slope +1 against a 0 bound
    ScalingResult fake;
    std::vector<std::pair<double, double>> points;
    for (double n : {8.0, 16.0, 32.0}) points.emplace_back(n, n);
    fake.mean_fit = fit_slope(points);
    fake.bound = Rational(0);
    const bool violated = fake.mean_fit.slope > fake.bound.value() + 3.0 * fake.mean_fit.stderror;
    CHECK(violated);
}

TEST_CASE("config validation") {
    auto cfg = tiny_config();
    cfg.widths = {8, 16};
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.widths = {8, 16, 16};
    CHECK_THROWS_AS(cfg.validate(), Error);
}
