#include <doctest.h>

#include "widthlab/corr/cluster.hpp"
#include "widthlab/corr/parse.hpp"
#include "widthlab/feynman/diagram.hpp"
#include "widthlab/feynman/dot.hpp"
#include "widthlab/feynman/double_line.hpp"
#include "widthlab/feynman/exact.hpp"
#include "widthlab/feynman/report.hpp"
#include "widthlab/presets.hpp"
#include "widthlab/rng.hpp"

using namespace widthlab;

TEST_CASE("two-point function has a single diagram") {
    const auto spec = corr::parse("E[ f(x1) f(x2) ]");
    const auto diagrams = feynman::enumerate_all(spec, 1);
    REQUIRE(diagrams.size() == 1);
    const auto dl = feynman::double_line(diagrams[0]);
    CHECK(dl.vertex_count() == 2);
    CHECK(dl.loop_count() == 1);

    const auto report = feynman::exponent(spec, 1);
    CHECK(report.diagram_count == 1);
    CHECK(report.tight_exponent == Rational(0));
}

TEST_CASE("two-point function at depth 2: one diagram, two faces") {
    const auto spec = corr::parse("E[ f(x1) f(x2) ]");
    const auto diagrams = feynman::enumerate_all(spec, 2);
    REQUIRE(diagrams.size() == 1);
    const auto dl = feynman::double_line(diagrams[0]);
    CHECK(dl.vertex_count() == 4);
    CHECK(dl.loop_count() == 2);
    const auto report = feynman::exponent(spec, 2);
    CHECK(report.tight_exponent == Rational(0));
    REQUIRE(report.diagrams.size() == 1);
    CHECK(report.diagrams[0].euler == std::vector<int>{1});
}

TEST_CASE("kernel expectation at depth 2 has three diagrams with two faces each") {
    const auto spec = corr::parse("E[ d(m) f(x1) d(m) f(x2) ]");
    const auto report = feynman::exponent(spec, 2);
    CHECK(report.diagram_count == 3);
    for (const auto& d : report.diagrams) CHECK(d.loops == 2);
    CHECK(report.tight_exponent == Rational(0));
    CHECK(report.bound_consistent);
}

TEST_CASE("four-point function at depth 1: disconnected and connected classes") {
    const auto spec = corr::parse("E[ f(x1) f(x2) f(x3) f(x4) ]");
    const auto report = feynman::exponent(spec, 1);
    CHECK(report.diagram_count == 9);  // 3 matchings per type, no constraints
    bool saw_flat = false, saw_connected = false;
    for (const auto& d : report.diagrams) {
        if (d.s_gamma == Rational(0)) saw_flat = true;
        if (d.s_gamma == Rational(-1)) {
            saw_connected = true;
            CHECK(d.component_count == 1);
        }
    }
    CHECK(saw_flat);
    CHECK(saw_connected);
    CHECK(report.tight_exponent == Rational(0));
}

TEST_CASE("rank-3 row is tighter than the cluster bound at depth 3") {
    const auto rows = builtin_rows();
    const auto& spec = rows[4].second;  // three gradients against one rank-3 tensor
    const auto report = feynman::exponent(spec, 3);
    CHECK(report.cluster_exponent == Rational(-1));
    CHECK(report.tight_exponent == Rational(-2));
    CHECK(report.bound_consistent);
}

TEST_CASE("enumeration rejections") {
    corr::CorrelationSpec self;
    self.tensors = {{"x1", 2}, {"x2", 0}};
    self.pairs = {{{0, 0}, {0, 1}}};
    CHECK_THROWS_AS(feynman::enumerate_all(self, 1), NotEnumerable);

    // rank above depth+1 vanishes identically
    const auto row5 = builtin_rows()[4].second;
    CHECK_THROWS_AS(feynman::enumerate_all(row5, 1), NotEnumerable);

    feynman::EnumerationLimits tight_budget;
    tight_budget.tuple_budget = 10;
    const auto four = corr::parse("E[ f(x1) f(x2) f(x3) f(x4) ]");
    CHECK_THROWS_AS(feynman::enumerate_all(four, 2, tight_budget), SizeError);

    feynman::EnumerationLimits small;
    small.max_tensors = 2;
    CHECK_THROWS_AS(feynman::enumerate_all(four, 1, small), SizeError);
}

TEST_CASE("dot export styles forced edges") {
    const auto spec = corr::parse("E[ d(m) f(x1) d(m) f(x2) ]");
    const auto diagrams = feynman::enumerate_all(spec, 2);
    REQUIRE(!diagrams.empty());
    const std::string dot = feynman::to_dot(diagrams[0]);
    CHECK(dot.find("style=dashed") != std::string::npos);
    CHECK(dot.find("type=U") != std::string::npos);
    const std::string dl_dot = feynman::to_dot(feynman::double_line(diagrams[0]));
    CHECK(dl_dot.find("u0 -- ") != std::string::npos);
}

TEST_CASE("exact evaluation: products of two network values") {
    Eigen::MatrixXd gram(2, 2);
    gram << 1.7, 0.4, 0.4, 2.2;
    for (int depth : {1, 2}) {
        const auto value = feynman::exact_eval(corr::parse("E[ f(x1) f(x2) ]"), depth);
        CHECK(value.leading_power() == 0);
        // exactly gram(0,1) with unit coefficient at every width
        for (double n : {4.0, 64.0, 1e6}) CHECK(value.eval(n, gram) == doctest::Approx(0.4));
    }
}

TEST_CASE("exact evaluation: kernel at depth 1 is twice the inner product") {
    Eigen::MatrixXd gram(2, 2);
    gram << 1.0, 0.35, 0.35, 1.0;
    const auto value = feynman::exact_eval(corr::parse("E[ d(m) f(x1) d(m) f(x2) ]"), 1);
    CHECK(value.leading_power() == 0);
    for (double n : {2.0, 16.0, 1024.0})
        CHECK(value.eval(n, gram) == doctest::Approx(2 * 0.35).epsilon(1e-12));
}

TEST_CASE("exact evaluation limits") {
    CHECK_THROWS_AS(feynman::exact_eval(builtin_rows()[5].second, 1), SizeError);  // m = 6
    CHECK_THROWS_AS(feynman::exact_eval(corr::parse("E[ f(x1) f(x2) ]"), 3), SizeError);
}

namespace {

corr::CorrelationSpec random_enumerable_spec(SplitMix64& rng, int max_m, int depth) {
    for (;;) {
        const int m = 2 * (1 + static_cast<int>(rng.next_below(max_m / 2)));
        corr::CorrelationSpec spec;
        std::vector<corr::SlotRef> open;
        for (int t = 0; t < m; ++t) {
            const int rank = static_cast<int>(rng.next_below(std::min(3, depth + 1) + 1));
            spec.tensors.push_back({"x" + std::to_string(t + 1), rank});
            for (int s = 0; s < rank; ++s) open.push_back({t, s});
        }
        if (open.size() % 2 != 0) continue;
        bool ok = true;
        while (!open.empty() && ok) {
            const auto a = open.back();
            open.pop_back();
            const std::size_t j = rng.next_below(open.size());
            const auto b = open[j];
            open.erase(open.begin() + j);
            if (a.tensor == b.tensor) ok = false;
            spec.pairs.push_back({a, b});
        }
        if (ok) return spec;
    }
}

}  // namespace

TEST_CASE("property: even components, Euler bound, tight <= cluster bound") {
    SplitMix64 rng(7);
    int enumerated = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int depth = 1 + static_cast<int>(rng.next_below(3));
        const auto spec = random_enumerable_spec(rng, 6, depth);
        feynman::DiagramReport report;
        try {
            report = feynman::exponent(spec, depth);
        } catch (const NotEnumerable&) {
            continue;  // over-constrained contraction pattern: function vanishes
        }
        ++enumerated;
        CHECK(report.bound_consistent);
        for (const auto& d : report.diagrams)
            for (int chi : d.euler) CHECK(chi <= 1);

        // even vertex count per component, checked on a sample of diagrams
        int seen = 0;
        feynman::enumerate(spec, depth, [&](const feynman::FeynmanDiagram& g) {
            for (const auto& comp : g.components()) CHECK(comp.size() % 2 == 0);
            return ++seen < 16;
        });
    }
    CHECK(enumerated > 100);
}

TEST_CASE("property: leading power of the exact value matches the tight exponent") {
    SplitMix64 rng(40);
    int checked = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const int depth = 1 + static_cast<int>(rng.next_below(2));
        const auto spec = random_enumerable_spec(rng, 4, depth);
        try {
            const auto value = feynman::exact_eval(spec, depth);
            const auto report = feynman::exponent(spec, depth);
            if (value.terms.empty()) continue;
            CHECK(value.leading_power() == report.tight_exponent.value());
            ++checked;
        } catch (const NotEnumerable&) {
            continue;
        }
    }
    CHECK(checked > 40);
}
