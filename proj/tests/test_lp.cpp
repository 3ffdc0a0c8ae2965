#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "olpb/dual_solver.hpp"
#include "olpb/lp.hpp"
#include "olpb/rng.hpp"
#include "test_util.hpp"

using namespace olpb;

namespace {

SampleSet random_instance(RngStream& rng, std::size_t n, int m) {
    SampleSet s;
    s.m = m;
    for (std::size_t j = 0; j < n; ++j) {
        s.rewards.push_back(rng.uniform(1.0, 19.0));
        for (int i = 0; i < m; ++i) s.consumption.push_back(rng.uniform(1.0, 19.0));
    }
    return s;
}

double dual_value(const SampleSet& s, const std::vector<double>& b,
                  const std::vector<double>& p) {
    double v = 0.0;
    for (int i = 0; i < s.m; ++i) v += b[i] * p[i];
    for (std::size_t j = 0; j < s.size(); ++j) {
        double ap = 0.0;
        for (int i = 0; i < s.m; ++i) ap += s.row(j)[i] * p[i];
        v += std::max(0.0, s.rewards[j] - ap);
    }
    return v;
}

void check_complementary_slackness(const SampleSet& s, const LpSolution& sol,
                                   double r_bar) {
    const double tol = 1e-9 * r_bar;
    for (std::size_t j = 0; j < s.size(); ++j) {
        double ap = 0.0;
        for (int i = 0; i < s.m; ++i) ap += s.row(j)[i] * sol.dual_prices[i];
        if (s.rewards[j] > ap + tol) CHECK(sol.primal_values[j] == doctest::Approx(1.0));
        if (s.rewards[j] < ap - tol) CHECK(sol.primal_values[j] == doctest::Approx(0.0));
    }
}

} // namespace

TEST_CASE("two-customer single-resource instance") {
    SampleSet s;
    s.m = 1;
    s.rewards = {2.0, 1.0};
    s.consumption = {1.0, 1.0};
    const LpSolution sol = solve_lp_bounded(s, {1.0});
    CHECK(sol.optimal_value == doctest::Approx(2.0));
    CHECK(sol.primal_values[0] == doctest::Approx(1.0));
    CHECK(sol.primal_values[1] == doctest::Approx(0.0));
    CHECK(sol.dual_prices[0] >= 1.0 - 1e-9);
    CHECK(sol.dual_prices[0] <= 2.0 + 1e-9);
    check_complementary_slackness(s, sol, 2.0);
    CHECK(testutil::lp_enumeration_value(s, {1.0}) == doctest::Approx(2.0));
}

TEST_CASE("two-resource instance with a blocking row") {
    SampleSet s;
    s.m = 2;
    s.rewards = {3.0, 1.0};
    s.consumption = {1.0, 1.0, 1.0, 0.0};
    const LpSolution sol = solve_lp_bounded(s, {1.0, 1.0});
    CHECK(sol.optimal_value == doctest::Approx(3.0));
    CHECK(sol.primal_values[0] == doctest::Approx(1.0));
    CHECK(sol.primal_values[1] == doctest::Approx(0.0));
    CHECK(testutil::lp_enumeration_value(s, {1.0, 1.0}) == doctest::Approx(3.0));
}

TEST_CASE("rejects bad inputs and accepts empty instances") {
    SampleSet s;
    s.m = 2;
    CHECK_THROWS_AS(solve_lp_bounded(s, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(solve_lp_bounded(s, {1.0, -1.0}), std::invalid_argument);
    const LpSolution sol = solve_lp_bounded(s, {1.0, 1.0});
    CHECK(sol.optimal_value == 0.0);
}

TEST_CASE("matches vertex enumeration on tiny random instances") {
    RngStream rng({31415, 0}, Substream::marks);
    for (int rep = 0; rep < 300; ++rep) {
        const int m = 1 + static_cast<int>(rng.uniform01() * 3);
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform01() * 7);
        const SampleSet s = random_instance(rng, n, m);
        std::vector<double> b(m);
        for (auto& bi : b) bi = rng.uniform(1.0, 19.0 * double(n) * 0.6);
        const LpSolution sol = solve_lp_bounded(s, b);
        const double oracle = testutil::lp_enumeration_value(s, b);
        CHECK(sol.optimal_value == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("strong duality and vertex structure on random instances") {
    RngStream rng({31415, 1}, Substream::marks);
    for (int m : {1, 2, 4}) {
        for (int rep = 0; rep < 120; ++rep) {
            const std::size_t n = 5 + static_cast<std::size_t>(rng.uniform01() * 150);
            const SampleSet s = random_instance(rng, n, m);
            std::vector<double> b(m);
            for (auto& bi : b) bi = rng.uniform(2.0, 8.0) * double(n);
            const LpSolution sol = solve_lp_bounded(s, b);

            const double dv = dual_value(s, b, sol.dual_prices);
            CHECK(std::fabs(sol.optimal_value - dv) <=
                  1e-9 * std::max(1.0, std::fabs(sol.optimal_value)));
            CHECK(sol.fractional_count <= m);
            for (double p : sol.dual_prices) CHECK(p >= 0.0);
            check_complementary_slackness(s, sol, 19.0);

            std::vector<double> used(m, 0.0);
            for (std::size_t j = 0; j < n; ++j)
                for (int i = 0; i < m; ++i) used[i] += s.row(j)[i] * sol.primal_values[j];
            double bnorm = 0.0;
            for (double bi : b) bnorm = std::max(bnorm, bi);
            for (int i = 0; i < m; ++i) CHECK(used[i] <= b[i] + 1e-9 * bnorm);
        }
    }
}

TEST_CASE("m=1 value agrees with the pwl solver through strong duality") {
    RngStream rng({31415, 2}, Substream::marks);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 120);
        const SampleSet s = random_instance(rng, n, 1);
        const double b = rng.uniform(1.5, 9.0) * double(n);
        const LpSolution lp = solve_lp_bounded(s, {b});
        const DualPrice pwl = solve_dual_single(s, b / double(n));
        const double via_pwl = dual_value(s, {b}, pwl.price);
        CHECK(std::fabs(lp.optimal_value - via_pwl) <=
              1e-9 * std::max(1.0, std::fabs(via_pwl)));
    }
}

TEST_CASE("deterministic pivoting: identical instances give identical output") {
    RngStream rng({31415, 3}, Substream::marks);
    const SampleSet s = random_instance(rng, 200, 4);
    const std::vector<double> b{900.0, 950.0, 1000.0, 1050.0};
    const LpSolution a = solve_lp_bounded(s, b);
    const LpSolution c = solve_lp_bounded(s, b);
    CHECK(a.primal_values == c.primal_values);
    CHECK(a.dual_prices == c.dual_prices);
    CHECK(a.iterations == c.iterations);
}

TEST_CASE("zero-budget rows force rejection of every consumer of that resource") {
    SampleSet s;
    s.m = 2;
    s.rewards = {5.0, 4.0};
    s.consumption = {1.0, 1.0, 0.0, 2.0};
    const LpSolution sol = solve_lp_bounded(s, {0.0, 3.0});
    CHECK(sol.primal_values[0] == doctest::Approx(0.0));
    CHECK(sol.optimal_value == doctest::Approx(4.0)); // second consumes none of row 1
}
