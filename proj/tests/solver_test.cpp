// SPDX-License-Identifier: Apache-2.0
#include "rffsim/solver.hpp"

#include <cmath>
#include <limits>

#include <doctest.h>

#include "rffsim/error.hpp"

using namespace rffsim;

namespace
{
//! Brute force over the T grid with the closed-form moments of a
//! geometric number of cycles.
struct Best
{
    double cycle{0};
    double p{0};
    double err{std::numeric_limits<double>::infinity()};
};

Best brute_force(double size, double dt, double tmax)
{
    Best best;
    auto steps = static_cast<long>(std::floor(tmax / dt + 1e-9));
    for (long k = 1; k <= steps; ++k)
    {
        double t = static_cast<double>(k) * dt;
        double p = t / size;
        if (p <= 0 || p > 1)
            continue;
        double mean = t / p;
        double sd = mean * std::sqrt(1 - p);
        double err = std::abs(mean - size) / size;
        double ratio = sd / mean;
        if (err <= 0.01 && std::abs(ratio - 1) <= 0.01 && err <= best.err + 1e-12)
            best = {t, p, err};
    }
    return best;
}
}  // namespace

TEST_CASE("closed-form moments for a worked case")
{
    auto r = evaluate_cycle_params(5, 0.05, 0.01);
    CHECK(r.mean_s == doctest::Approx(5.0));
    CHECK(r.sd_s == doctest::Approx(4.97494).epsilon(1e-5));
    CHECK(r.sd_ratio == doctest::Approx(0.99499).epsilon(1e-5));
    CHECK(satisfies_tolerances(r));
    CHECK(!satisfies_tolerances(evaluate_cycle_params(5, 2.5, 0.5)));
}

TEST_CASE("solver agrees with an exhaustive grid search")
{
    for (double size : {5.0, 7.0, 10.0, 15.0, 30.0, 60.0, 8.0, 16.0, 120.0})
    {
        CAPTURE(size);
        auto got = solve_cycle_params({size, 0.005, 1.0});
        auto want = brute_force(size, 0.005, 1.0);
        CHECK(got.cycle_s == doctest::Approx(want.cycle).epsilon(1e-12));
        CHECK(got.arming_p == doctest::Approx(want.p).epsilon(1e-12));
        CHECK(satisfies_tolerances(got));
        CHECK(got.arming_p <= 0.0199 + 1e-12);
    }
}

TEST_CASE("solutions for the standard sizes")
{
    struct Row
    {
        double size, cycle;
    };
    for (auto row : {Row{5, 0.095}, Row{7, 0.135}, Row{10, 0.195},
                     Row{15, 0.295}, Row{30, 0.595}, Row{60, 1.0}})
    {
        auto r = solve_cycle_params({row.size, 0.005, 1.0});
        CHECK(r.cycle_s == doctest::Approx(row.cycle));
        CHECK(r.mean_err <= 0.01);
        CHECK(std::abs(r.sd_ratio - 1) <= 0.01);
    }
}

TEST_CASE("rounded p grid still produces a feasible pair")
{
    auto r = solve_cycle_params({7, 0.005, 1.0, 0.001});
    CHECK(satisfies_tolerances(r));
    double scaled = r.arming_p / 0.001;
    CHECK(std::abs(scaled - std::round(scaled)) < 1e-9);
}

TEST_CASE("infeasible requests name the violated constraint")
{
    CHECK_THROWS_AS(solve_cycle_params({0.01, 0.005, 1.0}), SolverError);
    try
    {
        solve_cycle_params({0.1, 0.005, 1.0});
        FAIL("expected SolverError");
    }
    catch (SolverError const& e)
    {
        CHECK(std::string(e.what()).find("sd") != std::string::npos);
    }
    CHECK_THROWS_AS(solve_cycle_params({-5, 0.005, 1.0}), ConfigError);
    CHECK_THROWS_AS(solve_cycle_params({5, 0.0, 1.0}), ConfigError);
}
