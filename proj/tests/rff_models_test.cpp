// SPDX-License-Identifier: Apache-2.0
#include "rffsim/rff_models.hpp"

#include <cmath>
#include <vector>

#include <doctest.h>

#include "rffsim/error.hpp"

using namespace rffsim;

namespace
{
RffModel model(Family f, double v)
{
    RffModel m;
    m.family = f;
    m.size_s = v;
    m.c = 20;
    m.m = 0.3;
    m.b = 60;
    if (f == Family::rdrl_2exp)
        m.c = 20;
    return m;
}

//! Golden-section maximizer used as an independent argmax.
double argmax(RffModel const& m, double lo, double hi)
{
    double const g = (std::sqrt(5.0) - 1) / 2;
    double a = lo, b = hi;
    for (int i = 0; i < 200; ++i)
    {
        double x1 = b - g * (b - a), x2 = a + g * (b - a);
        if (eval(m, x1) < eval(m, x2))
            a = x1;
        else
            b = x2;
    }
    return (a + b) / 2;
}
}  // namespace

TEST_CASE("Baum example and limits")
{
    auto m = model(Family::baum, 60);
    CHECK(eval(m, 12) == doctest::Approx(12.0 / 13.0).epsilon(1e-12));
    CHECK(eval(m, 0) == 0.0);
    CHECK(eval(m, 1e9) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(eval(m, 1e-6) == doctest::Approx(1e-6).epsilon(1e-6));
}

TEST_CASE("Killeen, Prelec and Rachlin limits")
{
    double v = 10;
    auto k = model(Family::killeen, v);
    auto p = model(Family::prelec, v);
    auto r = model(Family::rachlin, v);
    CHECK(eval(k, 0) == 0.0);
    CHECK(eval(p, 0) == 0.0);
    CHECK(eval(r, 0) == 0.0);
    CHECK(eval(k, 1e6) == doctest::Approx(6.0));
    CHECK(eval(p, 1e6) == doctest::Approx(6.0).epsilon(1e-4));
    CHECK(eval(r, 200) == doctest::Approx(6.0));
    CHECK(eval(k, 1e-4) == doctest::Approx(6.0 * 1e-4 / 20).epsilon(1e-3));
}

TEST_CASE("RI families are increasing and concave")
{
    for (auto f : {Family::baum, Family::killeen, Family::prelec, Family::rachlin})
    {
        for (double v : {5.0, 30.0, 300.0})
        {
            auto m = model(f, v);
            double h = 0.01;
            for (double b = 0.5; b <= 200; b += 0.5)
            {
                double d1 = eval(m, b + h) - eval(m, b);
                double d2 = eval(m, b + h) - 2 * eval(m, b) + eval(m, b - h);
                CHECK(d1 > 0);
                CHECK(d2 <= 1e-10);
            }
        }
    }
}

TEST_CASE("RDRL predictions are self-consistent")
{
    for (double v : {4.0, 8.0, 16.0, 32.0})
    {
        CAPTURE(v);
        auto pr = rdrl_predictions(v);
        auto m = rdrl_reduced_model(v);
        CHECK(pr.b == doctest::Approx(std::exp(6.0) / v));
        CHECK(pr.c == doctest::Approx(std::exp(5.0) / v));
        CHECK(std::abs(pr.reinforcement_max - eval(m, pr.rate_max)) < 1e-9);
        CHECK(pr.rate_inflection == doctest::Approx(2 * pr.rate_max));
        CHECK(std::abs(pr.reinforcement_inflection - eval(m, pr.rate_inflection)) < 1e-9);

        double numeric = argmax(m, 0.01, 10 * pr.rate_max);
        CHECK(numeric == doctest::Approx(pr.rate_max).epsilon(1e-6));

        // Second difference changes sign at the inflection.
        double h = 1e-3 * pr.rate_inflection;
        auto d2 = [&](double x) {
            return eval(m, x + h) - 2 * eval(m, x) + eval(m, x - h);
        };
        CHECK(d2(0.9 * pr.rate_inflection) < 0);
        CHECK(d2(1.1 * pr.rate_inflection) > 0);
    }
}

TEST_CASE("RDRL eight-second predictions")
{
    auto pr = rdrl_predictions(8);
    CHECK(pr.b == doctest::Approx(50.43).epsilon(1e-3));
    CHECK(pr.c == doctest::Approx(18.55).epsilon(1e-3));
    CHECK(pr.rate_max == doctest::Approx(29.35).epsilon(1e-3));
    CHECK(pr.reinforcement_max == doctest::Approx(2.65).epsilon(1e-3));
}

TEST_CASE("RDRL scales track the published fits")
{
    struct Row
    {
        double v, b, c;
    };
    for (auto row : {Row{2, 212.55, 74.94}, Row{4, 99.68, 35.46},
                     Row{8, 48.25, 17.14}, Row{16, 23.94, 8.51}})
    {
        auto pr = rdrl_predictions(row.v);
        CHECK(std::abs(pr.b - row.b) / row.b < 0.15);
        CHECK(std::abs(pr.c - row.c) / row.c < 0.15);
    }
    CHECK(rdrl_predictions(4).b == doctest::Approx(100.857).epsilon(1e-4));
    CHECK(std::abs(rdrl_predictions(4).b - 99.68) / 99.68 < 0.02);
    CHECK(rdrl_predictions(2).c == doctest::Approx(74.19).epsilon(1e-3));
    CHECK(std::abs(rdrl_predictions(2).c - 74.94) / 74.94 < 0.02);
}

TEST_CASE("Rachlin exponent as a function of schedule size")
{
    CHECK(rachlin_m_of_size(5) == doctest::Approx(0.219).epsilon(0.02));
    CHECK(rachlin_m_of_size(60) == doctest::Approx(0.0456).epsilon(0.02));
    CHECK(rachlin_m_of_size(1) == doctest::Approx(0.6065).epsilon(1e-3));
    CHECK(std::abs(rachlin_m_of_size(5) - 0.210) / 0.210 < 0.05);
    CHECK(std::abs(rachlin_m_of_size(60) - 0.043) / 0.043 < 0.07);
    double prev = 1;
    for (double v = 1; v <= 600; v *= 1.5)
    {
        double m = rachlin_m_of_size(v);
        CHECK(m < prev);
        CHECK(m > 0);
        prev = m;
    }
}

TEST_CASE("parameter access and validation")
{
    auto m = model(Family::rachlin, 5);
    auto params = m.free_params();
    REQUIRE(params.size() == 2);
    std::vector<double> next{7.0, 0.4};
    m.set_free_params(next);
    CHECK(m.size_s == 7.0);
    CHECK(m.m == 0.4);
    CHECK(parameter_names(Family::killeen).size() == 2);
    CHECK(parameter_names(Family::rdrl_2exp).size() == 2);
    CHECK(parameter_names(Family::rdrl_reduced).empty());

    auto bad = model(Family::rachlin, 5);
    bad.m = 1.2;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = model(Family::baum, -1);
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK(parse_family("rdrl") == Family::rdrl_2exp);
    CHECK_THROWS_AS(parse_family("hyperbolic"), ConfigError);
    CHECK(in_domain(model(Family::baum, 5), 500));
    CHECK(!in_domain(model(Family::rachlin, 5), 201));
}
