// SPDX-License-Identifier: Apache-2.0
#include "rffsim/session.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <doctest.h>

#include "rffsim/error.hpp"
#include "rffsim/solver.hpp"

using namespace rffsim;

namespace
{
//! Every window of the sorted samples holding ceil(0.95 n) points; keep the
//! narrowest, first one on ties.
std::pair<double, double> hdi_oracle(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    auto n = v.size();
    auto w = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n) - 1e-9));
    w = std::max<std::size_t>(w, 1);
    std::pair<double, double> best{v.front(), v.back()};
    double width = best.second - best.first + 1;
    for (std::size_t i = 0; i + w <= n; ++i)
    {
        double d = v[i + w - 1] - v[i];
        if (d < width)
        {
            width = d;
            best = {v[i], v[i + w - 1]};
        }
    }
    return best;
}

ScheduleSpec ri(double size)
{
    auto sol = solve_cycle_params({size, 0.005, 1.0});
    return ScheduleSpec::timed(ScheduleKind::ri, sol.cycle_s, sol.arming_p);
}

SessionConfig small_config()
{
    SessionConfig cfg;
    cfg.duration_s = 120;
    cfg.repetitions = 8;
    cfg.rates_per_min = {0, 30, 90, 200};
    cfg.seed = 5;
    return cfg;
}
}  // namespace

TEST_CASE("hdi examples")
{
    std::vector<double> one{7};
    CHECK(hdi(one) == std::pair<double, double>{7, 7});

    std::vector<double> seq(100);
    std::iota(seq.begin(), seq.end(), 0.0);
    CHECK(hdi(seq) == std::pair<double, double>{0, 94});

    std::vector<double> pile(100, 3.0);
    pile[0] = -50;
    pile[99] = 80;
    auto h = hdi(pile);
    CHECK(h.first == 3.0);
    CHECK(h.second == 3.0);

    std::vector<double> empty;
    CHECK_THROWS_AS(hdi(empty), RuntimeError);
}

TEST_CASE("hdi matches a brute-force window search")
{
    Rng rng = make_rng(8);
    std::gamma_distribution<double> skew(2.0, 1.5);
    for (int trial = 0; trial < 200; ++trial)
    {
        std::size_t n = 1 + rng() % 300;
        std::vector<double> v(n);
        for (auto& x : v)
            x = std::round(skew(rng) * 4) / 4;  // ties on purpose
        auto got = hdi(v);
        auto want = hdi_oracle(v);
        REQUIRE(got == want);
        auto lo = std::lower_bound(v.begin(), v.end(), got.first);
        (void)lo;
        auto inside = std::count_if(v.begin(), v.end(), [&](double x) {
            return x >= got.first && x <= got.second;
        });
        CHECK(static_cast<double>(inside) >= 0.95 * static_cast<double>(n) - 1e-9);
    }
}

TEST_CASE("zero responding earns nothing on response-contingent schedules")
{
    for (auto kind : {ScheduleKind::ri, ScheduleKind::rdrl})
    {
        auto spec = ScheduleSpec::timed(kind, 0.095, 0.019);
        auto rec = run_session(spec, {0.0, 0.005, std::nullopt}, 600, 0.005, 1);
        CHECK(rec.reinforcers == 0);
        CHECK(rec.responses == 0);
    }
    auto rec = run_session(ScheduleSpec::ratio(5), {0.0, 0.005, std::nullopt},
                           600, 0.005, 1);
    CHECK(rec.reinforcers == 0);
}

TEST_CASE("session totals are consistent")
{
    auto rec = run_session(ri(10), {100, 0.005, std::nullopt}, 600, 0.005, 3);
    CHECK(rec.steps == 120000);
    CHECK(rec.reinforcers <= rec.armings);
    CHECK(rec.reinforcers <= rec.responses);
    CHECK(rec.reinforcement_rate_per_min
          == doctest::Approx(static_cast<double>(rec.reinforcers) / 10));
    CHECK(rec.response_rate_per_min
          == doctest::Approx(static_cast<double>(rec.responses) / 10));
    CHECK_THROWS_AS(run_session(ri(10), {100, 0.005, std::nullopt}, 600.001,
                                0.005, 3),
                    ConfigError);
}

TEST_CASE("sweep results do not depend on thread count or cell order")
{
    auto cfg = small_config();
    ResponderSpec tmpl{0, 0.005, std::nullopt};
    cfg.threads = 1;
    auto serial = run_sweep(cfg, ri(5), tmpl);
    cfg.threads = 3;
    auto parallel = run_sweep(cfg, ri(5), tmpl);

    std::size_t cells = cfg.rates_per_min.size() * cfg.repetitions;
    std::vector<std::size_t> order(cells);
    std::iota(order.begin(), order.end(), 0);
    std::reverse(order.begin(), order.end());
    std::swap(order[2], order[17]);
    auto permuted = run_sweep_ordered(cfg, ri(5), tmpl, order);

    REQUIRE(serial.size() == cfg.rates_per_min.size());
    for (std::size_t i = 0; i < serial.size(); ++i)
    {
        CHECK(serial[i].samples == parallel[i].samples);
        CHECK(serial[i].samples == permuted[i].samples);
        CHECK(serial[i].hdi_lo == permuted[i].hdi_lo);
    }
    CHECK(serial[0].reinforcement_mean == 0.0);
}

TEST_CASE("sweep points carry summaries of their samples")
{
    auto cfg = small_config();
    auto pts = run_sweep(cfg, ri(5), {0, 0.005, std::nullopt});
    for (auto const& p : pts)
    {
        CHECK(p.samples.size() == cfg.repetitions);
        double mean = std::accumulate(p.samples.begin(), p.samples.end(), 0.0)
                      / static_cast<double>(p.samples.size());
        CHECK(p.reinforcement_mean == doctest::Approx(mean));
        CHECK(p.hdi_lo <= p.hdi_hi);
        auto h = hdi(p.samples);
        CHECK(h.first == p.hdi_lo);
        CHECK(h.second == p.hdi_hi);
    }
    CHECK(std::is_sorted(pts.begin(), pts.end(), [](auto const& a, auto const& b) {
        return a.rate_nominal < b.rate_nominal;
    }));
}

TEST_CASE("rate grids and profiles")
{
    auto g = rate_grid(0, 200, 5);
    CHECK(g.size() == 41);
    CHECK(g.back() == 200.0);
    CHECK(desk_profile().repetitions < paper_profile().repetitions);
    CHECK(paper_profile().duration_s == 3600.0);
    CHECK(paper_profile().repetitions == 500);
    CHECK_THROWS_AS(rate_grid(0, 10, 0), ConfigError);

    SessionConfig bad = small_config();
    bad.repetitions = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = small_config();
    bad.rates_per_min.clear();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}
