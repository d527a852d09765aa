// SPDX-License-Identifier: Apache-2.0
#include "rffsim/session.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>
#include <tuple>

#include "rffsim/error.hpp"

namespace rffsim
{
namespace
{
unsigned resolve_threads(unsigned requested)
{
    if (requested > 0)
        return requested;
    if (char const* env = std::getenv("RFFSIM_THREADS"))
    {
        char* end = nullptr;
        long value = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && value > 0)
            return static_cast<unsigned>(value);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

ResponderSpec responder_at(ResponderSpec const& tmpl, double rate, double dt)
{
    ResponderSpec spec = tmpl;
    spec.step_s = dt;
    if (spec.burst)
    {
        spec.burst->lor_per_min = rate;
        spec.rate_per_min = spec.effective_rate_per_min();
    }
    else
    {
        spec.rate_per_min = rate;
    }
    return spec;
}
}  // namespace

SessionRecord run_session(ScheduleSpec const& schedule_spec,
                          ResponderSpec const& responder_spec,
                          double duration_s,
                          double dt_s,
                          Rng& rng)
{
    Schedule schedule(schedule_spec, dt_s);
    if (std::abs(responder_spec.step_s - dt_s) > 1e-12 * dt_s)
        throw ConfigError("responder step differs from the session step");
    Responder responder(responder_spec);
    std::int64_t steps = exact_ticks(duration_s, dt_s, "session duration");

    ResponderState rstate = responder.initial_state();
    ScheduleState sstate;
    std::uint64_t responses = 0;
    for (std::int64_t i = 0; i < steps; ++i)
    {
        bool response = responder.step(rstate, rng);
        responses += response;
        schedule.step(sstate, response, rng);
    }

    SessionRecord rec;
    rec.steps = steps;
    rec.responses = responses;
    rec.armings = sstate.armed_count;
    rec.reinforcers = sstate.delivered_count;
    double minutes = duration_s / 60.0;
    rec.response_rate_per_min = static_cast<double>(responses) / minutes;
    rec.reinforcement_rate_per_min
        = static_cast<double>(sstate.delivered_count) / minutes;
    return rec;
}

SessionRecord run_session(ScheduleSpec const& schedule,
                          ResponderSpec const& responder,
                          double duration_s,
                          double dt_s,
                          std::uint64_t seed)
{
    Rng rng = make_rng(seed);
    return run_session(schedule, responder, duration_s, dt_s, rng);
}

void SessionConfig::validate() const
{
    exact_ticks(duration_s, dt_s, "session duration");
    if (repetitions < 1)
        throw ConfigError("repetitions must be at least 1");
    if (rates_per_min.empty())
        throw ConfigError("rate grid is empty");
    for (double r : rates_per_min)
    {
        if (!(r >= 0) || !std::isfinite(r))
            throw ConfigError("rates must be non-negative");
    }
}

std::vector<double> rate_grid(double lo, double hi, double step)
{
    if (!(step > 0) || !(hi >= lo) || !(lo >= 0))
        throw ConfigError("rate grid needs 0 <= lo <= hi and step > 0");
    auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    std::vector<double> out;
    out.reserve(count + 1);
    for (std::size_t i = 0; i <= count; ++i)
        out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

SessionConfig desk_profile()
{
    SessionConfig c;
    c.duration_s = 600;
    c.dt_s = 0.005;
    c.repetitions = 100;
    c.rates_per_min = rate_grid(0, 200, 5);
    return c;
}

SessionConfig paper_profile()
{
    SessionConfig c;
    c.duration_s = 3600;
    c.dt_s = 0.005;
    c.repetitions = 500;
    c.rates_per_min = rate_grid(0, 200, 1);
    return c;
}

std::vector<SweepPoint> run_sweep(SessionConfig const& config,
                                  ScheduleSpec const& schedule,
                                  ResponderSpec const& responder_template)
{
    std::vector<std::size_t> order(config.rates_per_min.size()
                                   * config.repetitions);
    std::iota(order.begin(), order.end(), std::size_t{0});
    return run_sweep_ordered(config, schedule, responder_template, order);
}

std::vector<SweepPoint>
run_sweep_ordered(SessionConfig const& config,
                  ScheduleSpec const& schedule,
                  ResponderSpec const& responder_template,
                  std::span<std::size_t const> cell_order)
{
    config.validate();
    // Validate every grid point up front so no worker throws mid-sweep.
    Schedule(schedule, config.dt_s);
    for (double rate : config.rates_per_min)
        responder_at(responder_template, rate, config.dt_s).validate();

    std::size_t const reps = config.repetitions;
    std::size_t const cells = config.rates_per_min.size() * reps;
    if (cell_order.size() != cells)
        throw RuntimeError("cell order does not cover the sweep");

    std::vector<SessionRecord> records(cells);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;)
        {
            std::size_t slot = next.fetch_add(1);
            if (slot >= cells)
                return;
            std::size_t cell = cell_order[slot];
            double rate = config.rates_per_min[cell / reps];
            std::size_t rep = cell % reps;
            try
            {
                Rng rng = make_cell_rng(config.seed, rate, rep);
                records[cell] = run_session(
                    schedule,
                    responder_at(responder_template, rate, config.dt_s),
                    config.duration_s,
                    config.dt_s,
                    rng);
            }
            catch (...)
            {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(cells);
            }
        }
    };

    unsigned nthreads = std::min<std::size_t>(resolve_threads(config.threads),
                                              cells);
    if (nthreads <= 1)
    {
        worker();
    }
    else
    {
        std::vector<std::jthread> pool;
        pool.reserve(nthreads);
        for (unsigned i = 0; i < nthreads; ++i)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);

    std::vector<std::size_t> by_rate(config.rates_per_min.size());
    std::iota(by_rate.begin(), by_rate.end(), std::size_t{0});
    std::stable_sort(by_rate.begin(), by_rate.end(), [&](auto a, auto b) {
        return config.rates_per_min[a] < config.rates_per_min[b];
    });

    std::vector<SweepPoint> points;
    points.reserve(by_rate.size());
    for (std::size_t idx : by_rate)
    {
        SweepPoint pt;
        pt.rate_nominal = config.rates_per_min[idx];
        pt.samples.reserve(reps);
        double resp_sum = 0;
        double reinf_sum = 0;
        for (std::size_t r = 0; r < reps; ++r)
        {
            auto const& rec = records[idx * reps + r];
            pt.samples.push_back(rec.reinforcement_rate_per_min);
            resp_sum += rec.response_rate_per_min;
            reinf_sum += rec.reinforcement_rate_per_min;
        }
        pt.rate_realized = resp_sum / static_cast<double>(reps);
        pt.reinforcement_mean = reinf_sum / static_cast<double>(reps);
        std::tie(pt.hdi_lo, pt.hdi_hi) = hdi(pt.samples);
        points.push_back(std::move(pt));
    }
    return points;
}

std::pair<double, double> hdi(std::span<double const> samples, double mass)
{
    if (samples.empty())
        throw RuntimeError("HDI of an empty sample");
    if (!(mass > 0 && mass <= 1))
        throw ConfigError("HDI mass must lie in (0, 1]");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    std::size_t n = sorted.size();
    auto width = static_cast<std::size_t>(
        std::ceil(mass * static_cast<double>(n) - 1e-9));
    width = std::clamp<std::size_t>(width, 1, n);

    std::size_t best = 0;
    double best_span = sorted[width - 1] - sorted[0];
    for (std::size_t i = 1; i + width <= n; ++i)
    {
        double span = sorted[i + width - 1] - sorted[i];
        if (span < best_span)
        {
            best_span = span;
            best = i;
        }
    }
    return {sorted[best], sorted[best + width - 1]};
}

}  // namespace rffsim
