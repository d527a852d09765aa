// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "responder.hpp"
#include "schedule.hpp"

namespace rffsim
{
struct SessionRecord
{
    std::int64_t steps{0};
    std::uint64_t responses{0};
    std::uint64_t armings{0};
    std::uint64_t reinforcers{0};
    double response_rate_per_min{0};
    double reinforcement_rate_per_min{0};
};

//! Couple a responder and schedule for duration / dt steps.
SessionRecord run_session(ScheduleSpec const& schedule,
                          ResponderSpec const& responder,
                          double duration_s,
                          double dt_s,
                          Rng& rng);

SessionRecord run_session(ScheduleSpec const& schedule,
                          ResponderSpec const& responder,
                          double duration_s,
                          double dt_s,
                          std::uint64_t seed);

struct SessionConfig
{
    double duration_s{600};
    double dt_s{0.005};
    std::uint32_t repetitions{100};
    std::vector<double> rates_per_min;
    std::uint64_t seed{1};
    //! Worker threads; zero picks RFFSIM_THREADS or hardware concurrency.
    unsigned threads{0};

    void validate() const;
};

//! Evenly spaced rate grid lo, lo+step, ..., hi (inclusive within 1e-9).
std::vector<double> rate_grid(double lo, double hi, double step);

//! Desk-scale defaults: 600 s sessions, 100 repetitions, B = 0, 5, ..., 200.
SessionConfig desk_profile();
//! Full-scale defaults: 3600 s sessions, 500 repetitions, B = 0, 1, ..., 200.
SessionConfig paper_profile();

struct SweepPoint
{
    double rate_nominal{0};
    double rate_realized{0};
    double reinforcement_mean{0};
    double hdi_lo{0};
    double hdi_hi{0};
    std::vector<double> samples;
};

/*!
 * Run every (rate, repetition) cell of a sweep.
 *
 * Each cell draws from its own stream seeded by (seed, rate, repetition), so
 * results do not depend on thread count or execution order. The responder
 * template's rate (or LOR, when bursty) is replaced by each grid value.
 * Points are returned in ascending rate order.
 */
std::vector<SweepPoint> run_sweep(SessionConfig const& config,
                                  ScheduleSpec const& schedule,
                                  ResponderSpec const& responder_template);

//! Same as run_sweep but executes cells in the given permutation of
//! [0, rates * repetitions); exposed for order-independence checks.
std::vector<SweepPoint>
run_sweep_ordered(SessionConfig const& config,
                  ScheduleSpec const& schedule,
                  ResponderSpec const& responder_template,
                  std::span<std::size_t const> cell_order);

//! Narrowest contiguous window holding ceil(mass * n) sorted samples;
//! leftmost on ties. Throws RuntimeError on empty input.
std::pair<double, double> hdi(std::span<double const> samples,
                              double mass = 0.95);

}  // namespace rffsim
