// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "random.hpp"

namespace rffsim
{
enum class ScheduleKind
{
    ri,    //!< random interval
    rdrl,  //!< random differential reinforcement of low rates
    rt,    //!< random time
    rr,    //!< random ratio
};

std::string_view to_string(ScheduleKind kind);
ScheduleKind parse_schedule_kind(std::string_view name);

//---------------------------------------------------------------------------//
/*!
 * Schedule parameters.
 *
 * For the timed kinds, \c cycle_s is the cycle length T and \c arming_p the
 * probability of arming at the end of each cycle, giving a nominal size
 * T / p seconds. For RR, \c size is the mean ratio and the cycle fields are
 * unused.
 */
struct ScheduleSpec
{
    ScheduleKind kind{ScheduleKind::ri};
    double cycle_s{0};
    double arming_p{0};
    double size{0};

    static ScheduleSpec timed(ScheduleKind kind, double cycle_s, double p);
    static ScheduleSpec ratio(double size);

    //! Throws ConfigError on invalid parameters.
    void validate() const;
};

struct ScheduleState
{
    std::int64_t clock_ticks{0};
    bool armed{false};
    std::uint64_t armed_count{0};
    std::uint64_t delivered_count{0};
};

struct StepOutcome
{
    bool reinforced{false};
    bool armed_this_step{false};
};

//---------------------------------------------------------------------------//
/*!
 * Discrete-time schedule machine bound to a step length.
 *
 * Time advances in ticks of \c dt; the cycle length must be an integer
 * number of ticks so that boundaries land exactly on steps.
 *
 * - RI: the clock advances; at a boundary an unarmed schedule arms with
 *   probability p; an armed schedule delivers on the next response and the
 *   clock restarts. Armings do not accumulate.
 * - RDRL: a response resets the clock (and collects an arming if present).
 *   Without a response the clock advances; at a boundary the arming is drawn
 *   afresh with probability p, so an arming lapses if not collected before
 *   the following boundary.
 * - RT: at each boundary deliver with probability p regardless of
 *   responding.
 * - RR: each response delivers with probability 1 / size.
 */
class Schedule
{
  public:
    Schedule(ScheduleSpec const& spec, double dt);

    ScheduleSpec const& spec() const { return spec_; }
    double dt() const { return dt_; }
    std::int64_t cycle_ticks() const { return cycle_ticks_; }

    //! Clock reading in seconds.
    double clock_seconds(ScheduleState const& state) const
    {
        return static_cast<double>(state.clock_ticks) * dt_;
    }

    template<class Generator>
    inline StepOutcome
    step(ScheduleState& state, bool response, Generator& rng) const;

  private:
    ScheduleSpec spec_;
    double dt_;
    std::int64_t cycle_ticks_{1};
    BernoulliGate arm_;
    BernoulliGate ratio_;

    bool advance(ScheduleState& state) const
    {
        if (++state.clock_ticks >= cycle_ticks_)
        {
            state.clock_ticks = 0;
            return true;
        }
        return false;
    }
};

//---------------------------------------------------------------------------//
template<class Generator>
inline StepOutcome
Schedule::step(ScheduleState& state, bool response, Generator& rng) const
{
    StepOutcome out;
    switch (spec_.kind)
    {
        case ScheduleKind::ri:
            if (this->advance(state) && !state.armed && arm_(rng))
            {
                state.armed = true;
                ++state.armed_count;
                out.armed_this_step = true;
            }
            if (response && state.armed)
            {
                state.armed = false;
                state.clock_ticks = 0;
                ++state.delivered_count;
                out.reinforced = true;
            }
            break;
        case ScheduleKind::rdrl:
            if (response)
            {
                if (state.armed)
                {
                    state.armed = false;
                    ++state.delivered_count;
                    out.reinforced = true;
                }
                state.clock_ticks = 0;
            }
            else if (this->advance(state))
            {
                state.armed = arm_(rng);
                if (state.armed)
                {
                    ++state.armed_count;
                    out.armed_this_step = true;
                }
            }
            break;
        case ScheduleKind::rt:
            if (this->advance(state) && arm_(rng))
            {
                ++state.armed_count;
                ++state.delivered_count;
                out.armed_this_step = true;
                out.reinforced = true;
            }
            break;
        case ScheduleKind::rr:
            if (response && ratio_(rng))
            {
                ++state.armed_count;
                ++state.delivered_count;
                out.armed_this_step = true;
                out.reinforced = true;
            }
            break;
    }
    return out;
}

//! Number of whole ticks of \c dt in \c duration, or ConfigError if the
//! ratio is not integral (relative tolerance 1e-9).
std::int64_t exact_ticks(double duration, double dt, std::string_view what);

}  // namespace rffsim
