// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "random.hpp"

namespace rffsim
{
//! Two-state run/pause modulation; probabilities are per step.
struct BurstSpec
{
    double p_run{0};
    double p_break{0};
    double lor_per_min{0};

    //! Long-run fraction of steps spent running.
    double running_fraction() const { return p_run / (p_run + p_break); }
};

struct ResponderSpec
{
    double rate_per_min{0};
    double step_s{0.005};
    std::optional<BurstSpec> burst;

    //! Mean emitted responses per minute (nominal rate, or LOR scaled by the
    //! running fraction under break-and-run).
    double effective_rate_per_min() const;

    void validate() const;
};

//! Per-step response probability B / (60 / t); throws ConfigError if the
//! rate cannot be represented at this step length.
double response_probability(double rate_per_min, double step_s);

enum class ResponderMode
{
    running,
    pausing,
};

struct ResponderState
{
    ResponderMode mode{ResponderMode::running};
};

class Responder
{
  public:
    explicit Responder(ResponderSpec const& spec);

    ResponderSpec const& spec() const { return spec_; }

    ResponderState initial_state() const
    {
        return {spec_.burst ? ResponderMode::pausing : ResponderMode::running};
    }

    //! Update the run/pause mode (if any) and then draw a response.
    template<class Generator>
    bool step(ResponderState& state, Generator& rng) const
    {
        if (!bursty_)
        {
            return respond_(rng);
        }
        if (state.mode == ResponderMode::pausing)
        {
            if (start_run_(rng))
                state.mode = ResponderMode::running;
        }
        else if (start_break_(rng))
        {
            state.mode = ResponderMode::pausing;
        }
        return state.mode == ResponderMode::running && respond_(rng);
    }

  private:
    ResponderSpec spec_;
    bool bursty_{false};
    BernoulliGate respond_;
    BernoulliGate start_run_;
    BernoulliGate start_break_;
};

}  // namespace rffsim
