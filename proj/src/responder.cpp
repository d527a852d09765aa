// SPDX-License-Identifier: Apache-2.0
#include "rffsim/responder.hpp"

#include <cmath>
#include <string>

#include "rffsim/error.hpp"

namespace rffsim
{
double response_probability(double rate_per_min, double step_s)
{
    if (!(rate_per_min >= 0) || !std::isfinite(rate_per_min))
        throw ConfigError("response rate must be non-negative");
    if (!(step_s > 0) || !std::isfinite(step_s))
        throw ConfigError("time step must be positive");
    double p = rate_per_min / (60.0 * (1.0 / step_s));
    if (p > 1)
    {
        throw ConfigError("rate " + std::to_string(rate_per_min)
                          + "/min is not representable with a "
                          + std::to_string(step_s) + " s step");
    }
    return p;
}

double ResponderSpec::effective_rate_per_min() const
{
    if (!burst)
        return rate_per_min;
    return burst->lor_per_min * burst->running_fraction();
}

void ResponderSpec::validate() const
{
    response_probability(rate_per_min, step_s);
    if (burst)
    {
        auto in_unit = [](double p) { return p >= 0 && p <= 1; };
        if (!in_unit(burst->p_run) || !in_unit(burst->p_break))
            throw ConfigError("run/break probabilities must lie in [0, 1]");
        if (!(burst->p_run > 0))
            throw ConfigError("run probability must be positive");
        response_probability(burst->lor_per_min, step_s);
    }
}

Responder::Responder(ResponderSpec const& spec) : spec_(spec)
{
    spec_.validate();
    bursty_ = spec_.burst.has_value();
    if (bursty_)
    {
        respond_ = BernoulliGate(
            response_probability(spec_.burst->lor_per_min, spec_.step_s));
        start_run_ = BernoulliGate(spec_.burst->p_run);
        start_break_ = BernoulliGate(spec_.burst->p_break);
    }
    else
    {
        respond_ = BernoulliGate(
            response_probability(spec_.rate_per_min, spec_.step_s));
    }
}

}  // namespace rffsim
