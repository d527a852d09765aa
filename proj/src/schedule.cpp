// SPDX-License-Identifier: Apache-2.0
#include "rffsim/schedule.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "rffsim/error.hpp"

namespace rffsim
{
std::string_view to_string(ScheduleKind kind)
{
    switch (kind)
    {
        case ScheduleKind::ri:
            return "RI";
        case ScheduleKind::rdrl:
            return "RDRL";
        case ScheduleKind::rt:
            return "RT";
        case ScheduleKind::rr:
            return "RR";
    }
    return "?";
}

ScheduleKind parse_schedule_kind(std::string_view name)
{
    std::string upper(name);
    for (auto& ch : upper)
        ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (upper == "RI")
        return ScheduleKind::ri;
    if (upper == "RDRL")
        return ScheduleKind::rdrl;
    if (upper == "RT")
        return ScheduleKind::rt;
    if (upper == "RR")
        return ScheduleKind::rr;
    throw ConfigError("unknown schedule kind '" + std::string(name) + "'");
}

ScheduleSpec ScheduleSpec::timed(ScheduleKind kind, double cycle_s, double p)
{
    ScheduleSpec spec;
    spec.kind = kind;
    spec.cycle_s = cycle_s;
    spec.arming_p = p;
    spec.size = p > 0 ? cycle_s / p : 0;
    spec.validate();
    return spec;
}

ScheduleSpec ScheduleSpec::ratio(double size)
{
    ScheduleSpec spec;
    spec.kind = ScheduleKind::rr;
    spec.size = size;
    spec.validate();
    return spec;
}

void ScheduleSpec::validate() const
{
    if (kind == ScheduleKind::rr)
    {
        if (!(size >= 1))
            throw ConfigError("RR size must be at least 1, got "
                              + std::to_string(size));
        return;
    }
    if (!(cycle_s > 0) || !std::isfinite(cycle_s))
        throw ConfigError("cycle length must be positive, got "
                          + std::to_string(cycle_s));
    if (!(arming_p > 0 && arming_p <= 1))
        throw ConfigError("arming probability must lie in (0, 1], got "
                          + std::to_string(arming_p));
}

std::int64_t exact_ticks(double duration, double dt, std::string_view what)
{
    if (!(dt > 0) || !std::isfinite(dt))
        throw ConfigError("time step must be positive");
    double ratio = duration / dt;
    double rounded = std::round(ratio);
    if (rounded < 1 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    {
        throw ConfigError(std::string(what) + " (" + std::to_string(duration)
                          + " s) is not an integer multiple of the step ("
                          + std::to_string(dt) + " s)");
    }
    return static_cast<std::int64_t>(rounded);
}

Schedule::Schedule(ScheduleSpec const& spec, double dt) : spec_(spec), dt_(dt)
{
    spec_.validate();
    if (!(dt > 0) || !std::isfinite(dt))
        throw ConfigError("time step must be positive");
    if (spec_.kind == ScheduleKind::rr)
    {
        ratio_ = BernoulliGate(1.0 / spec_.size);
    }
    else
    {
        cycle_ticks_ = exact_ticks(spec_.cycle_s, dt, "cycle length");
        arm_ = BernoulliGate(spec_.arming_p);
    }
}

}  // namespace rffsim
