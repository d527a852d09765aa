// SPDX-License-Identifier: Apache-2.0
#include "rffsim/solver.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "rffsim/error.hpp"

namespace rffsim
{
namespace
{
constexpr double tie_tolerance = 1e-12;

std::string describe(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}
}  // namespace

SolverResult evaluate_cycle_params(double size_s, double cycle_s, double p)
{
    SolverResult r;
    r.cycle_s = cycle_s;
    r.arming_p = p;
    r.mean_s = cycle_s / p;
    r.sd_s = r.mean_s * std::sqrt(1 - p);
    r.mean_err = std::abs(size_s - r.mean_s) / size_s;
    r.sd_ratio = r.sd_s / size_s;
    return r;
}

bool satisfies_tolerances(SolverResult const& r)
{
    return r.mean_err <= cycle_tolerance && r.sd_ratio <= 1
           && r.sd_ratio >= 1 - cycle_tolerance;
}

SolverResult solve_cycle_params(SolverRequest const& req)
{
    if (!(req.size_s > 0) || !std::isfinite(req.size_s))
        throw ConfigError("schedule size must be positive");
    if (!(req.dt_s > 0) || !(req.dt_s <= req.max_cycle_s))
        throw ConfigError("require 0 < dt <= T_max");
    if (req.p_step < 0)
        throw ConfigError("p grid step must be non-negative");

    auto count = static_cast<long>(
        std::floor(req.max_cycle_s / req.dt_s * (1 + 1e-12)));

    SolverResult best;
    bool found = false;

    // Smallest violation seen, to explain infeasibility.
    double closest = std::numeric_limits<double>::infinity();
    std::string closest_what = "no candidate with 0 < p <= 1";

    for (long k = 1; k <= count; ++k)
    {
        double cycle = static_cast<double>(k) * req.dt_s;
        double p = cycle / req.size_s;
        if (req.p_step > 0)
            p = std::round(p / req.p_step) * req.p_step;
        if (!(p > 0 && p <= 1))
            continue;

        SolverResult cand = evaluate_cycle_params(req.size_s, cycle, p);
        if (!satisfies_tolerances(cand))
        {
            struct
            {
                double excess;
                char const* what;
            } const checks[] = {
                {cand.mean_err - cycle_tolerance, "mean error <= 0.01"},
                {cand.sd_ratio - 1, "sd ratio <= 1"},
                {(1 - cycle_tolerance) - cand.sd_ratio, "sd ratio >= 0.99"},
            };
            for (auto const& c : checks)
            {
                if (c.excess > 0 && c.excess < closest)
                {
                    closest = c.excess;
                    closest_what = std::string(c.what) + " (T="
                                   + describe(cycle) + ", p=" + describe(p)
                                   + ", violated by " + describe(c.excess)
                                   + ")";
                }
            }
            continue;
        }
        if (!found || cand.mean_err < best.mean_err - tie_tolerance
            || (cand.mean_err <= best.mean_err + tie_tolerance
                && cand.cycle_s > best.cycle_s))
        {
            best = cand;
            found = true;
        }
    }
    if (!found)
    {
        throw SolverError("no (T, p) for size " + describe(req.size_s)
                          + " s with dt=" + describe(req.dt_s)
                          + " and T_max=" + describe(req.max_cycle_s)
                          + "; tightest violated constraint: " + closest_what);
    }
    return best;
}

}  // namespace rffsim
