// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace rffsim
{
struct SolverRequest
{
    double size_s{0};
    double dt_s{0.005};
    double max_cycle_s{1.0};
    //! Resolution for p; zero means p = T / x exactly.
    double p_step{0};
};

struct SolverResult
{
    double cycle_s{0};
    double arming_p{0};
    double mean_s{0};
    double sd_s{0};
    double mean_err{0};
    double sd_ratio{0};
};

//! Mean and standard deviation tolerance used for cycle parameters.
inline constexpr double cycle_tolerance = 0.01;

//! Evaluate the geometric-IAT moments and tolerances for one (T, p).
SolverResult evaluate_cycle_params(double size_s, double cycle_s, double p);

//! True when the mean error and sd ratio are within tolerance.
bool satisfies_tolerances(SolverResult const& r);

/*!
 * Exhaustive search over T in {dt, 2dt, ..., T_max}.
 *
 * Each T is paired with p = T / x (optionally rounded to the p grid); the
 * feasible candidate with the smallest mean error wins, ties going to the
 * larger T. Throws SolverError naming the tightest violated constraint if
 * nothing is feasible.
 */
SolverResult solve_cycle_params(SolverRequest const& req);

}  // namespace rffsim
