// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rff_models.hpp"

namespace rffsim
{
struct DataPoint
{
    double rate{0};           //!< B, responses per minute
    double reinforcement{0};  //!< R, reinforcers per minute
};

struct FitOptions
{
    //! Starting model; unset picks a data-driven start from \c size_hint.
    std::optional<RffModel> initial;
    //! Nominal schedule size (seconds) used for starting values and for the
    //! fixed RDRL asymptote.
    std::optional<double> size_hint;
    int max_iterations{200};
    double rss_tolerance{1e-10};
};

struct FitResult
{
    RffModel model;
    std::size_t n{0};
    int k{0};
    double rss{0};
    double tss{0};
    double r_squared{0};
    double aic{0};
    double bic{0};
    bool converged{false};
    int iterations{0};
    //! RSS after every accepted iteration, starting with the initial RSS.
    std::vector<double> rss_history;
};

//! Number of free (fitted) parameters for a family.
int free_parameter_count(Family family);

double aic(std::size_t n, double rss, int k);
double bic(std::size_t n, double rss, int k);

//! Sum of squared residuals of a model over the data.
double residual_sum_of_squares(RffModel const& model,
                               std::span<DataPoint const> data);

/*!
 * Damped least-squares (Levenberg-Marquardt) fit of one family.
 *
 * Scale parameters are optimized in log space and the Rachlin exponent in
 * logit space so the positivity and (0, 1) bounds always hold. Failure to
 * converge is reported via FitResult::converged; constant data throws
 * RuntimeError since R^2 is undefined.
 */
FitResult
fit(Family family, std::span<DataPoint const> data, FitOptions const& opts);

struct RankedFit
{
    FitResult fit;
    int bic_rank{0};
    int aic_rank{0};
    bool good{false};       //!< R^2 >= 0.9
    bool excellent{false};  //!< R^2 >= 0.95
};

//! Rank fits (ascending BIC); all must share n and TSS.
std::vector<RankedFit> compare(std::span<FitResult const> fits);

//! Fixed-width ranking table, one row per family.
std::string format_ranking(std::span<RankedFit const> ranking);

}  // namespace rffsim
