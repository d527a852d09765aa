// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace rffsim
{
//! Candidate feedback-function families.
enum class Family
{
    baum,          //!< R = 1 / (V/60 + 1/B)
    killeen,       //!< R = (60/V) (1 - exp(-B/c))
    prelec,        //!< R = B (1 - exp(-60 / (V B)))
    rachlin,       //!< R = (60/V) (B / Bmax)^m
    rdrl_2exp,     //!< R = (60/V) (exp(-B/b) - exp(-B/c))
    rdrl_reduced,  //!< rdrl_2exp with b = e^6/V, c = e^5/V
};

std::string_view to_string(Family family);
Family parse_family(std::string_view name);

//---------------------------------------------------------------------------//
/*!
 * A feedback-function model with its parameter values.
 *
 * Only the fields relevant to the family are read. For the RDRL families the
 * asymptote 60/V is fixed by the schedule size and never fitted.
 */
struct RffModel
{
    Family family{Family::baum};
    double size_s{1};  //!< V
    double c{1};       //!< Killeen scale or RDRL rising scale
    double m{0.2};     //!< Rachlin exponent
    double bmax{200};  //!< Rachlin normalizing rate
    double b{1};       //!< RDRL falling scale

    //! Throws ConfigError if parameters are outside their domain.
    void validate() const;

    //! Free-parameter vector in canonical order (see parameter_names).
    std::vector<double> free_params() const;
    void set_free_params(std::span<double const> values);
};

//! Names of the free parameters of a family, in canonical order.
std::span<char const* const> parameter_names(Family family);

//! Reinforcers per minute at response rate \c rate (responses per minute).
//! B = 0 returns the analytic limit, which is 0 for every family.
double eval(RffModel const& model, double rate);

//! False when evaluating Rachlin beyond Bmax (extrapolation).
bool in_domain(RffModel const& model, double rate);

//! Closed-form RDRL quantities for the reduced law.
struct RdrlPredictions
{
    double b{0};
    double c{0};
    double rate_max{0};           //!< Bm
    double reinforcement_max{0};  //!< Rm
    double rate_inflection{0};    //!< Bi
    double reinforcement_inflection{0};  //!< Ri
};

RdrlPredictions rdrl_predictions(double size_s);

//! Empirical Rachlin exponent as a function of schedule size.
double rachlin_m_of_size(double size_s);

//! Reduced RDRL model for a schedule size.
RffModel rdrl_reduced_model(double size_s);

}  // namespace rffsim
