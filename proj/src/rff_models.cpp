// SPDX-License-Identifier: Apache-2.0
#include "rffsim/rff_models.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "rffsim/error.hpp"

namespace rffsim
{
namespace
{
constexpr double e = std::numbers::e;

constexpr std::array<char const*, 1> size_only{"V"};
constexpr std::array<char const*, 2> size_and_c{"V", "c"};
constexpr std::array<char const*, 2> size_and_m{"V", "m"};
constexpr std::array<char const*, 2> two_scales{"b", "c"};
constexpr std::array<char const*, 0> none{};

double two_exponentials(double asymptote, double b, double c, double rate)
{
    return asymptote * (std::exp(-rate / b) - std::exp(-rate / c));
}
}  // namespace

std::string_view to_string(Family family)
{
    switch (family)
    {
        case Family::baum:
            return "baum";
        case Family::killeen:
            return "killeen";
        case Family::prelec:
            return "prelec";
        case Family::rachlin:
            return "rachlin";
        case Family::rdrl_2exp:
            return "rdrl_2exp";
        case Family::rdrl_reduced:
            return "rdrl_reduced";
    }
    return "?";
}

Family parse_family(std::string_view name)
{
    std::string lower(name);
    for (auto& ch : lower)
        ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    for (Family f : {Family::baum,
                     Family::killeen,
                     Family::prelec,
                     Family::rachlin,
                     Family::rdrl_2exp,
                     Family::rdrl_reduced})
    {
        if (lower == to_string(f))
            return f;
    }
    if (lower == "rdrl")
        return Family::rdrl_2exp;
    throw ConfigError("unknown model family '" + std::string(name) + "'");
}

std::span<char const* const> parameter_names(Family family)
{
    switch (family)
    {
        case Family::baum:
        case Family::prelec:
            return size_only;
        case Family::killeen:
            return size_and_c;
        case Family::rachlin:
            return size_and_m;
        case Family::rdrl_2exp:
            return two_scales;
        case Family::rdrl_reduced:
            return none;
    }
    return none;
}

void RffModel::validate() const
{
    if (!(size_s > 0) || !std::isfinite(size_s))
        throw ConfigError("schedule size V must be positive");
    switch (family)
    {
        case Family::killeen:
            if (!(c > 0))
                throw ConfigError("Killeen c must be positive");
            break;
        case Family::rachlin:
            if (!(m > 0 && m < 1))
                throw ConfigError("Rachlin m must lie in (0, 1)");
            if (!(bmax > 0))
                throw ConfigError("Rachlin Bmax must be positive");
            break;
        case Family::rdrl_2exp:
            if (!(b > c && c > 0))
                throw ConfigError("RDRL scales need b > c > 0");
            break;
        default:
            break;
    }
}

std::vector<double> RffModel::free_params() const
{
    switch (family)
    {
        case Family::baum:
        case Family::prelec:
            return {size_s};
        case Family::killeen:
            return {size_s, c};
        case Family::rachlin:
            return {size_s, m};
        case Family::rdrl_2exp:
            return {b, c};
        case Family::rdrl_reduced:
            return {};
    }
    return {};
}

void RffModel::set_free_params(std::span<double const> values)
{
    if (values.size() != parameter_names(family).size())
        throw ConfigError("wrong number of parameters for family");
    switch (family)
    {
        case Family::baum:
        case Family::prelec:
            size_s = values[0];
            break;
        case Family::killeen:
            size_s = values[0];
            c = values[1];
            break;
        case Family::rachlin:
            size_s = values[0];
            m = values[1];
            break;
        case Family::rdrl_2exp:
            b = values[0];
            c = values[1];
            break;
        case Family::rdrl_reduced:
            break;
    }
}

double eval(RffModel const& model, double rate)
{
    if (!(rate > 0))
        return 0;
    double const asymptote = 60.0 / model.size_s;
    switch (model.family)
    {
        case Family::baum:
            // 1 / (V/60 + 1/B) without the 1/B singularity
            return rate / (rate * model.size_s / 60.0 + 1.0);
        case Family::killeen:
            return -asymptote * std::expm1(-rate / model.c);
        case Family::prelec:
            return -rate * std::expm1(-60.0 / (model.size_s * rate));
        case Family::rachlin:
            return asymptote * std::pow(rate / model.bmax, model.m);
        case Family::rdrl_2exp:
            return two_exponentials(asymptote, model.b, model.c, rate);
        case Family::rdrl_reduced:
        {
            double b = std::exp(6.0) / model.size_s;
            return two_exponentials(asymptote, b, b / e, rate);
        }
    }
    return 0;
}

bool in_domain(RffModel const& model, double rate)
{
    return model.family != Family::rachlin || rate <= model.bmax;
}

RdrlPredictions rdrl_predictions(double size_s)
{
    if (!(size_s > 0))
        throw ConfigError("schedule size V must be positive");
    double const asymptote = 60.0 / size_s;
    RdrlPredictions p;
    p.b = std::exp(6.0) / size_s;
    p.c = p.b / e;
    p.rate_max = std::exp(6.0) / ((e - 1) * size_s);
    p.reinforcement_max = asymptote * (e - 1) * std::exp(-e / (e - 1));
    p.rate_inflection = 2 * p.rate_max;
    p.reinforcement_inflection = asymptote
                                 * (std::exp(-2 / (e - 1))
                                    - std::exp(-2 * e / (e - 1)));
    return p;
}

double rachlin_m_of_size(double size_s)
{
    if (!(size_s > 0))
        throw ConfigError("schedule size V must be positive");
    return std::exp(-0.5 - (1 - 1 / e) * std::log(size_s));
}

RffModel rdrl_reduced_model(double size_s)
{
    RffModel m;
    m.family = Family::rdrl_reduced;
    m.size_s = size_s;
    auto pred = rdrl_predictions(size_s);
    m.b = pred.b;
    m.c = pred.c;
    return m;
}

}  // namespace rffsim
