// SPDX-License-Identifier: Apache-2.0
#include "rffsim/fitter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>

#include "rffsim/error.hpp"

namespace rffsim
{
namespace
{
//---------------------------------------------------------------------------//
// Unconstrained coordinates: log for scales, logit for the Rachlin exponent.
bool is_fraction(Family family, std::size_t index)
{
    return family == Family::rachlin && index == 1;
}

std::vector<double> to_unconstrained(RffModel const& model)
{
    auto params = model.free_params();
    for (std::size_t i = 0; i < params.size(); ++i)
    {
        double v = params[i];
        params[i] = is_fraction(model.family, i) ? std::log(v / (1 - v))
                                                 : std::log(v);
    }
    return params;
}

void from_unconstrained(RffModel& model, std::span<double const> u)
{
    std::vector<double> params(u.begin(), u.end());
    for (std::size_t i = 0; i < params.size(); ++i)
    {
        params[i] = is_fraction(model.family, i)
                        ? 1 / (1 + std::exp(-params[i]))
                        : std::exp(params[i]);
    }
    model.set_free_params(params);
}

void residuals(RffModel const& model,
               std::span<DataPoint const> data,
               std::vector<double>& out)
{
    out.resize(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        out[i] = data[i].reinforcement - eval(model, data[i].rate);
}

double sum_squares(std::span<double const> v)
{
    return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

//! Solve a small dense system in place by Gaussian elimination with partial
//! pivoting; returns false when singular.
bool solve_small(std::vector<double>& a, std::vector<double>& rhs)
{
    std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col)
    {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
        {
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col]))
                pivot = r;
        }
        if (!(std::abs(a[pivot * n + col]) > 0))
            return false;
        if (pivot != col)
        {
            for (std::size_t k = 0; k < n; ++k)
                std::swap(a[col * n + k], a[pivot * n + k]);
            std::swap(rhs[col], rhs[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r)
        {
            double f = a[r * n + col] / a[col * n + col];
            for (std::size_t k = col; k < n; ++k)
                a[r * n + k] -= f * a[col * n + k];
            rhs[r] -= f * rhs[col];
        }
    }
    for (std::size_t i = n; i-- > 0;)
    {
        double s = rhs[i];
        for (std::size_t k = i + 1; k < n; ++k)
            s -= a[i * n + k] * rhs[k];
        rhs[i] = s / a[i * n + i];
    }
    return std::all_of(
        rhs.begin(), rhs.end(), [](double v) { return std::isfinite(v); });
}

struct LmRun
{
    RffModel model;
    double rss{0};
    bool converged{false};
    int iterations{0};
    std::vector<double> history;
};

LmRun levenberg_marquardt(RffModel start,
                          std::span<DataPoint const> data,
                          FitOptions const& opts)
{
    LmRun run;
    run.model = start;
    std::vector<double> u = to_unconstrained(start);
    std::size_t const np = u.size();
    std::size_t const nd = data.size();

    std::vector<double> r;
    residuals(run.model, data, r);
    run.rss = sum_squares(r);
    run.history.push_back(run.rss);
    if (np == 0)
    {
        run.converged = true;
        return run;
    }

    double lambda = 1e-3;
    std::vector<double> jac(nd * np);
    std::vector<double> rp, rm;
    RffModel probe = start;

    while (run.iterations < opts.max_iterations)
    {
        ++run.iterations;
        // Central-difference Jacobian of the model values (= -d residual).
        for (std::size_t j = 0; j < np; ++j)
        {
            double h = 1e-6 * std::max(1.0, std::abs(u[j]));
            std::vector<double> up = u, um = u;
            up[j] += h;
            um[j] -= h;
            from_unconstrained(probe, up);
            residuals(probe, data, rp);
            from_unconstrained(probe, um);
            residuals(probe, data, rm);
            for (std::size_t i = 0; i < nd; ++i)
                jac[i * np + j] = (rm[i] - rp[i]) / (2 * h);
        }
        std::vector<double> jtj(np * np, 0.0), jtr(np, 0.0);
        for (std::size_t i = 0; i < nd; ++i)
        {
            for (std::size_t a = 0; a < np; ++a)
            {
                jtr[a] += jac[i * np + a] * r[i];
                for (std::size_t b = 0; b < np; ++b)
                    jtj[a * np + b] += jac[i * np + a] * jac[i * np + b];
            }
        }

        bool accepted = false;
        while (!accepted && lambda < 1e16)
        {
            std::vector<double> lhs = jtj, step = jtr;
            for (std::size_t a = 0; a < np; ++a)
                lhs[a * np + a] += lambda * std::max(jtj[a * np + a], 1e-12);
            if (!solve_small(lhs, step))
            {
                lambda *= 10;
                continue;
            }
            std::vector<double> trial = u;
            for (std::size_t a = 0; a < np; ++a)
                trial[a] += step[a];
            from_unconstrained(probe, trial);
            std::vector<double> rt;
            residuals(probe, data, rt);
            double rss = sum_squares(rt);
            if (std::isfinite(rss) && rss < run.rss)
            {
                double rel = (run.rss - rss) / std::max(run.rss, 1e-300);
                double max_step = 0;
                for (std::size_t a = 0; a < np; ++a)
                {
                    max_step = std::max(
                        max_step, std::abs(step[a]) / (1 + std::abs(u[a])));
                }
                u = std::move(trial);
                r = std::move(rt);
                run.rss = rss;
                run.model = probe;
                run.history.push_back(rss);
                lambda = std::max(lambda / 10, 1e-12);
                accepted = true;
                if (rel < opts.rss_tolerance || max_step < 1e-12
                    || rss <= 1e-28)
                {
                    run.converged = true;
                    return run;
                }
            }
            else
            {
                lambda *= 10;
            }
        }
        if (!accepted)
        {
            // No damping level improves RSS: stationary to working precision.
            run.converged = true;
            return run;
        }
    }
    return run;
}

//! Smallest positive B at which R reaches (1 - 1/e) of its maximum.
double rise_scale(std::span<DataPoint const> data)
{
    double rmax = 0;
    for (auto const& d : data)
        rmax = std::max(rmax, d.reinforcement);
    double target = (1 - 1 / std::numbers::e) * rmax;
    double best = std::numeric_limits<double>::infinity();
    for (auto const& d : data)
    {
        if (d.rate > 0 && d.reinforcement >= target)
            best = std::min(best, d.rate);
    }
    return std::isfinite(best) ? best : 1.0;
}

std::vector<RffModel> starting_models(Family family,
                                      std::span<DataPoint const> data,
                                      FitOptions const& opts)
{
    double rmax = 0;
    double bmax = 0;
    for (auto const& d : data)
    {
        rmax = std::max(rmax, d.reinforcement);
        bmax = std::max(bmax, d.rate);
    }
    double size = opts.size_hint.value_or(rmax > 0 ? 60.0 / rmax : 1.0);

    RffModel base;
    base.family = family;
    base.size_s = size;
    base.bmax = bmax;

    std::vector<RffModel> starts;
    switch (family)
    {
        case Family::baum:
        case Family::prelec:
        case Family::rdrl_reduced:
            starts.push_back(base);
            if (family == Family::rdrl_reduced)
                starts.back() = rdrl_reduced_model(size);
            break;
        case Family::killeen:
            for (double scale : {1.0, 0.3, 3.0})
            {
                base.c = rise_scale(data) * scale;
                starts.push_back(base);
            }
            break;
        case Family::rachlin:
            for (double m : {0.2, 0.05, 0.5})
            {
                base.m = m;
                starts.push_back(base);
            }
            break;
        case Family::rdrl_2exp:
            base.b = std::exp(6.0) / size;
            base.c = std::exp(5.0) / size;
            starts.push_back(base);
            break;
    }
    return starts;
}
}  // namespace

//---------------------------------------------------------------------------//
int free_parameter_count(Family family)
{
    return static_cast<int>(parameter_names(family).size());
}

double aic(std::size_t n, double rss, int k)
{
    double dn = static_cast<double>(n);
    return dn * std::log(rss / dn) + 2.0 * k;
}

double bic(std::size_t n, double rss, int k)
{
    double dn = static_cast<double>(n);
    return dn * std::log(rss / dn) + k * std::log(dn);
}

double residual_sum_of_squares(RffModel const& model,
                               std::span<DataPoint const> data)
{
    std::vector<double> r;
    residuals(model, data, r);
    return sum_squares(r);
}

FitResult
fit(Family family, std::span<DataPoint const> data, FitOptions const& opts)
{
    int const k = free_parameter_count(family);
    if (data.size() < static_cast<std::size_t>(k) + 1)
        throw ConfigError("need at least k+1 data points to fit "
                          + std::string(to_string(family)));
    std::set<double> distinct;
    for (auto const& d : data)
    {
        if (!distinct.insert(d.rate).second)
            throw ConfigError("fit data has repeated response rates");
    }
    if ((family == Family::rdrl_2exp || family == Family::rdrl_reduced)
        && !opts.size_hint && !opts.initial)
    {
        throw ConfigError("RDRL fits need the schedule size");
    }
    if (!(opts.rss_tolerance > 0) || opts.max_iterations < 1)
        throw ConfigError("fit tolerance and iteration limit must be positive");

    double mean = 0;
    for (auto const& d : data)
        mean += d.reinforcement;
    mean /= static_cast<double>(data.size());
    double tss = 0;
    for (auto const& d : data)
        tss += (d.reinforcement - mean) * (d.reinforcement - mean);
    if (!(tss > 0))
        throw RuntimeError("degenerate fit: all reinforcement rates equal, "
                           "R^2 undefined");

    std::vector<RffModel> starts;
    if (opts.initial)
    {
        starts.push_back(*opts.initial);
        starts.back().family = family;
    }
    else
    {
        starts = starting_models(family, data, opts);
    }

    LmRun best;
    bool have = false;
    for (auto const& start : starts)
    {
        LmRun run = levenberg_marquardt(start, data, opts);
        if (!have || run.rss < best.rss)
        {
            best = std::move(run);
            have = true;
        }
    }

    FitResult res;
    res.model = best.model;
    res.n = data.size();
    res.k = k;
    res.rss = best.rss;
    res.tss = tss;
    res.r_squared = 1 - best.rss / tss;
    res.aic = aic(res.n, res.rss, k);
    res.bic = bic(res.n, res.rss, k);
    res.converged = best.converged;
    res.iterations = best.iterations;
    res.rss_history = std::move(best.history);
    return res;
}

std::vector<RankedFit> compare(std::span<FitResult const> fits)
{
    std::vector<RankedFit> out;
    if (fits.empty())
        return out;
    for (auto const& f : fits)
    {
        double scale = std::max(std::abs(fits[0].tss), 1e-300);
        if (f.n != fits[0].n || std::abs(f.tss - fits[0].tss) > 1e-9 * scale)
            throw RuntimeError("fits were computed on different data");
        RankedFit rf;
        rf.fit = f;
        rf.good = f.r_squared >= 0.9;
        rf.excellent = f.r_squared >= 0.95;
        out.push_back(std::move(rf));
    }
    std::vector<std::size_t> idx(out.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) {
        return out[a].fit.aic < out[b].fit.aic;
    });
    for (std::size_t r = 0; r < idx.size(); ++r)
        out[idx[r]].aic_rank = static_cast<int>(r) + 1;
    std::stable_sort(out.begin(), out.end(), [](auto const& a, auto const& b) {
        return a.fit.bic < b.fit.bic;
    });
    for (std::size_t r = 0; r < out.size(); ++r)
        out[r].bic_rank = static_cast<int>(r) + 1;
    return out;
}

std::string format_ranking(std::span<RankedFit const> ranking)
{
    std::string out;
    char line[256];
    std::snprintf(line,
                  sizeof(line),
                  "%-4s %-13s %-28s %9s %11s %11s %4s  %s\n",
                  "rank",
                  "family",
                  "parameters",
                  "R^2",
                  "BIC",
                  "AIC",
                  "AIC#",
                  "fit");
    out += line;
    for (auto const& rf : ranking)
    {
        auto const& m = rf.fit.model;
        auto names = parameter_names(m.family);
        auto values = m.free_params();
        std::string params;
        for (std::size_t i = 0; i < names.size(); ++i)
        {
            char buf[48];
            std::snprintf(buf, sizeof(buf), "%s%s=%.4g", i ? " " : "",
                          names[i], values[i]);
            params += buf;
        }
        if (params.empty())
            params = "-";
        std::snprintf(line,
                      sizeof(line),
                      "%-4d %-13s %-28s %9.5f %11.2f %11.2f %4d  %s%s\n",
                      rf.bic_rank,
                      std::string(to_string(m.family)).c_str(),
                      params.c_str(),
                      rf.fit.r_squared,
                      rf.fit.bic,
                      rf.fit.aic,
                      rf.aic_rank,
                      rf.excellent ? "excellent"
                      : rf.good    ? "good"
                                   : "below-good",
                      rf.fit.converged ? "" : " (not converged)");
        out += line;
    }
    return out;
}

}  // namespace rffsim
