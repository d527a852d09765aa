// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <memory>
#include <tuple>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "rffsim/error.hpp"
#include "rffsim/experiment.hpp"
#include "rffsim/fitter.hpp"
#include "rffsim/rffsim.h"
#include "rffsim/solver.hpp"

struct rffsim_experiment
{
    rffsim::ExperimentConfig config;
};

struct rffsim_sweep
{
    rffsim::SweepTable table;
};

struct rffsim_fit_set
{
    std::vector<rffsim::RankedFit> ranking;
    rffsim::Meta meta;
};

namespace
{
thread_local std::string last_error;

rffsim_status fail(rffsim_status status, std::string msg)
{
    last_error = std::move(msg);
    return status;
}

template<class F>
rffsim_status guarded(F&& body)
{
    try
    {
        last_error.clear();
        return body();
    }
    catch (rffsim::Error const& e)
    {
        return fail(static_cast<rffsim_status>(e.kind()), e.what());
    }
    catch (std::bad_alloc const&)
    {
        return fail(RFFSIM_ERR_RUNTIME, "out of memory");
    }
    catch (std::exception const& e)
    {
        return fail(RFFSIM_ERR_RUNTIME, e.what());
    }
    catch (...)
    {
        return fail(RFFSIM_ERR_RUNTIME, "unknown error");
    }
}

rffsim_status null_argument(char const* what)
{
    return fail(RFFSIM_ERR_ARGUMENT, std::string("null argument: ") + what);
}

rffsim::RffModel to_model(rffsim_model const& m)
{
    rffsim::RffModel out;
    out.family = static_cast<rffsim::Family>(m.family);
    out.size_s = m.size_s;
    out.c = m.c;
    out.m = m.m;
    out.bmax = m.bmax;
    out.b = m.b;
    return out;
}

rffsim_model from_model(rffsim::RffModel const& m)
{
    return {static_cast<rffsim_family>(m.family), m.size_s, m.c, m.m, m.bmax,
            m.b};
}

bool valid_family(int f)
{
    return f >= RFFSIM_BAUM && f <= RFFSIM_RDRL_REDUCED;
}
}  // namespace

extern "C" {

char const* rffsim_version(void)
{
    return "1.0.0";
}

char const* rffsim_last_error(void)
{
    return last_error.c_str();
}

char const* rffsim_family_name(rffsim_family family)
{
    if (!valid_family(family))
        return "unknown";
    return rffsim::to_string(static_cast<rffsim::Family>(family)).data();
}

rffsim_status rffsim_family_from_name(char const* name, rffsim_family* out)
{
    if (!name || !out)
        return null_argument("name/out");
    return guarded([&] {
        *out = static_cast<rffsim_family>(rffsim::parse_family(name));
        return RFFSIM_OK;
    });
}

rffsim_status rffsim_solve_cycle(double size_s,
                                 double dt_s,
                                 double max_cycle_s,
                                 double p_step,
                                 rffsim_solver_result* out)
{
    if (!out)
        return null_argument("out");
    return guarded([&] {
        auto r = rffsim::solve_cycle_params(
            {size_s, dt_s, max_cycle_s, p_step > 0 ? p_step : 0});
        *out = {r.cycle_s, r.arming_p, r.mean_s, r.sd_s, r.mean_err,
                r.sd_ratio};
        return RFFSIM_OK;
    });
}

rffsim_status
rffsim_response_probability(double rate_per_min, double step_s, double* out)
{
    if (!out)
        return null_argument("out");
    return guarded([&] {
        *out = rffsim::response_probability(rate_per_min, step_s);
        return RFFSIM_OK;
    });
}

rffsim_status
rffsim_experiment_load(char const* path, int force, rffsim_experiment** out)
{
    if (!path || !out)
        return null_argument("path/out");
    *out = nullptr;
    return guarded([&] {
        auto exp = std::make_unique<rffsim_experiment>();
        exp->config = rffsim::load_experiment(path, force != 0);
        *out = exp.release();
        return RFFSIM_OK;
    });
}

void rffsim_experiment_free(rffsim_experiment* exp)
{
    delete exp;
}

rffsim_status rffsim_experiment_set_seed(rffsim_experiment* exp, uint64_t seed)
{
    if (!exp)
        return null_argument("experiment");
    exp->config.session.seed = seed;
    return RFFSIM_OK;
}

rffsim_status rffsim_experiment_set_threads(rffsim_experiment* exp,
                                            unsigned threads)
{
    if (!exp)
        return null_argument("experiment");
    exp->config.session.threads = threads;
    return RFFSIM_OK;
}

rffsim_status rffsim_experiment_set_output_dir(rffsim_experiment* exp,
                                               char const* dir)
{
    if (!exp || !dir)
        return null_argument("experiment/dir");
    exp->config.output_dir = dir;
    return RFFSIM_OK;
}

rffsim_status rffsim_experiment_run(rffsim_experiment const* exp,
                                    rffsim_sweep** out)
{
    if (!exp || !out)
        return null_argument("experiment/out");
    *out = nullptr;
    return guarded([&] {
        auto const& cfg = exp->config;
        auto sweep = std::make_unique<rffsim_sweep>();
        sweep->table.meta = rffsim::sweep_meta(cfg);
        sweep->table.points
            = rffsim::run_sweep(cfg.session, cfg.schedule, cfg.responder);
        *out = sweep.release();
        return RFFSIM_OK;
    });
}

rffsim_status rffsim_experiment_write_outputs(rffsim_experiment const* exp,
                                              rffsim_sweep const* sweep,
                                              char* path_buf,
                                              size_t path_cap)
{
    if (!exp || !sweep)
        return null_argument("experiment/sweep");
    return guarded([&] {
        auto const& cfg = exp->config;
        std::error_code ec;
        std::filesystem::create_directories(cfg.output_dir, ec);
        auto sweep_path = cfg.output_dir / cfg.sweep_file;
        rffsim::write_sweep_csv(sweep_path, sweep->table.meta,
                                sweep->table.points);
        if (cfg.samples_file)
        {
            auto samples_path = cfg.output_dir / *cfg.samples_file;
            std::ofstream os(samples_path, std::ios::binary);
            if (!os)
                throw rffsim::RuntimeError("cannot write "
                                           + samples_path.string());
            rffsim::write_samples_csv(os, sweep->table.meta,
                                      sweep->table.points);
        }
        if (path_buf && path_cap > 0)
        {
            std::string s = sweep_path.string();
            std::snprintf(path_buf, path_cap, "%s", s.c_str());
        }
        return RFFSIM_OK;
    });
}

rffsim_status rffsim_break_run(rffsim_experiment const* exp,
                               double const* lors,
                               size_t lor_count,
                               rffsim_burst_pair const* pairs,
                               size_t pair_count,
                               char const* out_path,
                               size_t* rows_outside)
{
    if (!exp || !lors || !pairs || !out_path)
        return null_argument("experiment/lors/pairs/out_path");
    return guarded([&] {
        auto const& cfg = exp->config;
        std::vector<rffsim::BurstPair> bp;
        for (size_t i = 0; i < pair_count; ++i)
            bp.push_back({pairs[i].p_run, pairs[i].p_break});
        auto rows = rffsim::break_run_comparison(
            cfg.session,
            cfg.schedule,
            cfg.session.dt_s,
            std::span<double const>(lors, lor_count),
            bp);
        std::ofstream os(out_path, std::ios::binary);
        if (!os)
            throw rffsim::RuntimeError(std::string("cannot write ")
                                       + out_path);
        auto meta = rffsim::sweep_meta(cfg);
        meta.erase("p_run");
        meta.erase("p_break");
        rffsim::write_break_run_csv(os, meta, rows);
        if (rows_outside)
        {
            *rows_outside = 0;
            for (auto const& r : rows)
                *rows_outside += !r.inside();
        }
        return RFFSIM_OK;
    });
}

rffsim_status rffsim_sweep_load(char const* path, rffsim_sweep** out)
{
    if (!path || !out)
        return null_argument("path/out");
    *out = nullptr;
    return guarded([&] {
        auto sweep = std::make_unique<rffsim_sweep>();
        sweep->table = rffsim::read_sweep_csv(std::filesystem::path(path));
        *out = sweep.release();
        return RFFSIM_OK;
    });
}

void rffsim_sweep_free(rffsim_sweep* sweep)
{
    delete sweep;
}

size_t rffsim_sweep_size(rffsim_sweep const* sweep)
{
    return sweep ? sweep->table.points.size() : 0;
}

rffsim_status
rffsim_sweep_point(rffsim_sweep const* sweep, size_t index, rffsim_point* out)
{
    if (!sweep || !out)
        return null_argument("sweep/out");
    if (index >= sweep->table.points.size())
        return fail(RFFSIM_ERR_ARGUMENT, "sweep index out of range");
    auto const& p = sweep->table.points[index];
    size_t reps = p.samples.size();
    if (reps == 0)
    {
        auto it = sweep->table.meta.find("reps");
        if (it != sweep->table.meta.end())
            reps = std::stoul(it->second);
    }
    *out = {p.rate_nominal, p.rate_realized, p.reinforcement_mean, p.hdi_lo,
            p.hdi_hi, reps};
    return RFFSIM_OK;
}

rffsim_status rffsim_sweep_nominal_size(rffsim_sweep const* sweep, double* out)
{
    if (!sweep || !out)
        return null_argument("sweep/out");
    return guarded([&] {
        auto size = sweep->table.nominal_size();
        if (!size)
            return fail(RFFSIM_ERR_ARGUMENT, "sweep has no size metadata");
        *out = *size;
        return RFFSIM_OK;
    });
}

rffsim_status rffsim_model_eval(rffsim_model const* model,
                                double rate_per_min,
                                double* out,
                                int* in_domain)
{
    if (!model || !out)
        return null_argument("model/out");
    if (!valid_family(model->family))
        return fail(RFFSIM_ERR_ARGUMENT, "unknown family");
    return guarded([&] {
        auto m = to_model(*model);
        m.validate();
        if (!(rate_per_min >= 0))
            throw rffsim::ConfigError("response rate must be non-negative");
        *out = rffsim::eval(m, rate_per_min);
        if (in_domain)
            *in_domain = rffsim::in_domain(m, rate_per_min) ? 1 : 0;
        return RFFSIM_OK;
    });
}

rffsim_status rffsim_rdrl_predictions(double size_s, rffsim_rdrl_points* out)
{
    if (!out)
        return null_argument("out");
    return guarded([&] {
        auto p = rffsim::rdrl_predictions(size_s);
        *out = {p.b,
                p.c,
                p.rate_max,
                p.reinforcement_max,
                p.rate_inflection,
                p.reinforcement_inflection};
        return RFFSIM_OK;
    });
}

rffsim_status rffsim_rachlin_m(double size_s, double* out)
{
    if (!out)
        return null_argument("out");
    return guarded([&] {
        *out = rffsim::rachlin_m_of_size(size_s);
        return RFFSIM_OK;
    });
}

rffsim_status
rffsim_model_default(rffsim_family family, double size_s, rffsim_model* out)
{
    if (!out)
        return null_argument("out");
    if (!valid_family(family))
        return fail(RFFSIM_ERR_ARGUMENT, "unknown family");
    return guarded([&] {
        rffsim::RffModel m;
        m.family = static_cast<rffsim::Family>(family);
        m.size_s = size_s;
        m.bmax = 200;
        m.m = rffsim::rachlin_m_of_size(size_s);
        m.c = 60.0 / (size_s / 60.0) / 3.0;
        if (m.family == rffsim::Family::rdrl_2exp
            || m.family == rffsim::Family::rdrl_reduced)
        {
            auto p = rffsim::rdrl_predictions(size_s);
            m.b = p.b;
            m.c = p.c;
        }
        m.validate();
        *out = from_model(m);
        return RFFSIM_OK;
    });
}

void rffsim_fit_options_init(rffsim_fit_options* opts)
{
    if (!opts)
        return;
    rffsim::FitOptions defaults;
    opts->size_hint_s = 0;
    opts->max_iterations = defaults.max_iterations;
    opts->rss_tolerance = defaults.rss_tolerance;
    opts->include_origin = 0;
}

rffsim_status rffsim_fit_set_create(rffsim_sweep const* sweep,
                                    rffsim_family const* families,
                                    size_t family_count,
                                    rffsim_fit_options const* opts,
                                    rffsim_fit_set** out)
{
    if (!sweep || !families || !out)
        return null_argument("sweep/families/out");
    *out = nullptr;
    for (size_t i = 0; i < family_count; ++i)
    {
        if (!valid_family(families[i]))
            return fail(RFFSIM_ERR_ARGUMENT, "unknown family");
    }
    return guarded([&] {
        rffsim_fit_options o;
        rffsim_fit_options_init(&o);
        if (opts)
            o = *opts;
        rffsim::FitOptions fo;
        fo.max_iterations = o.max_iterations;
        fo.rss_tolerance = o.rss_tolerance;
        if (o.size_hint_s > 0)
            fo.size_hint = o.size_hint_s;
        else
            fo.size_hint = sweep->table.nominal_size();

        auto data = rffsim::fit_data(sweep->table.points, o.include_origin != 0);
        std::vector<rffsim::FitResult> fits;
        for (size_t i = 0; i < family_count; ++i)
        {
            fits.push_back(rffsim::fit(static_cast<rffsim::Family>(families[i]),
                                       data, fo));
        }
        auto set = std::make_unique<rffsim_fit_set>();
        set->ranking = rffsim::compare(fits);
        set->meta = sweep->table.meta;
        set->meta["include_origin"] = o.include_origin ? "1" : "0";
        *out = set.release();
        return RFFSIM_OK;
    });
}

void rffsim_fit_set_free(rffsim_fit_set* set)
{
    delete set;
}

size_t rffsim_fit_set_size(rffsim_fit_set const* set)
{
    return set ? set->ranking.size() : 0;
}

rffsim_status rffsim_fit_set_get(rffsim_fit_set const* set,
                                 size_t index,
                                 rffsim_fit_summary* out)
{
    if (!set || !out)
        return null_argument("set/out");
    if (index >= set->ranking.size())
        return fail(RFFSIM_ERR_ARGUMENT, "fit index out of range");
    auto const& rf = set->ranking[index];
    *out = {from_model(rf.fit.model),
            rf.fit.n,
            rf.fit.k,
            rf.fit.rss,
            rf.fit.r_squared,
            rf.fit.aic,
            rf.fit.bic,
            rf.fit.converged ? 1 : 0,
            rf.fit.iterations,
            rf.bic_rank,
            rf.aic_rank,
            rf.good ? 1 : 0,
            rf.excellent ? 1 : 0};
    return RFFSIM_OK;
}

rffsim_status rffsim_fit_set_write_json(rffsim_fit_set const* set,
                                        char const* path)
{
    if (!set || !path)
        return null_argument("set/path");
    return guarded([&] {
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw rffsim::RuntimeError(std::string("cannot write ") + path);
        os << rffsim::fits_to_json(set->ranking, set->meta);
        if (!os)
            throw rffsim::RuntimeError(std::string("write failed for ") + path);
        return RFFSIM_OK;
    });
}

rffsim_status rffsim_fit_set_load_json(char const* path, rffsim_fit_set** out)
{
    if (!path || !out)
        return null_argument("path/out");
    *out = nullptr;
    return guarded([&] {
        std::ifstream in(path);
        if (!in)
            throw rffsim::RuntimeError(std::string("cannot read ") + path);
        std::stringstream ss;
        ss << in.rdbuf();
        auto set = std::make_unique<rffsim_fit_set>();
        set->ranking = rffsim::fits_from_json(ss.str());
        *out = set.release();
        return RFFSIM_OK;
    });
}

rffsim_status rffsim_fit_set_format_table(rffsim_fit_set const* set,
                                          char* buf,
                                          size_t cap,
                                          size_t* needed)
{
    if (!set)
        return null_argument("set");
    return guarded([&] {
        std::string table = rffsim::format_ranking(set->ranking);
        if (needed)
            *needed = table.size() + 1;
        if (buf && cap > 0)
            std::snprintf(buf, cap, "%s", table.c_str());
        return RFFSIM_OK;
    });
}

rffsim_status rffsim_write_plot_data(rffsim_sweep const* sweep,
                                     rffsim_fit_set const* set,
                                     char const* path)
{
    if (!sweep || !path)
        return null_argument("sweep/path");
    return guarded([&] {
        std::vector<rffsim::FitResult> fits;
        if (set)
        {
            for (auto const& rf : set->ranking)
                fits.push_back(rf.fit);
        }
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw rffsim::RuntimeError(std::string("cannot write ") + path);
        rffsim::write_plot_data(os, sweep->table.meta, sweep->table.points,
                                fits);
        return RFFSIM_OK;
    });
}

rffsim_status rffsim_hdi(
    double const* samples, size_t count, double mass, double* lo, double* hi)
{
    if ((!samples && count > 0) || !lo || !hi)
        return null_argument("samples/lo/hi");
    return guarded([&] {
        std::tie(*lo, *hi)
            = rffsim::hdi(std::span<double const>(samples, count), mass);
        return RFFSIM_OK;
    });
}

}  // extern "C"
