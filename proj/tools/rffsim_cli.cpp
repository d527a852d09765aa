// SPDX-License-Identifier: Apache-2.0
// Command-line front end; talks to the simulator only through the C API.
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rffsim/rffsim.h"

namespace
{
constexpr int exit_usage = 64;

int exit_code(rffsim_status status)
{
    switch (status)
    {
        case RFFSIM_OK:
            return 0;
        case RFFSIM_ERR_CONFIG:
        case RFFSIM_ERR_ARGUMENT:
            return 1;
        case RFFSIM_ERR_SOLVER:
            return 2;
        case RFFSIM_ERR_RUNTIME:
            return 3;
    }
    return 3;
}

//! Report a failed call and turn it into an exit code.
int report(rffsim_status status, char const* context)
{
    std::cerr << "rffsim: " << context << ": " << rffsim_last_error() << '\n';
    return exit_code(status);
}

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

//! Parse "lo:hi:step" into an inclusive grid.
bool parse_grid(std::string const& text, std::vector<double>& out)
{
    double lo, hi, step;
    char c1, c2;
    std::istringstream ss(text);
    if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':'
        || !(step > 0) || hi < lo)
        return false;
    out.clear();
    for (long i = 0;; ++i)
    {
        double v = lo + static_cast<double>(i) * step;
        if (v > hi + 1e-9 * step)
            break;
        out.push_back(v);
    }
    return true;
}

template<class T, void (*Free)(T*)>
struct Handle
{
    T* ptr{nullptr};
    Handle() = default;
    Handle(Handle const&) = delete;
    Handle& operator=(Handle const&) = delete;
    ~Handle() { Free(ptr); }
};

using Experiment = Handle<rffsim_experiment, rffsim_experiment_free>;
using Sweep = Handle<rffsim_sweep, rffsim_sweep_free>;
using FitSet = Handle<rffsim_fit_set, rffsim_fit_set_free>;

std::string ranking_table(rffsim_fit_set const* set)
{
    size_t needed = 0;
    rffsim_fit_set_format_table(set, nullptr, 0, &needed);
    std::string buf(needed, '\0');
    rffsim_fit_set_format_table(set, buf.data(), buf.size(), nullptr);
    buf.resize(needed ? needed - 1 : 0);
    return buf;
}

//---------------------------------------------------------------------------//
struct SolveArgs
{
    double size{0};
    double dt{0.005};
    double tmax{1.0};
    double p_step{0};
    std::string format{"csv"};
};

int run_solve(SolveArgs const& a)
{
    rffsim_solver_result r;
    if (auto st = rffsim_solve_cycle(a.size, a.dt, a.tmax, a.p_step, &r))
        return report(st, "solve-tp");
    if (a.format == "json")
    {
        std::cout << "{\"size_s\": " << num(a.size) << ", \"cycle_s\": "
                  << num(r.cycle_s) << ", \"arming_p\": " << num(r.arming_p)
                  << ", \"mean_s\": " << num(r.mean_s) << ", \"sd_s\": "
                  << num(r.sd_s) << ", \"mean_err\": " << num(r.mean_err)
                  << ", \"sd_ratio\": " << num(r.sd_ratio) << "}\n";
    }
    else
    {
        std::cout << "size_s,cycle_s,arming_p,mean_s,sd_s,mean_err,sd_ratio\n"
                  << num(a.size) << ',' << num(r.cycle_s) << ','
                  << num(r.arming_p) << ',' << num(r.mean_s) << ','
                  << num(r.sd_s) << ',' << num(r.mean_err) << ','
                  << num(r.sd_ratio) << '\n';
    }
    return 0;
}

struct RunArgs
{
    std::string config;
    std::string out_dir;
    long long seed{-1};
    unsigned threads{0};
    bool force{false};
};

int load(RunArgs const& a, Experiment& exp)
{
    if (auto st = rffsim_experiment_load(a.config.c_str(), a.force, &exp.ptr))
        return report(st, "config");
    if (a.seed >= 0)
        rffsim_experiment_set_seed(exp.ptr, static_cast<uint64_t>(a.seed));
    if (a.threads > 0)
        rffsim_experiment_set_threads(exp.ptr, a.threads);
    if (!a.out_dir.empty())
        rffsim_experiment_set_output_dir(exp.ptr, a.out_dir.c_str());
    return 0;
}

int run_simulate(RunArgs const& a)
{
    Experiment exp;
    if (int rc = load(a, exp))
        return rc;
    Sweep sweep;
    if (auto st = rffsim_experiment_run(exp.ptr, &sweep.ptr))
        return report(st, "simulate");
    char path[4096];
    if (auto st = rffsim_experiment_write_outputs(exp.ptr, sweep.ptr, path,
                                                  sizeof(path)))
        return report(st, "write");
    std::cout << "wrote " << path << " (" << rffsim_sweep_size(sweep.ptr)
              << " points)\n";
    return 0;
}

struct FitArgs
{
    std::string data;
    std::vector<std::string> families{"all"};
    double size{0};
    std::string out{"fits.json"};
    bool include_origin{false};
    int max_iterations{0};
};

int run_fit(FitArgs const& a)
{
    std::vector<rffsim_family> fams;
    for (auto const& name : a.families)
    {
        if (name == "all")
        {
            for (auto f : {RFFSIM_BAUM, RFFSIM_KILLEEN, RFFSIM_PRELEC,
                           RFFSIM_RACHLIN})
                fams.push_back(f);
        }
        else if (name == "rdrl")
        {
            fams.push_back(RFFSIM_RDRL_2EXP);
            fams.push_back(RFFSIM_RDRL_REDUCED);
        }
        else
        {
            rffsim_family f;
            if (auto st = rffsim_family_from_name(name.c_str(), &f))
                return report(st, "--family");
            fams.push_back(f);
        }
    }
    Sweep sweep;
    if (auto st = rffsim_sweep_load(a.data.c_str(), &sweep.ptr))
        return report(st, "read data");
    rffsim_fit_options opts;
    rffsim_fit_options_init(&opts);
    opts.size_hint_s = a.size;
    opts.include_origin = a.include_origin;
    if (a.max_iterations > 0)
        opts.max_iterations = a.max_iterations;
    FitSet set;
    if (auto st = rffsim_fit_set_create(sweep.ptr, fams.data(), fams.size(),
                                        &opts, &set.ptr))
        return report(st, "fit");
    if (auto st = rffsim_fit_set_write_json(set.ptr, a.out.c_str()))
        return report(st, "write");
    std::cout << ranking_table(set.ptr);
    return 0;
}

struct PredictArgs
{
    std::string model;
    double size{0};
    double at{-1};
    std::string grid;
    double c{0}, m{0}, bmax{0}, b{0};
};

int run_predict(PredictArgs const& a)
{
    rffsim_family fam;
    if (auto st = rffsim_family_from_name(a.model.c_str(), &fam))
        return report(st, "--model");
    rffsim_model model;
    if (auto st = rffsim_model_default(fam, a.size, &model))
        return report(st, "model");
    if (a.c > 0)
        model.c = a.c;
    if (a.m > 0)
        model.m = a.m;
    if (a.bmax > 0)
        model.bmax = a.bmax;
    if (a.b > 0)
        model.b = a.b;

    std::vector<double> rates;
    if (!a.grid.empty())
    {
        if (!parse_grid(a.grid, rates))
        {
            std::cerr << "rffsim: --grid expects lo:hi:step\n";
            return exit_usage;
        }
    }
    else if (a.at >= 0)
    {
        rates.push_back(a.at);
    }
    else
    {
        parse_grid("0:200:1", rates);
    }
    std::cout << "B,R\n";
    bool warned = false;
    for (double rate : rates)
    {
        double r;
        int ok = 1;
        if (auto st = rffsim_model_eval(&model, rate, &r, &ok))
            return report(st, "predict");
        if (!ok && !warned)
        {
            std::cerr << "rffsim: warning: B above Bmax is an extrapolation\n";
            warned = true;
        }
        std::cout << num(rate) << ',' << num(r) << '\n';
    }
    return 0;
}

int run_rdrl_points(double size)
{
    rffsim_rdrl_points p;
    if (auto st = rffsim_rdrl_predictions(size, &p))
        return report(st, "rdrl-points");
    std::cout << "size_s,b,c,Bm,Rm,Bi,Ri\n"
              << num(size) << ',' << num(p.b) << ',' << num(p.c) << ','
              << num(p.rate_max) << ',' << num(p.reinforcement_max) << ','
              << num(p.rate_inflection) << ','
              << num(p.reinforcement_inflection) << '\n';
    return 0;
}

struct BreakRunArgs
{
    RunArgs run;
    std::vector<std::string> pairs{"0.01:0.01", "0.02:0.01"};
    std::string lor{"0:200:40"};
    std::string out{"break_run.csv"};
};

int run_break_run(BreakRunArgs const& a)
{
    std::vector<rffsim_burst_pair> pairs;
    for (auto const& text : a.pairs)
    {
        rffsim_burst_pair p;
        char colon;
        std::istringstream ss(text);
        if (!(ss >> p.p_run >> colon >> p.p_break) || colon != ':')
        {
            std::cerr << "rffsim: --pairs expects P_r:P_b\n";
            return exit_usage;
        }
        pairs.push_back(p);
    }
    std::vector<double> lors;
    if (!parse_grid(a.lor, lors))
    {
        std::cerr << "rffsim: --lor expects lo:hi:step\n";
        return exit_usage;
    }
    Experiment exp;
    if (int rc = load(a.run, exp))
        return rc;
    size_t outside = 0;
    if (auto st = rffsim_break_run(exp.ptr, lors.data(), lors.size(),
                                   pairs.data(), pairs.size(), a.out.c_str(),
                                   &outside))
        return report(st, "break-run");
    std::cout << "wrote " << a.out << "; " << outside
              << " point(s) outside the plain-responder 95% HDI\n";
    return 0;
}

struct ReportArgs
{
    std::string data;
    std::string fits;
    std::string plot{"plot.csv"};
};

int run_report(ReportArgs const& a)
{
    Sweep sweep;
    if (auto st = rffsim_sweep_load(a.data.c_str(), &sweep.ptr))
        return report(st, "read data");
    FitSet set;
    if (!a.fits.empty())
    {
        if (auto st = rffsim_fit_set_load_json(a.fits.c_str(), &set.ptr))
            return report(st, "read fits");
        std::cout << ranking_table(set.ptr);
    }
    if (auto st = rffsim_write_plot_data(sweep.ptr, set.ptr, a.plot.c_str()))
        return report(st, "plot data");
    std::cout << "wrote " << a.plot << '\n';
    return 0;
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Random reinforcement schedule simulator and feedback "
                 "function fitter"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(rffsim_version()));

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand(
        "solve-tp", "Find cycle length T and arming probability p for a size");
    solve_cmd->add_option("--size", solve.size, "Schedule size x (s)")
        ->required();
    solve_cmd->add_option("--dt", solve.dt, "Simulation step (s)");
    solve_cmd->add_option("--tmax", solve.tmax, "Largest cycle length (s)");
    solve_cmd->add_option("--p-step", solve.p_step,
                          "Resolution of p (0 = exact T/x)");
    solve_cmd->add_option("--format", solve.format)
        ->check(CLI::IsMember({"csv", "json"}));

    RunArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Run a rate sweep");
    sim_cmd->add_option("--config", sim.config, "Experiment JSON file")
        ->required();
    sim_cmd->add_option("--out", sim.out_dir, "Output directory");
    sim_cmd->add_option("--seed", sim.seed, "Override the master seed");
    sim_cmd->add_option("--threads", sim.threads, "Worker threads");
    sim_cmd->add_flag("--force", sim.force,
                      "Accept explicit T/p outside the 1% tolerances");

    FitArgs fitargs;
    auto* fit_cmd = app.add_subcommand("fit", "Fit feedback functions");
    fit_cmd->add_option("--data", fitargs.data, "sweep.csv")->required();
    fit_cmd->add_option("--family", fitargs.families,
                        "all|baum|killeen|prelec|rachlin|rdrl|rdrl_2exp|"
                        "rdrl_reduced")
        ->delimiter(',');
    fit_cmd->add_option("--size", fitargs.size,
                        "Schedule size V (s); default from the data header");
    fit_cmd->add_option("--out", fitargs.out, "Fit report JSON");
    fit_cmd->add_option("--max-iterations", fitargs.max_iterations);
    fit_cmd->add_flag("--include-origin", fitargs.include_origin,
                      "Keep the B = 0 row (analytic limit)");

    PredictArgs pred;
    double rdrl_size = 0;
    auto* pred_cmd = app.add_subcommand("predict", "Evaluate a model");
    pred_cmd->add_option("--model", pred.model, "Model family");
    pred_cmd->add_option("--size", pred.size, "Schedule size V (s)");
    pred_cmd->add_option("--at", pred.at, "Single response rate");
    pred_cmd->add_option("--grid", pred.grid, "lo:hi:step");
    pred_cmd->add_option("--c", pred.c);
    pred_cmd->add_option("--m", pred.m);
    pred_cmd->add_option("--bmax", pred.bmax);
    pred_cmd->add_option("--b", pred.b);
    pred_cmd->require_subcommand(0, 1);
    auto* rdrl_cmd = pred_cmd->add_subcommand(
        "rdrl-points", "Closed-form RDRL maximum and inflection");
    rdrl_cmd->add_option("--size", rdrl_size, "Schedule size V (s)")
        ->required();

    BreakRunArgs br;
    auto* br_cmd = app.add_subcommand(
        "break-run", "Compare break-and-run responders with plain ones");
    br_cmd->add_option("--config", br.run.config, "Experiment JSON file")
        ->required();
    br_cmd->add_option("--pairs", br.pairs, "P_r:P_b list")->delimiter(',');
    br_cmd->add_option("--lor", br.lor, "LOR grid lo:hi:step");
    br_cmd->add_option("--out", br.out, "Output CSV");
    br_cmd->add_option("--seed", br.run.seed);
    br_cmd->add_option("--threads", br.run.threads);
    br_cmd->add_flag("--force", br.run.force);

    ReportArgs rep;
    auto* rep_cmd = app.add_subcommand(
        "report", "Print the ranking and export plot data");
    rep_cmd->add_option("--data", rep.data, "sweep.csv")->required();
    rep_cmd->add_option("--fits", rep.fits, "fits.json");
    rep_cmd->add_option("--plot", rep.plot, "Plot-data CSV");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::CallForHelp const& e)
    {
        return app.exit(e);
    }
    catch (CLI::CallForVersion const& e)
    {
        return app.exit(e);
    }
    catch (CLI::ParseError const& e)
    {
        app.exit(e);
        return exit_usage;
    }

    if (solve_cmd->parsed())
        return run_solve(solve);
    if (sim_cmd->parsed())
        return run_simulate(sim);
    if (fit_cmd->parsed())
        return run_fit(fitargs);
    if (rdrl_cmd->parsed())
        return run_rdrl_points(rdrl_size);
    if (pred_cmd->parsed())
    {
        if (pred.model.empty() || !(pred.size > 0))
        {
            std::cerr << "rffsim: predict needs --model and --size\n";
            return exit_usage;
        }
        return run_predict(pred);
    }
    if (br_cmd->parsed())
        return run_break_run(br);
    if (rep_cmd->parsed())
        return run_report(rep);
    return exit_usage;
}
