// SPDX-License-Identifier: Apache-2.0
#include "rffsim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "rffsim/error.hpp"
#include "rffsim/solver.hpp"

namespace rffsim
{
namespace
{
using nlohmann::json;

std::string fmt_num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void check_keys(json const& obj,
                std::string_view section,
                std::initializer_list<std::string_view> allowed)
{
    if (!obj.is_object())
        throw ConfigError("section '" + std::string(section)
                          + "' must be an object");
    for (auto const& [key, value] : obj.items())
    {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("unknown key '" + key + "' in section '"
                              + std::string(section) + "'");
    }
}

double number(json const& obj, char const* key)
{
    auto const& v = obj.at(key);
    if (!v.is_number())
        throw ConfigError(std::string("'") + key + "' must be a number");
    return v.get<double>();
}

std::vector<double> parse_rates(json const& v)
{
    if (v.is_number())
        return {v.get<double>()};
    if (v.is_array())
    {
        std::vector<double> out;
        for (auto const& x : v)
        {
            if (!x.is_number())
                throw ConfigError("rate list must hold numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }
    if (v.is_object())
    {
        check_keys(v, "rate_per_min", {"from", "to", "step"});
        return rate_grid(number(v, "from"), number(v, "to"), number(v, "step"));
    }
    throw ConfigError("'rate_per_min' must be a number, list or range");
}

std::uint64_t fnv1a(std::string_view text)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text)
    {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<std::string> split(std::string const& line, char sep)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep))
        out.push_back(field);
    if (!line.empty() && line.back() == sep)
        out.emplace_back();
    return out;
}

double parse_double(std::string const& s)
{
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw RuntimeError("malformed number '" + s + "' in CSV");
    return v;
}

constexpr char sweep_header[] = "B_nominal,B_realized,R_mean,hdi_lo,hdi_hi,reps";

json model_json(RffModel const& m)
{
    json params = json::object();
    auto names = parameter_names(m.family);
    auto values = m.free_params();
    for (std::size_t i = 0; i < names.size(); ++i)
        params[names[i]] = values[i];
    return {{"family", std::string(to_string(m.family))},
            {"params", params},
            {"size_s", m.size_s},
            {"c", m.c},
            {"m", m.m},
            {"b", m.b},
            {"bmax", m.bmax}};
}

double json_double(json const& v)
{
    // Non-finite information criteria are serialized as null.
    return v.is_null() ? -std::numeric_limits<double>::infinity()
                       : v.get<double>();
}
}  // namespace

//---------------------------------------------------------------------------//
ScheduleSpec resolve_schedule(ScheduleKind kind,
                              double nominal_size,
                              double dt_s,
                              double max_cycle_s,
                              double rdrl_p)
{
    switch (kind)
    {
        case ScheduleKind::rr:
            return ScheduleSpec::ratio(nominal_size);
        case ScheduleKind::ri:
        case ScheduleKind::rt:
        {
            auto sol = solve_cycle_params({nominal_size, dt_s, max_cycle_s});
            return ScheduleSpec::timed(kind, sol.cycle_s, sol.arming_p);
        }
        case ScheduleKind::rdrl:
        {
            if (!(nominal_size > 0))
                throw ConfigError("schedule size must be positive");
            if (!(rdrl_p > 0 && rdrl_p <= 1))
                throw ConfigError("arming probability must lie in (0, 1]");
            double ticks = std::max(1.0, std::round(rdrl_p * nominal_size / dt_s));
            double cycle = ticks * dt_s;
            auto check = evaluate_cycle_params(nominal_size, cycle, rdrl_p);
            if (check.mean_err > cycle_tolerance)
                throw SolverError("RDRL cycle " + fmt_num(cycle)
                                  + " s cannot realize size "
                                  + fmt_num(nominal_size)
                                  + " s within 1% at this step");
            return ScheduleSpec::timed(kind, cycle, rdrl_p);
        }
    }
    throw ConfigError("unhandled schedule kind");
}

ExperimentConfig parse_experiment(std::string const& text, bool force)
{
    json root;
    try
    {
        root = json::parse(text);
    }
    catch (json::parse_error const& e)
    {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }

    try
    {
        check_keys(root,
                   "root",
                   {"profile", "schedule", "responder", "session", "output"});
        ExperimentConfig cfg;
        cfg.force = force;
        cfg.profile = root.value("profile", std::string("desk"));
        if (cfg.profile == "desk")
            cfg.session = desk_profile();
        else if (cfg.profile == "paper")
            cfg.session = paper_profile();
        else
            throw ConfigError("profile must be 'desk' or 'paper'");

        // Session
        json session = root.value("session", json::object());
        check_keys(session,
                   "session",
                   {"duration_s", "dt_s", "repetitions", "seed", "threads"});
        if (session.contains("duration_s"))
            cfg.session.duration_s = number(session, "duration_s");
        if (session.contains("dt_s"))
            cfg.session.dt_s = number(session, "dt_s");
        if (session.contains("repetitions"))
            cfg.session.repetitions = session.at("repetitions").get<std::uint32_t>();
        if (session.contains("seed"))
            cfg.session.seed = session.at("seed").get<std::uint64_t>();
        if (session.contains("threads"))
            cfg.session.threads = session.at("threads").get<unsigned>();

        // Responder
        json responder = root.value("responder", json::object());
        check_keys(responder, "responder", {"rate_per_min", "step_s", "burst"});
        if (responder.contains("step_s"))
        {
            double step = number(responder, "step_s");
            if (session.contains("dt_s")
                && std::abs(step - cfg.session.dt_s) > 1e-12)
                throw ConfigError("responder step_s and session dt_s differ");
            cfg.session.dt_s = step;
        }
        cfg.responder.step_s = cfg.session.dt_s;
        if (responder.contains("burst"))
        {
            auto const& b = responder.at("burst");
            check_keys(b, "burst", {"p_run", "p_break", "lor_per_min"});
            BurstSpec burst;
            burst.p_run = number(b, "p_run");
            burst.p_break = number(b, "p_break");
            if (b.contains("lor_per_min"))
            {
                burst.lor_per_min = number(b, "lor_per_min");
                if (!responder.contains("rate_per_min"))
                    cfg.session.rates_per_min = {burst.lor_per_min};
            }
            cfg.responder.burst = burst;
        }
        if (responder.contains("rate_per_min"))
            cfg.session.rates_per_min = parse_rates(responder.at("rate_per_min"));
        cfg.responder.rate_per_min = cfg.session.rates_per_min.empty()
                                         ? 0
                                         : cfg.session.rates_per_min.front();

        // Schedule
        if (!root.contains("schedule"))
            throw ConfigError("missing 'schedule' section");
        auto const& s = root.at("schedule");
        check_keys(s,
                   "schedule",
                   {"kind",
                    "size_s",
                    "ratio",
                    "cycle_s",
                    "arming_probability",
                    "max_cycle_s"});
        ScheduleKind kind = parse_schedule_kind(s.at("kind").get<std::string>());
        double max_cycle = s.contains("max_cycle_s") ? number(s, "max_cycle_s")
                                                     : 1.0;
        if (kind == ScheduleKind::rr)
        {
            if (!s.contains("ratio"))
                throw ConfigError("RR schedules need 'ratio'");
            cfg.nominal_size = number(s, "ratio");
            cfg.schedule = ScheduleSpec::ratio(cfg.nominal_size);
        }
        else if (s.contains("cycle_s"))
        {
            if (!s.contains("arming_probability"))
                throw ConfigError("'cycle_s' requires 'arming_probability'");
            double cycle = number(s, "cycle_s");
            double p = number(s, "arming_probability");
            cfg.schedule = ScheduleSpec::timed(kind, cycle, p);
            cfg.nominal_size = s.contains("size_s") ? number(s, "size_s")
                                                    : cfg.schedule.size;
            auto check = evaluate_cycle_params(cfg.nominal_size, cycle, p);
            bool ok = kind == ScheduleKind::rdrl
                          ? check.mean_err <= cycle_tolerance
                          : satisfies_tolerances(check);
            if (!ok && !force)
            {
                throw ConfigError(
                    "explicit cycle parameters violate the 1% tolerances "
                    "(mean error " + fmt_num(check.mean_err) + ", sd ratio "
                    + fmt_num(check.sd_ratio) + "); pass --force to accept");
            }
        }
        else
        {
            if (!s.contains("size_s"))
                throw ConfigError("schedule needs 'size_s' or 'cycle_s'");
            cfg.nominal_size = number(s, "size_s");
            double p = s.contains("arming_probability")
                           ? number(s, "arming_probability")
                           : default_rdrl_arming_p;
            if (kind != ScheduleKind::rdrl && s.contains("arming_probability"))
                throw ConfigError("'arming_probability' without 'cycle_s' is "
                                  "only meaningful for RDRL");
            cfg.schedule = resolve_schedule(
                kind, cfg.nominal_size, cfg.session.dt_s, max_cycle, p);
        }

        // Output
        json output = root.value("output", json::object());
        check_keys(output, "output", {"dir", "sweep", "samples"});
        if (output.contains("dir"))
            cfg.output_dir = output.at("dir").get<std::string>();
        if (output.contains("sweep"))
            cfg.sweep_file = output.at("sweep").get<std::string>();
        if (output.contains("samples"))
            cfg.samples_file = output.at("samples").get<std::string>();

        cfg.session.validate();
        Schedule(cfg.schedule, cfg.session.dt_s);
        return cfg;
    }
    catch (json::exception const& e)
    {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
}

ExperimentConfig load_experiment(std::filesystem::path const& path, bool force)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_experiment(ss.str(), force);
}

std::uint64_t ExperimentConfig::hash() const
{
    json j = {{"profile", profile},
              {"kind", std::string(to_string(schedule.kind))},
              {"cycle_s", schedule.cycle_s},
              {"arming_p", schedule.arming_p},
              {"size", schedule.size},
              {"nominal_size", nominal_size},
              {"duration_s", session.duration_s},
              {"dt_s", session.dt_s},
              {"repetitions", session.repetitions},
              {"rates", session.rates_per_min},
              {"seed", session.seed}};
    if (responder.burst)
    {
        j["p_run"] = responder.burst->p_run;
        j["p_break"] = responder.burst->p_break;
    }
    return fnv1a(j.dump());
}

std::string hex64(std::uint64_t value)
{
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(value));
    return buf;
}

Meta sweep_meta(ExperimentConfig const& config)
{
    Meta meta{{"schedule", std::string(to_string(config.schedule.kind))},
              {"size", fmt_num(config.nominal_size)},
              {"duration_s", fmt_num(config.session.duration_s)},
              {"dt_s", fmt_num(config.session.dt_s)},
              {"reps", std::to_string(config.session.repetitions)},
              {"seed", std::to_string(config.session.seed)},
              {"config_hash", hex64(config.hash())}};
    if (config.schedule.kind != ScheduleKind::rr)
    {
        meta["cycle_s"] = fmt_num(config.schedule.cycle_s);
        meta["arming_p"] = fmt_num(config.schedule.arming_p);
    }
    if (config.responder.burst)
    {
        meta["p_run"] = fmt_num(config.responder.burst->p_run);
        meta["p_break"] = fmt_num(config.responder.burst->p_break);
    }
    return meta;
}

std::string format_meta_comment(Meta const& meta)
{
    std::string out = "# rffsim";
    for (auto const& [k, v] : meta)
        out += " " + k + "=" + v;
    return out + "\n";
}

std::optional<double> SweepTable::nominal_size() const
{
    auto it = meta.find("size");
    if (it == meta.end())
        return std::nullopt;
    return parse_double(it->second);
}

void write_sweep_csv(std::ostream& os,
                     Meta const& meta,
                     std::span<SweepPoint const> points)
{
    os << format_meta_comment(meta) << sweep_header << '\n';
    for (auto const& p : points)
    {
        os << fmt_num(p.rate_nominal) << ',' << fmt_num(p.rate_realized) << ','
           << fmt_num(p.reinforcement_mean) << ',' << fmt_num(p.hdi_lo) << ','
           << fmt_num(p.hdi_hi) << ',' << p.samples.size() << '\n';
    }
}

void write_samples_csv(std::ostream& os,
                       Meta const& meta,
                       std::span<SweepPoint const> points)
{
    os << format_meta_comment(meta) << "B_nominal,rep,R\n";
    for (auto const& p : points)
    {
        for (std::size_t r = 0; r < p.samples.size(); ++r)
            os << fmt_num(p.rate_nominal) << ',' << r << ','
               << fmt_num(p.samples[r]) << '\n';
    }
}

void write_sweep_csv(std::filesystem::path const& path,
                     Meta const& meta,
                     std::span<SweepPoint const> points)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw RuntimeError("cannot write " + path.string());
    write_sweep_csv(out, meta, points);
    if (!out)
        throw RuntimeError("write failed for " + path.string());
}

SweepTable read_sweep_csv(std::istream& is)
{
    SweepTable table;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line))
    {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line.front() == '#')
        {
            std::istringstream ss(line.substr(1));
            std::string tok;
            while (ss >> tok)
            {
                auto eq = tok.find('=');
                if (eq != std::string::npos)
                    table.meta[tok.substr(0, eq)] = tok.substr(eq + 1);
            }
            continue;
        }
        if (!header_seen)
        {
            if (line != sweep_header)
                throw RuntimeError("unexpected sweep header '" + line + "'");
            header_seen = true;
            continue;
        }
        auto f = split(line, ',');
        if (f.size() != 6)
            throw RuntimeError("sweep row needs 6 fields: '" + line + "'");
        SweepPoint p;
        p.rate_nominal = parse_double(f[0]);
        p.rate_realized = parse_double(f[1]);
        p.reinforcement_mean = parse_double(f[2]);
        p.hdi_lo = parse_double(f[3]);
        p.hdi_hi = parse_double(f[4]);
        table.meta.try_emplace("reps", f[5]);
        table.points.push_back(std::move(p));
    }
    if (!header_seen)
        throw RuntimeError("sweep file has no header");
    return table;
}

SweepTable read_sweep_csv(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in)
        throw RuntimeError("cannot read " + path.string());
    return read_sweep_csv(in);
}

std::vector<DataPoint> fit_data(std::span<SweepPoint const> points,
                                bool include_origin)
{
    std::vector<DataPoint> out;
    for (auto const& p : points)
    {
        if (p.rate_nominal == 0 && !include_origin)
            continue;
        out.push_back({p.rate_nominal, p.reinforcement_mean});
    }
    return out;
}

//---------------------------------------------------------------------------//
std::string fits_to_json(std::span<RankedFit const> ranking, Meta const& meta)
{
    json fits = json::array();
    for (auto const& rf : ranking)
    {
        json j = model_json(rf.fit.model);
        j["n"] = rf.fit.n;
        j["k"] = rf.fit.k;
        j["rss"] = rf.fit.rss;
        j["tss"] = rf.fit.tss;
        j["r_squared"] = rf.fit.r_squared;
        j["aic"] = rf.fit.aic;
        j["bic"] = rf.fit.bic;
        j["converged"] = rf.fit.converged;
        j["iterations"] = rf.fit.iterations;
        j["bic_rank"] = rf.bic_rank;
        j["aic_rank"] = rf.aic_rank;
        j["good"] = rf.good;
        j["excellent"] = rf.excellent;
        fits.push_back(std::move(j));
    }
    json meta_json = json::object();
    for (auto const& [k, v] : meta)
        meta_json[k] = v;
    return json{{"_meta", meta_json}, {"fits", fits}}.dump(2) + "\n";
}

std::vector<RankedFit> fits_from_json(std::string const& text)
{
    std::vector<RankedFit> out;
    try
    {
        json root = json::parse(text);
        for (auto const& j : root.at("fits"))
        {
            RankedFit rf;
            auto& m = rf.fit.model;
            m.family = parse_family(j.at("family").get<std::string>());
            m.size_s = j.at("size_s").get<double>();
            m.c = j.at("c").get<double>();
            m.m = j.at("m").get<double>();
            m.b = j.at("b").get<double>();
            m.bmax = j.at("bmax").get<double>();
            rf.fit.n = j.at("n").get<std::size_t>();
            rf.fit.k = j.at("k").get<int>();
            rf.fit.rss = j.at("rss").get<double>();
            rf.fit.tss = j.at("tss").get<double>();
            rf.fit.r_squared = j.at("r_squared").get<double>();
            rf.fit.aic = json_double(j.at("aic"));
            rf.fit.bic = json_double(j.at("bic"));
            rf.fit.converged = j.at("converged").get<bool>();
            rf.fit.iterations = j.at("iterations").get<int>();
            rf.bic_rank = j.at("bic_rank").get<int>();
            rf.aic_rank = j.at("aic_rank").get<int>();
            rf.good = j.at("good").get<bool>();
            rf.excellent = j.at("excellent").get<bool>();
            out.push_back(std::move(rf));
        }
    }
    catch (json::exception const& e)
    {
        throw RuntimeError(std::string("malformed fits file: ") + e.what());
    }
    return out;
}

void write_plot_data(std::ostream& os,
                     Meta const& meta,
                     std::span<SweepPoint const> points,
                     std::span<FitResult const> fits,
                     double grid_step)
{
    os << format_meta_comment(meta) << "block,series,B,R,hdi_lo,hdi_hi\n";
    double bmax = 0;
    for (auto const& p : points)
    {
        bmax = std::max(bmax, p.rate_nominal);
        os << "observed,observed," << fmt_num(p.rate_nominal) << ','
           << fmt_num(p.reinforcement_mean) << ',' << fmt_num(p.hdi_lo) << ','
           << fmt_num(p.hdi_hi) << '\n';
    }
    if (fits.empty())
        return;
    auto grid = rate_grid(0, bmax, grid_step);

    auto curve = [&](std::string const& series, auto&& f) {
        for (double b : grid)
            os << "curve," << series << ',' << fmt_num(b) << ','
               << fmt_num(f(b)) << ",,\n";
    };
    auto marker = [&](std::string const& series, double b, double r) {
        os << "marker," << series << ',' << fmt_num(b) << ',' << fmt_num(r)
           << ",,\n";
    };

    for (auto const& fit : fits)
    {
        RffModel const& m = fit.model;
        std::string name(to_string(m.family));
        curve(name, [&](double b) { return eval(m, b); });
        if (m.family != Family::rdrl_2exp && m.family != Family::rdrl_reduced)
            continue;

        double a = 60.0 / m.size_s;
        double fall = m.b;
        double rise = m.c;
        if (m.family == Family::rdrl_reduced)
        {
            auto pred = rdrl_predictions(m.size_s);
            fall = pred.b;
            rise = pred.c;
        }
        curve(name + ":asymptote", [&](double) { return a; });
        curve(name + ":falling",
              [&](double b) { return a * std::exp(-b / fall); });
        curve(name + ":rising",
              [&](double b) { return -a * std::expm1(-b / rise); });
        if (fall > rise)
        {
            // argmax of a (exp(-B/b) - exp(-B/c)); the inflection is at 2x.
            double bm = std::log(fall / rise) * fall * rise / (fall - rise);
            marker(name + ":max", bm, eval(m, bm));
            marker(name + ":inflection", 2 * bm, eval(m, 2 * bm));
        }
    }
}

//---------------------------------------------------------------------------//
std::vector<BreakRunRow> break_run_comparison(SessionConfig const& session,
                                              ScheduleSpec const& schedule,
                                              double step_s,
                                              std::span<double const> lors,
                                              std::span<BurstPair const> pairs)
{
    std::vector<BreakRunRow> rows;
    for (auto const& pair : pairs)
    {
        ResponderSpec bursty;
        bursty.step_s = step_s;
        bursty.burst = BurstSpec{pair.p_run, pair.p_break, 0};
        double frac = bursty.burst->running_fraction();

        SessionConfig burst_cfg = session;
        burst_cfg.rates_per_min.assign(lors.begin(), lors.end());
        auto burst_points = run_sweep(burst_cfg, schedule, bursty);

        SessionConfig plain_cfg = session;
        plain_cfg.rates_per_min.clear();
        for (double lor : lors)
            plain_cfg.rates_per_min.push_back(lor * frac);
        ResponderSpec plain;
        plain.step_s = step_s;
        auto plain_points = run_sweep(plain_cfg, schedule, plain);

        // Both sweeps come back sorted by rate; the mapping is monotone.
        for (std::size_t i = 0; i < burst_points.size(); ++i)
        {
            BreakRunRow row;
            row.pair = pair;
            row.lor_per_min = burst_points[i].rate_nominal;
            row.rate_effective = plain_points[i].rate_nominal;
            row.burst_mean = burst_points[i].reinforcement_mean;
            row.burst_realized = burst_points[i].rate_realized;
            row.plain_mean = plain_points[i].reinforcement_mean;
            row.plain_hdi_lo = plain_points[i].hdi_lo;
            row.plain_hdi_hi = plain_points[i].hdi_hi;
            rows.push_back(row);
        }
    }
    return rows;
}

void write_break_run_csv(std::ostream& os,
                         Meta const& meta,
                         std::span<BreakRunRow const> rows)
{
    os << format_meta_comment(meta)
       << "p_run,p_break,LOR,B_effective,B_realized,R_burst,R_plain,"
          "plain_hdi_lo,plain_hdi_hi,inside\n";
    for (auto const& r : rows)
    {
        os << fmt_num(r.pair.p_run) << ',' << fmt_num(r.pair.p_break) << ','
           << fmt_num(r.lor_per_min) << ',' << fmt_num(r.rate_effective) << ','
           << fmt_num(r.burst_realized) << ',' << fmt_num(r.burst_mean) << ','
           << fmt_num(r.plain_mean) << ',' << fmt_num(r.plain_hdi_lo) << ','
           << fmt_num(r.plain_hdi_hi) << ',' << (r.inside() ? 1 : 0) << '\n';
    }
}

}  // namespace rffsim
