// SPDX-License-Identifier: Apache-2.0
#include "rffsim/experiment.hpp"

#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "rffsim/error.hpp"

using namespace rffsim;

namespace
{
std::vector<std::string> lines(std::string const& text)
{
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);)
        out.push_back(line);
    return out;
}

std::size_t count_prefix(std::vector<std::string> const& ls, std::string const& p)
{
    std::size_t n = 0;
    for (auto const& l : ls)
        n += l.rfind(p, 0) == 0 ? 1 : 0;
    return n;
}

std::vector<SweepPoint> sample_points()
{
    std::vector<SweepPoint> pts;
    for (int i = 0; i < 5; ++i)
    {
        double b = 10.0 * i;
        SweepPoint p;
        p.rate_nominal = b;
        p.rate_realized = b * 1.01 + 1.0 / 3;
        p.reinforcement_mean = b / (b / 12 + 1) + 0.1 * (i % 2);
        p.hdi_lo = p.reinforcement_mean - 0.5;
        p.hdi_hi = p.reinforcement_mean + 0.7;
        p.samples = {p.hdi_lo, p.reinforcement_mean, p.hdi_hi};
        pts.push_back(p);
    }
    return pts;
}
}  // namespace

TEST_CASE("minimal config resolves the schedule from its size")
{
    auto cfg = parse_experiment(R"({"schedule": {"kind": "ri", "size_s": 5}})");
    CHECK(cfg.schedule.kind == ScheduleKind::ri);
    CHECK(cfg.schedule.cycle_s == doctest::Approx(0.095));
    CHECK(cfg.schedule.arming_p == doctest::Approx(0.019));
    CHECK(cfg.nominal_size == 5.0);
    CHECK(cfg.session.repetitions == desk_profile().repetitions);
    CHECK(cfg.session.rates_per_min.size() == 41);

    auto rdrl = parse_experiment(R"({"schedule": {"kind": "rdrl", "size_s": 8}})");
    CHECK(rdrl.schedule.arming_p == doctest::Approx(0.25));
    CHECK(rdrl.schedule.cycle_s == doctest::Approx(2.0));
}

TEST_CASE("full config round-trips its fields")
{
    auto cfg = parse_experiment(R"({
      "profile": "paper",
      "schedule": {"kind": "rt", "cycle_s": 0.595, "arming_probability": 0.019833333},
      "responder": {"rate_per_min": {"from": 0, "to": 20, "step": 10},
                    "burst": {"p_run": 0.01, "p_break": 0.02, "lor_per_min": 0}},
      "session": {"duration_s": 60, "repetitions": 3, "seed": 42, "threads": 2},
      "output": {"dir": "out", "sweep": "s.csv", "samples": "r.csv"}
    })");
    CHECK(cfg.schedule.kind == ScheduleKind::rt);
    CHECK(cfg.session.rates_per_min == std::vector<double>{0, 10, 20});
    CHECK(cfg.session.duration_s == 60);
    CHECK(cfg.session.repetitions == 3);
    CHECK(cfg.session.seed == 42);
    CHECK(cfg.session.threads == 2);
    CHECK(cfg.responder.burst.has_value());
    CHECK(cfg.output_dir == "out");
    CHECK(cfg.samples_file == std::optional<std::string>("r.csv"));

    auto again = parse_experiment(R"({
      "profile": "paper",
      "schedule": {"kind": "rt", "cycle_s": 0.595, "arming_probability": 0.019833333},
      "responder": {"rate_per_min": {"from": 0, "to": 20, "step": 10},
                    "burst": {"p_run": 0.01, "p_break": 0.02, "lor_per_min": 0}},
      "session": {"duration_s": 60, "repetitions": 3, "seed": 42, "threads": 2},
      "output": {"dir": "out", "sweep": "s.csv", "samples": "r.csv"}
    })");
    CHECK(cfg.hash() == again.hash());
    auto other = parse_experiment(R"({"schedule": {"kind": "ri", "size_s": 5}})");
    CHECK(cfg.hash() != other.hash());
}

TEST_CASE("config errors")
{
    CHECK_THROWS_AS(parse_experiment("{"), ConfigError);
    CHECK_THROWS_AS(parse_experiment("{}"), ConfigError);
    CHECK_THROWS_AS(parse_experiment(R"({"schedule": {"kind": "ri", "size_s": 5, "sise": 1}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_experiment(R"({"schedule": {"kind": "fi", "size_s": 5}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_experiment(R"({"schedule": {"kind": "ri", "size_s": "5"}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_experiment(R"({"schedule": {"kind": "rr"}})"), ConfigError);
    CHECK_THROWS_AS(parse_experiment(R"({"schedule": {"kind": "ri", "size_s": 5},
                                          "session": {"duration_s": 600.001}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_experiment(R"({"schedule": {"kind": "ri", "size_s": 5},
                                          "responder": {"rate_per_min": [-5]}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_experiment(R"({"schedule": {"kind": "ri", "size_s": 5},
                                          "profile": "huge"})"),
                    ConfigError);
    // Coarse explicit cycle violates the sd tolerance unless forced.
    char const* coarse = R"({"schedule": {"kind": "ri", "cycle_s": 2.5, "arming_probability": 0.5}})";
    CHECK_THROWS_AS(parse_experiment(coarse), ConfigError);
    CHECK_NOTHROW(parse_experiment(coarse, true));
    CHECK_THROWS_AS(parse_experiment(R"({"schedule": {"kind": "ri", "size_s": 0.01}})"),
                    SolverError);
    CHECK_THROWS_AS(load_experiment("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("sweep CSV round-trips through text")
{
    auto pts = sample_points();
    Meta meta{{"seed", "7"}, {"schedule", "ri"}, {"size", "5"}};
    std::ostringstream os;
    write_sweep_csv(os, meta, pts);
    auto text = os.str();
    auto ls = lines(text);
    REQUIRE(ls.size() == pts.size() + 2);
    CHECK(ls[0].rfind("# rffsim ", 0) == 0);
    CHECK(ls[1] == "B_nominal,B_realized,R_mean,hdi_lo,hdi_hi,reps");

    std::istringstream is(text);
    auto table = read_sweep_csv(is);
    CHECK(table.meta.at("reps") == "3");
    table.meta.erase("reps");
    CHECK(table.meta == meta);
    CHECK(table.nominal_size() == std::optional<double>(5.0));
    REQUIRE(table.points.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        CHECK(table.points[i].rate_nominal == doctest::Approx(pts[i].rate_nominal).epsilon(1e-9));
        CHECK(table.points[i].rate_realized == doctest::Approx(pts[i].rate_realized).epsilon(1e-9));
        CHECK(table.points[i].reinforcement_mean
              == doctest::Approx(pts[i].reinforcement_mean).epsilon(1e-9));
        CHECK(table.points[i].hdi_lo == doctest::Approx(pts[i].hdi_lo).epsilon(1e-9));
        CHECK(table.points[i].hdi_hi == doctest::Approx(pts[i].hdi_hi).epsilon(1e-9));
    }

    std::ostringstream again;
    write_sweep_csv(again, table.meta, table.points);
    // Re-reading drops samples, so only the reps column may differ.
    CHECK(lines(again.str()).size() == ls.size());

    std::istringstream bad("B_nominal,oops\n1,2\n");
    CHECK_THROWS_AS(read_sweep_csv(bad), RuntimeError);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_sweep_csv(empty), RuntimeError);
}

TEST_CASE("samples CSV lists every repetition")
{
    auto pts = sample_points();
    std::ostringstream os;
    write_samples_csv(os, {{"seed", "1"}}, pts);
    auto ls = lines(os.str());
    CHECK(ls[1] == "B_nominal,rep,R");
    CHECK(ls.size() == 2 + pts.size() * 3);
}

TEST_CASE("fit data drops the origin unless asked")
{
    auto pts = sample_points();
    CHECK(fit_data(pts).size() == pts.size() - 1);
    CHECK(fit_data(pts, true).size() == pts.size());
}

TEST_CASE("plot data block structure")
{
    auto pts = sample_points();
    Meta meta{{"seed", "1"}};
    {
        std::ostringstream os;
        write_plot_data(os, meta, pts, {});
        auto ls = lines(os.str());
        CHECK(ls[0].rfind("# rffsim", 0) == 0);
        CHECK(ls[1] == "block,series,B,R,hdi_lo,hdi_hi");
        CHECK(count_prefix(ls, "observed,") == pts.size());
        CHECK(count_prefix(ls, "curve,") == 0);
    }
    {
        RffModel m;
        m.family = Family::rdrl_2exp;
        m.size_s = 8;
        m.b = 48;
        m.c = 17;
        FitResult f;
        f.model = m;
        std::vector<FitResult> fits{f};
        std::ostringstream os;
        write_plot_data(os, meta, pts, fits);
        auto ls = lines(os.str());
        CHECK(count_prefix(ls, "observed,") == pts.size());
        CHECK(count_prefix(ls, "curve,rdrl_2exp,") > 0);
        CHECK(count_prefix(ls, "curve,rdrl_2exp:asymptote,") > 0);
        CHECK(count_prefix(ls, "curve,rdrl_2exp:falling,") > 0);
        CHECK(count_prefix(ls, "curve,rdrl_2exp:rising,") > 0);
        CHECK(count_prefix(ls, "marker,rdrl_2exp:max,") == 1);
        CHECK(count_prefix(ls, "marker,rdrl_2exp:inflection,") == 1);
    }
}

TEST_CASE("fits JSON round-trips the ranking")
{
    std::vector<FitResult> fits;
    for (auto [fam, rss] : {std::pair{Family::baum, 0.5}, std::pair{Family::prelec, 0.9}})
    {
        FitResult f;
        f.model.family = fam;
        f.model.size_s = 5.1;
        f.n = 40;
        f.k = 1;
        f.rss = rss;
        f.tss = 100;
        f.r_squared = 1 - rss / 100;
        f.aic = aic(40, rss, 1);
        f.bic = bic(40, rss, 1);
        f.converged = true;
        fits.push_back(f);
    }
    auto ranking = compare(fits);
    auto text = fits_to_json(ranking, {{"seed", "3"}});
    CHECK(text.find("\"_meta\"") != std::string::npos);
    auto back = fits_from_json(text);
    REQUIRE(back.size() == 2);
    CHECK(back[0].fit.model.family == Family::baum);
    CHECK(back[0].fit.model.size_s == doctest::Approx(5.1));
    CHECK(back[1].bic_rank == 2);
    CHECK_THROWS_AS(fits_from_json("[1,2"), RuntimeError);
}

TEST_CASE("meta comment format")
{
    auto s = format_meta_comment({{"a", "1"}, {"b", "x"}});
    CHECK(s == "# rffsim a=1 b=x\n");
    CHECK(hex64(255) == "00000000000000ff");
}
