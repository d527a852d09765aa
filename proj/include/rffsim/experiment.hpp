// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fitter.hpp"
#include "session.hpp"

namespace rffsim
{
//! Default RDRL arming probability; T' = p * V.
inline constexpr double default_rdrl_arming_p = 0.25;

//---------------------------------------------------------------------------//
/*!
 * Declarative experiment read from a JSON file.
 *
 * Units are carried in key names: \c size_s, \c cycle_s, \c rate_per_min,
 * \c duration_s. Missing session keys come from the selected profile.
 */
struct ExperimentConfig
{
    std::string profile{"desk"};
    ScheduleSpec schedule;
    //! Nominal size as requested (seconds, or ratio for RR).
    double nominal_size{0};
    ResponderSpec responder;
    SessionConfig session;
    std::filesystem::path output_dir{"."};
    std::string sweep_file{"sweep.csv"};
    std::optional<std::string> samples_file;
    bool force{false};

    //! Stable 64-bit hash of the resolved configuration.
    std::uint64_t hash() const;
};

ExperimentConfig parse_experiment(std::string const& json_text,
                                  bool force = false);
ExperimentConfig load_experiment(std::filesystem::path const& path,
                                 bool force = false);

/*!
 * Resolve schedule parameters from a nominal size.
 *
 * RI and RT use the cycle solver; RDRL uses p = 0.25 (or \c rdrl_p) with
 * T' = p * V snapped to the step; RR takes the ratio directly.
 */
ScheduleSpec resolve_schedule(ScheduleKind kind,
                              double nominal_size,
                              double dt_s,
                              double max_cycle_s = 1.0,
                              double rdrl_p = default_rdrl_arming_p);

//! Key/value metadata carried in the leading comment of output files.
using Meta = std::map<std::string, std::string>;

Meta sweep_meta(ExperimentConfig const& config);

struct SweepTable
{
    Meta meta;
    std::vector<SweepPoint> points;  //!< samples are empty when read back

    std::optional<double> nominal_size() const;
};

void write_sweep_csv(std::ostream& os,
                     Meta const& meta,
                     std::span<SweepPoint const> points);
void write_samples_csv(std::ostream& os,
                       Meta const& meta,
                       std::span<SweepPoint const> points);
SweepTable read_sweep_csv(std::istream& is);

void write_sweep_csv(std::filesystem::path const& path,
                     Meta const& meta,
                     std::span<SweepPoint const> points);
SweepTable read_sweep_csv(std::filesystem::path const& path);

//! Per-B means as fitting data; B = 0 rows dropped unless include_origin.
std::vector<DataPoint> fit_data(std::span<SweepPoint const> points,
                                bool include_origin = false);

std::string fits_to_json(std::span<RankedFit const> ranking, Meta const& meta);
std::vector<RankedFit> fits_from_json(std::string const& text);

/*!
 * Tidy plot data: one observed block (with HDI columns) and one curve block
 * per fitted model sampled on a dense grid. RDRL models add their
 * asymptote, falling and rising components, the maximum and the inflection.
 */
void write_plot_data(std::ostream& os,
                     Meta const& meta,
                     std::span<SweepPoint const> points,
                     std::span<FitResult const> fits,
                     double grid_step = 0.5);

//---------------------------------------------------------------------------//
struct BurstPair
{
    double p_run{0};
    double p_break{0};
};

struct BreakRunRow
{
    BurstPair pair;
    double lor_per_min{0};
    double rate_effective{0};
    double burst_mean{0};
    double burst_realized{0};
    double plain_mean{0};
    double plain_hdi_lo{0};
    double plain_hdi_hi{0};

    bool inside() const
    {
        return plain_hdi_lo <= burst_mean && burst_mean <= plain_hdi_hi;
    }
};

//! Burst sweeps over a LOR grid compared point-wise against plain sweeps at
//! the effective rate LOR * P_r / (P_r + P_b).
std::vector<BreakRunRow> break_run_comparison(SessionConfig const& session,
                                              ScheduleSpec const& schedule,
                                              double step_s,
                                              std::span<double const> lors,
                                              std::span<BurstPair const> pairs);

void write_break_run_csv(std::ostream& os,
                         Meta const& meta,
                         std::span<BreakRunRow const> rows);

std::string format_meta_comment(Meta const& meta);
std::string hex64(std::uint64_t value);

}  // namespace rffsim
