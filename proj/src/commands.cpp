// SPDX-License-Identifier: Apache-2.0
//
// chsound - channel sounder post-processing and channel statistics
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "chsound/commands.hpp"
#include "chsound/report.hpp"
#include "chsound/synth_campaign.hpp"
#include "chsound/table_io.hpp"

#include <fmt/format.h>

namespace chsound
{

void ManifestOverrides::apply(CampaignManifest &m) const
{
    if (bands_ghz)
        m.bands_ghz = *bands_ghz;
    if (bandwidth_hz)
        m.bandwidth_hz = *bandwidth_hz;
    if (record_len)
        m.record_len = *record_len;
    if (reps_per_position)
        m.reps_per_position = *reps_per_position;
    if (snapshots_per_rep)
        m.snapshots_per_rep = *snapshots_per_rep;
    if (snr_gate_db)
        m.thresholds.snr_gate_db = *snr_gate_db;
    if (peak_window_db)
        m.thresholds.peak_window_db = *peak_window_db;
    if (floor_margin_db)
        m.thresholds.floor_margin_db = *floor_margin_db;
    if (deconv_floor_db)
        m.thresholds.deconv_floor_db = *deconv_floor_db;
    if (distance_mode)
        m.distance_mode = *distance_mode;
    m.validate();
}

int run_init(const InitOptions &opt)
{
    std::filesystem::create_directories(opt.out);
    save_json(opt.out / "manifest.json", to_json(default_manifest(opt.with_nlos, opt.distance_mode)));
    save_json(opt.out / "truth.json", to_json(default_truth()));
    fmt::print(stderr, "wrote {} and {}\n", (opt.out / "manifest.json").string(), (opt.out / "truth.json").string());
    return ExitOk;
}

int run_simulate(const SimulateOptions &opt)
{
    auto manifest = opt.manifest ? load_manifest(*opt.manifest) : default_manifest(opt.with_nlos);
    opt.overrides.apply(manifest);
    CampaignTruth truth = default_truth();
    if (opt.truth)
    {
        const auto j = load_json(*opt.truth);
        truth = truth_from_json(j.contains("model") ? j.at("model") : j);
    }
    const auto out = generate_campaign(manifest, truth, opt.seed, opt.out, opt.jobs);
    fmt::print(stderr, "simulated {} position-band records x {} reps into {}\n", out.positions.size(),
               manifest.reps_per_position, opt.out.string());
    return ExitOk;
}

int run_process(const ProcessOptions &opt)
{
    auto manifest = load_manifest(opt.manifest ? *opt.manifest : opt.in / "manifest.json");
    opt.overrides.apply(manifest);
    const auto captures = opt.captures ? *opt.captures : opt.in / "captures";

    const auto result = run_pipeline(manifest, captures, {opt.jobs, opt.ds_source});
    std::filesystem::create_directories(opt.out);
    write_positions_csv(opt.out / "positions.csv", result.positions);
    write_apdp_csv(opt.out / "apdp.csv", result.positions, result.details, manifest.thresholds.floor_margin_db);
    write_mpcs_csv(opt.out / "mpcs.csv", result.positions, result.details);
    save_json(opt.out / "manifest.json", to_json(manifest));

    std::size_t ok = 0;
    for (const auto &r : result.positions)
        ok += r.status == PositionStatus::OK;
    fmt::print(stderr, "processed {} position-band pairs, {} OK\n", result.positions.size(), ok);
    return ExitOk;
}

int run_fit(const FitOptions &opt)
{
    const auto samples = read_pl_samples_csv(opt.positions);
    const auto groups = fit_groups(samples);
    std::filesystem::create_directories(opt.out);
    save_json(opt.out / "fits.json", fits_to_json(groups));

    std::size_t fitted = 0;
    for (const auto &g : groups)
    {
        if (g.error.empty())
            ++fitted;
        else
            fmt::print(stderr, "{} {}: {}\n", band_tag(g.band_ghz), scenario_name(g.scenario), g.error);
    }
    if (fitted == 0)
    {
        fmt::print(stderr, "no group could be fitted\n");
        return ExitNoFit;
    }
    return ExitOk;
}

int run_report(const ReportOptions &opt)
{
    const auto manifest = load_manifest(opt.manifest ? *opt.manifest : opt.in / "manifest.json");
    const auto reports = read_positions_csv(opt.in / "positions.csv");
    const auto apdp = read_profile_csv(opt.in / "apdp.csv");
    const auto mpcs = read_profile_csv(opt.in / "mpcs.csv");
    write_report(opt.out, manifest, reports, apdp, mpcs);
    fmt::print(stderr, "report written to {}\n", opt.out.string());
    return ExitOk;
}

} // namespace chsound
