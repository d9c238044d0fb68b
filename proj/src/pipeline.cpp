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

#include "chsound/pipeline.hpp"
#include "chsound/capture_io.hpp"
#include "chsound/error.hpp"
#include "chsound/parallel.hpp"

#include <fmt/format.h>

#include <map>

namespace chsound
{

std::string_view status_name(PositionStatus s) noexcept
{
    switch (s)
    {
    case PositionStatus::OK:
        return "OK";
    case PositionStatus::AllSnapshotsRejected:
        return "AllSnapshotsRejected";
    case PositionStatus::EmptyMpcSet:
        return "EmptyMpcSet";
    }
    return "Unknown";
}

PositionStatus parse_status(std::string_view text)
{
    for (auto s : {PositionStatus::OK, PositionStatus::AllSnapshotsRejected, PositionStatus::EmptyMpcSet})
        if (text == status_name(s))
            return s;
    throw Error(Errc::InvalidInput, "unknown position status '" + std::string(text) + "'");
}

std::filesystem::path calibration_path(const std::filesystem::path &capture_root, double band_ghz)
{
    return capture_root / band_tag(band_ghz) / "calibration.cap";
}

std::filesystem::path capture_path(const std::filesystem::path &capture_root, double band_ghz,
                                   const std::string &position_id, std::size_t rep)
{
    return capture_root / band_tag(band_ghz) / fmt::format("{}_r{}.cap", position_id, rep + 1);
}

CalibrationData load_calibration(const std::filesystem::path &capture_root, double band_ghz,
                                 const CampaignManifest &manifest)
{
    const auto path = calibration_path(capture_root, band_ghz);
    if (!std::filesystem::exists(path))
        throw Error(Errc::MissingCalibration, "no calibration capture for " + band_tag(band_ghz) + " at " + path.string());

    const auto record = read_capture(path);
    validate_record(record, manifest.record_len);
    if (record.kind != RecordKind::Calibration)
        throw Error(Errc::MissingCalibration, path.string() + " is not a calibration record");

    CalibrationData cal;
    cal.spectrum = to_frequency_domain(record);
    cal.kept = kept_bin_mask(cal.spectrum, manifest.thresholds.deconv_floor_db);
    return cal;
}

PositionReport process_position(const CampaignManifest &manifest, const Position &position, double band_ghz,
                                const CalibrationData &calibration, std::span<const ComplexRecord> reps,
                                DsSource ds_source, PositionDetail *detail)
{
    const auto &th = manifest.thresholds;

    PositionReport report;
    report.position_id = position.position_id;
    report.band_ghz = band_ghz;
    report.scenario = position.scenario;
    report.distance_m = position.distance(manifest.distance_mode);

    std::vector<FrequencyResponse> responses;
    std::vector<Cir> cirs;
    for (const auto &rec : reps)
    {
        validate_record(rec, manifest.record_len);
        if (rec.kind != RecordKind::Measurement)
            throw Error(Errc::InvalidInput, "position '" + position.position_id + "' holds a non-measurement record");
        responses.push_back(deconvolve(to_frequency_domain(rec), calibration.spectrum, th.deconv_floor_db));
        cirs.push_back(to_cir(responses.back()));
    }

    const NoiseWindowSpec guard{1.0 - th.noise_guard_fraction, 1.0};
    const auto kept = snr_gate_indices(cirs, th.snr_gate_db, guard);
    if (detail)
        detail->reps_kept = kept.size();
    if (kept.empty())
    {
        report.status = PositionStatus::AllSnapshotsRejected;
        return report;
    }

    std::vector<Cir> gated;
    for (auto i : kept)
        gated.push_back(cirs[i]);
    Apdp apdp = average_apdp(gated);
    apdp.noise_floor_db = estimate_noise_floor(apdp, guard);

    MpcList mpcs;
    try
    {
        mpcs = extract_mpcs(apdp, {th.floor_margin_db, th.peak_window_db});
    }
    catch (const Error &e)
    {
        if (e.code() != Errc::EmptyMpcSet)
            throw;
        report.status = PositionStatus::EmptyMpcSet;
        if (detail)
            detail->apdp = std::move(apdp);
        return report;
    }

    const double pr_db = received_power(mpcs);
    report.pl_db = path_loss(pr_db, manifest.link_budget);

    const DsResult ds = ds_source == DsSource::Mpc ? delay_spread(mpcs)
                                                   : delay_spread_bins(apdp, *apdp.noise_floor_db + th.floor_margin_db);
    report.ds_ns = ds.rms_ds_s * 1e9;

    // K factor from the coherent mean of the kept responses over the occupied band.
    std::vector<cplx> spectrum;
    const std::size_t n_bins = calibration.kept.size();
    for (std::size_t k = 0; k < n_bins; ++k)
    {
        if (!calibration.kept[k])
            continue;
        cplx sum(0.0, 0.0);
        for (auto i : kept)
            sum += responses[i].bins[k];
        spectrum.push_back(sum / static_cast<double>(kept.size()));
    }
    report.kf_db = estimate_kf(spectrum).k_db;
    report.n_mpcs = mpcs.components.size();

    if (detail)
    {
        detail->apdp = std::move(apdp);
        detail->mpcs = std::move(mpcs);
    }
    return report;
}

PipelineResult run_pipeline(const CampaignManifest &manifest, const std::filesystem::path &capture_root,
                            const PipelineOptions &options)
{
    manifest.validate();

    std::vector<CalibrationData> calibrations;
    for (double band : manifest.bands_ghz)
        calibrations.push_back(load_calibration(capture_root, band, manifest));

    const std::size_t n_pos = manifest.positions.size();
    const std::size_t n_tasks = manifest.bands_ghz.size() * n_pos;

    PipelineResult result;
    result.positions.resize(n_tasks);
    result.details.resize(n_tasks);

    parallel_for(n_tasks, options.jobs, [&](std::size_t task) {
        const std::size_t b = task / n_pos;
        const auto &pos = manifest.positions[task % n_pos];
        const double band = manifest.bands_ghz[b];

        std::vector<ComplexRecord> reps;
        for (std::size_t r = 0; r < manifest.reps_per_position; ++r)
            reps.push_back(read_capture(capture_path(capture_root, band, pos.position_id, r)));

        result.positions[task] =
            process_position(manifest, pos, band, calibrations[b], reps, options.ds_source, &result.details[task]);
    });
    return result;
}

std::vector<PlSample> pl_samples(std::span<const PositionReport> reports)
{
    std::vector<PlSample> out;
    for (const auto &r : reports)
        if (r.status == PositionStatus::OK && r.pl_db)
            out.push_back({r.position_id, r.distance_m, r.band_ghz, *r.pl_db, r.scenario});
    return out;
}

std::vector<FitGroup> fit_groups(std::span<const PlSample> samples)
{
    std::map<std::pair<double, int>, std::vector<PlSample>> groups;
    for (const auto &s : samples)
        groups[{s.frequency_ghz, static_cast<int>(s.scenario)}].push_back(s);

    std::vector<FitGroup> out;
    for (const auto &[key, group] : groups)
    {
        FitGroup g;
        g.band_ghz = key.first;
        g.scenario = static_cast<Scenario>(key.second);
        g.n_samples = group.size();
        try
        {
            g.ci = fit_ci(group);
            g.fi = fit_fi(group);
        }
        catch (const Error &e)
        {
            g.ci.reset();
            g.fi.reset();
            g.error = e.what();
        }
        out.push_back(std::move(g));
    }
    return out;
}

} // namespace chsound
