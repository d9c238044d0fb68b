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

#ifndef CHSOUND_PIPELINE_HPP
#define CHSOUND_PIPELINE_HPP

#include "chsound/apdp_mpc.hpp"
#include "chsound/dispersion.hpp"
#include "chsound/kfactor.hpp"
#include "chsound/largescale.hpp"
#include "chsound/manifest.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace chsound
{

enum class PositionStatus
{
    OK,
    AllSnapshotsRejected,
    EmptyMpcSet
};

std::string_view status_name(PositionStatus s) noexcept;
PositionStatus parse_status(std::string_view text);

// One row of the position table. Metric fields are set iff status == OK.
struct PositionReport
{
    std::string position_id;
    double band_ghz = 0.0;
    Scenario scenario = Scenario::LOS;
    PositionStatus status = PositionStatus::OK;
    double distance_m = 0.0;
    std::optional<double> pl_db;
    std::optional<double> ds_ns;
    std::optional<double> kf_db;
    std::optional<std::size_t> n_mpcs;
};

struct PositionDetail
{
    std::optional<Apdp> apdp; // absent when every rep was gated out
    MpcList mpcs;
    std::size_t reps_kept = 0;
};

enum class DsSource
{
    Mpc,  // extracted components (default)
    Bins  // every APDP bin at or above noise floor + floor margin
};

struct PipelineOptions
{
    std::size_t jobs = 0; // 0: hardware concurrency
    DsSource ds_source = DsSource::Mpc;
};

// Rows ordered band-major, then in manifest position order; details[i] belongs to positions[i].
struct PipelineResult
{
    std::vector<PositionReport> positions;
    std::vector<PositionDetail> details;
};

std::filesystem::path calibration_path(const std::filesystem::path &capture_root, double band_ghz);
std::filesystem::path capture_path(const std::filesystem::path &capture_root, double band_ghz,
                                   const std::string &position_id, std::size_t rep);

// Everything the pipeline derives from one band's calibration capture.
struct CalibrationData
{
    FrequencyResponse spectrum;
    std::vector<bool> kept;
};

CalibrationData load_calibration(const std::filesystem::path &capture_root, double band_ghz,
                                 const CampaignManifest &manifest);

// Processes one position in one band from already loaded measurement records.
PositionReport process_position(const CampaignManifest &manifest, const Position &position, double band_ghz,
                                const CalibrationData &calibration, std::span<const ComplexRecord> reps,
                                DsSource ds_source, PositionDetail *detail = nullptr);

PipelineResult run_pipeline(const CampaignManifest &manifest, const std::filesystem::path &capture_root,
                            const PipelineOptions &options = {});

// OK rows of a position table as path-loss samples.
std::vector<PlSample> pl_samples(std::span<const PositionReport> reports);

struct FitGroup
{
    double band_ghz = 0.0;
    Scenario scenario = Scenario::LOS;
    std::size_t n_samples = 0;
    std::optional<PlFit> ci;
    std::optional<PlFit> fi;
    std::string error; // set when the group could not be fitted
};

// CI and FI fits per (band, scenario), ordered by band then LOS before NLOS.
std::vector<FitGroup> fit_groups(std::span<const PlSample> samples);

} // namespace chsound

#endif
