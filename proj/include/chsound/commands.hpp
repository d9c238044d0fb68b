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
#ifndef CHSOUND_COMMANDS_HPP
#define CHSOUND_COMMANDS_HPP

#include "chsound/manifest.hpp"
#include "chsound/pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace chsound
{

enum ExitCode : int
{
    ExitOk = 0,
    ExitFatal = 1,
    ExitUsage = 2,
    ExitNoFit = 3 // fit: no (band, scenario) group could be fitted
};

// Command-line values that replace the matching manifest fields.
struct ManifestOverrides
{
    std::optional<std::vector<double>> bands_ghz;
    std::optional<double> bandwidth_hz;
    std::optional<std::size_t> record_len;
    std::optional<std::size_t> reps_per_position;
    std::optional<std::size_t> snapshots_per_rep;
    std::optional<double> snr_gate_db;
    std::optional<double> peak_window_db;
    std::optional<double> floor_margin_db;
    std::optional<double> deconv_floor_db;
    std::optional<DistanceMode> distance_mode;

    void apply(CampaignManifest &manifest) const;
};

struct InitOptions
{
    std::filesystem::path out;
    bool with_nlos = false;
    DistanceMode distance_mode = DistanceMode::D2;
};

struct SimulateOptions
{
    std::optional<std::filesystem::path> manifest; // default layout when absent
    std::optional<std::filesystem::path> truth;    // default truth model when absent
    std::uint64_t seed = 1;
    std::filesystem::path out;
    std::size_t jobs = 0;
    bool with_nlos = false;
    ManifestOverrides overrides;
};

struct ProcessOptions
{
    std::filesystem::path in;                       // holds manifest.json and captures/
    std::optional<std::filesystem::path> manifest;
    std::optional<std::filesystem::path> captures;
    std::filesystem::path out;
    std::size_t jobs = 0;
    DsSource ds_source = DsSource::Mpc;
    ManifestOverrides overrides;
};

struct FitOptions
{
    std::filesystem::path positions;
    std::filesystem::path out;
};

struct ReportOptions
{
    std::filesystem::path in;                       // output directory of process
    std::optional<std::filesystem::path> manifest;
    std::filesystem::path out;
};

// init: default manifest.json and truth.json for editing.
int run_init(const InitOptions &opt);
// simulate: synthetic capture tree plus manifest.json and truth.json.
int run_simulate(const SimulateOptions &opt);
// process: positions.csv, apdp.csv, mpcs.csv and the effective manifest.json.
int run_process(const ProcessOptions &opt);
// fit: fits.json from a position table.
int run_fit(const FitOptions &opt);
// report: summary.json and plot data.
int run_report(const ReportOptions &opt);

} // namespace chsound

#endif
