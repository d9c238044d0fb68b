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

#ifndef CHSOUND_SYNTH_CAMPAIGN_HPP
#define CHSOUND_SYNTH_CAMPAIGN_HPP

#include "chsound/manifest.hpp"
#include "chsound/synthchan.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace chsound
{

// Diffuse cluster trailing the direct tap: count taps every spacing_bins delay bins,
// the first at first_db relative to the direct tap, each next one step_db lower.
struct ClusterSpec
{
    double first_db = -10.0;
    double step_db = -3.0;
    std::size_t count = 5;
    std::size_t spacing_bins = 2;
};

struct ScenarioTruth
{
    PlModel model = PlModel::FI;
    double ple = 2.0;       // alpha (FI) or n (CI); also drives the reflection-tap decay
    double beta_db = 0.0;   // FI only
    double sigma_db = 0.0;  // shadow-fading standard deviation
    ClusterSpec cluster;
    bool end_reflection = true;

    double nominal_pl_db(double d_m, double band_ghz) const;
};

struct BandTruth
{
    double band_ghz = 0.0;
    double end_reflection_loss_db = 0.0;
    ScenarioTruth los;
    ScenarioTruth nlos;

    const ScenarioTruth &scenario(Scenario s) const noexcept { return s == Scenario::LOS ? los : nlos; }
};

struct CampaignTruth
{
    std::vector<BandTruth> bands;
    double noise_power_db = -60.0;       // per-sample record noise of one snapshot
    std::optional<double> tap_k_db;      // per-tap Rician K across snapshots; unset: static taps
    std::vector<std::string> blocked_positions; // positions captured as pure noise

    const BandTruth &band(double band_ghz) const;
};

// FI parameters and shadow-fading spreads of the measured corridor as generator truth,
// cluster levels set so the LOS K factor lands near the measured means.
CampaignTruth default_truth();

nlohmann::ordered_json to_json(const CampaignTruth &truth);
CampaignTruth truth_from_json(const nlohmann::json &j);

struct PositionTruth
{
    std::string position_id;
    double band_ghz = 0.0;
    Scenario scenario = Scenario::LOS;
    double distance_m = 0.0;
    bool blocked = false;
    double sf_db = 0.0;
    double pl_db = 0.0;      // nominal model value plus shadow fading
    double pr_db = 0.0;      // total tap power implied by the link budget
    bool reflection_included = false;
    TapSet taps;             // bin-aligned delays
    double ds_ns = 0.0;      // of the taps within peak_window_db of the strongest
    double kf_db = 0.0;      // moment estimate of the noiseless response over the kept bins
};

PositionTruth build_position_truth(const CampaignManifest &manifest, const CampaignTruth &truth,
                                   std::size_t band_index, std::size_t position_index, std::uint64_t seed);

struct CampaignOutput
{
    std::vector<PositionTruth> positions; // band-major, manifest order
};

// Writes <out>/captures/<band>/{calibration,<id>_r<k>}.cap, <out>/manifest.json and
// <out>/truth.json. Output bytes depend only on (manifest, truth, seed).
CampaignOutput generate_campaign(const CampaignManifest &manifest, const CampaignTruth &truth, std::uint64_t seed,
                                 const std::filesystem::path &out_dir, std::size_t jobs = 0);

} // namespace chsound

#endif
