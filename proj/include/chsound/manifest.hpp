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

#ifndef CHSOUND_MANIFEST_HPP
#define CHSOUND_MANIFEST_HPP

#include "chsound/largescale.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace chsound
{

enum class DistanceMode
{
    D2,
    D3
};

struct Thresholds
{
    double snr_gate_db = 25.0;
    double peak_window_db = 25.0;
    double floor_margin_db = 6.0;
    double deconv_floor_db = -40.0;
    double noise_guard_fraction = 0.25; // trailing share of the delay axis used for the noise floor
};

struct Position
{
    std::string position_id;
    Scenario scenario = Scenario::LOS;
    double tx_pos_m = 0.0;
    double rx_pos_m = 0.0;
    double distance_2d_m = 0.0;
    double distance_3d_m = 0.0;

    double distance(DistanceMode mode) const noexcept { return mode == DistanceMode::D2 ? distance_2d_m : distance_3d_m; }
};

struct CampaignManifest
{
    std::string name = "corridor";
    std::vector<double> bands_ghz = {2.4, 5.0, 6.0};
    double bandwidth_hz = 320e6;
    std::size_t record_len = 4800;
    std::size_t reps_per_position = 5;
    std::size_t snapshots_per_rep = 400;
    double corridor_length_m = 41.0;
    double tx_height_m = 1.95;
    double rx_height_m = 1.45;
    LinkBudget link_budget;
    Thresholds thresholds;
    DistanceMode distance_mode = DistanceMode::D2;
    std::vector<Position> positions;

    void validate() const;
    double delay_bin_s() const noexcept { return 1.0 / bandwidth_hz; }
};

// Corridor layout: Tx1 at the corridor start, Rx positions 1-21 every 0.8 m from 1 m,
// positions 21-37 every 1.45 m so the last one stays inside the 41 m corridor. NLOS
// positions 3-37 reuse the Rx spots with Tx2 offset laterally by nlos_tx_offset_m.
CampaignManifest default_manifest(bool include_nlos = false, DistanceMode mode = DistanceMode::D2);

inline constexpr double nlos_tx_offset_m = 3.0;

std::string band_tag(double band_ghz);

nlohmann::ordered_json to_json(const CampaignManifest &manifest);
CampaignManifest manifest_from_json(const nlohmann::json &j);

CampaignManifest load_manifest(const std::filesystem::path &path);
void save_json(const std::filesystem::path &path, const nlohmann::ordered_json &j);
nlohmann::json load_json(const std::filesystem::path &path);

std::string_view distance_mode_name(DistanceMode mode) noexcept;
DistanceMode parse_distance_mode(std::string_view text);

} // namespace chsound

#endif
