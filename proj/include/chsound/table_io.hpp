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

#ifndef CHSOUND_TABLE_IO_HPP
#define CHSOUND_TABLE_IO_HPP

#include "chsound/pipeline.hpp"

#include <json.hpp>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace chsound
{

inline constexpr const char *position_csv_header = "position_id,band_ghz,scenario,status,distance_m,pl_db,ds_ns,kf_db,n_mpcs";

// Two decimals, "inf"/"-inf" for infinities, never "-0.00".
std::string format_2dp(double value);

double round_to(double value, int decimals) noexcept;

void write_positions_csv(const std::filesystem::path &path, std::span<const PositionReport> reports);
std::vector<PositionReport> read_positions_csv(const std::filesystem::path &path);

// Reads position_id, scenario, band_ghz, distance_m, pl_db by header name. When a status
// column is present only OK rows are returned.
std::vector<PlSample> read_pl_samples_csv(const std::filesystem::path &path);

// APDP bins at or above noise floor + floor_margin_db: position_id,band_ghz,delay_ns,power_db
void write_apdp_csv(const std::filesystem::path &path, std::span<const PositionReport> reports,
                    std::span<const PositionDetail> details, double floor_margin_db);

// Extracted components: position_id,band_ghz,delay_ns,power_db
void write_mpcs_csv(const std::filesystem::path &path, std::span<const PositionReport> reports,
                    std::span<const PositionDetail> details);

struct ProfileRow
{
    std::string position_id;
    double band_ghz = 0.0;
    double delay_ns = 0.0;
    double power_db = 0.0;
};

std::vector<ProfileRow> read_profile_csv(const std::filesystem::path &path);

nlohmann::ordered_json fits_to_json(std::span<const FitGroup> groups);

void write_text(const std::filesystem::path &path, const std::string &text);

} // namespace chsound

#endif
