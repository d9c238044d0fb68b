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
#ifndef CHSOUND_REPORT_HPP
#define CHSOUND_REPORT_HPP

#include "chsound/manifest.hpp"
#include "chsound/pipeline.hpp"
#include "chsound/table_io.hpp"

#include <filesystem>
#include <span>

#include <nlohmann/json.hpp>

namespace chsound
{

// Campaign summary: manifest echo, status counts, path-loss fits, delay-spread and
// LOS K-factor statistics per band.
nlohmann::ordered_json summary_json(const CampaignManifest &manifest, std::span<const PositionReport> reports);

// Plot data next to summary.json:
//   pl_scatter.csv    measured PL per position
//   pl_curves.csv     CI, FI and FSPL curves over the measured distance range
//   kf_cdf.csv        empirical and fitted normal CDF of the LOS K factor in dB
//   apdp_heatmap.csv  APDP bins above the floor, delay relative to the first component
void write_report(const std::filesystem::path &out_dir, const CampaignManifest &manifest,
                  std::span<const PositionReport> reports, std::span<const ProfileRow> apdp,
                  std::span<const ProfileRow> mpcs);

} // namespace chsound

#endif
