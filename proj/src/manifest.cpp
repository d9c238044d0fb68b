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

#include "chsound/manifest.hpp"
#include "chsound/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <set>

namespace chsound
{

std::string_view distance_mode_name(DistanceMode mode) noexcept
{
    return mode == DistanceMode::D2 ? "D2" : "D3";
}

DistanceMode parse_distance_mode(std::string_view text)
{
    if (text == "D2")
        return DistanceMode::D2;
    if (text == "D3")
        return DistanceMode::D3;
    throw Error(Errc::InvalidInput, "distance_mode must be D2 or D3, got '" + std::string(text) + "'");
}

std::string band_tag(double band_ghz)
{
    return fmt::format("{:g}GHz", band_ghz);
}

void CampaignManifest::validate() const
{
    if (bands_ghz.empty())
        throw Error(Errc::InvalidInput, "manifest lists no bands");
    std::set<double> unique_bands;
    for (double b : bands_ghz)
    {
        if (!(b > 0.0))
            throw Error(Errc::InvalidInput, "band frequencies must be positive");
        if (!unique_bands.insert(b).second)
            throw Error(Errc::InvalidInput, "band " + band_tag(b) + " listed twice");
    }
    if (!(bandwidth_hz > 0.0))
        throw Error(Errc::InvalidInput, "bandwidth must be positive");
    if (record_len < 8)
        throw Error(Errc::InvalidInput, "record length must be at least 8 samples");
    if (reps_per_position == 0 || snapshots_per_rep == 0)
        throw Error(Errc::InvalidInput, "reps and snapshots per position must be positive");
    if (!(corridor_length_m > 0.0) || !(tx_height_m > 0.0) || !(rx_height_m > 0.0))
        throw Error(Errc::InvalidInput, "corridor length and antenna heights must be positive");

    const auto &t = thresholds;
    if (!(t.snr_gate_db >= 0.0) || !(t.peak_window_db > 0.0) || !(t.floor_margin_db >= 0.0))
        throw Error(Errc::InvalidInput, "SNR gate, peak window and floor margin must be non-negative");
    if (!(t.deconv_floor_db < 0.0))
        throw Error(Errc::InvalidInput, "deconvolution floor must be negative (relative to the calibration peak)");
    if (!(t.noise_guard_fraction > 0.0) || !(t.noise_guard_fraction < 1.0))
        throw Error(Errc::InvalidInput, "noise guard fraction must lie in (0, 1)");

    const auto &b = link_budget;
    for (double v : {b.pt_dbm, b.ptht_dbm, b.pthr_dbm, b.gt_dbi, b.gr_dbi, b.gatt_db})
        if (!std::isfinite(v))
            throw Error(Errc::InvalidInput, "link budget terms must be finite");

    if (positions.empty())
        throw Error(Errc::InvalidInput, "manifest lists no positions");
    std::set<std::string> ids;
    for (const auto &p : positions)
    {
        if (p.position_id.empty())
            throw Error(Errc::InvalidInput, "position with empty id");
        if (!ids.insert(p.position_id).second)
            throw Error(Errc::InvalidInput, "position id '" + p.position_id + "' listed twice");
        if (!(p.distance_2d_m > 0.0) || !(p.distance_3d_m > 0.0))
            throw Error(Errc::InvalidInput, "position '" + p.position_id + "' has a non-positive distance");
        const double axial = std::abs(p.rx_pos_m - p.tx_pos_m);
        if (p.distance_2d_m + 1e-6 < axial || p.distance_3d_m + 1e-6 < p.distance_2d_m)
            throw Error(Errc::InvalidInput, "position '" + p.position_id + "' distances are inconsistent with its coordinates");
    }
}

CampaignManifest default_manifest(bool include_nlos, DistanceMode mode)
{
    CampaignManifest m;
    m.distance_mode = mode;

    const double dh = m.tx_height_m - m.rx_height_m;
    std::vector<double> rx(37);
    for (int i = 0; i < 37; ++i)
        rx[static_cast<std::size_t>(i)] = i < 21 ? 1.0 + 0.8 * i : 1.0 + 0.8 * 20 + 1.45 * (i - 20);

    auto add = [&](Scenario sc, int index, double lateral) {
        Position p;
        p.position_id = fmt::format("{}{:02d}", sc == Scenario::LOS ? 'L' : 'N', index);
        p.scenario = sc;
        p.tx_pos_m = 0.0;
        p.rx_pos_m = rx[static_cast<std::size_t>(index - 1)];
        p.distance_2d_m = std::hypot(p.rx_pos_m - p.tx_pos_m, lateral);
        p.distance_3d_m = std::hypot(p.distance_2d_m, dh);
        m.positions.push_back(p);
    };

    for (int i = 1; i <= 37; ++i)
        add(Scenario::LOS, i, 0.0);
    if (include_nlos)
        for (int i = 3; i <= 37; ++i)
            add(Scenario::NLOS, i, nlos_tx_offset_m);
    return m;
}

nlohmann::ordered_json to_json(const CampaignManifest &m)
{
    nlohmann::ordered_json j;
    j["name"] = m.name;
    j["bands_ghz"] = m.bands_ghz;
    j["bandwidth_hz"] = m.bandwidth_hz;
    j["record_len"] = m.record_len;
    j["reps_per_position"] = m.reps_per_position;
    j["snapshots_per_rep"] = m.snapshots_per_rep;
    j["corridor_length_m"] = m.corridor_length_m;
    j["tx_height_m"] = m.tx_height_m;
    j["rx_height_m"] = m.rx_height_m;
    j["distance_mode"] = distance_mode_name(m.distance_mode);
    j["link_budget"] = {{"pt_dbm", m.link_budget.pt_dbm},   {"ptht_dbm", m.link_budget.ptht_dbm},
                        {"pthr_dbm", m.link_budget.pthr_dbm}, {"gt_dbi", m.link_budget.gt_dbi},
                        {"gr_dbi", m.link_budget.gr_dbi},     {"gatt_db", m.link_budget.gatt_db}};
    j["thresholds"] = {{"snr_gate_db", m.thresholds.snr_gate_db},
                       {"peak_window_db", m.thresholds.peak_window_db},
                       {"floor_margin_db", m.thresholds.floor_margin_db},
                       {"deconv_floor_db", m.thresholds.deconv_floor_db},
                       {"noise_guard_fraction", m.thresholds.noise_guard_fraction}};
    auto &pos = j["positions"] = nlohmann::ordered_json::array();
    for (const auto &p : m.positions)
        pos.push_back({{"position_id", p.position_id},
                       {"scenario", scenario_name(p.scenario)},
                       {"tx_pos_m", p.tx_pos_m},
                       {"rx_pos_m", p.rx_pos_m},
                       {"distance_2d_m", p.distance_2d_m},
                       {"distance_3d_m", p.distance_3d_m}});
    return j;
}

namespace
{

template <typename T>
void read_opt(const nlohmann::json &j, const char *key, T &out)
{
    if (j.contains(key))
        out = j.at(key).get<T>();
}

} // namespace

CampaignManifest manifest_from_json(const nlohmann::json &j)
{
    CampaignManifest m;
    try
    {
        read_opt(j, "name", m.name);
        read_opt(j, "bands_ghz", m.bands_ghz);
        read_opt(j, "bandwidth_hz", m.bandwidth_hz);
        read_opt(j, "record_len", m.record_len);
        read_opt(j, "reps_per_position", m.reps_per_position);
        read_opt(j, "snapshots_per_rep", m.snapshots_per_rep);
        read_opt(j, "corridor_length_m", m.corridor_length_m);
        read_opt(j, "tx_height_m", m.tx_height_m);
        read_opt(j, "rx_height_m", m.rx_height_m);

        if (!j.contains("distance_mode"))
            throw Error(Errc::InvalidInput, "manifest must state distance_mode (D2 or D3)");
        m.distance_mode = parse_distance_mode(j.at("distance_mode").get<std::string>());

        if (j.contains("link_budget"))
        {
            const auto &b = j.at("link_budget");
            read_opt(b, "pt_dbm", m.link_budget.pt_dbm);
            read_opt(b, "ptht_dbm", m.link_budget.ptht_dbm);
            read_opt(b, "pthr_dbm", m.link_budget.pthr_dbm);
            read_opt(b, "gt_dbi", m.link_budget.gt_dbi);
            read_opt(b, "gr_dbi", m.link_budget.gr_dbi);
            read_opt(b, "gatt_db", m.link_budget.gatt_db);
        }
        if (j.contains("thresholds"))
        {
            const auto &t = j.at("thresholds");
            read_opt(t, "snr_gate_db", m.thresholds.snr_gate_db);
            read_opt(t, "peak_window_db", m.thresholds.peak_window_db);
            read_opt(t, "floor_margin_db", m.thresholds.floor_margin_db);
            read_opt(t, "deconv_floor_db", m.thresholds.deconv_floor_db);
            read_opt(t, "noise_guard_fraction", m.thresholds.noise_guard_fraction);
        }

        for (const auto &pj : j.at("positions"))
        {
            Position p;
            p.position_id = pj.at("position_id").get<std::string>();
            p.scenario = parse_scenario(pj.at("scenario").get<std::string>());
            read_opt(pj, "tx_pos_m", p.tx_pos_m);
            read_opt(pj, "rx_pos_m", p.rx_pos_m);
            const double axial = std::abs(p.rx_pos_m - p.tx_pos_m);
            p.distance_2d_m = pj.value("distance_2d_m", axial);
            p.distance_3d_m = pj.value("distance_3d_m", std::hypot(p.distance_2d_m, m.tx_height_m - m.rx_height_m));
            m.positions.push_back(p);
        }
    }
    catch (const nlohmann::json::exception &e)
    {
        throw Error(Errc::InvalidInput, std::string("malformed manifest: ") + e.what());
    }
    m.validate();
    return m;
}

nlohmann::json load_json(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::IoError, "cannot open " + path.string());
    try
    {
        return nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw Error(Errc::InvalidInput, path.string() + ": " + e.what());
    }
}

CampaignManifest load_manifest(const std::filesystem::path &path)
{
    return manifest_from_json(load_json(path));
}

void save_json(const std::filesystem::path &path, const nlohmann::ordered_json &j)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::IoError, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

} // namespace chsound
