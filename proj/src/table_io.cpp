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

#include "chsound/table_io.hpp"
#include "chsound/error.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace chsound
{

double round_to(double value, int decimals) noexcept
{
    if (!std::isfinite(value))
        return value;
    const double scale = std::pow(10.0, decimals);
    const double r = std::round(value * scale) / scale;
    return r == 0.0 ? 0.0 : r;
}

std::string format_2dp(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    return fmt::format("{:.2f}", round_to(value, 2));
}

void write_text(const std::filesystem::path &path, const std::string &text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(Errc::IoError, "cannot write " + path.string());
    out << text;
}

namespace
{

std::vector<std::string> split(const std::string &line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
        fields.push_back(field);
    if (!line.empty() && line.back() == ',')
        fields.emplace_back();
    return fields;
}

double parse_double(const std::string &text, const std::string &where)
{
    if (text == "inf")
        return std::numeric_limits<double>::infinity();
    if (text == "-inf")
        return -std::numeric_limits<double>::infinity();
    if (text == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw Error(Errc::FormatError, where + ": '" + text + "' is not a number");
    return v;
}

struct CsvTable
{
    std::map<std::string, std::size_t> columns;
    std::vector<std::vector<std::string>> rows;
    std::string name;

    bool has(const std::string &col) const { return columns.count(col) != 0; }

    const std::string &at(std::size_t row, const std::string &col) const
    {
        auto it = columns.find(col);
        if (it == columns.end())
            throw Error(Errc::FormatError, name + ": missing column '" + col + "'");
        return rows[row].at(it->second);
    }

    std::string where(std::size_t row) const { return name + " line " + std::to_string(row + 2); }
};

CsvTable read_csv(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::IoError, "cannot open " + path.string());

    CsvTable t;
    t.name = path.string();
    std::string line;
    if (!std::getline(in, line))
        throw Error(Errc::FormatError, t.name + ": empty file");
    const auto header = split(line);
    for (std::size_t i = 0; i < header.size(); ++i)
        t.columns[header[i]] = i;

    while (std::getline(in, line))
    {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        auto fields = split(line);
        if (fields.size() != header.size())
            throw Error(Errc::FormatError, t.where(t.rows.size()) + ": expected " + std::to_string(header.size()) +
                                               " fields, found " + std::to_string(fields.size()));
        t.rows.push_back(std::move(fields));
    }
    return t;
}

std::optional<double> optional_number(const std::string &text, const std::string &where)
{
    if (text.empty())
        return std::nullopt;
    return parse_double(text, where);
}

} // namespace

void write_positions_csv(const std::filesystem::path &path, std::span<const PositionReport> reports)
{
    std::string out = std::string(position_csv_header) + "\n";
    for (const auto &r : reports)
    {
        const bool ok = r.status == PositionStatus::OK;
        out += fmt::format("{},{:g},{},{},{:.3f},{},{},{},{}\n", r.position_id, r.band_ghz, scenario_name(r.scenario),
                           status_name(r.status), round_to(r.distance_m, 3),
                           ok && r.pl_db ? format_2dp(*r.pl_db) : "", ok && r.ds_ns ? format_2dp(*r.ds_ns) : "",
                           ok && r.kf_db ? format_2dp(*r.kf_db) : "",
                           ok && r.n_mpcs ? std::to_string(*r.n_mpcs) : "");
    }
    write_text(path, out);
}

std::vector<PositionReport> read_positions_csv(const std::filesystem::path &path)
{
    const auto t = read_csv(path);
    std::vector<PositionReport> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i)
    {
        const auto where = t.where(i);
        PositionReport r;
        r.position_id = t.at(i, "position_id");
        r.band_ghz = parse_double(t.at(i, "band_ghz"), where);
        r.scenario = parse_scenario(t.at(i, "scenario"));
        r.status = parse_status(t.at(i, "status"));
        r.distance_m = parse_double(t.at(i, "distance_m"), where);
        r.pl_db = optional_number(t.at(i, "pl_db"), where);
        r.ds_ns = optional_number(t.at(i, "ds_ns"), where);
        r.kf_db = optional_number(t.at(i, "kf_db"), where);
        if (const auto &n = t.at(i, "n_mpcs"); !n.empty())
            r.n_mpcs = static_cast<std::size_t>(parse_double(n, where));

        const bool all = r.pl_db && r.ds_ns && r.kf_db && r.n_mpcs;
        const bool any = r.pl_db || r.ds_ns || r.kf_db || r.n_mpcs;
        if (r.status == PositionStatus::OK ? !all : any)
            throw Error(Errc::FormatError, where + ": metric columns must be filled exactly when status is OK");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<PlSample> read_pl_samples_csv(const std::filesystem::path &path)
{
    const auto t = read_csv(path);
    const bool has_status = t.has("status");
    std::vector<PlSample> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i)
    {
        if (has_status && t.at(i, "status") != "OK")
            continue;
        const auto where = t.where(i);
        PlSample s;
        s.position_id = t.at(i, "position_id");
        s.scenario = parse_scenario(t.at(i, "scenario"));
        s.frequency_ghz = parse_double(t.at(i, "band_ghz"), where);
        s.distance_m = parse_double(t.at(i, "distance_m"), where);
        s.pl_db = parse_double(t.at(i, "pl_db"), where);
        out.push_back(std::move(s));
    }
    return out;
}

void write_apdp_csv(const std::filesystem::path &path, std::span<const PositionReport> reports,
                    std::span<const PositionDetail> details, double floor_margin_db)
{
    std::string out = "position_id,band_ghz,delay_ns,power_db\n";
    for (std::size_t i = 0; i < reports.size(); ++i)
    {
        const auto &apdp = details[i].apdp;
        if (!apdp || !apdp->noise_floor_db)
            continue;
        const double limit = *apdp->noise_floor_db + floor_margin_db;
        for (std::size_t k = 0; k < apdp->power_db.size(); ++k)
            if (apdp->power_db[k] >= limit)
                out += fmt::format("{},{:g},{},{}\n", reports[i].position_id, reports[i].band_ghz,
                                   format_2dp(static_cast<double>(k) * apdp->delay_bin_s * 1e9),
                                   format_2dp(apdp->power_db[k]));
    }
    write_text(path, out);
}

void write_mpcs_csv(const std::filesystem::path &path, std::span<const PositionReport> reports,
                    std::span<const PositionDetail> details)
{
    std::string out = "position_id,band_ghz,delay_ns,power_db\n";
    for (std::size_t i = 0; i < reports.size(); ++i)
        for (const auto &c : details[i].mpcs.components)
            out += fmt::format("{},{:g},{},{}\n", reports[i].position_id, reports[i].band_ghz,
                               format_2dp(c.delay_s * 1e9), format_2dp(c.power_db));
    write_text(path, out);
}

std::vector<ProfileRow> read_profile_csv(const std::filesystem::path &path)
{
    const auto t = read_csv(path);
    std::vector<ProfileRow> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i)
    {
        const auto where = t.where(i);
        out.push_back({t.at(i, "position_id"), parse_double(t.at(i, "band_ghz"), where),
                       parse_double(t.at(i, "delay_ns"), where), parse_double(t.at(i, "power_db"), where)});
    }
    return out;
}

nlohmann::ordered_json fits_to_json(std::span<const FitGroup> groups)
{
    auto arr = nlohmann::ordered_json::array();
    for (const auto &g : groups)
    {
        nlohmann::ordered_json j;
        j["band_ghz"] = g.band_ghz;
        j["scenario"] = scenario_name(g.scenario);
        j["n_samples"] = g.n_samples;
        if (!g.error.empty())
        {
            j["error"] = g.error;
        }
        else
        {
            j["FI"] = {{"alpha", round_to(g.fi->ple, 4)},
                       {"beta_db", round_to(*g.fi->offset_db, 2)},
                       {"sigma_db", round_to(g.fi->sigma_db, 2)}};
            j["CI"] = {{"n", round_to(g.ci->ple, 4)}, {"sigma_db", round_to(g.ci->sigma_db, 2)}};
            j["n_below_reference"] = g.ci->n_below_reference;
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

} // namespace chsound
