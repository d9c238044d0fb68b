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

#include "chsound/synth_campaign.hpp"
#include "chsound/capture_io.hpp"
#include "chsound/dispersion.hpp"
#include "chsound/error.hpp"
#include "chsound/kfactor.hpp"
#include "chsound/parallel.hpp"
#include "chsound/pipeline.hpp"
#include "chsound/table_io.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace chsound
{

namespace
{

enum StreamTag : std::uint64_t
{
    ShadowStream = 1,
    PhaseStream = 2,
    RecordStream = 3
};

std::uint64_t stream_id(StreamTag tag, std::size_t band_index)
{
    return (static_cast<std::uint64_t>(tag) << 32) | static_cast<std::uint64_t>(band_index);
}

const char *model_name(PlModel m)
{
    return m == PlModel::CI ? "CI" : "FI";
}

PlModel parse_model(const std::string &s)
{
    if (s == "CI")
        return PlModel::CI;
    if (s == "FI")
        return PlModel::FI;
    throw Error(Errc::InvalidInput, "unknown path-loss model '" + s + "'");
}

nlohmann::ordered_json scenario_json(const ScenarioTruth &s)
{
    nlohmann::ordered_json j;
    j["model"] = model_name(s.model);
    j["ple"] = s.ple;
    if (s.model == PlModel::FI)
        j["beta_db"] = s.beta_db;
    j["sigma_db"] = s.sigma_db;
    j["cluster"] = {{"first_db", s.cluster.first_db},
                    {"step_db", s.cluster.step_db},
                    {"count", s.cluster.count},
                    {"spacing_bins", s.cluster.spacing_bins}};
    j["end_reflection"] = s.end_reflection;
    return j;
}

ScenarioTruth scenario_from_json(const nlohmann::json &j)
{
    ScenarioTruth s;
    s.model = parse_model(j.at("model").get<std::string>());
    s.ple = j.at("ple").get<double>();
    s.beta_db = j.value("beta_db", 0.0);
    s.sigma_db = j.value("sigma_db", 0.0);
    if (j.contains("cluster"))
    {
        const auto &c = j.at("cluster");
        s.cluster.first_db = c.value("first_db", s.cluster.first_db);
        s.cluster.step_db = c.value("step_db", s.cluster.step_db);
        s.cluster.count = c.value("count", s.cluster.count);
        s.cluster.spacing_bins = c.value("spacing_bins", s.cluster.spacing_bins);
    }
    s.end_reflection = j.value("end_reflection", s.end_reflection);
    if (!(s.sigma_db >= 0.0))
        throw Error(Errc::InvalidInput, "shadow-fading sigma must be non-negative");
    if (s.cluster.count > 0 && s.cluster.spacing_bins < 2)
        throw Error(Errc::InvalidInput, "cluster taps need a spacing of at least two bins to stay resolvable");
    return s;
}

} // namespace

double ScenarioTruth::nominal_pl_db(double d_m, double band_ghz) const
{
    return model == PlModel::FI ? eval_fi(d_m, ple, beta_db) : eval_ci(d_m, band_ghz, ple);
}

const BandTruth &CampaignTruth::band(double band_ghz) const
{
    for (const auto &b : bands)
        if (b.band_ghz == band_ghz)
            return b;
    throw Error(Errc::InvalidInput, "truth model has no entry for " + band_tag(band_ghz));
}

CampaignTruth default_truth()
{
    auto los = [](double alpha, double beta, double sigma, double cluster_first_db) {
        ScenarioTruth s;
        s.model = PlModel::FI;
        s.ple = alpha;
        s.beta_db = beta;
        s.sigma_db = sigma;
        s.cluster = {cluster_first_db, -3.0, 5, 2};
        s.end_reflection = true;
        return s;
    };
    auto nlos = [](double alpha, double beta, double sigma) {
        ScenarioTruth s;
        s.model = PlModel::FI;
        s.ple = alpha;
        s.beta_db = beta;
        s.sigma_db = sigma;
        s.cluster = {-3.0, -1.5, 14, 2};
        s.end_reflection = false;
        return s;
    };

    CampaignTruth t;
    t.bands = {
        {2.4, 7.2, los(1.25, 41.23, 2.96, -10.07), nlos(1.17, 57.46, 2.99)},
        {5.0, 7.0, los(1.75, 48.93, 3.18, -9.21), nlos(1.27, 67.22, 1.85)},
        {6.0, 10.6, los(2.03, 48.33, 2.39, -9.78), nlos(1.66, 67.91, 1.87)},
    };
    return t;
}

nlohmann::ordered_json to_json(const CampaignTruth &truth)
{
    nlohmann::ordered_json j;
    j["noise_power_db"] = truth.noise_power_db;
    j["tap_k_db"] = truth.tap_k_db ? nlohmann::ordered_json(*truth.tap_k_db) : nlohmann::ordered_json(nullptr);
    j["blocked_positions"] = truth.blocked_positions;
    auto &bands = j["bands"] = nlohmann::ordered_json::array();
    for (const auto &b : truth.bands)
        bands.push_back({{"band_ghz", b.band_ghz},
                         {"end_reflection_loss_db", b.end_reflection_loss_db},
                         {"LOS", scenario_json(b.los)},
                         {"NLOS", scenario_json(b.nlos)}});
    return j;
}

CampaignTruth truth_from_json(const nlohmann::json &j)
{
    CampaignTruth t;
    try
    {
        t.noise_power_db = j.value("noise_power_db", t.noise_power_db);
        if (j.contains("tap_k_db") && !j.at("tap_k_db").is_null())
            t.tap_k_db = j.at("tap_k_db").get<double>();
        if (j.contains("blocked_positions"))
            t.blocked_positions = j.at("blocked_positions").get<std::vector<std::string>>();
        for (const auto &bj : j.at("bands"))
        {
            BandTruth b;
            b.band_ghz = bj.at("band_ghz").get<double>();
            b.end_reflection_loss_db = bj.value("end_reflection_loss_db", 0.0);
            b.los = scenario_from_json(bj.at("LOS"));
            b.nlos = scenario_from_json(bj.at("NLOS"));
            t.bands.push_back(b);
        }
    }
    catch (const nlohmann::json::exception &e)
    {
        throw Error(Errc::InvalidInput, std::string("malformed truth model: ") + e.what());
    }
    return t;
}

PositionTruth build_position_truth(const CampaignManifest &manifest, const CampaignTruth &truth,
                                   std::size_t band_index, std::size_t position_index, std::uint64_t seed)
{
    const double band = manifest.bands_ghz.at(band_index);
    const auto &pos = manifest.positions.at(position_index);
    const auto &bt = truth.band(band);
    const auto &st = bt.scenario(pos.scenario);

    PositionTruth pt;
    pt.position_id = pos.position_id;
    pt.band_ghz = band;
    pt.scenario = pos.scenario;
    pt.distance_m = pos.distance(manifest.distance_mode);
    pt.blocked = std::find(truth.blocked_positions.begin(), truth.blocked_positions.end(), pos.position_id) !=
                 truth.blocked_positions.end();

    auto sf_rng = derive_rng(seed, stream_id(ShadowStream, band_index), position_index);
    std::normal_distribution<double> n01(0.0, 1.0);
    const double z = n01(sf_rng);
    pt.sf_db = st.sigma_db * z;
    pt.pl_db = st.nominal_pl_db(pt.distance_m, band) + pt.sf_db;
    pt.pr_db = manifest.link_budget.offset_db() - pt.pl_db;
    pt.taps.noise_power_db = truth.noise_power_db;
    if (pt.blocked)
        return pt;

    const double bw = manifest.bandwidth_hz;
    const std::size_t n = manifest.record_len;
    const std::size_t direct_bin = tap_bin(pos.distance_2d_m / speed_of_light_m_s, bw, n);

    // Relative levels (dB re. direct tap) keyed by delay bin.
    std::vector<std::pair<std::size_t, double>> rel = {{direct_bin, 0.0}};
    for (std::size_t c = 0; c < st.cluster.count; ++c)
        rel.emplace_back(direct_bin + (c + 1) * st.cluster.spacing_bins,
                         st.cluster.first_db + static_cast<double>(c) * st.cluster.step_db);

    if (st.end_reflection)
    {
        CorridorGeometry geom;
        geom.length_m = manifest.corridor_length_m;
        geom.tx_pos_m = pos.tx_pos_m;
        geom.rx_pos_m = pos.rx_pos_m;
        geom.tx_height_m = manifest.tx_height_m;
        geom.rx_height_m = manifest.rx_height_m;
        geom.end_reflection_loss_db_per_band = {{band, bt.end_reflection_loss_db}};
        const auto corridor = corridor_taps(geom, band, st.ple);
        if (corridor.taps.size() == 2)
        {
            const std::size_t ref_bin = direct_bin + static_cast<std::size_t>(std::llround(
                                                         geom.reflection_excess_delay_s() * bw));
            // A reflection landing on or next to another tap is not resolvable; leave it out.
            const bool clear = std::all_of(rel.begin(), rel.end(), [&](const auto &r) {
                return (ref_bin > r.first ? ref_bin - r.first : r.first - ref_bin) >= 2;
            });
            if (clear)
            {
                rel.emplace_back(ref_bin, corridor.taps[1].mean_power_db - corridor.taps[0].mean_power_db);
                pt.reflection_included = true;
            }
        }
    }

    double total = 0.0;
    for (const auto &r : rel)
        total += from_db(r.second);
    const double offset = pt.pr_db - 10.0 * std::log10(total);
    const double k_linear = truth.tap_k_db ? from_db(*truth.tap_k_db) : std::numeric_limits<double>::infinity();
    for (const auto &r : rel)
    {
        if (r.first >= n)
            throw Error(Errc::InvalidInput, "position '" + pos.position_id + "' needs taps beyond the record span");
        pt.taps.taps.push_back({static_cast<double>(r.first) / bw, r.second + offset, k_linear});
    }

    // Reference statistics of the noiseless profile.
    MpcList visible;
    double peak = -std::numeric_limits<double>::infinity();
    for (const auto &t : pt.taps.taps)
        peak = std::max(peak, t.mean_power_db);
    for (const auto &t : pt.taps.taps)
        if (t.mean_power_db >= peak - manifest.thresholds.peak_window_db)
            visible.components.push_back({t.delay_s, t.mean_power_db});
    std::sort(visible.components.begin(), visible.components.end(),
              [](const Mpc &a, const Mpc &b) { return a.delay_s < b.delay_s; });
    pt.ds_ns = delay_spread(visible).rms_ds_s * 1e9;

    auto static_taps = pt.taps;
    for (auto &t : static_taps.taps)
        t.k_linear = std::numeric_limits<double>::infinity();
    std::mt19937_64 unused;
    const auto phases = specular_phases(pt.taps.taps.size(), derive_rng(seed, stream_id(PhaseStream, band_index), position_index)());
    const auto h = fft_forward(realize_cir(static_taps, n, bw, phases, unused));
    const auto ref = make_sounder_reference(n);
    FrequencyResponse ref_spectrum{ref.spectrum, bw / static_cast<double>(n), band * 1e9};
    const auto mask = kept_bin_mask(ref_spectrum, manifest.thresholds.deconv_floor_db);
    std::vector<cplx> kept;
    for (std::size_t k = 0; k < n; ++k)
        if (mask[k])
            kept.push_back(h[k]);
    pt.kf_db = estimate_kf(kept).k_db;
    return pt;
}

namespace
{

nlohmann::ordered_json position_truth_json(const PositionTruth &pt)
{
    nlohmann::ordered_json j;
    j["position_id"] = pt.position_id;
    j["band_ghz"] = pt.band_ghz;
    j["scenario"] = scenario_name(pt.scenario);
    j["distance_m"] = pt.distance_m;
    j["blocked"] = pt.blocked;
    j["sf_db"] = pt.sf_db;
    j["pl_db"] = pt.pl_db;
    j["pr_db"] = pt.pr_db;
    if (!pt.blocked)
    {
        j["reflection_included"] = pt.reflection_included;
        j["ds_ns"] = pt.ds_ns;
        j["kf_db"] = std::isfinite(pt.kf_db) ? nlohmann::ordered_json(pt.kf_db) : nlohmann::ordered_json(nullptr);
        auto &taps = j["taps"] = nlohmann::ordered_json::array();
        for (const auto &t : pt.taps.taps)
            taps.push_back({{"delay_ns", t.delay_s * 1e9}, {"power_db", t.mean_power_db}});
    }
    return j;
}

} // namespace

CampaignOutput generate_campaign(const CampaignManifest &manifest, const CampaignTruth &truth, std::uint64_t seed,
                                 const std::filesystem::path &out_dir, std::size_t jobs)
{
    manifest.validate();
    for (double band : manifest.bands_ghz)
        truth.band(band);
    {
        std::set<std::string> ids;
        for (const auto &p : manifest.positions)
            ids.insert(p.position_id);
        for (const auto &b : truth.blocked_positions)
            if (!ids.count(b))
                throw Error(Errc::InvalidInput, "blocked position '" + b + "' is not in the manifest");
    }

    const auto captures = out_dir / "captures";
    const auto ref = make_sounder_reference(manifest.record_len);
    for (double band : manifest.bands_ghz)
    {
        std::filesystem::create_directories(captures / band_tag(band));
        write_capture(calibration_path(captures, band), calibration_record(manifest.record_len, manifest.bandwidth_hz, band));
    }

    const std::size_t n_pos = manifest.positions.size();
    CampaignOutput out;
    out.positions.resize(manifest.bands_ghz.size() * n_pos);

    parallel_for(out.positions.size(), jobs, [&](std::size_t task) {
        const std::size_t b = task / n_pos;
        const std::size_t p = task % n_pos;
        const double band = manifest.bands_ghz[b];
        auto pt = build_position_truth(manifest, truth, b, p, seed);
        const auto phases =
            specular_phases(pt.taps.taps.size(), derive_rng(seed, stream_id(PhaseStream, b), p)());

        for (std::size_t r = 0; r < manifest.reps_per_position; ++r)
        {
            auto rng = derive_rng(seed, stream_id(RecordStream, b), p, r);
            const auto rec =
                generate_averaged_record(pt.taps, manifest.snapshots_per_rep, ref, manifest.bandwidth_hz, rng, phases, band);
            write_capture(capture_path(captures, band, pt.position_id, r), rec);
        }
        out.positions[task] = std::move(pt);
    });

    save_json(out_dir / "manifest.json", to_json(manifest));

    nlohmann::ordered_json tj;
    tj["seed"] = seed;
    tj["model"] = to_json(truth);
    tj["conventions"] = {
        {"reference_waveform", "binary PN, LFSR x^13+x^4+x^3+x+1, one chip per sample, truncated to record_len"},
        {"end_reflection", "mirror image of the Tx in the corridor end wall faced by the Rx"},
        {"records", "each capture is the coherent mean of snapshots_per_rep snapshots"},
        {"noise_power_db", "per-sample noise of a single snapshot, before averaging"}};
    auto &positions = tj["positions"] = nlohmann::ordered_json::array();
    for (const auto &pt : out.positions)
        positions.push_back(position_truth_json(pt));
    save_json(out_dir / "truth.json", tj);
    return out;
}

} // namespace chsound
