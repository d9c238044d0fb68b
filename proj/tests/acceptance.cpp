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

// Acceptance checks, one line per criterion. Exit status is the number of failures.

#include "support.hpp"

#include "chsound/apdp_mpc.hpp"
#include "chsound/calib_deconv.hpp"
#include "chsound/dispersion.hpp"
#include "chsound/error.hpp"
#include "chsound/kfactor.hpp"
#include "chsound/largescale.hpp"
#include "chsound/pipeline.hpp"
#include "chsound/synth_campaign.hpp"
#include "chsound/synthchan.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sys/wait.h>

using namespace chsound;
using namespace chsound::testing;

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome
{
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string &name, const std::function<Outcome()> &check)
{
    Outcome o;
    try
    {
        o = check();
    }
    catch (const std::exception &e)
    {
        o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    fmt::print("{} criterion {}: {} | {}\n", o.pass ? "PASS" : "FAIL", id, name, o.detail);
    std::fflush(stdout);
}

// 1 ---------------------------------------------------------------------------

Outcome deconvolution_round_trip()
{
    constexpr std::size_t n = 4800;
    constexpr double bw = 320e6;
    const auto t0 = Clock::now();
    const auto cal = to_frequency_domain(calibration_record(n, bw));

    std::size_t misaligned = 0, missing = 0, spurious = 0, taps_total = 0;
    double worst_db = 0.0;
    for (std::uint64_t trial = 0; trial < 100; ++trial)
    {
        auto rng = derive_rng(20240601, trial);
        std::uniform_int_distribution<int> n_taps(1, 10);
        std::uniform_int_distribution<std::size_t> bin(0, 999);
        std::uniform_real_distribution<double> rel(-20.0, 0.0);
        std::uniform_real_distribution<double> level(-70.0, -30.0);

        // distinct bins at least two apart so every tap is its own local maximum
        std::set<std::size_t> bins;
        const int want = n_taps(rng);
        while (static_cast<int>(bins.size()) < want)
        {
            const auto b = bin(rng);
            if (!bins.count(b) && !bins.count(b + 1) && (b == 0 || !bins.count(b - 1)))
                bins.insert(b);
        }
        const double top = level(rng);
        TapSet taps;
        bool first = true;
        double total = 0.0;
        for (auto b : bins)
        {
            const double p = top + (first ? 0.0 : rel(rng));
            first = false;
            taps.taps.push_back({static_cast<double>(b) / bw, p});
            total += from_db(p);
        }
        taps.noise_power_db = to_db(total) - 40.0;

        const auto rec = generate_snapshots(taps, 1, n, bw, 1000 + trial).front();
        const std::vector<Cir> cirs = {to_cir(deconvolve(to_frequency_domain(rec), cal))};
        auto apdp = average_apdp(cirs);
        apdp.noise_floor_db = estimate_noise_floor(apdp);
        const auto mpcs = extract_mpcs(apdp);

        taps_total += taps.taps.size();
        std::map<std::size_t, double> found;
        for (const auto &c : mpcs.components)
        {
            const double b = c.delay_s / apdp.delay_bin_s;
            if (c.delay_s != static_cast<double>(std::llround(b)) * apdp.delay_bin_s)
                ++misaligned;
            found[static_cast<std::size_t>(std::llround(b))] = c.power_db;
        }
        for (const auto &t : taps.taps)
        {
            const auto b = static_cast<std::size_t>(std::llround(t.delay_s * bw));
            auto it = found.find(b);
            if (it == found.end())
            {
                ++missing;
                continue;
            }
            worst_db = std::max(worst_db, std::abs(it->second - t.mean_power_db));
            found.erase(it);
        }
        spurious += found.size();
    }
    const double secs = seconds_since(t0);
    const bool ok = misaligned == 0 && missing == 0 && spurious == 0 && worst_db <= 0.5 && secs < 10.0;
    return {ok, fmt::format("100 channels, {} taps: missing {}, spurious {}, off-bin {}, worst power error {:.4f} dB "
                            "(limit 0.5), {:.2f} s (limit 10)",
                            taps_total, missing, spurious, misaligned, worst_db, secs)};
}

// 2 ---------------------------------------------------------------------------

CampaignManifest line_manifest(std::size_t n_positions)
{
    CampaignManifest m;
    m.name = "line";
    m.bands_ghz = {5.0};
    m.distance_mode = DistanceMode::D2;
    for (std::size_t i = 0; i < n_positions; ++i)
    {
        Position p;
        p.position_id = fmt::format("P{:03d}", i + 1);
        p.rx_pos_m = 1.0 + 39.0 * static_cast<double>(i) / static_cast<double>(n_positions - 1);
        p.distance_2d_m = p.rx_pos_m;
        p.distance_3d_m = std::hypot(p.rx_pos_m, m.tx_height_m - m.rx_height_m);
        m.positions.push_back(p);
    }
    return m;
}

PlFit fitted(const CampaignTruth &truth, PlModel model, const std::string &tag, std::uint64_t seed)
{
    const auto dir = scratch_dir("acceptance_" + tag);
    const auto manifest = line_manifest(200);
    generate_campaign(manifest, truth, seed, dir);
    const auto result = run_pipeline(manifest, dir / "captures");
    const auto samples = pl_samples(result.positions);
    if (samples.size() != 200)
        throw std::runtime_error(fmt::format("{} of 200 positions usable", samples.size()));
    std::filesystem::remove_all(dir);
    return model == PlModel::CI ? fit_ci(samples) : fit_fi(samples);
}

Outcome fit_recovery()
{
    auto los_at_5ghz = [](CampaignTruth &t) -> ScenarioTruth & {
        for (auto &b : t.bands)
            if (b.band_ghz == 5.0)
                return b.los;
        throw std::runtime_error("default truth lacks 5 GHz");
    };

    auto fi_truth = default_truth();
    auto &fi5 = los_at_5ghz(fi_truth);
    fi5.model = PlModel::FI;
    fi5.ple = 1.75;
    fi5.beta_db = 48.93;
    fi5.sigma_db = 3.0;
    const auto fi = fitted(fi_truth, PlModel::FI, "fi", 2025);

    auto ci_truth = default_truth();
    auto &ci5 = los_at_5ghz(ci_truth);
    ci5.model = PlModel::CI;
    ci5.ple = 2.0;
    ci5.sigma_db = 3.0;
    const auto ci = fitted(ci_truth, PlModel::CI, "ci", 2026);

    const bool ok = std::abs(fi.ple - 1.75) <= 0.15 && std::abs(*fi.offset_db - 48.93) <= 1.5 &&
                    std::abs(fi.sigma_db - 3.0) <= 0.5 && std::abs(ci.ple - 2.0) <= 0.1;
    return {ok, fmt::format("FI alpha {:.4f} (1.75 +-0.15), beta {:.3f} dB (48.93 +-1.5), sigma {:.3f} dB (3 +-0.5); "
                            "CI n {:.4f} (2.0 +-0.1), sigma {:.3f} dB",
                            fi.ple, *fi.offset_db, fi.sigma_db, ci.ple, ci.sigma_db)};
}

// 3 ---------------------------------------------------------------------------

Outcome model_fixtures()
{
    const double a = eval_fi(10.0, 1.25, 41.23);
    const double b = eval_ci(10.0, 6.0, 3.37);
    const double c = eval_fspl(1.0, 1.0);
    const bool ok = std::abs(a - 53.73) <= 0.01 && std::abs(b - 81.66) <= 0.01 && std::abs(c - 32.40) <= 0.01;
    return {ok, fmt::format("FI(10 m,1.25,41.23) {:.4f}, CI(10 m,6 GHz,3.37) {:.4f}, FSPL(1 m,1 GHz) {:.4f} dB", a, b, c)};
}

// 4 ---------------------------------------------------------------------------

Outcome ds_oracle()
{
    MpcList three;
    const double lin[] = {0.5, 0.3, 0.2};
    for (int i = 0; i < 3; ++i)
        three.components.push_back({50e-9 * i, 10.0 * std::log10(lin[i])});
    const auto r = delay_spread(three);
    const double mean_err = std::abs(r.mean_excess_delay_s * 1e9 - 35.0);
    const double ds_err = std::abs(r.rms_ds_s * 1e9 - std::sqrt(1525.0));

    MpcList single;
    single.components.push_back({77e-9, -42.0});
    const bool single_zero = delay_spread(single).rms_ds_s == 0.0;

    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> n_u(1, 25);
    std::uniform_real_distribution<double> t_u(0.0, 800e-9), p_u(-40.0, 0.0), c_u(-200e-9, 2e-6), g_u(-50.0, 50.0);
    double worst_shift = 0.0, worst_scale = 0.0;
    for (int trial = 0; trial < 1000; ++trial)
    {
        MpcList m;
        for (int i = n_u(rng); i > 0; --i)
            m.components.push_back({t_u(rng), p_u(rng)});
        const double base = delay_spread(m).rms_ds_s;
        auto shifted = m, scaled = m;
        const double c = c_u(rng), g = g_u(rng);
        for (auto &x : shifted.components)
            x.delay_s += c;
        for (auto &x : scaled.components)
            x.power_db += g;
        const double norm = std::max(base, 1e-12);
        worst_shift = std::max(worst_shift, std::abs(delay_spread(shifted).rms_ds_s - base) / norm);
        worst_scale = std::max(worst_scale, std::abs(delay_spread(scaled).rms_ds_s - base) / norm);
    }
    const bool ok = mean_err <= 1e-6 && ds_err <= 1e-6 && single_zero && worst_shift <= 1e-9 && worst_scale <= 1e-9;
    return {ok, fmt::format("mean {:.9f} ns, DS {:.9f} ns, single-path DS zero: {}; 1000 sets: worst relative change "
                            "under shift {:.1e}, under power scaling {:.1e} (limit 1e-9)",
                            r.mean_excess_delay_s * 1e9, r.rms_ds_s * 1e9, single_zero, worst_shift, worst_scale)};
}

// 5 ---------------------------------------------------------------------------

Outcome kf_estimator()
{
    std::string detail;
    bool ok = true;
    for (double k_db : {3.0, 10.0, 20.0})
    {
        double sum = 0.0;
        for (std::uint64_t t = 0; t < 100; ++t)
        {
            auto rng = derive_rng(777, static_cast<std::uint64_t>(k_db), t);
            sum += estimate_kf(rician_samples(from_db(k_db), 1.0, 512, rng)).k_db;
        }
        const double mean = sum / 100.0;
        ok = ok && std::abs(mean - k_db) <= 1.0;
        detail += fmt::format("K {:.0f} dB -> mean {:.3f} dB; ", k_db, mean);
    }

    const std::vector<cplx> constant(512, cplx(0.7, 0.2));
    const bool inf_ok = std::isinf(estimate_kf(constant).k_linear);
    ok = ok && inf_ok;

    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> e(-30, 30);
    std::uniform_real_distribution<double> kd(-5.0, 25.0), ph(0.0, 6.283);
    std::size_t exact_p2 = 0;
    double worst_general = 0.0;
    for (int trial = 0; trial < 1000; ++trial)
    {
        auto r = derive_rng(rng(), 1);
        const auto h = rician_samples(from_db(kd(rng)), 1.0, 512, r);
        const auto base = estimate_kf(h).k_linear;

        auto p2 = h;
        const cplx s = std::polar(std::ldexp(1.0, e(rng)), 0.0) * (trial % 2 ? cplx(0.0, 1.0) : cplx(-1.0, 0.0));
        for (auto &v : p2)
            v *= s;
        exact_p2 += estimate_kf(p2).k_linear == base;

        auto g = h;
        const cplx a = std::polar(std::pow(10.0, kd(rng) / 7.0), ph(rng));
        for (auto &v : g)
            v *= a;
        const double k = estimate_kf(g).k_linear;
        if (std::isfinite(base) && base > 0.0)
            worst_general = std::max(worst_general, std::abs(k - base) / base);
        else if (k != base)
            worst_general = std::numeric_limits<double>::infinity();
    }
    ok = ok && exact_p2 == 1000 && worst_general <= 1e-9;
    detail += fmt::format("constant spectrum +inf: {}; scale invariance on 1000 spectra: {} bit-identical under "
                          "power-of-two/quarter-turn scalars, worst relative change {:.1e} under arbitrary complex "
                          "scalars (limit 1e-9)",
                          inf_ok, exact_p2, worst_general);
    return {ok, detail};
}

// 6 ---------------------------------------------------------------------------

Outcome threshold_rule()
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> floor_u(-120.0, -50.0), span_u(0.0, 70.0);
    std::normal_distribution<double> jitter(0.0, 2.0);
    std::uniform_int_distribution<int> peaks(1, 30);
    std::size_t checked = 0, empty = 0, violations = 0, peak_missing = 0;
    for (int trial = 0; trial < 1000; ++trial)
    {
        Apdp a;
        a.delay_bin_s = 3.125e-9;
        a.n_averaged = 1;
        a.power_db.resize(1024);
        const double floor_db = floor_u(rng);
        for (auto &v : a.power_db)
            v = floor_db + jitter(rng);
        std::uniform_int_distribution<std::size_t> pos(0, a.power_db.size() - 1);
        for (int k = peaks(rng); k > 0; --k)
            a.power_db[pos(rng)] = floor_db + span_u(rng);
        a.noise_floor_db = estimate_noise_floor(a);

        const auto peak_it = std::max_element(a.power_db.begin(), a.power_db.end());
        const double bound = std::max(*a.noise_floor_db + 6.0, *peak_it - 25.0);
        MpcList m;
        try
        {
            m = extract_mpcs(a);
        }
        catch (const Error &e)
        {
            if (e.code() != Errc::EmptyMpcSet || *peak_it >= bound)
                ++violations;
            ++empty;
            continue;
        }
        ++checked;
        for (const auto &c : m.components)
            violations += c.power_db < bound;
        const double peak_delay = static_cast<double>(peak_it - a.power_db.begin()) * a.delay_bin_s;
        peak_missing += std::none_of(m.components.begin(), m.components.end(),
                                     [&](const Mpc &c) { return c.delay_s == peak_delay; });
    }
    const double t1 = mpc_threshold_db(-90.0, -50.0);
    const double t2 = mpc_threshold_db(-70.0, -50.0);
    const bool ok = violations == 0 && peak_missing == 0 && t1 == -75.0 && t2 == -64.0;
    return {ok, fmt::format("{} profiles with MPCs, {} empty: {} threshold violations, global peak missed {} times; "
                            "worked cases {:.2f} dB and {:.2f} dB",
                            checked, empty, violations, peak_missing, t1, t2)};
}

// 7 ---------------------------------------------------------------------------

int run_cli(const std::string &cli, const std::string &args)
{
    const std::string cmd = "\"" + cli + "\" " + args + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::map<std::string, std::string> tree_bytes(const std::filesystem::path &root)
{
    std::map<std::string, std::string> out;
    for (const auto &e : std::filesystem::recursive_directory_iterator(root))
        if (e.is_regular_file())
            out[std::filesystem::relative(e.path(), root).generic_string()] = slurp(e.path());
    return out;
}

Outcome end_to_end(const std::string &cli)
{
    if (cli.empty())
        return {false, "CLI path not given"};
    const auto root = scratch_dir("acceptance_e2e");

    // Fading taps so every record really averages 400 snapshots.
    auto truth = default_truth();
    truth.tap_k_db = 10.0;
    save_json(root / "truth.json", to_json(truth));

    double full_run_s = 0.0;
    for (const char *tag : {"a", "b"})
    {
        const auto dir = root / tag;
        const auto t0 = Clock::now();
        int rc = run_cli(cli, fmt::format("simulate --seed 20231 --truth {} --out {}", (root / "truth.json").string(),
                                          (dir / "sim").string()));
        rc |= run_cli(cli, fmt::format("process --in {} --out {}", (dir / "sim").string(), (dir / "proc").string()));
        rc |= run_cli(cli, fmt::format("fit --positions {} --out {}", (dir / "proc" / "positions.csv").string(),
                                       (dir / "fit").string()));
        rc |= run_cli(cli, fmt::format("report --in {} --out {}", (dir / "proc").string(), (dir / "report").string()));
        const double secs = seconds_since(t0);
        if (rc != 0)
            return {false, fmt::format("run {} exited with status {}", tag, rc)};
        if (full_run_s == 0.0)
            full_run_s = secs;
        else
            full_run_s = std::max(full_run_s, secs);
    }

    const auto a = tree_bytes(root / "a");
    const auto b = tree_bytes(root / "b");
    std::size_t differing = 0;
    for (const auto &[name, bytes] : a)
    {
        auto it = b.find(name);
        differing += it == b.end() || it->second != bytes;
    }
    differing += b.size() > a.size() ? b.size() - a.size() : 0;

    const auto manifest = load_manifest(root / "a" / "sim" / "manifest.json");
    const bool default_scale = manifest.positions.size() == 37 && manifest.bands_ghz.size() == 3 &&
                               manifest.reps_per_position == 5 && manifest.snapshots_per_rep == 400 &&
                               manifest.record_len == 4800;
    std::filesystem::remove_all(root);

    const bool ok = differing == 0 && !a.empty() && default_scale && full_run_s < 60.0;
    return {ok, fmt::format("{} output files compared, {} differ; default-scale simulate+process+fit+report "
                            "(37 positions x 3 bands x 5 reps x 400 snapshots, 4800 samples) slowest run {:.2f} s "
                            "(limit 60)",
                            a.size(), differing, full_run_s)};
}

// 8 ---------------------------------------------------------------------------

Outcome geometry()
{
    const auto manifest = default_manifest();
    CorridorGeometry g;
    g.length_m = manifest.corridor_length_m;
    g.tx_pos_m = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    std::size_t decreasing = 0;
    double first = 0.0, last = 0.0;
    for (std::size_t i = 0; i < manifest.positions.size(); ++i)
    {
        g.rx_pos_m = manifest.positions[i].rx_pos_m;
        const auto taps = corridor_taps(g, 5.0, 1.75);
        const double ex = taps.taps.size() == 2 ? taps.taps[1].delay_s - taps.taps[0].delay_s : 0.0;
        decreasing += ex < prev;
        prev = ex;
        (i == 0 ? first : last) = ex * 1e9;
    }
    const bool ok = decreasing == manifest.positions.size() && manifest.positions.size() == 37;
    return {ok, fmt::format("{} of 37 consecutive positions strictly decreasing, excess delay {:.2f} ns at position 1 "
                            "to {:.2f} ns at position 37",
                            decreasing, first, last)};
}

} // namespace

int main(int argc, char **argv)
{
    const std::string cli = argc > 1 ? argv[1] : "";
    report(1, "deconvolution round trip", deconvolution_round_trip);
    report(2, "CI/FI fit recovery", fit_recovery);
    report(3, "model fixtures", model_fixtures);
    report(4, "delay-spread oracle", ds_oracle);
    report(5, "K-factor estimator", kf_estimator);
    report(6, "threshold rule", threshold_rule);
    report(7, "end-to-end determinism and runtime", [&] { return end_to_end(cli); });
    report(8, "reflection geometry", geometry);
    fmt::print("{} of 8 criteria passed\n", 8 - failures);
    return failures;
}
