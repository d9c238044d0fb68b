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

#include "chsound/synthchan.hpp"
#include "chsound/error.hpp"
#include "chsound/largescale.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace chsound
{

void CorridorGeometry::validate() const
{
    if (!(length_m > 0.0))
        throw Error(Errc::InvalidInput, "corridor length must be positive");
    if (tx_pos_m < 0.0 || tx_pos_m > length_m || rx_pos_m < 0.0 || rx_pos_m > length_m)
        throw Error(Errc::InvalidInput, "Tx and Rx must lie inside the corridor");
    if (!(tx_height_m > 0.0) || !(rx_height_m > 0.0))
        throw Error(Errc::InvalidInput, "antenna heights must be positive");
    if (tx_pos_m == rx_pos_m)
        throw Error(Errc::InvalidInput, "Tx and Rx positions coincide");
}

double CorridorGeometry::los_path_m() const
{
    return std::abs(rx_pos_m - tx_pos_m);
}

double CorridorGeometry::reflection_path_m() const
{
    if (rx_pos_m > tx_pos_m)
        return (length_m - tx_pos_m) + (length_m - rx_pos_m);
    return tx_pos_m + rx_pos_m;
}

double CorridorGeometry::reflection_excess_delay_s() const
{
    return (reflection_path_m() - los_path_m()) / speed_of_light_m_s;
}

TapSet corridor_taps(const CorridorGeometry &geom, double band_ghz, double ple)
{
    geom.validate();
    if (!(band_ghz > 0.0))
        throw Error(Errc::InvalidInput, "band must be positive");

    auto loss = geom.end_reflection_loss_db_per_band.find(band_ghz);
    if (loss == geom.end_reflection_loss_db_per_band.end())
        throw Error(Errc::InvalidInput, "no end-reflection loss configured for " + std::to_string(band_ghz) + " GHz");

    const double d_los = geom.los_path_m();
    const double d_ref = geom.reflection_path_m();

    Tap los{d_los / speed_of_light_m_s, -eval_ci(d_los, band_ghz, ple)};
    Tap ref{d_ref / speed_of_light_m_s, -eval_ci(d_ref, band_ghz, ple) - loss->second};

    TapSet set;
    if (ref.delay_s == los.delay_s)
        set.taps.push_back({los.delay_s, 10.0 * std::log10(from_db(los.mean_power_db) + from_db(ref.mean_power_db))});
    else
        set.taps = {los, ref};
    return set;
}

std::mt19937_64 derive_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c)
{
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(seed), hi(seed), lo(a), hi(a), lo(b), hi(b), lo(c), hi(c)};
    return std::mt19937_64(seq);
}

cplx complex_gaussian(std::mt19937_64 &rng, double variance)
{
    std::normal_distribution<double> n01(0.0, 1.0);
    const double s = std::sqrt(variance / 2.0);
    const double re = n01(rng);
    const double im = n01(rng);
    return {s * re, s * im};
}

SounderReference make_sounder_reference(std::size_t record_len)
{
    if (record_len == 0)
        throw Error(Errc::InvalidInput, "record length must be positive");

    // x^13 + x^4 + x^3 + x + 1, Fibonacci form
    std::uint32_t state = 0x1fffu;
    std::vector<cplx> chips(record_len);
    for (std::size_t i = 0; i < record_len; ++i)
    {
        const std::uint32_t out = state & 1u;
        chips[i] = out ? cplx(1.0, 0.0) : cplx(-1.0, 0.0);
        const std::uint32_t fb = ((state >> 0) ^ (state >> 1) ^ (state >> 3) ^ (state >> 4)) & 1u;
        state = (state >> 1) | (fb << 12);
    }

    // Mild transceiver response that the calibration has to remove.
    const std::vector<cplx> system_response = {{1.0, 0.0}, {0.35, -0.2}, {-0.12, 0.05}, {0.04, 0.0}};
    std::vector<cplx> waveform(record_len, cplx(0.0, 0.0));
    for (std::size_t n = 0; n < record_len; ++n)
        for (std::size_t m = 0; m < system_response.size(); ++m)
            waveform[(n + m) % record_len] += chips[n] * system_response[m];

    double power = 0.0;
    for (const auto &v : waveform)
        power += std::norm(v);
    const double scale = 1.0 / std::sqrt(power / static_cast<double>(record_len));
    for (auto &v : waveform)
        v *= scale;

    SounderReference ref;
    ref.spectrum = fft_forward(waveform);
    ref.waveform = std::move(waveform);
    return ref;
}

ComplexRecord calibration_record(std::size_t record_len, double bandwidth_hz, double band_ghz)
{
    if (!(bandwidth_hz > 0.0))
        throw Error(Errc::InvalidInput, "bandwidth must be positive");
    ComplexRecord rec;
    rec.samples = make_sounder_reference(record_len).waveform;
    rec.sample_rate_hz = bandwidth_hz;
    rec.kind = RecordKind::Calibration;
    rec.center_frequency_hz = band_ghz * 1e9;
    return rec;
}

std::size_t tap_bin(double delay_s, double bandwidth_hz, std::size_t record_len)
{
    if (!(delay_s >= 0.0))
        throw Error(Errc::InvalidInput, "tap delay must be non-negative");
    const double bin = std::round(delay_s * bandwidth_hz);
    if (bin >= static_cast<double>(record_len))
        throw Error(Errc::InvalidInput, "tap delay " + std::to_string(delay_s * 1e9) + " ns lies beyond the record span");
    return static_cast<std::size_t>(bin);
}

std::vector<double> specular_phases(std::size_t n_taps, std::uint64_t seed)
{
    auto rng = derive_rng(seed, 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    std::vector<double> phases(n_taps);
    for (auto &p : phases)
        p = u(rng);
    return phases;
}

std::vector<cplx> realize_cir(const TapSet &taps, std::size_t record_len, double bandwidth_hz,
                              const std::vector<double> &phases, std::mt19937_64 &rng)
{
    std::vector<cplx> h(record_len, cplx(0.0, 0.0));
    for (std::size_t l = 0; l < taps.taps.size(); ++l)
    {
        const auto &tap = taps.taps[l];
        if (tap.k_linear < 0.0)
            throw Error(Errc::InvalidInput, "tap K factor must be non-negative");

        const std::size_t bin = tap_bin(tap.delay_s, bandwidth_hz, record_len);
        const double p = from_db(tap.mean_power_db);
        const cplx unit = std::polar(1.0, phases.at(l));
        if (std::isinf(tap.k_linear))
        {
            h[bin] += std::sqrt(p) * unit;
        }
        else
        {
            const double k = tap.k_linear;
            h[bin] += std::sqrt(p * k / (k + 1.0)) * unit + complex_gaussian(rng, p / (k + 1.0));
        }
    }
    return h;
}

namespace
{

void check_taps(const TapSet &taps, std::size_t record_len, double bandwidth_hz)
{
    if (record_len == 0)
        throw Error(Errc::InvalidInput, "record length must be positive");
    if (!(bandwidth_hz > 0.0))
        throw Error(Errc::InvalidInput, "bandwidth must be positive");
    for (const auto &t : taps.taps)
        tap_bin(t.delay_s, bandwidth_hz, record_len);
}

ComplexRecord convolve_with_reference(const std::vector<cplx> &h, const SounderReference &ref, double bandwidth_hz,
                                      double band_ghz)
{
    auto spectrum = fft_forward(h);
    for (std::size_t k = 0; k < spectrum.size(); ++k)
        spectrum[k] *= ref.spectrum[k];

    ComplexRecord rec;
    rec.samples = fft_inverse(spectrum);
    rec.sample_rate_hz = bandwidth_hz;
    rec.kind = RecordKind::Measurement;
    rec.center_frequency_hz = band_ghz * 1e9;
    return rec;
}

void add_noise(std::vector<cplx> &samples, double variance, std::mt19937_64 &rng)
{
    if (!(variance > 0.0))
        return;
    for (auto &v : samples)
        v += complex_gaussian(rng, variance);
}

} // namespace

std::vector<ComplexRecord> generate_snapshots(const TapSet &taps, std::size_t n_snapshots, std::size_t record_len,
                                              double bandwidth_hz, std::uint64_t seed, double band_ghz)
{
    check_taps(taps, record_len, bandwidth_hz);

    const auto ref = make_sounder_reference(record_len);
    const auto phases = specular_phases(taps.taps.size(), seed);
    const double noise_var = from_db(taps.noise_power_db);

    std::vector<ComplexRecord> out;
    out.reserve(n_snapshots);
    for (std::size_t s = 0; s < n_snapshots; ++s)
    {
        auto rng = derive_rng(seed, 1, s);
        auto rec = convolve_with_reference(realize_cir(taps, record_len, bandwidth_hz, phases, rng), ref, bandwidth_hz,
                                           band_ghz);
        add_noise(rec.samples, noise_var, rng);
        out.push_back(std::move(rec));
    }
    return out;
}

ComplexRecord generate_averaged_record(const TapSet &taps, std::size_t n_snapshots, const SounderReference &ref,
                                       double bandwidth_hz, std::mt19937_64 &rng, const std::vector<double> &phases,
                                       double band_ghz)
{
    const std::size_t record_len = ref.waveform.size();
    check_taps(taps, record_len, bandwidth_hz);
    if (n_snapshots == 0)
        throw Error(Errc::InvalidInput, "at least one snapshot is required");

    const bool all_static =
        std::all_of(taps.taps.begin(), taps.taps.end(), [](const Tap &t) { return std::isinf(t.k_linear); });

    std::vector<cplx> h;
    if (all_static)
    {
        h = realize_cir(taps, record_len, bandwidth_hz, phases, rng);
    }
    else
    {
        h.assign(record_len, cplx(0.0, 0.0));
        for (std::size_t s = 0; s < n_snapshots; ++s)
        {
            const auto one = realize_cir(taps, record_len, bandwidth_hz, phases, rng);
            for (std::size_t i = 0; i < record_len; ++i)
                h[i] += one[i];
        }
        const double inv = 1.0 / static_cast<double>(n_snapshots);
        for (auto &v : h)
            v *= inv;
    }

    auto rec = convolve_with_reference(h, ref, bandwidth_hz, band_ghz);
    add_noise(rec.samples, from_db(taps.noise_power_db) / static_cast<double>(n_snapshots), rng);
    return rec;
}

std::vector<Cir> synthesize_cirs(const TapSet &taps, std::size_t n_cirs, std::size_t record_len, double bandwidth_hz,
                                 std::uint64_t seed)
{
    check_taps(taps, record_len, bandwidth_hz);

    const auto phases = specular_phases(taps.taps.size(), seed);
    const double noise_var = from_db(taps.noise_power_db);

    std::vector<Cir> out;
    out.reserve(n_cirs);
    for (std::size_t s = 0; s < n_cirs; ++s)
    {
        auto rng = derive_rng(seed, 2, s);
        Cir cir;
        cir.taps = realize_cir(taps, record_len, bandwidth_hz, phases, rng);
        add_noise(cir.taps, noise_var, rng);
        cir.delay_bin_s = 1.0 / bandwidth_hz;
        out.push_back(std::move(cir));
    }
    return out;
}

std::vector<cplx> rician_samples(double k_linear, double mean_power, std::size_t count, std::mt19937_64 &rng)
{
    if (k_linear < 0.0 || !(mean_power > 0.0))
        throw Error(Errc::InvalidInput, "Rician samples need K >= 0 and positive mean power");

    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    const cplx specular = std::isinf(k_linear) ? std::polar(std::sqrt(mean_power), u(rng))
                                               : std::polar(std::sqrt(mean_power * k_linear / (k_linear + 1.0)), u(rng));
    const double diffuse = std::isinf(k_linear) ? 0.0 : mean_power / (k_linear + 1.0);

    std::vector<cplx> out(count);
    for (auto &v : out)
        v = diffuse > 0.0 ? specular + complex_gaussian(rng, diffuse) : specular;
    return out;
}

} // namespace chsound
