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

#ifndef CHSOUND_SYNTHCHAN_HPP
#define CHSOUND_SYNTHCHAN_HPP

#include "chsound/calib_deconv.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <vector>

namespace chsound
{

inline constexpr double speed_of_light_m_s = 299792458.0;

struct CorridorGeometry
{
    double length_m = 41.0;
    double tx_pos_m = 0.0; // along the corridor axis
    double rx_pos_m = 10.0;
    double tx_height_m = 1.95;
    double rx_height_m = 1.45;
    // Extra loss of the corridor-end reflection per band (GHz -> dB).
    std::map<double, double> end_reflection_loss_db_per_band = {{2.4, 7.2}, {5.0, 7.0}, {6.0, 10.6}};

    void validate() const;

    // Axial Tx-Rx separation.
    double los_path_m() const;

    // Path via the corridor end the receiver faces (mirror image of the Tx in that end wall).
    double reflection_path_m() const;

    double reflection_excess_delay_s() const;
};

struct Tap
{
    double delay_s = 0.0;
    double mean_power_db = 0.0;
    double k_linear = std::numeric_limits<double>::infinity(); // +inf: static tap
};

struct TapSet
{
    std::vector<Tap> taps;
    // Per-sample noise power of whatever domain the set is realized in (record or CIR).
    double noise_power_db = -std::numeric_limits<double>::infinity();
};

// LOS tap plus the corridor-end reflection. Both decay with -eval_ci(path, band, ple);
// the reflection carries the band's extra loss. Coincident delays are merged.
TapSet corridor_taps(const CorridorGeometry &geom, double band_ghz, double ple);

// Deterministic stream for a (seed, a, b, c) tuple, independent of call order.
std::mt19937_64 derive_rng(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0, std::uint64_t c = 0);

cplx complex_gaussian(std::mt19937_64 &rng, double variance);

// Probing waveform of the synthetic sounder: a binary PN sequence (one chip per
// sample, degree-13 LFSR truncated to the record length) passed through a short
// system response, normalized to unit mean power. Y_th is its spectrum.
struct SounderReference
{
    std::vector<cplx> waveform;
    std::vector<cplx> spectrum;
};

SounderReference make_sounder_reference(std::size_t record_len);

ComplexRecord calibration_record(std::size_t record_len, double bandwidth_hz, double band_ghz = 0.0);

// Delay-bin index of a tap delay at the given bandwidth; InvalidInput beyond the record span.
std::size_t tap_bin(double delay_s, double bandwidth_hz, std::size_t record_len);

// Fixed per-tap phases of the specular components, derived from the seed.
std::vector<double> specular_phases(std::size_t n_taps, std::uint64_t seed);

// One fading realization of the CIR (bin-quantized), without noise.
std::vector<cplx> realize_cir(const TapSet &taps, std::size_t record_len, double bandwidth_hz,
                              const std::vector<double> &phases, std::mt19937_64 &rng);

// Received records: per-tap Rician fading, circular convolution with the sounder
// reference, additive circular Gaussian noise at taps.noise_power_db per sample.
std::vector<ComplexRecord> generate_snapshots(const TapSet &taps, std::size_t n_snapshots, std::size_t record_len,
                                              double bandwidth_hz, std::uint64_t seed, double band_ghz = 0.0);

// The coherent mean of n_snapshots records drawn as in generate_snapshots. The fading
// coefficients are averaged before the convolution and the noise is drawn once with
// variance sigma^2 / n_snapshots, which has the same distribution at a fraction of the cost.
ComplexRecord generate_averaged_record(const TapSet &taps, std::size_t n_snapshots, const SounderReference &ref,
                                       double bandwidth_hz, std::mt19937_64 &rng, const std::vector<double> &phases,
                                       double band_ghz = 0.0);

// Delay-domain CIRs with per-bin circular Gaussian noise, bypassing the sounder.
std::vector<Cir> synthesize_cirs(const TapSet &taps, std::size_t n_cirs, std::size_t record_len, double bandwidth_hz,
                                 std::uint64_t seed);

// I.i.d. Rician samples with total mean power mean_power and the given K (linear, may be 0 or +inf).
std::vector<cplx> rician_samples(double k_linear, double mean_power, std::size_t count, std::mt19937_64 &rng);

} // namespace chsound

#endif
