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

#ifndef CHSOUND_CAPTURE_IO_HPP
#define CHSOUND_CAPTURE_IO_HPP

#include "chsound/calib_deconv.hpp"

#include <array>
#include <cstdint>
#include <filesystem>

namespace chsound
{

// Capture container, all fields little-endian:
//   offset  0  char[12]  magic "CHSNDCAPTURE"
//   offset 12  uint32    version (1)
//   offset 16  float64   sample_rate_hz
//   offset 24  uint32    record_len
//   offset 28  uint32    kind (0 calibration, 1 measurement)
//   offset 32  float64   band_ghz
//   offset 40  float32[2 * record_len]  interleaved I/Q
inline constexpr std::array<char, 12> capture_magic = {'C', 'H', 'S', 'N', 'D', 'C', 'A', 'P', 'T', 'U', 'R', 'E'};
inline constexpr std::uint32_t capture_version = 1;
inline constexpr std::size_t capture_header_bytes = 40;

// Samples are stored as 32-bit floats; a record survives the round trip bit-exactly
// when its components are representable as float.
void write_capture(const std::filesystem::path &path, const ComplexRecord &record);

ComplexRecord read_capture(const std::filesystem::path &path);

} // namespace chsound

#endif
