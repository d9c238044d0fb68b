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

#include "chsound/capture_io.hpp"
#include "chsound/error.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace chsound
{

namespace
{

template <typename U>
void put_le(std::vector<unsigned char> &buf, U value)
{
    for (std::size_t i = 0; i < sizeof(U); ++i)
        buf.push_back(static_cast<unsigned char>((value >> (8 * i)) & 0xffu));
}

template <typename U>
U get_le(const unsigned char *p)
{
    U value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
        value |= static_cast<U>(p[i]) << (8 * i);
    return value;
}

} // namespace

void write_capture(const std::filesystem::path &path, const ComplexRecord &record)
{
    validate_record(record);
    if (record.samples.size() > 0xffffffffu)
        throw Error(Errc::InvalidInput, "record too long for the capture format");

    std::vector<unsigned char> buf;
    buf.reserve(capture_header_bytes + 8 * record.samples.size());
    buf.insert(buf.end(), capture_magic.begin(), capture_magic.end());
    put_le(buf, capture_version);
    put_le(buf, std::bit_cast<std::uint64_t>(record.sample_rate_hz));
    put_le(buf, static_cast<std::uint32_t>(record.samples.size()));
    put_le(buf, static_cast<std::uint32_t>(record.kind));
    put_le(buf, std::bit_cast<std::uint64_t>(record.center_frequency_hz / 1e9));
    for (const auto &s : record.samples)
    {
        put_le(buf, std::bit_cast<std::uint32_t>(static_cast<float>(s.real())));
        put_le(buf, std::bit_cast<std::uint32_t>(static_cast<float>(s.imag())));
    }

    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(Errc::IoError, "cannot write " + path.string());
    out.write(reinterpret_cast<const char *>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out)
        throw Error(Errc::IoError, "short write to " + path.string());
}

ComplexRecord read_capture(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::IoError, "cannot open " + path.string());
    const std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    const std::string where = path.string();
    if (buf.size() < 16 || std::memcmp(buf.data(), capture_magic.data(), capture_magic.size()) != 0)
        throw Error(Errc::FormatError, where + ": bad magic at byte offset 0");
    const auto version = get_le<std::uint32_t>(buf.data() + 12);
    if (version != capture_version)
        throw Error(Errc::FormatError, where + ": unsupported version " + std::to_string(version) + " at byte offset 12");
    if (buf.size() < capture_header_bytes)
        throw Error(Errc::FormatError, where + ": metadata truncated at byte offset " + std::to_string(buf.size()));

    ComplexRecord rec;
    rec.sample_rate_hz = std::bit_cast<double>(get_le<std::uint64_t>(buf.data() + 16));
    const auto n = get_le<std::uint32_t>(buf.data() + 24);
    const auto kind = get_le<std::uint32_t>(buf.data() + 28);
    const double band_ghz = std::bit_cast<double>(get_le<std::uint64_t>(buf.data() + 32));

    if (kind > 1)
        throw Error(Errc::FormatError, where + ": unknown record kind " + std::to_string(kind) + " at byte offset 28");
    if (!(rec.sample_rate_hz > 0.0))
        throw Error(Errc::FormatError, where + ": non-positive sample rate at byte offset 16");
    if (n == 0)
        throw Error(Errc::FormatError, where + ": zero record length at byte offset 24");

    const std::size_t expected = capture_header_bytes + 8 * static_cast<std::size_t>(n);
    if (buf.size() < expected)
        throw Error(Errc::FormatError, where + ": payload truncated at byte offset " + std::to_string(buf.size()) +
                                           ", expected " + std::to_string(expected) + " bytes");
    if (buf.size() > expected)
        throw Error(Errc::FormatError, where + ": trailing data at byte offset " + std::to_string(expected));

    rec.kind = static_cast<RecordKind>(kind);
    rec.center_frequency_hz = band_ghz * 1e9;
    rec.samples.resize(n);
    const unsigned char *p = buf.data() + capture_header_bytes;
    for (std::size_t i = 0; i < n; ++i, p += 8)
    {
        const float re = std::bit_cast<float>(get_le<std::uint32_t>(p));
        const float im = std::bit_cast<float>(get_le<std::uint32_t>(p + 4));
        rec.samples[i] = {re, im};
    }
    return rec;
}

} // namespace chsound
