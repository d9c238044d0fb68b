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

#ifndef CHSOUND_ERROR_HPP
#define CHSOUND_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace chsound
{

enum class Errc
{
    InvalidInput,
    DegenerateCalibration,
    AllSnapshotsRejected,
    EmptyMpcSet,
    DegenerateGeometry,
    InsufficientSamples,
    FormatError,
    MissingCalibration,
    IoError
};

std::string_view errc_name(Errc code) noexcept;

// All library failures are reported through this type; code() tells callers
// whether the failure is per-position (recoverable) or fatal for a run.
class Error : public std::runtime_error
{
public:
    Error(Errc code, const std::string &what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

inline std::string_view errc_name(Errc code) noexcept
{
    switch (code)
    {
    case Errc::InvalidInput:
        return "InvalidInput";
    case Errc::DegenerateCalibration:
        return "DegenerateCalibration";
    case Errc::AllSnapshotsRejected:
        return "AllSnapshotsRejected";
    case Errc::EmptyMpcSet:
        return "EmptyMpcSet";
    case Errc::DegenerateGeometry:
        return "DegenerateGeometry";
    case Errc::InsufficientSamples:
        return "InsufficientSamples";
    case Errc::FormatError:
        return "FormatError";
    case Errc::MissingCalibration:
        return "MissingCalibration";
    case Errc::IoError:
        return "IoError";
    }
    return "Unknown";
}

} // namespace chsound

#endif
