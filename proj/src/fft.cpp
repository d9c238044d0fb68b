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

#include "chsound/fft.hpp"
#include "chsound/error.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace chsound
{

namespace
{

// FFTW planning is not thread-safe, execution with the new-array interface is.
// Plans are created once per (size, direction) and reused for the process lifetime.
class PlanCache
{
public:
    ~PlanCache()
    {
        for (auto &[key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

    fftw_plan get(int n, int sign)
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end())
            return it->second;

        std::vector<cplx> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
        fftw_plan plan = fftw_plan_dft_1d(n,
                                          reinterpret_cast<fftw_complex *>(in.data()),
                                          reinterpret_cast<fftw_complex *>(out.data()),
                                          sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr)
            throw Error(Errc::InvalidInput, "FFTW could not plan a transform of size " + std::to_string(n));
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache &plan_cache()
{
    static PlanCache cache;
    return cache;
}

std::vector<cplx> execute(std::span<const cplx> x, int sign)
{
    if (x.empty())
        throw Error(Errc::InvalidInput, "transform of an empty sequence");

    const int n = static_cast<int>(x.size());
    fftw_plan plan = plan_cache().get(n, sign);

    std::vector<cplx> in(x.begin(), x.end());
    std::vector<cplx> out(x.size());
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex *>(in.data()),
                     reinterpret_cast<fftw_complex *>(out.data()));
    return out;
}

} // namespace

std::vector<cplx> fft_forward(std::span<const cplx> x)
{
    return execute(x, FFTW_FORWARD);
}

std::vector<cplx> fft_inverse(std::span<const cplx> X)
{
    auto out = execute(X, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(out.size());
    for (auto &v : out)
        v *= scale;
    return out;
}

} // namespace chsound
