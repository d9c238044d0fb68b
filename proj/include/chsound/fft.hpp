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

#ifndef CHSOUND_FFT_HPP
#define CHSOUND_FFT_HPP

#include <complex>
#include <span>
#include <vector>

namespace chsound
{

using cplx = std::complex<double>;

// Unnormalized forward DFT: X[k] = sum_n x[n] exp(-j 2 pi k n / N)
std::vector<cplx> fft_forward(std::span<const cplx> x);

// Inverse DFT with 1/N scaling, so fft_inverse(fft_forward(x)) == x
std::vector<cplx> fft_inverse(std::span<const cplx> X);

} // namespace chsound

#endif
