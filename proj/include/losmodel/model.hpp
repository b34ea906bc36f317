// SPDX-License-Identifier: Apache-2.0
//
// losmodel - extraction and statistical modeling of line-of-sight probability
// in macrocell networks
// Copyright (C) 2026 the losmodel authors
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

#ifndef LOSMODEL_MODEL_HPP
#define LOSMODEL_MODEL_HPP

#include <cmath>
#include <stdexcept>

namespace losmodel {

// Three-parameter LOS probability model.
//   U: cutoff distance (m), probability 1 up to U
//   W: decay scale (m) of the exponential tail
//   F: scale factor of the decaying branch; the jump at U equals 1 - F
struct LosModelParams {
    double U = 0.0;
    double W = 0.0;
    double F = 1.0;

    bool in_constraint_box() const
    {
        return U >= 0.0 && U <= 1000.0 && W >= 0.0 && F >= 0.0 && F <= 1.0;
    }
};

// Two-parameter baseline: cutoff d1, decay d2.
struct D1D2Params {
    double d1 = 18.0;
    double d2 = 63.0;
};

//   p(r) = 1                                       for r <= U
//   p(r) = F * ((U/r)(1 - e^{-r/W}) + e^{-r/W})    for r > U
// W == 0 is the continuous limit F*U/r. With F = 1, U = d1, W = d2 this equals
// the d1/d2 model exactly, both branches.
inline double p_los(const LosModelParams &params, double r)
{
    if (!(r > 0.0))
        throw std::domain_error("p_los: r must be > 0");
    if (r <= params.U)
        return 1.0;
    if (params.W == 0.0)
        return params.F * (params.U / r);
    double ex = std::exp(-r / params.W);
    return params.F * ((params.U / r) * (1.0 - ex) + ex);
}

//   p(r) = min(d1/r, 1) * (1 - e^{-r/d2}) + e^{-r/d2}
inline double p_los_3gpp(const D1D2Params &params, double r)
{
    if (!(r > 0.0))
        throw std::domain_error("p_los_3gpp: r must be > 0");
    double ex = std::exp(-r / params.d2);
    if (r <= params.d1)
        return (1.0 - ex) + ex;
    return (params.d1 / r) * (1.0 - ex) + ex;
}

} // namespace losmodel

#endif
