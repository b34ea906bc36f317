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

#ifndef LOSMODEL_PRESETS_HPP
#define LOSMODEL_PRESETS_HPP

#include "losmodel/copula.hpp"
#include "losmodel/env_model.hpp"
#include "losmodel/model.hpp"

// Bundled US-macrocell parameterization per environment class: the average
// (U, W, F) models, refitted d1/d2 baselines, the estimated parameter
// distributions, and their pairwise correlations. These ship with the toolkit
// so simulation modes work without refitting a dataset first.

namespace losmodel::presets {

inline LosModelParams average_model(EnvClass env)
{
    switch (env)
    {
    case EnvClass::MetMa:
        return {22.1, 339.5, 0.6756};
    case EnvClass::UMa:
        return {21.9, 607.4, 0.6929};
    case EnvClass::SMa:
        return {33.0, 400.0, 0.85};
    default:
        return {9.9, 1209.6, 0.9031};
    }
}

inline D1D2Params fitted_d1d2(EnvClass env)
{
    switch (env)
    {
    case EnvClass::MetMa:
        return {2.0, 240.6};
    case EnvClass::UMa:
        return {10.0, 396.2};
    case EnvClass::SMa:
        return {10.2, 368.2};
    default:
        return {10.0, 1169.2};
    }
}

// The 3GPP UMa defaults.
inline D1D2Params d1d2_3gpp() { return {18.0, 63.0}; }

inline ParamDistribution make_gamma(double k, double theta)
{
    ParamDistribution d;
    d.family = DistFamily::gamma;
    d.params = {k, theta, 0.0};
    return d;
}

inline ParamDistribution make_beta(double alpha, double beta)
{
    ParamDistribution d;
    d.family = DistFamily::beta;
    d.params = {alpha, beta, 0.0};
    return d;
}

// Estimated per-environment distributions of (U, W, F) and their pairwise
// Pearson correlations (rho_UW, rho_UF, rho_WF).
inline EnvParamModel environment_model(EnvClass env)
{
    EnvParamModel m;
    m.env = env;
    double uw = 0.0, uf = 0.0, wf = 0.0;
    switch (env)
    {
    case EnvClass::MetMa:
        m.dist_U = make_gamma(0.1124, 752.3);
        m.dist_W = make_gamma(0.4223, 2242.9);
        m.dist_F = make_beta(0.5276, 0.1691);
        uw = 0.069;
        uf = -0.4423;
        wf = -0.3306;
        break;
    case EnvClass::UMa:
        m.dist_U = make_gamma(0.2352, 531.29);
        m.dist_W = make_gamma(0.7759, 849.43);
        m.dist_F = make_beta(0.4266, 0.1204);
        uw = -0.0362;
        uf = -0.1615;
        wf = -0.1164;
        break;
    case EnvClass::SMa:
        m.dist_U = make_gamma(0.2039, 501.42);
        m.dist_W = make_gamma(0.7556, 687.66);
        m.dist_F = make_beta(0.3962, 0.1035);
        uw = -0.0079;
        uf = -0.2147;
        wf = -0.174;
        break;
    default: // RMa
        m.dist_U = make_gamma(0.2932, 1126.0);
        m.dist_W = make_gamma(0.4679, 2937.0);
        m.dist_F = make_beta(0.4124, 0.1951);
        uw = 0.0039;
        uf = -0.3094;
        wf = 0.0046;
        break;
    }
    m.correlation = {{{1.0, uw, uf}, {uw, 1.0, wf}, {uf, wf, 1.0}}};
    return m;
}

} // namespace losmodel::presets

#endif
