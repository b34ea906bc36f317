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

#ifndef LOSMODEL_COPULA_HPP
#define LOSMODEL_COPULA_HPP

#include <array>
#include <cmath>

#include "losmodel/env_model.hpp"
#include "losmodel/model.hpp"

namespace losmodel {

// Cholesky factor L with L L^T = R. R must be symmetric PSD with unit
// diagonal (the dist-fit module projects before handing it over); tiny
// negative pivots from rounding are treated as zero.
inline Matrix3 cholesky(const Matrix3 &r)
{
    Matrix3 l{};
    for (int i = 0; i < 3; ++i)
    {
        for (int j = 0; j <= i; ++j)
        {
            double sum = r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            for (int k = 0; k < j; ++k)
                sum -= l[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                       l[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            if (i == j)
            {
                if (sum < -1e-10)
                    throw std::invalid_argument("cholesky: matrix is not positive semidefinite");
                l[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    std::sqrt(std::max(sum, 0.0));
            }
            else
            {
                double d = l[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
                l[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = d > 0.0 ? sum / d : 0.0;
            }
        }
    }
    return l;
}

inline double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

// Quantile of a fitted marginal. Exponential and uniform are closed form; the
// others are bracketed numeric root finds on the CDF (binary subdivision to
// 1e-10 relative tolerance; beta is pushed to machine resolution because its
// mass can concentrate within an ulp of 1).
inline double inverse_cdf(const ParamDistribution &dist, double u, std::uint64_t *clamp_counter = nullptr)
{
    if (u <= 0.0 || u >= 1.0)
    {
        if (clamp_counter)
            ++*clamp_counter;
        u = std::clamp(u, 1e-12, 1.0 - 1e-12);
    }
    switch (dist.family)
    {
    case DistFamily::exponential:
        return -dist.params[0] * std::log1p(-u);
    case DistFamily::uniform01:
        return u;
    default:
        break;
    }

    double lo = dist.support_lo();
    double hi = dist.support_hi();
    // bracket the quantile when the support is unbounded
    if (!std::isfinite(hi))
    {
        double base = std::isfinite(lo) ? lo : 0.0;
        double step = 1.0;
        hi = base + step;
        while (dist.cdf(hi) < u && step < 1e300)
        {
            step *= 4.0;
            hi = base + step;
        }
    }
    if (!std::isfinite(lo))
    {
        double step = 1.0;
        lo = hi - step;
        while (dist.cdf(lo) > u && step < 1e300)
        {
            step *= 4.0;
            lo = hi - step;
        }
    }

    const bool unit_support = dist.family == DistFamily::beta;
    for (int it = 0; it < 200; ++it)
    {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break; // interval at machine resolution
        if (dist.cdf(mid) < u)
            lo = mid;
        else
            hi = mid;
        double span = hi - lo;
        double scale = std::max(std::fabs(lo), std::fabs(hi));
        if (!unit_support && span <= 1e-10 * scale)
            break;
    }
    double x = 0.5 * (lo + hi);
    if (unit_support)
        x = std::clamp(x, std::numeric_limits<double>::min(), 1.0 - 1e-16);
    return x;
}

// One correlated draw with its intermediate stages, for diagnostics and
// statistical tests.
struct TripletDraw {
    std::array<double, 3> z;   // iid standard normals
    std::array<double, 3> x;   // correlated normals, x = L z
    std::array<double, 3> u;   // normal CDF stage
    std::array<double, 3> raw; // marginal quantiles before the U cap
    LosModelParams params;     // final triplet, U capped to [0, 1000]
};

// Gaussian-copula generator of correlated (U, W, F) triplets from an
// environment model: z ~ N(0, I), x = L z, u_i = Phi(x_i), parameter =
// marginal quantile of u_i. The procedure targets the correlation of the
// Gaussian stage; the post-transform Pearson correlation of (U, W, F) differs
// from R in general.
class TripletSampler {
  public:
    TripletSampler(const EnvParamModel &model, std::uint64_t seed)
        : model_(model), rng_(seed), cholesky_l_(cholesky(model.correlation))
    {
    }

    const Matrix3 &cholesky_factor() const { return cholesky_l_; }
    std::uint64_t endpoint_clamp_count() const { return clamp_count_; }

    TripletDraw sample_detailed()
    {
        TripletDraw d;
        for (auto &z : d.z)
            z = rng_.normal();
        for (int i = 0; i < 3; ++i)
        {
            d.x[static_cast<std::size_t>(i)] = 0.0;
            for (int j = 0; j <= i; ++j)
                d.x[static_cast<std::size_t>(i)] +=
                    cholesky_l_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                    d.z[static_cast<std::size_t>(j)];
        }
        for (int i = 0; i < 3; ++i)
            d.u[static_cast<std::size_t>(i)] = standard_normal_cdf(d.x[static_cast<std::size_t>(i)]);
        d.raw[0] = inverse_cdf(model_.dist_U, d.u[0], &clamp_count_);
        d.raw[1] = inverse_cdf(model_.dist_W, d.u[1], &clamp_count_);
        d.raw[2] = inverse_cdf(model_.dist_F, d.u[2], &clamp_count_);
        d.params.U = std::clamp(d.raw[0], 0.0, 1000.0);
        d.params.W = d.raw[1];
        d.params.F = std::clamp(d.raw[2], 0.0, 1.0);
        return d;
    }

    LosModelParams sample_triplet() { return sample_detailed().params; }

  private:
    EnvParamModel model_;
    Rng rng_;
    Matrix3 cholesky_l_;
    std::uint64_t clamp_count_ = 0;
};

} // namespace losmodel

#endif
