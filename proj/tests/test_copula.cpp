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

#include <gtest/gtest.h>

#include "losmodel/copula.hpp"
#include "losmodel/presets.hpp"

using namespace losmodel;

namespace {

double pearson(const std::vector<double> &a, const std::vector<double> &b)
{
    double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

EnvParamModel uniform_model(const Matrix3 &r)
{
    EnvParamModel m;
    m.dist_U.family = DistFamily::uniform01;
    m.dist_W.family = DistFamily::uniform01;
    m.dist_F.family = DistFamily::uniform01;
    m.correlation = r;
    return m;
}

} // namespace

TEST(Cholesky, Identity)
{
    Matrix3 eye{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    Matrix3 l = cholesky(eye);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            EXPECT_DOUBLE_EQ(l[i][j], eye[i][j]);
}

TEST(Cholesky, HandComputedCase)
{
    Matrix3 r{{{1, 0.5, 0}, {0.5, 1, 0}, {0, 0, 1}}};
    Matrix3 l = cholesky(r);
    EXPECT_DOUBLE_EQ(l[0][0], 1.0);
    EXPECT_DOUBLE_EQ(l[1][0], 0.5);
    EXPECT_DOUBLE_EQ(l[1][1], std::sqrt(0.75));
    EXPECT_DOUBLE_EQ(l[2][2], 1.0);
    EXPECT_DOUBLE_EQ(l[0][1], 0.0);
}

TEST(Cholesky, ReproducesPresetCorrelations)
{
    for (EnvClass env : {EnvClass::RMa, EnvClass::SMa, EnvClass::UMa, EnvClass::MetMa})
    {
        Matrix3 r = presets::environment_model(env).correlation;
        Matrix3 l = cholesky(r);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
            {
                double v = 0.0;
                for (int k = 0; k < 3; ++k)
                    v += l[i][k] * l[j][k];
                EXPECT_NEAR(v, r[i][j], 1e-12);
            }
    }
}

TEST(Cholesky, RejectsIndefinite)
{
    Matrix3 bad{{{1, 0.99, -0.99}, {0.99, 1, 0.99}, {-0.99, 0.99, 1}}};
    EXPECT_THROW(cholesky(bad), std::invalid_argument);
}

TEST(InverseCdf, ClosedForms)
{
    ParamDistribution expo;
    expo.family = DistFamily::exponential;
    expo.params = {2.0, 0, 0};
    EXPECT_NEAR(inverse_cdf(expo, 0.5), 2.0 * std::log(2.0), 1e-12);

    ParamDistribution uni;
    uni.family = DistFamily::uniform01;
    EXPECT_DOUBLE_EQ(inverse_cdf(uni, 0.73), 0.73);
}

TEST(InverseCdf, GammaMedian)
{
    ParamDistribution g;
    g.family = DistFamily::gamma;
    g.params = {2.0, 1.0, 0.0};
    EXPECT_NEAR(inverse_cdf(g, 0.5), 1.6783469900166605, 1e-8);
}

TEST(InverseCdf, ForwardInverseConsistency)
{
    std::vector<ParamDistribution> dists;
    ParamDistribution d;
    d.family = DistFamily::gamma;
    d.params = {0.2352, 531.29, 0};
    dists.push_back(d);
    d.family = DistFamily::gamma;
    d.params = {2.0, 3.0, 0};
    dists.push_back(d);
    d.family = DistFamily::exponential;
    d.params = {7.0, 0, 0};
    dists.push_back(d);
    d.family = DistFamily::beta;
    d.params = {0.4266, 0.1204, 0};
    dists.push_back(d);
    d.family = DistFamily::gev;
    d.params = {0.2, 2.0, 10.0};
    dists.push_back(d);
    d.family = DistFamily::gev;
    d.params = {-0.2, 2.0, 10.0};
    dists.push_back(d);
    d.family = DistFamily::uniform01;
    dists.push_back(d);

    for (const auto &dist : dists)
        for (double u = 0.02; u < 1.0; u += 0.02)
        {
            double x = inverse_cdf(dist, u);
            // The inverter is exact to a few ulps of x. Where the density is
            // unbounded (beta with shape < 1 near an endpoint), one ulp of x
            // moves the CDF by pdf * ulp, which can exceed any fixed bound;
            // the check therefore allows that representability floor.
            double pdf = std::exp(dist.log_pdf(x));
            double ulp = std::nextafter(std::fabs(x) + 1.0, 2.0) - (std::fabs(x) + 1.0);
            double tol = std::max(1e-8, 8.0 * pdf * ulp * std::max(std::fabs(x), 1.0));
            EXPECT_NEAR(dist.cdf(x), u, tol) << to_string(dist.family) << " at u=" << u;
        }
}

TEST(InverseCdf, EndpointsClampWithCounter)
{
    ParamDistribution expo;
    expo.family = DistFamily::exponential;
    expo.params = {1.0, 0, 0};
    std::uint64_t count = 0;
    double x0 = inverse_cdf(expo, 0.0, &count);
    double x1 = inverse_cdf(expo, 1.0, &count);
    EXPECT_EQ(count, 2u);
    EXPECT_GT(x0, 0.0);
    EXPECT_TRUE(std::isfinite(x1));
}

TEST(TripletSampler, ReproducibleStream)
{
    EnvParamModel model = presets::environment_model(EnvClass::UMa);
    TripletSampler a(model, 12345), b(model, 12345);
    for (int i = 0; i < 100; ++i)
    {
        LosModelParams pa = a.sample_triplet();
        LosModelParams pb = b.sample_triplet();
        EXPECT_EQ(pa.U, pb.U);
        EXPECT_EQ(pa.W, pb.W);
        EXPECT_EQ(pa.F, pb.F);
    }
}

TEST(TripletSampler, IndependentUniformCase)
{
    Matrix3 eye{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    TripletSampler s(uniform_model(eye), 9);
    const int n = 1000000;
    std::vector<double> a(n), b(n), c(n);
    for (int i = 0; i < n; ++i)
    {
        LosModelParams p = s.sample_triplet();
        a[i] = p.U;
        b[i] = p.W;
        c[i] = p.F;
    }
    EXPECT_LT(std::fabs(pearson(a, b)), 0.01);
    EXPECT_LT(std::fabs(pearson(a, c)), 0.01);
    EXPECT_LT(std::fabs(pearson(b, c)), 0.01);
    // marginals uniform: mean 1/2, variance 1/12
    double mean = 0;
    for (double v : a)
        mean += v;
    mean /= n;
    EXPECT_NEAR(mean, 0.5, 0.002);
}

TEST(TripletSampler, GaussianStageMatchesTargetCorrelation)
{
    EnvParamModel model = presets::environment_model(EnvClass::UMa);
    TripletSampler s(model, 2718);
    const int n = 30000;
    std::vector<double> x0(n), x1(n), x2(n);
    for (int i = 0; i < n; ++i)
    {
        TripletDraw d = s.sample_detailed();
        x0[i] = d.x[0];
        x1[i] = d.x[1];
        x2[i] = d.x[2];
    }
    EXPECT_NEAR(pearson(x0, x1), model.correlation[0][1], 0.02);
    EXPECT_NEAR(pearson(x0, x2), model.correlation[0][2], 0.02);
    EXPECT_NEAR(pearson(x1, x2), model.correlation[1][2], 0.02);
}

TEST(TripletSampler, NearPointMassMarginalIsConstant)
{
    // zero-variance limit: a gamma with enormous shape concentrates at k*theta
    EnvParamModel m;
    m.dist_U.family = DistFamily::gamma;
    m.dist_U.params = {1e8, 1e-8 * 500.0, 0.0}; // mean 500, sd 0.05
    m.dist_W.family = DistFamily::uniform01;
    m.dist_F.family = DistFamily::uniform01;
    TripletSampler s(m, 4);
    for (int i = 0; i < 200; ++i)
    {
        LosModelParams p = s.sample_triplet();
        EXPECT_NEAR(p.U, 500.0, 0.5);
    }
}

TEST(TripletSampler, UCappedToDomain)
{
    // RMa's U marginal has substantial mass beyond 1 km; the cap must hold
    EnvParamModel model = presets::environment_model(EnvClass::RMa);
    TripletSampler s(model, 5);
    bool saw_cap = false;
    for (int i = 0; i < 5000; ++i)
    {
        LosModelParams p = s.sample_triplet();
        EXPECT_LE(p.U, 1000.0);
        EXPECT_GE(p.U, 0.0);
        EXPECT_TRUE(p.F >= 0.0 && p.F <= 1.0);
        saw_cap = saw_cap || p.U == 1000.0;
    }
    EXPECT_TRUE(saw_cap);
}
