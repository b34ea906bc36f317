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
#include "losmodel/distributions.hpp"

using namespace losmodel;

namespace {

std::vector<double> sample_dist(const ParamDistribution &d, std::size_t n, Rng &rng)
{
    std::vector<double> xs(n);
    for (auto &x : xs)
        x = inverse_cdf(d, rng.uniform_open());
    return xs;
}

ParamDistribution gamma_dist(double k, double theta)
{
    ParamDistribution d;
    d.family = DistFamily::gamma;
    d.params = {k, theta, 0.0};
    return d;
}

ParamDistribution beta_dist(double a, double b)
{
    ParamDistribution d;
    d.family = DistFamily::beta;
    d.params = {a, b, 0.0};
    return d;
}

ParamDistribution gev_dist(double k, double sigma, double mu)
{
    ParamDistribution d;
    d.family = DistFamily::gev;
    d.params = {k, sigma, mu};
    return d;
}

} // namespace

TEST(MlFit, ExponentialClosedForm)
{
    // theta-hat is the sample mean
    std::vector<double> xs;
    for (int rep = 0; rep < 4; ++rep)
        for (double v : {1.0, 2.0, 3.0})
            xs.push_back(v);
    ParamDistribution d = ml_fit(xs, DistFamily::exponential);
    EXPECT_DOUBLE_EQ(d.params[0], 2.0);
    EXPECT_NEAR(d.loglik, -12.0 * (std::log(2.0) + 1.0), 1e-12);
}

TEST(MlFit, TooFewSamples)
{
    std::vector<double> xs{1, 2, 3};
    EXPECT_THROW(ml_fit(xs, DistFamily::exponential), dist_fit_error);
}

TEST(MlFit, SupportViolationNamesSample)
{
    std::vector<double> xs{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, -1};
    try
    {
        ml_fit(xs, DistFamily::gamma);
        FAIL() << "expected dist_fit_error";
    }
    catch (const dist_fit_error &e)
    {
        EXPECT_NE(std::string(e.what()).find("sample 10"), std::string::npos) << e.what();
    }
}

TEST(MlFit, GammaSelfConsistency)
{
    // Gamma(2, 3) sampled independently as the sum of two exponentials
    Rng rng(51);
    std::vector<double> xs(100000);
    for (auto &x : xs)
        x = -3.0 * (std::log(rng.uniform_open()) + std::log(rng.uniform_open()));
    ParamDistribution d = ml_fit(xs, DistFamily::gamma);
    EXPECT_GT(d.params[0], 1.9);
    EXPECT_LT(d.params[0], 2.1);
    EXPECT_GT(d.params[1], 2.85);
    EXPECT_LT(d.params[1], 3.15);
}

TEST(MlFit, GammaSmallShape)
{
    Rng rng(52);
    ParamDistribution truth = gamma_dist(0.2352, 531.29);
    auto xs = sample_dist(truth, 20000, rng);
    ParamDistribution d = ml_fit(xs, DistFamily::gamma);
    EXPECT_NEAR(d.params[0], truth.params[0], 0.05 * truth.params[0]);
    EXPECT_NEAR(d.params[1], truth.params[1], 0.10 * truth.params[1]);
}

TEST(MlFit, BetaRoundTrip)
{
    Rng rng(53);
    ParamDistribution truth = beta_dist(0.4266, 0.1204);
    auto xs = sample_dist(truth, 100000, rng);
    ParamDistribution d = ml_fit(xs, DistFamily::beta);
    EXPECT_NEAR(d.params[0], truth.params[0], 0.05 * truth.params[0]);
    EXPECT_NEAR(d.params[1], truth.params[1], 0.05 * truth.params[1]);
}

TEST(MlFit, BetaClipsExactEndpoints)
{
    Rng rng(54);
    ParamDistribution truth = beta_dist(2.0, 5.0);
    auto xs = sample_dist(truth, 5000, rng);
    xs[0] = 0.0;
    xs[1] = 1.0;
    ParamDistribution d = ml_fit(xs, DistFamily::beta); // must not throw
    EXPECT_NEAR(d.params[0], 2.0, 0.3);
    EXPECT_NEAR(d.params[1], 5.0, 0.7);
}

TEST(MlFit, BetaDegenerateSample)
{
    std::vector<double> xs(50, 0.5);
    EXPECT_THROW(ml_fit(xs, DistFamily::beta), dist_fit_error);
}

TEST(MlFit, GevRoundTrip)
{
    // sampled with the closed-form quantile as an independent oracle
    Rng rng(55);
    double k = 0.15, sigma = 2.0, mu = 10.0;
    std::vector<double> xs(20000);
    for (auto &x : xs)
    {
        double u = rng.uniform_open();
        x = mu + sigma * (std::pow(-std::log(u), -k) - 1.0) / k;
    }
    ParamDistribution d = ml_fit(xs, DistFamily::gev);
    EXPECT_NEAR(d.params[0], k, 0.03);
    EXPECT_NEAR(d.params[1], sigma, 0.1 * sigma);
    EXPECT_NEAR(d.params[2], mu, 0.05 * mu);
}

TEST(MlFit, UniformLoglikZero)
{
    Rng rng(56);
    std::vector<double> xs(100);
    for (auto &x : xs)
        x = rng.uniform01();
    ParamDistribution d = ml_fit(xs, DistFamily::uniform01);
    EXPECT_DOUBLE_EQ(d.loglik, 0.0);
}

TEST(Aicc, KnownValues)
{
    EXPECT_DOUBLE_EQ(aicc(0.0, 0, 100), 0.0);
    EXPECT_NEAR(aicc(-50.0, 2, 100), 104.0 + 12.0 / 97.0, 1e-12);
}

TEST(Aicc, PenaltyMonotoneInParams)
{
    // equal loglik: fewer parameters always wins on AICc
    EXPECT_LT(aicc(-30.0, 2, 30), aicc(-30.0, 3, 30));
}

TEST(Aicc, RequiresEnoughSamples)
{
    EXPECT_THROW(aicc(-10.0, 3, 4), std::invalid_argument);
}

TEST(SelectFamily, SingleConvergedCandidate)
{
    // constant data: beta degenerates, uniform remains
    std::vector<double> xs(50, 0.5);
    FamilySelection sel = select_family(xs, {DistFamily::beta, DistFamily::uniform01});
    EXPECT_EQ(sel.chosen.family, DistFamily::uniform01);
    EXPECT_EQ(sel.warnings.size(), 1u);
}

TEST(SelectFamily, ParsimonyWithinBand)
{
    // uniform data: beta converges to alpha = beta = 1 and lands within the
    // delta-AICc band; the zero-parameter uniform wins on parsimony
    Rng rng(57);
    std::vector<double> xs(1000);
    for (auto &x : xs)
        x = rng.uniform01();
    FamilySelection sel = select_family(xs, {DistFamily::beta, DistFamily::uniform01});
    EXPECT_EQ(sel.chosen.family, DistFamily::uniform01);
    for (const auto &c : sel.candidates)
        if (c.family == DistFamily::beta)
            EXPECT_LE(c.delta_aicc, 7.0);
}

TEST(SelectFamily, ChosenDeltaWithinBandByConstruction)
{
    Rng rng(58);
    auto xs = sample_dist(gamma_dist(0.7, 100.0), 2000, rng);
    FamilySelection sel =
        select_family(xs, {DistFamily::gamma, DistFamily::exponential, DistFamily::gev});
    EXPECT_GE(sel.chosen.delta_aicc, 0.0);
    EXPECT_LE(sel.chosen.delta_aicc, 7.0);
}

TEST(SelectFamily, GammaDataPrefersGamma)
{
    // UMa-like U samples: far from exponential, recognized against GEV by
    // parsimony inside the band
    Rng rng(59);
    int gamma_wins = 0;
    for (int trial = 0; trial < 20; ++trial)
    {
        auto xs = sample_dist(gamma_dist(0.2352, 531.29), 2000, rng);
        FamilySelection sel =
            select_family(xs, {DistFamily::gamma, DistFamily::exponential, DistFamily::gev});
        gamma_wins += sel.chosen.family == DistFamily::gamma;
    }
    EXPECT_GE(gamma_wins, 19);
}

TEST(SelectFamily, SimplerFamilyWinsInsideBand)
{
    // near-exponential gamma data: the gamma fit often edges out on AICc but
    // exponential stays inside the band and wins on parameter count
    Rng rng(60);
    int exp_chosen = 0;
    for (int trial = 0; trial < 20; ++trial)
    {
        auto xs = sample_dist(gamma_dist(1.05, 10.0), 500, rng);
        FamilySelection sel = select_family(xs, {DistFamily::gamma, DistFamily::exponential});
        exp_chosen += sel.chosen.family == DistFamily::exponential;
    }
    EXPECT_GE(exp_chosen, 18);
}

TEST(KsRoundTrip, FittedCdfPassesAtOnePercent)
{
    // sample -> fit -> KS below the 1% critical value in at least 95% of trials
    Rng rng(61);
    const double crit = 1.6276 / std::sqrt(10000.0);
    struct Case {
        ParamDistribution truth;
        DistFamily fit_as;
    };
    ParamDistribution exp5;
    exp5.family = DistFamily::exponential;
    exp5.params = {5.0, 0.0, 0.0};
    std::vector<Case> cases{
        {gamma_dist(0.7759, 849.43), DistFamily::gamma},
        {gamma_dist(2.0, 3.0), DistFamily::gamma},
        {exp5, DistFamily::exponential},
        {beta_dist(2.0, 5.0), DistFamily::beta},
        {gev_dist(0.1, 2.0, 10.0), DistFamily::gev},
    };
    int total = 0, passed = 0;
    for (const auto &c : cases)
    {
        for (int trial = 0; trial < 8; ++trial)
        {
            auto xs = sample_dist(c.truth, 10000, rng);
            ParamDistribution fitted = ml_fit(xs, c.fit_as);
            ++total;
            passed += ks_statistic(xs, fitted) < crit;
        }
    }
    EXPECT_GE(passed, total - 2) << passed << "/" << total;
}
