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

#ifndef LOSMODEL_DISTRIBUTIONS_HPP
#define LOSMODEL_DISTRIBUTIONS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "losmodel/common.hpp"

namespace losmodel {

enum class DistFamily { gamma, exponential, gev, beta, uniform01 };

inline const char *to_string(DistFamily f)
{
    switch (f)
    {
    case DistFamily::gamma:
        return "gamma";
    case DistFamily::exponential:
        return "exponential";
    case DistFamily::gev:
        return "gev";
    case DistFamily::beta:
        return "beta";
    default:
        return "uniform";
    }
}

inline DistFamily dist_family_from_string(const std::string &s)
{
    if (s == "gamma")
        return DistFamily::gamma;
    if (s == "exponential")
        return DistFamily::exponential;
    if (s == "gev")
        return DistFamily::gev;
    if (s == "beta")
        return DistFamily::beta;
    if (s == "uniform")
        return DistFamily::uniform01;
    throw parse_error("unknown distribution family '" + s + "'");
}

class dist_fit_error : public std::runtime_error {
  public:
    explicit dist_fit_error(const std::string &msg) : std::runtime_error(msg) {}
};

// A fitted marginal: family plus parameters, with the fit diagnostics used by
// the AICc selection.
//   gamma:        params = {k, theta}
//   exponential:  params = {theta}
//   gev:          params = {k, sigma, mu}
//   beta:         params = {alpha, beta}
//   uniform01:    no parameters
struct ParamDistribution {
    DistFamily family = DistFamily::uniform01;
    std::array<double, 3> params{};
    double loglik = 0.0;
    double aicc = 0.0;
    double delta_aicc = 0.0;

    int n_params() const
    {
        switch (family)
        {
        case DistFamily::gamma:
            return 2;
        case DistFamily::exponential:
            return 1;
        case DistFamily::gev:
            return 3;
        case DistFamily::beta:
            return 2;
        default:
            return 0;
        }
    }

    double log_pdf(double x) const
    {
        switch (family)
        {
        case DistFamily::gamma: {
            double k = params[0], theta = params[1];
            if (x <= 0.0)
                return -std::numeric_limits<double>::infinity();
            return (k - 1.0) * std::log(x) - x / theta - std::lgamma(k) - k * std::log(theta);
        }
        case DistFamily::exponential: {
            double theta = params[0];
            if (x < 0.0)
                return -std::numeric_limits<double>::infinity();
            return -std::log(theta) - x / theta;
        }
        case DistFamily::gev: {
            double k = params[0], sigma = params[1], mu = params[2];
            double z = (x - mu) / sigma;
            if (std::fabs(k) < 1e-12)
                return -std::log(sigma) - z - std::exp(-z);
            double t = 1.0 + k * z;
            if (t <= 0.0)
                return -std::numeric_limits<double>::infinity();
            return -std::log(sigma) - (1.0 + 1.0 / k) * std::log(t) - std::pow(t, -1.0 / k);
        }
        case DistFamily::beta: {
            double a = params[0], b = params[1];
            if (x <= 0.0 || x >= 1.0)
                return -std::numeric_limits<double>::infinity();
            return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) -
                   (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
        }
        default:
            return (x >= 0.0 && x <= 1.0) ? 0.0 : -std::numeric_limits<double>::infinity();
        }
    }

    double cdf(double x) const
    {
        switch (family)
        {
        case DistFamily::gamma:
            if (x <= 0.0)
                return 0.0;
            return boost::math::gamma_p(params[0], x / params[1]);
        case DistFamily::exponential:
            return x <= 0.0 ? 0.0 : -std::expm1(-x / params[0]);
        case DistFamily::gev: {
            double k = params[0], sigma = params[1], mu = params[2];
            double z = (x - mu) / sigma;
            if (std::fabs(k) < 1e-12)
                return std::exp(-std::exp(-z));
            double t = 1.0 + k * z;
            if (t <= 0.0)
                return k > 0.0 ? 0.0 : 1.0;
            return std::exp(-std::pow(t, -1.0 / k));
        }
        case DistFamily::beta:
            if (x <= 0.0)
                return 0.0;
            if (x >= 1.0)
                return 1.0;
            return boost::math::ibeta(params[0], params[1], x);
        default:
            return std::clamp(x, 0.0, 1.0);
        }
    }

    // support bounds used for bracketing numeric inversions
    double support_lo() const
    {
        switch (family)
        {
        case DistFamily::gev: {
            double k = params[0], sigma = params[1], mu = params[2];
            return k > 1e-12 ? mu - sigma / k : -std::numeric_limits<double>::infinity();
        }
        case DistFamily::beta:
        case DistFamily::uniform01:
            return 0.0;
        default:
            return 0.0;
        }
    }

    double support_hi() const
    {
        switch (family)
        {
        case DistFamily::gev: {
            double k = params[0], sigma = params[1], mu = params[2];
            return k < -1e-12 ? mu - sigma / k : std::numeric_limits<double>::infinity();
        }
        case DistFamily::beta:
        case DistFamily::uniform01:
            return 1.0;
        default:
            return std::numeric_limits<double>::infinity();
        }
    }
};

namespace detail {

struct SampleStats {
    std::size_t n = 0;
    double mean = 0.0;
    double var = 0.0;
    double mean_log = 0.0;
    double mean_log1m = 0.0; // mean of log(1-x), for beta
};

inline SampleStats sample_stats(const std::vector<double> &xs, bool with_logs, bool with_log1m)
{
    SampleStats st;
    st.n = xs.size();
    for (double x : xs)
        st.mean += x;
    st.mean /= static_cast<double>(st.n);
    for (double x : xs)
    {
        st.var += (x - st.mean) * (x - st.mean);
        if (with_logs)
            st.mean_log += std::log(x);
        if (with_log1m)
            st.mean_log1m += std::log1p(-x);
    }
    st.var /= static_cast<double>(st.n);
    st.mean_log /= static_cast<double>(st.n);
    st.mean_log1m /= static_cast<double>(st.n);
    return st;
}

// Profile log-likelihood of the gamma shape: theta is mean/k at the optimum.
inline double gamma_profile_loglik(double k, const SampleStats &st)
{
    double n = static_cast<double>(st.n);
    return n * ((k - 1.0) * st.mean_log - k - k * std::log(st.mean / k) - std::lgamma(k));
}

inline ParamDistribution ml_fit_gamma(const std::vector<double> &xs)
{
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (!(xs[i] > 0.0))
            throw dist_fit_error("gamma ML: sample " + std::to_string(i) + " (" +
                                 format_double(xs[i]) + ") outside support x > 0");
    SampleStats st = sample_stats(xs, true, false);

    // 1-D search over the shape on a log grid, then golden-section refinement
    double best_lk = -std::numeric_limits<double>::infinity();
    double best_logk = 0.0;
    for (int i = 0; i <= 200; ++i)
    {
        double logk = -9.0 + 18.0 * static_cast<double>(i) / 200.0;
        double lk = gamma_profile_loglik(std::exp(logk), st);
        if (lk > best_lk)
        {
            best_lk = lk;
            best_logk = logk;
        }
    }
    double a = best_logk - 0.2, b = best_logk + 0.2;
    const double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = gamma_profile_loglik(std::exp(x1), st);
    double f2 = gamma_profile_loglik(std::exp(x2), st);
    for (int it = 0; it < 80; ++it)
    {
        if (f1 > f2)
        {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = gamma_profile_loglik(std::exp(x1), st);
        }
        else
        {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = gamma_profile_loglik(std::exp(x2), st);
        }
    }
    double k = std::exp(0.5 * (a + b));
    ParamDistribution d;
    d.family = DistFamily::gamma;
    d.params = {k, st.mean / k, 0.0};
    d.loglik = gamma_profile_loglik(k, st);
    return d;
}

inline ParamDistribution ml_fit_exponential(const std::vector<double> &xs)
{
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (!(xs[i] > 0.0))
            throw dist_fit_error("exponential ML: sample " + std::to_string(i) + " (" +
                                 format_double(xs[i]) + ") outside support x > 0");
    SampleStats st = sample_stats(xs, false, false);
    ParamDistribution d;
    d.family = DistFamily::exponential;
    d.params = {st.mean, 0.0, 0.0};
    d.loglik = -static_cast<double>(st.n) * (std::log(st.mean) + 1.0);
    return d;
}

inline ParamDistribution ml_fit_uniform01(const std::vector<double> &xs)
{
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (xs[i] < 0.0 || xs[i] > 1.0)
            throw dist_fit_error("uniform ML: sample " + std::to_string(i) + " (" +
                                 format_double(xs[i]) + ") outside support [0,1]");
    ParamDistribution d;
    d.family = DistFamily::uniform01;
    d.loglik = 0.0;
    return d;
}

// Newton iteration on the beta score equations, seeded from the method of
// moments. Values exactly 0 or 1 are clipped into the open interval first;
// the beta density is unbounded at the endpoints and ML diverges otherwise.
inline ParamDistribution ml_fit_beta(const std::vector<double> &xs_in)
{
    std::vector<double> xs(xs_in);
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        if (xs[i] < 0.0 || xs[i] > 1.0)
            throw dist_fit_error("beta ML: sample " + std::to_string(i) + " (" +
                                 format_double(xs[i]) + ") outside support [0,1]");
        if (xs[i] == 0.0)
            xs[i] = 1e-4;
        else if (xs[i] == 1.0)
            xs[i] = 1.0 - 1e-4;
    }
    SampleStats st = sample_stats(xs, true, true);
    if (st.var < 1e-14)
        throw dist_fit_error("beta ML: degenerate sample (variance ~ 0)");

    double m = st.mean, v = st.var;
    double common = m * (1.0 - m) / v - 1.0;
    double alpha = std::max(m * common, 1e-3);
    double beta = std::max((1.0 - m) * common, 1e-3);

    using boost::math::digamma;
    using boost::math::trigamma;
    for (int it = 0; it < 200; ++it)
    {
        double psi_ab = digamma(alpha + beta);
        double g1 = digamma(alpha) - psi_ab - st.mean_log;
        double g2 = digamma(beta) - psi_ab - st.mean_log1m;
        double t_ab = trigamma(alpha + beta);
        double h11 = trigamma(alpha) - t_ab;
        double h22 = trigamma(beta) - t_ab;
        double h12 = -t_ab;
        double det = h11 * h22 - h12 * h12;
        if (det == 0.0)
            break;
        double da = (g1 * h22 - g2 * h12) / det;
        double db = (g2 * h11 - g1 * h12) / det;
        double na = alpha - da, nb = beta - db;
        // damped: halve the step until inside the domain
        double damp = 1.0;
        while ((na <= 0.0 || nb <= 0.0) && damp > 1e-8)
        {
            damp *= 0.5;
            na = alpha - damp * da;
            nb = beta - damp * db;
        }
        if (na <= 0.0 || nb <= 0.0)
            throw dist_fit_error("beta ML: Newton iteration left the domain");
        double move = std::fabs(na - alpha) + std::fabs(nb - beta);
        alpha = na;
        beta = nb;
        if (move < 1e-12 * (alpha + beta))
            break;
    }

    ParamDistribution d;
    d.family = DistFamily::beta;
    d.params = {alpha, beta, 0.0};
    double n = static_cast<double>(st.n);
    d.loglik = n * ((alpha - 1.0) * st.mean_log + (beta - 1.0) * st.mean_log1m -
                    (std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta)));
    return d;
}

// Probability-weighted-moment (L-moment) starting point for the GEV fit,
// Hosking's estimators.
inline std::array<double, 3> gev_pwm_seed(std::vector<double> xs)
{
    std::sort(xs.begin(), xs.end());
    double n = static_cast<double>(xs.size());
    double b0 = 0.0, b1 = 0.0, b2 = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j)
    {
        double jj = static_cast<double>(j);
        b0 += xs[j];
        b1 += xs[j] * jj / (n - 1.0);
        b2 += xs[j] * jj * (jj - 1.0) / ((n - 1.0) * (n - 2.0));
    }
    b0 /= n;
    b1 /= n;
    b2 /= n;
    double l1 = b0, l2 = 2.0 * b1 - b0, l3 = 6.0 * b2 - 6.0 * b1 + b0;
    double tau3 = l3 / l2;
    double c = 2.0 / (3.0 + tau3) - std::log(2.0) / std::log(3.0);
    double kappa = 7.8590 * c + 2.9554 * c * c; // Hosking's shape (= -k here)
    double gk = std::tgamma(1.0 + kappa);
    double sigma = l2 * kappa / ((1.0 - std::pow(2.0, -kappa)) * gk);
    double mu = l1 - sigma * (1.0 - gk) / kappa;
    if (!(sigma > 0.0) || !std::isfinite(mu) || !std::isfinite(kappa))
        return {0.1, std::max(l2, 1e-6), l1};
    return {-kappa, sigma, mu};
}

// Nelder-Mead over (k, log sigma, mu); out-of-support simplexes get -inf.
inline ParamDistribution ml_fit_gev(const std::vector<double> &xs)
{
    if (xs.size() < 10)
        throw dist_fit_error("gev ML: need at least 10 samples");
    auto neg_loglik = [&](const std::array<double, 3> &p) {
        ParamDistribution d;
        d.family = DistFamily::gev;
        d.params = {p[0], std::exp(p[1]), p[2]};
        double ll = 0.0;
        for (double x : xs)
        {
            double lp = d.log_pdf(x);
            if (!std::isfinite(lp))
                return std::numeric_limits<double>::infinity();
            ll += lp;
        }
        return -ll;
    };

    auto seed = gev_pwm_seed(xs);
    std::array<double, 3> p0{seed[0], std::log(seed[1]), seed[2]};
    std::array<std::array<double, 3>, 4> simplex;
    std::array<double, 4> fv;
    simplex[0] = p0;
    for (int j = 1; j < 4; ++j)
    {
        simplex[static_cast<std::size_t>(j)] = p0;
        simplex[static_cast<std::size_t>(j)][j - 1] += (j == 2) ? 0.1 : 0.05;
    }
    for (int j = 0; j < 4; ++j)
        fv[static_cast<std::size_t>(j)] = neg_loglik(simplex[static_cast<std::size_t>(j)]);
    if (!std::isfinite(fv[0]))
        throw dist_fit_error("gev ML: starting point outside support");

    for (int it = 0; it < 600; ++it)
    {
        // order
        std::array<int, 4> idx{0, 1, 2, 3};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            return fv[static_cast<std::size_t>(a)] < fv[static_cast<std::size_t>(b)];
        });
        std::array<std::array<double, 3>, 4> s2;
        std::array<double, 4> f2;
        for (int j = 0; j < 4; ++j)
        {
            s2[static_cast<std::size_t>(j)] = simplex[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
            f2[static_cast<std::size_t>(j)] = fv[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
        }
        simplex = s2;
        fv = f2;
        if (std::isfinite(fv[3]) && fv[3] - fv[0] < 1e-10 * (std::fabs(fv[0]) + 1e-10))
            break;

        std::array<double, 3> centroid{};
        for (int j = 0; j < 3; ++j)
            for (int d = 0; d < 3; ++d)
                centroid[static_cast<std::size_t>(d)] += simplex[static_cast<std::size_t>(j)][static_cast<std::size_t>(d)] / 3.0;

        auto affine = [&](double t) {
            std::array<double, 3> p;
            for (int d = 0; d < 3; ++d)
                p[static_cast<std::size_t>(d)] = centroid[static_cast<std::size_t>(d)] +
                                                 t * (simplex[3][static_cast<std::size_t>(d)] -
                                                      centroid[static_cast<std::size_t>(d)]);
            return p;
        };
        auto refl = affine(-1.0);
        double fr = neg_loglik(refl);
        if (fr < fv[0])
        {
            auto exp_p = affine(-2.0);
            double fe = neg_loglik(exp_p);
            if (fe < fr)
            {
                simplex[3] = exp_p;
                fv[3] = fe;
            }
            else
            {
                simplex[3] = refl;
                fv[3] = fr;
            }
        }
        else if (fr < fv[2])
        {
            simplex[3] = refl;
            fv[3] = fr;
        }
        else
        {
            auto con = affine(0.5);
            double fc = neg_loglik(con);
            if (fc < fv[3])
            {
                simplex[3] = con;
                fv[3] = fc;
            }
            else
            {
                for (int j = 1; j < 4; ++j)
                {
                    for (int d = 0; d < 3; ++d)
                        simplex[static_cast<std::size_t>(j)][static_cast<std::size_t>(d)] =
                            0.5 * (simplex[static_cast<std::size_t>(j)][static_cast<std::size_t>(d)] +
                                   simplex[0][static_cast<std::size_t>(d)]);
                    fv[static_cast<std::size_t>(j)] = neg_loglik(simplex[static_cast<std::size_t>(j)]);
                }
            }
        }
    }

    if (!std::isfinite(fv[0]))
        throw dist_fit_error("gev ML: optimization failed to find a feasible optimum");
    ParamDistribution d;
    d.family = DistFamily::gev;
    d.params = {simplex[0][0], std::exp(simplex[0][1]), simplex[0][2]};
    d.loglik = -fv[0];
    return d;
}

} // namespace detail

// Maximum-likelihood fit of one family. Throws dist_fit_error when a sample is
// outside the family's support or the optimization does not converge.
inline ParamDistribution ml_fit(const std::vector<double> &samples, DistFamily family)
{
    if (samples.size() < 10)
        throw dist_fit_error("ml_fit: need at least 10 samples, got " +
                             std::to_string(samples.size()));
    switch (family)
    {
    case DistFamily::gamma:
        return detail::ml_fit_gamma(samples);
    case DistFamily::exponential:
        return detail::ml_fit_exponential(samples);
    case DistFamily::gev:
        return detail::ml_fit_gev(samples);
    case DistFamily::beta:
        return detail::ml_fit_beta(samples);
    default:
        return detail::ml_fit_uniform01(samples);
    }
}

// Akaike information criterion with the small-sample correction.
inline double aicc(double log_likelihood, int k_params, std::size_t n_samples)
{
    if (n_samples <= static_cast<std::size_t>(k_params) + 1)
        throw std::invalid_argument("aicc: need n > k + 1");
    double k = static_cast<double>(k_params);
    double n = static_cast<double>(n_samples);
    double aic = 2.0 * k - 2.0 * log_likelihood;
    return aic + (2.0 * k * k + 2.0 * k) / (n - k - 1.0);
}

struct FamilySelection {
    ParamDistribution chosen;
    std::vector<ParamDistribution> candidates; // every candidate that converged
    std::vector<std::string> warnings;         // families dropped with the reason
};

// Fit every candidate family, score by AICc, and pick. Candidates within
// delta <= 7 of the minimum compete on parameter count (fewest wins, ties
// broken by lower AICc); otherwise the AICc minimizer stands.
inline FamilySelection select_family(const std::vector<double> &samples,
                                     const std::vector<DistFamily> &families)
{
    if (families.size() < 1)
        throw std::invalid_argument("select_family: no candidate families");
    FamilySelection sel;
    for (DistFamily fam : families)
    {
        try
        {
            ParamDistribution d = ml_fit(samples, fam);
            d.aicc = aicc(d.loglik, d.n_params(), samples.size());
            sel.candidates.push_back(d);
        }
        catch (const dist_fit_error &e)
        {
            sel.warnings.push_back(std::string(to_string(fam)) + " dropped: " + e.what());
        }
    }
    if (sel.candidates.empty())
        throw dist_fit_error("select_family: every candidate family failed to fit");

    double aicc_min = sel.candidates[0].aicc;
    for (const auto &c : sel.candidates)
        aicc_min = std::min(aicc_min, c.aicc);
    for (auto &c : sel.candidates)
        c.delta_aicc = c.aicc - aicc_min;

    const ParamDistribution *pick = nullptr;
    for (const auto &c : sel.candidates)
    {
        if (c.delta_aicc > 7.0)
            continue;
        if (pick == nullptr || c.n_params() < pick->n_params() ||
            (c.n_params() == pick->n_params() && c.aicc < pick->aicc))
            pick = &c;
    }
    sel.chosen = *pick;
    return sel;
}

// Kolmogorov-Smirnov statistic of a sample against a fitted CDF.
inline double ks_statistic(std::vector<double> samples, const ParamDistribution &dist)
{
    std::sort(samples.begin(), samples.end());
    double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        double c = dist.cdf(samples[i]);
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - c));
        d = std::max(d, std::fabs(c - static_cast<double>(i) / n));
    }
    return d;
}

} // namespace losmodel

#endif
