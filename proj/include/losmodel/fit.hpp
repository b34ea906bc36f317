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

#ifndef LOSMODEL_FIT_HPP
#define LOSMODEL_FIT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "losmodel/empirical.hpp"
#include "losmodel/model.hpp"

namespace losmodel {

enum class FitMetric { mse, msle, wmse_r, wmse_invp };

inline const char *to_string(FitMetric m)
{
    switch (m)
    {
    case FitMetric::mse:
        return "mse";
    case FitMetric::msle:
        return "msle";
    case FitMetric::wmse_r:
        return "wmse-r";
    default:
        return "wmse-invp";
    }
}

inline FitMetric fit_metric_from_string(const std::string &s)
{
    if (s == "mse")
        return FitMetric::mse;
    if (s == "msle")
        return FitMetric::msle;
    if (s == "wmse-r" || s == "wmse_r")
        return FitMetric::wmse_r;
    if (s == "wmse-invp" || s == "wmse_invp")
        return FitMetric::wmse_invp;
    throw parse_error("unknown fit metric '" + s + "'");
}

struct FitConfig {
    FitMetric metric = FitMetric::msle;
    double epsilon = 0.05;        // weight guard for the 1/(p+eps) scheme
    int n_starts = 10;            // grid points seeding the local descent
    double nsse_threshold = 0.2;  // outlier criterion
    bool fix_f = false;           // comparison mode: F pinned at 1 (d1/d2 form)

    // parameter grid: U in 5 m steps over [0, 1000], W log-spaced, F in 0.05 steps
    double grid_u_step = 5.0;
    double grid_u_max = 1000.0;
    double grid_w_min = 5.0;
    double grid_w_max = 5000.0;
    int grid_w_points = 40;
    double grid_f_step = 0.05;

    // projected descent
    int max_iterations = 500;
    double tolerance = 1e-10;
};

struct FitResult {
    LosModelParams params;
    double objective = 0.0;
    double mse_linear = 0.0; // plain MSE at the fitted params, for comparability
    double nsse = 0.0;
    bool is_outlier = false;
};

namespace detail {

// Probabilities below this are floored before taking logs; keeps the MSLE
// finite when a bin has no LOS points.
constexpr double msle_floor = 1e-3;

// Model evaluation made total on (and slightly beyond) the constraint box so
// finite-difference probes never hit overflow.
inline double model_value_safe(double U, double W, double F, double r)
{
    if (r <= U)
        return 1.0;
    if (W <= 0.0)
        return F * (U / r);
    double ex = std::exp(-r / W);
    return F * ((U / r) * (1.0 - ex) + ex);
}

} // namespace detail

// Fit objective of `params` against an empirical curve.
//   MSE        mean squared error on the linear scale
//   MSLE       mean squared error of the logarithms (floored at 1e-3)
//   WMSE_r     weights w(i) = r_mean of bin i
//   WMSE_invp  weights w(i) = 1 / (p_emp(i) + epsilon)
inline double fit_metric(const LosCurve &curve, const LosModelParams &params, const FitConfig &config)
{
    if (curve.empty())
        throw std::invalid_argument("fit_metric: empty curve");
    double sum = 0.0;
    for (const auto &bin : curve.bins)
    {
        double pm = detail::model_value_safe(params.U, params.W, params.F, bin.r_mean);
        switch (config.metric)
        {
        case FitMetric::mse:
            sum += (bin.p_emp - pm) * (bin.p_emp - pm);
            break;
        case FitMetric::msle: {
            double d = std::log(std::max(bin.p_emp, detail::msle_floor)) -
                       std::log(std::max(pm, detail::msle_floor));
            sum += d * d;
            break;
        }
        case FitMetric::wmse_r:
            sum += bin.r_mean * (bin.p_emp - pm) * (bin.p_emp - pm);
            break;
        case FitMetric::wmse_invp:
            sum += (bin.p_emp - pm) * (bin.p_emp - pm) / (bin.p_emp + config.epsilon);
            break;
        }
    }
    return sum / static_cast<double>(curve.bins.size());
}

// Normalized residual energy after fitting: sum((p_emp - p_model)^2) / sum(p_emp^2).
inline double nsse(const LosCurve &curve, const LosModelParams &params)
{
    if (curve.empty())
        throw std::invalid_argument("nsse: empty curve");
    double num = 0.0, den = 0.0;
    for (const auto &bin : curve.bins)
    {
        double pm = detail::model_value_safe(params.U, params.W, params.F, bin.r_mean);
        num += (bin.p_emp - pm) * (bin.p_emp - pm);
        den += bin.p_emp * bin.p_emp;
    }
    if (den == 0.0)
        throw std::invalid_argument("nsse: curve has no positive empirical probability");
    return num / den;
}

inline bool flag_outlier(const FitResult &result, double threshold = 0.2)
{
    return result.nsse > threshold;
}

namespace detail {

struct GridSeed {
    double objective;
    LosModelParams params;
};

// Evaluate the objective on the full (U, W, F) grid and keep the n best points.
inline std::vector<GridSeed> grid_search(const LosCurve &curve, const FitConfig &cfg)
{
    const std::size_t nb = curve.bins.size();
    std::vector<double> r(nb), pe(nb), lpe(nb), w(nb);
    for (std::size_t i = 0; i < nb; ++i)
    {
        r[i] = curve.bins[i].r_mean;
        pe[i] = curve.bins[i].p_emp;
        lpe[i] = std::log(std::max(pe[i], msle_floor));
        w[i] = (cfg.metric == FitMetric::wmse_r) ? r[i]
               : (cfg.metric == FitMetric::wmse_invp) ? 1.0 / (pe[i] + cfg.epsilon)
                                                      : 1.0;
    }
    const double inv_n = 1.0 / static_cast<double>(nb);
    const double lfloor = std::log(msle_floor);

    std::vector<double> u_values;
    for (double u = 0.0; u <= cfg.grid_u_max + 1e-9; u += cfg.grid_u_step)
        u_values.push_back(std::min(u, cfg.grid_u_max));
    std::vector<double> w_values(static_cast<std::size_t>(cfg.grid_w_points));
    for (int k = 0; k < cfg.grid_w_points; ++k)
        w_values[static_cast<std::size_t>(k)] =
            cfg.grid_w_min * std::pow(cfg.grid_w_max / cfg.grid_w_min,
                                      static_cast<double>(k) / static_cast<double>(cfg.grid_w_points - 1));
    std::vector<double> f_values;
    if (cfg.fix_f)
        f_values.push_back(1.0);
    else
        for (double f = 0.0; f <= 1.0 + 1e-9; f += cfg.grid_f_step)
            f_values.push_back(std::min(f, 1.0));

    const bool grid_f_continuous = !cfg.fix_f;
    const std::size_t keep = static_cast<std::size_t>(std::max(cfg.n_starts, 1));
    std::vector<GridSeed> best; // kept sorted ascending by objective
    best.reserve(keep + 1);
    auto offer = [&](double obj, double U, double W, double F) {
        if (best.size() == keep && obj >= best.back().objective)
            return;
        GridSeed seed{obj, {U, W, F}};
        auto pos = std::lower_bound(best.begin(), best.end(), obj,
                                    [](const GridSeed &s, double v) { return s.objective < v; });
        best.insert(pos, seed);
        if (best.size() > keep)
            best.pop_back();
    };

    std::vector<double> ex(nb), g(nb), lg(nb);
    for (double W : w_values)
    {
        for (std::size_t i = 0; i < nb; ++i)
            ex[i] = std::exp(-r[i] / W);
        for (double U : u_values)
        {
            // first bin index with r > U; bins below contribute p_model = 1
            std::size_t su = static_cast<std::size_t>(
                std::upper_bound(r.begin(), r.end(), U) - r.begin());
            double head = 0.0;
            if (cfg.metric == FitMetric::msle)
                for (std::size_t i = 0; i < su; ++i)
                    head += lpe[i] * lpe[i];
            else
                for (std::size_t i = 0; i < su; ++i)
                    head += w[i] * (pe[i] - 1.0) * (pe[i] - 1.0);

            for (std::size_t i = su; i < nb; ++i)
            {
                g[i] = (U / r[i]) * (1.0 - ex[i]) + ex[i];
                if (cfg.metric == FitMetric::msle)
                    lg[i] = std::log(g[i]);
            }

            if (cfg.metric == FitMetric::msle)
            {
                // the per-(U, W) optimal F (log-mean residual, floor ignored)
                // joins the F grid; without it the grid ranking is dominated
                // by degenerate small-W points that absorb the F-grid error
                std::vector<double> f_cand(f_values);
                if (grid_f_continuous && su < nb)
                {
                    double mean_resid = 0.0;
                    for (std::size_t i = su; i < nb; ++i)
                        mean_resid += lpe[i] - lg[i];
                    mean_resid /= static_cast<double>(nb - su);
                    f_cand.push_back(std::exp(std::min(0.0, mean_resid)));
                }
                for (double F : f_cand)
                {
                    double lf = F > 0.0 ? std::log(F) : -std::numeric_limits<double>::infinity();
                    double sum = head;
                    for (std::size_t i = su; i < nb; ++i)
                    {
                        double lpm = std::max(lf + lg[i], lfloor);
                        double d = lpe[i] - lpm;
                        sum += d * d;
                    }
                    offer(sum * inv_n, U, W, F);
                }
            }
            else
            {
                // tail factors as A - 2FB + F^2 C for the squared-error metrics
                double A = 0.0, B = 0.0, C = 0.0;
                for (std::size_t i = su; i < nb; ++i)
                {
                    A += w[i] * pe[i] * pe[i];
                    B += w[i] * pe[i] * g[i];
                    C += w[i] * g[i] * g[i];
                }
                std::vector<double> f_cand(f_values);
                if (grid_f_continuous && C > 0.0)
                    f_cand.push_back(std::clamp(B / C, 0.0, 1.0));
                for (double F : f_cand)
                    offer((head + A - 2.0 * F * B + F * F * C) * inv_n, U, W, F);
            }
        }
    }
    return best;
}

// Projected descent with central finite differences and backtracking. The
// objective is smooth in (W, F) but only piecewise smooth in U: each bin
// center is a breakpoint where a bin flips between the constant and decaying
// branches. The iteration therefore alternates a spectral projected gradient
// stage over (W, F) with an exact 1-D search over U inside the intervals
// between breakpoints.
inline GridSeed descend(const LosCurve &curve, const FitConfig &cfg, const LosModelParams &start)
{
    const double w_scale = 1000.0;
    double U = std::clamp(start.U, 0.0, cfg.grid_u_max);
    double W = std::max(start.W, 0.0);
    double F = cfg.fix_f ? 1.0 : std::clamp(start.F, 0.0, 1.0);

    auto eval = [&](double u, double w, double f) {
        return fit_metric(curve, {u, w, f}, cfg);
    };
    double best = eval(U, W, F);

    // spectral projected gradient over (W, F) with U fixed
    auto descend_wf = [&](int budget) {
        std::array<double, 2> y{W / w_scale, F};
        const double lo[2] = {0.0, cfg.fix_f ? 1.0 : 0.0};
        const double hi[2] = {std::numeric_limits<double>::infinity(), 1.0};
        auto project = [&](std::array<double, 2> z) {
            z[0] = std::max(z[0], lo[0]);
            z[1] = std::clamp(z[1], lo[1], hi[1]);
            return z;
        };
        auto evaly = [&](const std::array<double, 2> &z) { return eval(U, z[0] * w_scale, z[1]); };
        auto gradient = [&](const std::array<double, 2> &z) {
            std::array<double, 2> g{};
            for (int j = 0; j < 2; ++j)
            {
                if (cfg.fix_f && j == 1)
                    continue;
                double h = 1e-4 * std::max(std::fabs(z[j]), 1e-3);
                std::array<double, 2> a = z, b = z;
                a[j] = std::min(z[j] + h, hi[j]);
                b[j] = std::max(z[j] - h, lo[j]);
                double span = a[j] - b[j];
                if (span > 0.0)
                    g[j] = (evaly(a) - evaly(b)) / span;
            }
            return g;
        };

        double f = best;
        auto grad = gradient(y);
        double alpha = 1.0;
        int small_gains = 0;
        for (int iter = 0; iter < budget; ++iter)
        {
            if (grad[0] == 0.0 && grad[1] == 0.0)
                break;
            bool accepted = false;
            double trial = std::clamp(alpha, 1e-12, 1e8);
            for (int half = 0; half < 80; ++half)
            {
                std::array<double, 2> cand = project({y[0] - trial * grad[0], y[1] - trial * grad[1]});
                double fc = evaly(cand);
                if (fc < f)
                {
                    double gain = f - fc;
                    auto g_new = gradient(cand);
                    double ss = 0.0, sy = 0.0;
                    for (int j = 0; j < 2; ++j)
                    {
                        double s = cand[j] - y[j];
                        ss += s * s;
                        sy += s * (g_new[j] - grad[j]);
                    }
                    alpha = (sy > 0.0 && ss > 0.0) ? ss / sy : trial * 2.0;
                    y = cand;
                    f = fc;
                    grad = g_new;
                    accepted = true;
                    // BB gains oscillate; require a sustained run below tolerance
                    small_gains = (gain < cfg.tolerance) ? small_gains + 1 : 0;
                    break;
                }
                trial *= 0.5;
            }
            if (!accepted || small_gains >= 10)
                break;
        }
        W = y[0] * w_scale;
        F = y[1];
        best = f;
    };

    // golden-section minimization of U over one smooth interval [a, b]
    auto golden_u = [&](double a, double b) {
        const double gr = 0.6180339887498949;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = eval(x1, W, F), f2 = eval(x2, W, F);
        for (int it = 0; it < 50 && (b - a) > 1e-10 * cfg.grid_u_max; ++it)
        {
            if (f1 < f2)
            {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = eval(x1, W, F);
            }
            else
            {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = eval(x2, W, F);
            }
        }
        double xm = 0.5 * (a + b);
        return std::pair<double, double>(xm, eval(xm, W, F));
    };

    // exact search over U: the nearby inter-breakpoint intervals plus their
    // closed endpoints
    auto search_u = [&]() {
        std::vector<double> edges;
        edges.push_back(0.0);
        for (const auto &bin : curve.bins)
            if (bin.r_mean < cfg.grid_u_max)
                edges.push_back(bin.r_mean);
        edges.push_back(cfg.grid_u_max);
        auto it = std::upper_bound(edges.begin(), edges.end(), U);
        long idx = std::max<long>(0, (it - edges.begin()) - 1);
        long first = std::max<long>(0, idx - 4);
        long last = std::min<long>(static_cast<long>(edges.size()) - 2, idx + 4);
        for (long k = first; k <= last; ++k)
        {
            double a = edges[static_cast<std::size_t>(k)];
            double b = edges[static_cast<std::size_t>(k + 1)];
            for (double cand : {a, b}) // closed endpoints (r <= U is inclusive)
            {
                double fc = eval(cand, W, F);
                if (fc < best)
                {
                    best = fc;
                    U = cand;
                }
            }
            auto [xm, fm] = golden_u(a, b);
            if (fm < best)
            {
                best = fm;
                U = xm;
            }
        }
    };

    // coupled 3-D spectral step; the block alternation can stall where a
    // joint (U, F) move is needed
    auto descend_uwf = [&](int budget) {
        std::array<double, 3> y{U / 1000.0, W / w_scale, F};
        const double lo[3] = {0.0, 0.0, cfg.fix_f ? 1.0 : 0.0};
        const double hi[3] = {cfg.grid_u_max / 1000.0, std::numeric_limits<double>::infinity(), 1.0};
        auto project = [&](std::array<double, 3> z) {
            for (int j = 0; j < 3; ++j)
                z[j] = std::clamp(z[j], lo[j], hi[j]);
            return z;
        };
        auto evaly = [&](const std::array<double, 3> &z) {
            return eval(z[0] * 1000.0, z[1] * w_scale, z[2]);
        };
        auto gradient = [&](const std::array<double, 3> &z) {
            std::array<double, 3> g{};
            for (int j = 0; j < 3; ++j)
            {
                if (cfg.fix_f && j == 2)
                    continue;
                double h = 1e-4 * std::max(std::fabs(z[j]), 1e-3);
                std::array<double, 3> a = z, b = z;
                a[j] = std::min(z[j] + h, hi[j]);
                b[j] = std::max(z[j] - h, lo[j]);
                double span = a[j] - b[j];
                if (span > 0.0)
                    g[j] = (evaly(a) - evaly(b)) / span;
            }
            return g;
        };
        double f = best;
        auto grad = gradient(y);
        double alpha = 1.0;
        int small_gains = 0;
        for (int iter = 0; iter < budget; ++iter)
        {
            if (grad[0] == 0.0 && grad[1] == 0.0 && grad[2] == 0.0)
                break;
            bool accepted = false;
            double trial = std::clamp(alpha, 1e-12, 1e8);
            for (int half = 0; half < 80; ++half)
            {
                std::array<double, 3> cand =
                    project({y[0] - trial * grad[0], y[1] - trial * grad[1], y[2] - trial * grad[2]});
                double fc = evaly(cand);
                if (fc < f)
                {
                    double gain = f - fc;
                    auto g_new = gradient(cand);
                    double ss = 0.0, sy = 0.0;
                    for (int j = 0; j < 3; ++j)
                    {
                        double s = cand[j] - y[j];
                        ss += s * s;
                        sy += s * (g_new[j] - grad[j]);
                    }
                    alpha = (sy > 0.0 && ss > 0.0) ? ss / sy : trial * 2.0;
                    y = cand;
                    f = fc;
                    grad = g_new;
                    accepted = true;
                    small_gains = (gain < cfg.tolerance) ? small_gains + 1 : 0;
                    break;
                }
                trial *= 0.5;
            }
            if (!accepted || small_gains >= 10)
                break;
        }
        U = y[0] * 1000.0;
        W = y[1] * w_scale;
        F = y[2];
        best = f;
    };

    const int rounds = 6;
    int wf_budget = std::max(cfg.max_iterations / rounds, 40);
    for (int round = 0; round < rounds; ++round)
    {
        double before = best;
        descend_wf(wf_budget);
        search_u();
        descend_uwf(wf_budget);
        if (before - best < cfg.tolerance)
            break;
    }
    return {best, {U, W, F}};
}

} // namespace detail

// Grid-seeded multi-start constrained fit of (U, W, F) to an empirical curve.
// The n_starts best grid points each seed a projected descent; the candidate
// with the lowest final objective wins. nsse and the outlier flag are filled
// from the winning parameters.
inline FitResult fit_cell(const LosCurve &curve, const FitConfig &config = {})
{
    if (curve.bins.size() < 3)
        throw std::invalid_argument("fit_cell: need at least 3 bins, got " +
                                    std::to_string(curve.bins.size()));
    auto seeds = detail::grid_search(curve, config);
    detail::GridSeed best{std::numeric_limits<double>::infinity(), {}};
    for (const auto &seed : seeds)
    {
        detail::GridSeed refined = detail::descend(curve, config, seed.params);
        // descent never worsens a seed, but keep the guard explicit
        if (refined.objective > seed.objective)
            refined = seed;
        if (refined.objective < best.objective)
            best = refined;
    }

    FitResult res;
    res.params = best.params;
    res.objective = best.objective;
    FitConfig mse_cfg = config;
    mse_cfg.metric = FitMetric::mse;
    res.mse_linear = fit_metric(curve, res.params, mse_cfg);
    double den = 0.0;
    for (const auto &bin : curve.bins)
        den += bin.p_emp * bin.p_emp;
    if (den == 0.0)
    {
        // an identically-zero empirical curve carries no usable LOS signal
        res.nsse = std::numeric_limits<double>::infinity();
        res.is_outlier = true;
    }
    else
    {
        res.nsse = nsse(curve, res.params);
        res.is_outlier = res.nsse > config.nsse_threshold;
    }
    return res;
}

} // namespace losmodel

#endif
