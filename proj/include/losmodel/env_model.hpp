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

#ifndef LOSMODEL_ENV_MODEL_HPP
#define LOSMODEL_ENV_MODEL_HPP

#include <array>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "losmodel/distributions.hpp"
#include "losmodel/env_classify.hpp"
#include "losmodel/fit.hpp"

namespace losmodel {

using Matrix3 = std::array<std::array<double, 3>, 3>;

// Statistical model of one environment: fitted marginals for U, W, F plus
// their pairwise Pearson correlation matrix. This is the interchange contract
// between distribution fitting and triplet sampling.
struct EnvParamModel {
    EnvClass env = EnvClass::UMa;
    std::size_t n_cells = 0;
    ParamDistribution dist_U, dist_W, dist_F;
    FamilySelection selection_U, selection_W, selection_F;
    Matrix3 correlation{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    std::vector<std::string> warnings;
};

namespace detail {

inline double pearson(const std::vector<double> &a, const std::vector<double> &b)
{
    double ma = 0.0, mb = 0.0;
    double n = static_cast<double>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0)
        return 0.0;
    return sab / std::sqrt(saa * sbb);
}

// Jacobi eigendecomposition for a symmetric 3x3; enough for the PSD check.
inline void symmetric_eigen3(Matrix3 m, Matrix3 &vectors, std::array<double, 3> &values)
{
    vectors = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    for (int sweep = 0; sweep < 50; ++sweep)
    {
        double off = std::fabs(m[0][1]) + std::fabs(m[0][2]) + std::fabs(m[1][2]);
        if (off < 1e-15)
            break;
        for (int p = 0; p < 3; ++p)
            for (int q = p + 1; q < 3; ++q)
            {
                if (std::fabs(m[p][q]) < 1e-18)
                    continue;
                double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                Matrix3 r = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
                r[p][p] = c;
                r[q][q] = c;
                r[p][q] = s;
                r[q][p] = -s;
                // m = r^T m r
                Matrix3 tmp{};
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        for (int k = 0; k < 3; ++k)
                            tmp[i][j] += r[k][i] * m[k][j];
                Matrix3 m2{};
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        for (int k = 0; k < 3; ++k)
                            m2[i][j] += tmp[i][k] * r[k][j];
                m = m2;
                Matrix3 v2{};
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        for (int k = 0; k < 3; ++k)
                            v2[i][j] += vectors[i][k] * r[k][j];
                vectors = v2;
            }
    }
    values = {m[0][0], m[1][1], m[2][2]};
}

} // namespace detail

inline double min_eigenvalue(const Matrix3 &m)
{
    Matrix3 vec;
    std::array<double, 3> val;
    detail::symmetric_eigen3(m, vec, val);
    return std::min({val[0], val[1], val[2]});
}

// Nearest positive-semidefinite correlation matrix: clip negative eigenvalues
// at zero, reconstruct, renormalize the diagonal to 1.
inline Matrix3 project_to_psd(const Matrix3 &m)
{
    Matrix3 vec;
    std::array<double, 3> val;
    detail::symmetric_eigen3(m, vec, val);
    bool ok = true;
    for (double v : val)
        ok = ok && v >= 0.0;
    if (ok)
        return m;
    for (auto &v : val)
        v = std::max(v, 0.0);
    Matrix3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                r[i][j] += vec[i][k] * val[static_cast<std::size_t>(k)] * vec[j][k];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j)
            {
                double d = std::sqrt(r[i][i] * r[j][j]);
                r[i][j] = d > 0.0 ? r[i][j] / d : 0.0;
            }
    for (int i = 0; i < 3; ++i)
        r[i][i] = 1.0;
    // symmetrize against accumulation error
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
        {
            double v = 0.5 * (r[i][j] + r[j][i]);
            r[i][j] = v;
            r[j][i] = v;
        }
    return r;
}

// Fit the per-environment parameter model from non-outlier cell fits.
// U and W compete over {gamma, exponential, gev}; F over {beta, uniform}.
// U and W values at exactly 0 (constraint-box boundary hits) are nudged to a
// tiny positive value so they stay inside the gamma/exponential support.
inline EnvParamModel fit_environment(const std::vector<FitResult> &fits, EnvClass env,
                                     std::size_t min_cells = 10)
{
    if (fits.size() < min_cells)
        throw dist_fit_error("fit_environment(" + std::string(to_string(env)) + "): need at least " +
                             std::to_string(min_cells) + " cells, got " + std::to_string(fits.size()));
    EnvParamModel model;
    model.env = env;
    model.n_cells = fits.size();

    std::vector<double> u, w, f;
    for (const auto &r : fits)
    {
        u.push_back(std::max(r.params.U, 1e-6));
        w.push_back(std::max(r.params.W, 1e-6));
        f.push_back(r.params.F);
    }

    const std::vector<DistFamily> positive_families{DistFamily::gamma, DistFamily::exponential,
                                                    DistFamily::gev};
    const std::vector<DistFamily> unit_families{DistFamily::beta, DistFamily::uniform01};

    model.selection_U = select_family(u, positive_families);
    model.selection_W = select_family(w, positive_families);
    model.selection_F = select_family(f, unit_families);
    model.dist_U = model.selection_U.chosen;
    model.dist_W = model.selection_W.chosen;
    model.dist_F = model.selection_F.chosen;
    for (const auto &s : {&model.selection_U, &model.selection_W, &model.selection_F})
        for (const auto &warn : s->warnings)
            model.warnings.push_back(warn);

    double r_uw = detail::pearson(u, w);
    double r_uf = detail::pearson(u, f);
    double r_wf = detail::pearson(w, f);
    model.correlation = {{{1.0, r_uw, r_uf}, {r_uw, 1.0, r_wf}, {r_uf, r_wf, 1.0}}};
    model.correlation = project_to_psd(model.correlation);
    return model;
}

namespace detail {

inline nlohmann::json dist_to_json(const ParamDistribution &d)
{
    nlohmann::json j;
    j["family"] = to_string(d.family);
    switch (d.family)
    {
    case DistFamily::gamma:
        j["params"] = {{"k", d.params[0]}, {"theta", d.params[1]}};
        break;
    case DistFamily::exponential:
        j["params"] = {{"theta", d.params[0]}};
        break;
    case DistFamily::gev:
        j["params"] = {{"k", d.params[0]}, {"sigma", d.params[1]}, {"mu", d.params[2]}};
        break;
    case DistFamily::beta:
        j["params"] = {{"alpha", d.params[0]}, {"beta", d.params[1]}};
        break;
    default:
        j["params"] = nlohmann::json::object();
    }
    j["loglik"] = d.loglik;
    j["aicc"] = d.aicc;
    j["delta_aicc"] = d.delta_aicc;
    return j;
}

inline ParamDistribution dist_from_json(const nlohmann::json &j)
{
    ParamDistribution d;
    d.family = dist_family_from_string(j.at("family").get<std::string>());
    const auto &p = j.at("params");
    switch (d.family)
    {
    case DistFamily::gamma:
        d.params = {p.at("k").get<double>(), p.at("theta").get<double>(), 0.0};
        break;
    case DistFamily::exponential:
        d.params = {p.at("theta").get<double>(), 0.0, 0.0};
        break;
    case DistFamily::gev:
        d.params = {p.at("k").get<double>(), p.at("sigma").get<double>(), p.at("mu").get<double>()};
        break;
    case DistFamily::beta:
        d.params = {p.at("alpha").get<double>(), p.at("beta").get<double>(), 0.0};
        break;
    default:
        break;
    }
    d.loglik = j.value("loglik", 0.0);
    d.aicc = j.value("aicc", 0.0);
    d.delta_aicc = j.value("delta_aicc", 0.0);
    return d;
}

} // namespace detail

inline nlohmann::json env_model_to_json(const EnvParamModel &model)
{
    nlohmann::json j;
    j["env"] = to_string(model.env);
    j["n_cells"] = model.n_cells;
    j["marginals"]["U"] = detail::dist_to_json(model.dist_U);
    j["marginals"]["W"] = detail::dist_to_json(model.dist_W);
    j["marginals"]["F"] = detail::dist_to_json(model.dist_F);
    auto candidates = [](const FamilySelection &sel) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto &c : sel.candidates)
            arr.push_back(detail::dist_to_json(c));
        return arr;
    };
    j["candidates"]["U"] = candidates(model.selection_U);
    j["candidates"]["W"] = candidates(model.selection_W);
    j["candidates"]["F"] = candidates(model.selection_F);
    j["correlation"] = {
        {model.correlation[0][0], model.correlation[0][1], model.correlation[0][2]},
        {model.correlation[1][0], model.correlation[1][1], model.correlation[1][2]},
        {model.correlation[2][0], model.correlation[2][1], model.correlation[2][2]},
    };
    if (!model.warnings.empty())
        j["warnings"] = model.warnings;
    return j;
}

inline EnvParamModel env_model_from_json(const nlohmann::json &j)
{
    EnvParamModel model;
    model.env = env_from_string(j.at("env").get<std::string>());
    model.n_cells = j.value("n_cells", std::size_t{0});
    model.dist_U = detail::dist_from_json(j.at("marginals").at("U"));
    model.dist_W = detail::dist_from_json(j.at("marginals").at("W"));
    model.dist_F = detail::dist_from_json(j.at("marginals").at("F"));
    const auto &corr = j.at("correlation");
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            model.correlation[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
                corr.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(k)).get<double>();
    return model;
}

inline void save_env_model(const EnvParamModel &model, const std::string &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw stage_error("distfit", "cannot write '" + path + "'");
    out << env_model_to_json(model).dump(1) << "\n";
}

inline EnvParamModel load_env_model(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw parse_error("cannot open '" + path + "'");
    nlohmann::json j;
    try
    {
        in >> j;
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw parse_error(path + ": " + e.what());
    }
    try
    {
        return env_model_from_json(j);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw parse_error(path + ": " + e.what());
    }
}

} // namespace losmodel

#endif
