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

#ifndef LOSMODEL_OUTAGE_HPP
#define LOSMODEL_OUTAGE_HPP

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "losmodel/copula.hpp"
#include "losmodel/model.hpp"

namespace losmodel {

// Two-BS downlink scenario: UE served by BS1 with BS2 interfering from the
// opposite side, d_bs2 = 2 * cell_radius - d_bs1.
struct SimConfig {
    double frequency_ghz = 0.74;
    double bs_height = 25.0;
    double ue_height = 0.0;
    double cell_radius = 500.0;
    double sir_threshold_db = 0.399;
    std::vector<double> d_bs1_values{100.0, 200.0, 300.0, 400.0, 500.0};
    std::size_t n_param_pairs = 1000;
    std::size_t n_los_realizations = 1000;
    double sigma_los_db = 4.0;
    double sigma_nlos_db = 6.0;
    std::uint64_t seed = 1;
};

// 3GPP TR 38.901 UMa breakpoint distance (environment height 1 m, valid for
// UE heights below 13 m).
inline double breakpoint_distance(const SimConfig &config)
{
    double ue_eff = std::max(config.ue_height, 1.5);
    constexpr double c = 299792458.0;
    return 4.0 * (config.bs_height - 1.0) * (ue_eff - 1.0) * (config.frequency_ghz * 1e9) / c;
}

// TR 38.901 UMa pathloss. The UE height is floored at 1.5 m inside this
// formula only (the standard is defined for h_UT >= 1.5 m); the LOS draw uses
// ground level independently. Both LOS segments are implemented: at 740 MHz
// with a 25 m BS the breakpoint sits near 118 m, well inside the simulated
// distances.
inline double pathloss_db(double d_2d, bool is_los, const SimConfig &config)
{
    if (!(d_2d > 0.0))
        throw std::domain_error("pathloss_db: d_2d must be > 0");
    double ue_eff = std::max(config.ue_height, 1.5);
    double dh = config.bs_height - ue_eff;
    double d_3d = std::sqrt(d_2d * d_2d + dh * dh);
    double fc = config.frequency_ghz;

    double d_bp = breakpoint_distance(config);
    double pl_los;
    if (d_2d <= d_bp)
        pl_los = 28.0 + 22.0 * std::log10(d_3d) + 20.0 * std::log10(fc);
    else
        pl_los = 28.0 + 40.0 * std::log10(d_3d) + 20.0 * std::log10(fc) -
                 9.0 * std::log10(d_bp * d_bp + dh * dh);
    if (is_los)
        return pl_los;
    double pl_nlos = 13.54 + 39.08 * std::log10(d_3d) + 20.0 * std::log10(fc) -
                     0.6 * (ue_eff - 1.5);
    return std::max(pl_los, pl_nlos);
}

// LOS probability model of one link: the (U, W, F) form or the d1/d2 form.
struct LinkLosModel {
    enum class Kind { uwf, d1d2 };
    Kind kind = Kind::uwf;
    LosModelParams uwf;
    D1D2Params d1d2;

    double p(double r) const { return kind == Kind::uwf ? p_los(uwf, r) : p_los_3gpp(d1d2, r); }

    static LinkLosModel from_params(const LosModelParams &p)
    {
        LinkLosModel m;
        m.kind = Kind::uwf;
        m.uwf = p;
        return m;
    }
    static LinkLosModel from_d1d2(const D1D2Params &p)
    {
        LinkLosModel m;
        m.kind = Kind::d1d2;
        m.d1d2 = p;
        return m;
    }
};

// Source of per-pair (BS1, BS2) LOS-model draws. The ensemble source draws a
// fresh correlated triplet per BS per pair; fixed sources return the same
// models every pair (average and 3GPP modes).
class ParamPairSource {
  public:
    virtual ~ParamPairSource() = default;
    virtual std::pair<LinkLosModel, LinkLosModel> next_pair() = 0;
};

class FixedPairSource : public ParamPairSource {
  public:
    FixedPairSource(LinkLosModel a, LinkLosModel b) : a_(a), b_(b) {}
    std::pair<LinkLosModel, LinkLosModel> next_pair() override { return {a_, b_}; }

  private:
    LinkLosModel a_, b_;
};

class EnsemblePairSource : public ParamPairSource {
  public:
    EnsemblePairSource(const EnvParamModel &model, std::uint64_t seed) : sampler_(model, seed) {}
    std::pair<LinkLosModel, LinkLosModel> next_pair() override
    {
        LinkLosModel a = LinkLosModel::from_params(sampler_.sample_triplet());
        LinkLosModel b = LinkLosModel::from_params(sampler_.sample_triplet());
        return {a, b};
    }

  private:
    TripletSampler sampler_;
};

struct OutageResult {
    std::string model_tag;
    double d_bs1 = 0.0;
    std::vector<double> outage_values; // one per parameter pair
    double mean_outage = 0.0;

    double variance() const
    {
        double m = mean_outage, v = 0.0;
        for (double x : outage_values)
            v += (x - m) * (x - m);
        return outage_values.empty() ? 0.0 : v / static_cast<double>(outage_values.size());
    }
};

// Monte Carlo SIR outage. Per distance and parameter pair: draw the LOS state
// of each link (uniform u < p_los), add log-normal shadowing by state, and
// count SIR_dB = (PL2 - PL1) + S1 - S2 below threshold over the realizations.
inline std::vector<OutageResult> simulate(ParamPairSource &source, const SimConfig &config,
                                          const std::string &model_tag)
{
    std::vector<OutageResult> results;
    Rng master(config.seed);
    for (std::size_t di = 0; di < config.d_bs1_values.size(); ++di)
    {
        double d1 = config.d_bs1_values[di];
        double d2 = 2.0 * config.cell_radius - d1;
        if (!(d1 > 0.0) || !(d2 > 0.0))
            throw std::invalid_argument("simulate: UE distance outside the two-cell segment");

        // pathloss per link and LOS state is fixed across realizations
        const double pl1[2] = {pathloss_db(d1, false, config), pathloss_db(d1, true, config)};
        const double pl2[2] = {pathloss_db(d2, false, config), pathloss_db(d2, true, config)};
        const double sigma[2] = {config.sigma_nlos_db, config.sigma_los_db};

        OutageResult res;
        res.model_tag = model_tag;
        res.d_bs1 = d1;
        res.outage_values.reserve(config.n_param_pairs);
        Rng rng = master.substream("outage-distance", di);

        double total = 0.0;
        for (std::size_t pair = 0; pair < config.n_param_pairs; ++pair)
        {
            auto [m1, m2] = source.next_pair();
            double p1 = m1.p(d1);
            double p2 = m2.p(d2);
            std::size_t events = 0;
            for (std::size_t k = 0; k < config.n_los_realizations; ++k)
            {
                int los1 = rng.uniform01() < p1 ? 1 : 0;
                int los2 = rng.uniform01() < p2 ? 1 : 0;
                double s1 = rng.normal(0.0, sigma[los1]);
                double s2 = rng.normal(0.0, sigma[los2]);
                double sir_db = (pl2[los2] - pl1[los1]) + s1 - s2;
                if (sir_db < config.sir_threshold_db)
                    ++events;
            }
            double outage = static_cast<double>(events) / static_cast<double>(config.n_los_realizations);
            res.outage_values.push_back(outage);
            total += outage;
        }
        res.mean_outage = total / static_cast<double>(config.n_param_pairs);
        results.push_back(std::move(res));
    }
    return results;
}

// Plot-ready empirical CDF: sorted outage values with cumulative fractions.
inline std::vector<std::pair<double, double>> outage_cdf(const OutageResult &result)
{
    if (result.outage_values.empty())
        throw std::invalid_argument("outage_cdf: no outage values");
    std::vector<double> sorted(result.outage_values);
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<double, double>> cdf;
    cdf.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        cdf.emplace_back(sorted[i], static_cast<double>(i + 1) / static_cast<double>(sorted.size()));
    return cdf;
}

} // namespace losmodel

#endif
