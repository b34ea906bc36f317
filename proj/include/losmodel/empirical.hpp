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

#ifndef LOSMODEL_EMPIRICAL_HPP
#define LOSMODEL_EMPIRICAL_HPP

#include <cmath>
#include <string>
#include <vector>

#include "losmodel/los_extract.hpp"

namespace losmodel {

// One occupied distance bin: mean distance of its members, empirical LOS
// probability, member count. Empty bins are never emitted.
struct LosBin {
    double r_mean = 0.0;
    double p_emp = 0.0;
    std::size_t count = 0;
};

struct LosCurve {
    std::vector<LosBin> bins; // ordered by r_mean
    std::string source;       // cell id or environment tag

    bool empty() const { return bins.empty(); }
};

// Distance binning with lower-inclusive bins [w*(i-1), w*i). A sample at
// exactly max_radius lands in the last bin. Bins with no members are omitted;
// the fit objective iterates over observed bins only.
inline LosCurve bin_samples(const CellLosData &data, double bin_width = 5.0, double max_radius = 1000.0)
{
    if (!(bin_width > 0.0) || !(max_radius > 0.0))
        throw std::invalid_argument("bin_samples: bin_width and max_radius must be > 0");
    LosCurve curve;
    curve.source = data.bs_id;
    const std::size_t n_bins = static_cast<std::size_t>(std::ceil(max_radius / bin_width - 1e-12));
    std::vector<double> dist_sum(n_bins, 0.0);
    std::vector<std::size_t> los_count(n_bins, 0), count(n_bins, 0);
    for (const auto &s : data.samples)
    {
        if (s.distance_2d <= 0.0 || s.distance_2d > max_radius)
            continue;
        std::size_t idx = static_cast<std::size_t>(s.distance_2d / bin_width);
        if (idx >= n_bins)
            idx = n_bins - 1; // distance exactly max_radius
        dist_sum[idx] += s.distance_2d;
        los_count[idx] += s.is_los ? 1 : 0;
        count[idx] += 1;
    }
    for (std::size_t i = 0; i < n_bins; ++i)
    {
        if (count[i] == 0)
            continue;
        LosBin bin;
        bin.count = count[i];
        bin.r_mean = dist_sum[i] / static_cast<double>(count[i]);
        bin.p_emp = static_cast<double>(los_count[i]) / static_cast<double>(count[i]);
        curve.bins.push_back(bin);
    }
    return curve;
}

// Environment-average curve: raw samples of all member cells are concatenated
// before binning. This builds the hypothetical typical cell; it is not the
// same as averaging fitted parameters or curves.
inline LosCurve pool_cells(const std::vector<CellLosData> &cells, const std::string &env_tag,
                           double bin_width = 5.0, double max_radius = 1000.0)
{
    if (cells.empty())
        throw std::invalid_argument("pool_cells: no cells for environment '" + env_tag + "'");
    CellLosData merged;
    merged.bs_id = env_tag;
    for (const auto &c : cells)
        merged.samples.insert(merged.samples.end(), c.samples.begin(), c.samples.end());
    return bin_samples(merged, bin_width, max_radius);
}

} // namespace losmodel

#endif
