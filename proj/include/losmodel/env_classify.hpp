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

#ifndef LOSMODEL_ENV_CLASSIFY_HPP
#define LOSMODEL_ENV_CLASSIFY_HPP

#include <string>
#include <vector>

#include "losmodel/los_extract.hpp"
#include "losmodel/scene.hpp"

namespace losmodel {

enum class EnvClass { RMa, SMa, UMa, MetMa };

inline const char *to_string(EnvClass e)
{
    switch (e)
    {
    case EnvClass::RMa:
        return "RMa";
    case EnvClass::SMa:
        return "SMa";
    case EnvClass::UMa:
        return "UMa";
    default:
        return "MetMa";
    }
}

inline EnvClass env_from_string(const std::string &s)
{
    if (s == "RMa" || s == "rma")
        return EnvClass::RMa;
    if (s == "SMa" || s == "sma")
        return EnvClass::SMa;
    if (s == "UMa" || s == "uma")
        return EnvClass::UMa;
    if (s == "MetMa" || s == "metma")
        return EnvClass::MetMa;
    throw parse_error("unknown environment class '" + s + "'");
}

// Per-cell building statistics over the analysis disk.
//  - avg_building_height: mean over buildings with known height intersecting the disk
//  - building_coverage: footprint area clipped to the disk, divided by disk area
//  - height_to_footprint_ratio: footprints with height info / all footprints in
//    the disk; defined as 1 when the disk holds no footprints
struct CellStats {
    double avg_building_height = 0.0;
    double building_coverage = 0.0;
    double height_to_footprint_ratio = 1.0;
    std::size_t footprint_count = 0;
};

inline CellStats cell_stats(const Scene &scene, const BaseStation &bs, double radius = 1000.0)
{
    if (!(radius > 0.0))
        throw std::invalid_argument("cell_stats: radius must be > 0");
    CellStats st;
    double clipped_total = 0.0;
    double height_sum = 0.0;
    std::size_t with_height = 0;
    const double r2 = radius * radius;
    for (const auto &b : scene.buildings)
    {
        // cheap reject: bbox vs disk
        double cx = std::clamp(bs.position.x, b.bbox.min_x, b.bbox.max_x) - bs.position.x;
        double cy = std::clamp(bs.position.y, b.bbox.min_y, b.bbox.max_y) - bs.position.y;
        if (cx * cx + cy * cy > r2)
            continue;
        double clipped = polygon_disk_intersection_area(b.footprint, bs.position, radius);
        if (clipped <= 1e-9)
            continue;
        ++st.footprint_count;
        clipped_total += clipped;
        if (b.has_height)
        {
            ++with_height;
            height_sum += b.height;
        }
    }
    st.building_coverage = clipped_total / (3.141592653589793238462643 * r2);
    if (st.footprint_count > 0)
        st.height_to_footprint_ratio =
            static_cast<double>(with_height) / static_cast<double>(st.footprint_count);
    if (with_height > 0)
        st.avg_building_height = height_sum / static_cast<double>(with_height);
    return st;
}

// Band boundaries are half-open, lower-inclusive. Any cell with building
// coverage below 10% is rural regardless of height.
inline EnvClass classify(const CellStats &st)
{
    if (st.building_coverage < 0.10)
        return EnvClass::RMa;
    if (st.avg_building_height < 10.0)
        return EnvClass::SMa;
    if (st.avg_building_height < 25.0)
        return EnvClass::UMa;
    return EnvClass::MetMa;
}

// Data-reliability filter on the height-to-footprint ratio.
template <typename Cell>
struct FilterResult {
    std::vector<Cell> kept;
    std::vector<Cell> dropped;
};

template <typename Cell>
FilterResult<Cell> filter_reliable(std::vector<std::pair<CellStats, Cell>> cells, double threshold = 0.90)
{
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw std::invalid_argument("filter_reliable: threshold must be in [0,1]");
    FilterResult<Cell> out;
    for (auto &c : cells)
    {
        if (c.first.height_to_footprint_ratio >= threshold)
            out.kept.push_back(std::move(c.second));
        else
            out.dropped.push_back(std::move(c.second));
    }
    return out;
}

} // namespace losmodel

#endif
