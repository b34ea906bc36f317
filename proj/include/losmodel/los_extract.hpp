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

#ifndef LOSMODEL_LOS_EXTRACT_HPP
#define LOSMODEL_LOS_EXTRACT_HPP

#include <cmath>
#include <string>
#include <vector>

#include "losmodel/scene.hpp"
#include "losmodel/spatial_index.hpp"

namespace losmodel {

// One labeled street point: horizontal distance to the BS plus the optical
// line-of-sight verdict at ground (or configured UE) height.
struct LosSample {
    Point2 point;
    double distance_2d = 0.0;
    bool is_los = false;
};

struct CellLosData {
    std::string bs_id;
    std::vector<LosSample> samples;
    double ue_height = 0.0;

    bool usable() const { return !samples.empty(); }
};

struct ExtractConfig {
    double radius = 1000.0;  // analysis radius around the BS
    double spacing = 5.0;    // street sampling interval
    double ue_height = 0.0;  // street point height above ground
    double step = 1.0;       // ray sampling step
};

// Points along each polyline at arc-length multiples of `spacing` (the final
// vertex is always included), filtered to within `radius` of the BS. Points
// coinciding with the BS position are dropped: a sample must have distance > 0.
inline std::vector<Point2> sample_streets(const StreetNetwork &streets, const BaseStation &bs,
                                          double radius = 1000.0, double spacing = 5.0)
{
    if (!(radius > 0.0) || !(spacing > 0.0))
        throw std::invalid_argument("sample_streets: radius and spacing must be > 0");
    std::vector<Point2> out;
    for (const auto &pl : streets.polylines)
    {
        double total = 0.0;
        std::vector<double> cum(pl.size(), 0.0);
        for (std::size_t i = 1; i < pl.size(); ++i)
        {
            total += distance(pl[i - 1], pl[i]);
            cum[i] = total;
        }
        auto point_at = [&](double s) {
            std::size_t i = 1;
            while (i < pl.size() - 1 && cum[i] < s)
                ++i;
            double seg = cum[i] - cum[i - 1];
            double t = seg > 0.0 ? (s - cum[i - 1]) / seg : 0.0;
            return Point2{pl[i - 1].x + t * (pl[i].x - pl[i - 1].x),
                          pl[i - 1].y + t * (pl[i].y - pl[i - 1].y)};
        };
        long n_steps = static_cast<long>(std::floor(total / spacing + 1e-9));
        double last_s = -1.0;
        for (long k = 0; k <= n_steps; ++k)
        {
            double s = static_cast<double>(k) * spacing;
            if (s > total)
                s = total;
            out.push_back(point_at(s));
            last_s = s;
        }
        if (total - last_s > 1e-9)
            out.push_back(pl.back());
    }
    std::vector<Point2> in_radius;
    for (const auto &p : out)
    {
        double d = distance(p, bs.position);
        if (d > 0.0 && d <= radius)
            in_radius.push_back(p);
    }
    return in_radius;
}

// Ray tracer against footprints and terrain. Holds precomputed building top
// elevations (base = terrain at the footprint centroid). With a spatial index
// only candidate buildings along the ray are tested; without one every
// building is tested. Both paths evaluate the identical blockage predicate at
// the identical sample positions, so the labels are bit-identical.
class LosTracer {
  public:
    LosTracer(const Scene &scene, const SpatialIndex *index = nullptr)
        : scene_(scene), index_(index)
    {
        tops_.resize(scene.buildings.size(), 0.0);
        for (std::size_t i = 0; i < scene.buildings.size(); ++i)
        {
            const Building &b = scene.buildings[i];
            if (!b.has_height)
                continue;
            double base = terrain_elevation(scene.terrain, polygon_centroid(b.footprint));
            tops_[i] = base + b.height;
        }
    }

    // True iff the 3D segment from the BS antenna to the street point at
    // ue_height clears all buildings and the terrain. Blockage uses strict
    // inequality: a ray grazing a roof at exactly its height stays LOS.
    bool trace(const BaseStation &bs, Point2 street_point, double ue_height = 0.0,
               double step = 1.0) const
    {
        if (!(step > 0.0))
            throw std::invalid_argument("trace_los: step must be > 0");
        if (!(ue_height >= 0.0))
            throw std::invalid_argument("trace_los: ue_height must be >= 0");

        const Point2 a2 = bs.position;
        const Point2 b2 = street_point;
        const double za = bs.ground_elevation + bs.height_agl;
        const double zb = terrain_elevation(scene_.terrain, street_point) + ue_height;
        const double d2 = distance(a2, b2);
        const double len3 = std::sqrt(d2 * d2 + (zb - za) * (zb - za));
        if (len3 == 0.0)
            return true;

        // interior sample positions at absolute arc distances k*step; halving
        // the step keeps every existing position, so refinement can only find
        // more blockage
        const long k_max = static_cast<long>(std::ceil(len3 / step)) - 1;

        // terrain blockage between endpoints
        for (long k = 1; k <= k_max; ++k)
        {
            double t = (static_cast<double>(k) * step) / len3;
            if (t >= 1.0)
                break;
            Point2 p{a2.x + t * (b2.x - a2.x), a2.y + t * (b2.y - a2.y)};
            double z = za + t * (zb - za);
            if (z < terrain_elevation(scene_.terrain, p))
                return false;
        }

        // building blockage
        auto blocked_by = [&](std::uint32_t id) {
            const Building &b = scene_.buildings[id];
            if (!b.has_height)
                return false;
            double t0, t1;
            if (!segment_bbox_range(a2, b2, b.bbox, t0, t1))
                return false;
            long k_lo = static_cast<long>(std::floor(t0 * len3 / step)) - 1;
            long k_hi = static_cast<long>(std::ceil(t1 * len3 / step)) + 1;
            k_lo = std::max(k_lo, 1L);
            k_hi = std::min(k_hi, k_max);
            for (long k = k_lo; k <= k_hi; ++k)
            {
                double t = (static_cast<double>(k) * step) / len3;
                if (t >= 1.0)
                    break;
                double z = za + t * (zb - za);
                if (z >= tops_[id])
                    continue;
                Point2 p{a2.x + t * (b2.x - a2.x), a2.y + t * (b2.y - a2.y)};
                if (point_in_polygon(p, b.footprint))
                    return true;
            }
            return false;
        };

        if (index_ != nullptr && !index_->empty())
        {
            for (std::uint32_t id : index_->query_segment(a2, b2))
                if (blocked_by(id))
                    return false;
        }
        else
        {
            for (std::uint32_t id = 0; id < scene_.buildings.size(); ++id)
                if (blocked_by(id))
                    return false;
        }
        return true;
    }

  private:
    const Scene &scene_;
    const SpatialIndex *index_;
    std::vector<double> tops_;
};

inline bool trace_los(const Scene &scene, const SpatialIndex &index, const BaseStation &bs,
                      Point2 street_point, double ue_height = 0.0, double step = 1.0)
{
    return LosTracer(scene, &index).trace(bs, street_point, ue_height, step);
}

// One LosSample per street point within the analysis radius. Zero points in
// radius yields an empty (unusable) cell, not an error.
inline CellLosData extract_cell(const Scene &scene, const SpatialIndex &index, const BaseStation &bs,
                                const ExtractConfig &config = {})
{
    CellLosData cell;
    cell.bs_id = bs.id;
    cell.ue_height = config.ue_height;
    LosTracer tracer(scene, &index);
    for (const auto &p : sample_streets(scene.streets, bs, config.radius, config.spacing))
    {
        LosSample s;
        s.point = p;
        s.distance_2d = distance(p, bs.position);
        s.is_los = tracer.trace(bs, p, config.ue_height, config.step);
        cell.samples.push_back(s);
    }
    return cell;
}

} // namespace losmodel

#endif
