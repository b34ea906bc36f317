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

#ifndef LOSMODEL_SPATIAL_INDEX_HPP
#define LOSMODEL_SPATIAL_INDEX_HPP

#include <cstdint>
#include <vector>

#include "losmodel/geometry.hpp"
#include "losmodel/scene.hpp"

namespace losmodel {

// Uniform grid over building footprints. Every building is registered in every
// cell its bounding box overlaps, so any cell-walk along a query segment
// returns a superset of the true intersectors.
class SpatialIndex {
  public:
    SpatialIndex() = default;

    SpatialIndex(const Scene &scene, double cell_size = 50.0)
    {
        if (!(cell_size > 0.0))
            throw std::invalid_argument("SpatialIndex: cell_size must be > 0");
        cell_ = cell_size;
        BoundingBox extent;
        for (const auto &b : scene.buildings)
        {
            extent.expand({b.bbox.min_x, b.bbox.min_y});
            extent.expand({b.bbox.max_x, b.bbox.max_y});
        }
        if (!extent.valid())
            return; // empty scene, empty index
        min_x_ = extent.min_x;
        min_y_ = extent.min_y;
        nx_ = static_cast<std::size_t>((extent.max_x - min_x_) / cell_) + 1;
        ny_ = static_cast<std::size_t>((extent.max_y - min_y_) / cell_) + 1;
        cells_.resize(nx_ * ny_);
        for (std::uint32_t id = 0; id < scene.buildings.size(); ++id)
        {
            const BoundingBox &bb = scene.buildings[id].bbox;
            std::size_t j0, j1, i0, i1;
            to_cell_range(bb, j0, j1, i0, i1);
            for (std::size_t i = i0; i <= i1; ++i)
                for (std::size_t j = j0; j <= j1; ++j)
                    cells_[i * nx_ + j].push_back(id);
        }
    }

    bool empty() const { return cells_.empty(); }
    double cell_size() const { return cell_; }

    // Candidate building ids for a 2D query segment: the union of all grid
    // cells whose rectangle the segment touches. Deduplicated, sorted.
    std::vector<std::uint32_t> query_segment(Point2 a, Point2 b) const
    {
        std::vector<std::uint32_t> out;
        if (empty())
            return out;
        BoundingBox seg_box;
        seg_box.expand(a);
        seg_box.expand(b);
        std::size_t j0, j1, i0, i1;
        if (!clip_cell_range(seg_box, j0, j1, i0, i1))
            return out;
        for (std::size_t i = i0; i <= i1; ++i)
            for (std::size_t j = j0; j <= j1; ++j)
            {
                const auto &bucket = cells_[i * nx_ + j];
                if (bucket.empty())
                    continue;
                BoundingBox cb = cell_box(j, i);
                if (!segment_intersects_bbox(a, b, cb))
                    continue;
                out.insert(out.end(), bucket.begin(), bucket.end());
            }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

  private:
    BoundingBox cell_box(std::size_t j, std::size_t i) const
    {
        BoundingBox box;
        box.min_x = min_x_ + static_cast<double>(j) * cell_;
        box.min_y = min_y_ + static_cast<double>(i) * cell_;
        box.max_x = box.min_x + cell_;
        box.max_y = box.min_y + cell_;
        return box;
    }

    void to_cell_range(const BoundingBox &bb, std::size_t &j0, std::size_t &j1, std::size_t &i0,
                       std::size_t &i1) const
    {
        auto cell_of = [this](double v, double origin, std::size_t n) {
            double f = (v - origin) / cell_;
            if (f < 0.0)
                f = 0.0;
            std::size_t c = static_cast<std::size_t>(f);
            return c >= n ? n - 1 : c;
        };
        j0 = cell_of(bb.min_x, min_x_, nx_);
        j1 = cell_of(bb.max_x, min_x_, nx_);
        i0 = cell_of(bb.min_y, min_y_, ny_);
        i1 = cell_of(bb.max_y, min_y_, ny_);
    }

    bool clip_cell_range(const BoundingBox &bb, std::size_t &j0, std::size_t &j1, std::size_t &i0,
                         std::size_t &i1) const
    {
        double max_x = min_x_ + static_cast<double>(nx_) * cell_;
        double max_y = min_y_ + static_cast<double>(ny_) * cell_;
        if (bb.max_x < min_x_ || bb.min_x > max_x || bb.max_y < min_y_ || bb.min_y > max_y)
            return false;
        to_cell_range(bb, j0, j1, i0, i1);
        return true;
    }

    double cell_ = 50.0;
    double min_x_ = 0.0, min_y_ = 0.0;
    std::size_t nx_ = 0, ny_ = 0;
    std::vector<std::vector<std::uint32_t>> cells_;
};

inline SpatialIndex build_index(const Scene &scene, double cell_size = 50.0)
{
    return SpatialIndex(scene, cell_size);
}

} // namespace losmodel

#endif
