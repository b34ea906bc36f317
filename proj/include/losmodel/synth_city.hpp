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

#ifndef LOSMODEL_SYNTH_CITY_HPP
#define LOSMODEL_SYNTH_CITY_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "losmodel/scene.hpp"

namespace losmodel {

// Synthetic city generator: a desk-scale stand-in for national geospatial
// data. The grid layout tiles districts of 2 * cell_radius, one BS per
// district, streets on a regular pitch, one building per block. The row
// layout produces a single line of slabs with one probe street, which makes
// the LOS/NLOS boundary computable in closed form for oracle tests.
struct DistrictArchetype {
    double street_pitch = 150.0;
    double coverage = 0.30;          // building footprint fraction of each block
    bool constant_height = false;
    double height_const = 10.0;
    double height_median = 10.0;     // lognormal median when not constant
    double height_sigma_ln = 0.25;   // lognormal sigma in ln space
    double missing_fraction = 0.0;   // buildings written without a height
    double bs_height_agl = 30.0;
};

struct SyntheticCitySpec {
    enum class Layout { grid, row };
    Layout layout = Layout::grid;

    int cells_x = 1;
    int cells_y = 1;
    double cell_radius = 1000.0;
    std::vector<DistrictArchetype> archetypes{DistrictArchetype{}};
    double jitter = 0.0; // relative jitter on coverage / height / missing per district

    double terrain_z0 = 100.0;
    double terrain_slope_x = 0.0;
    double terrain_cell = 250.0;

    // row layout
    int row_count = 5;
    double row_y = 100.0;
    double row_width = 24.0;
    double row_depth = 10.0;
    double row_gap = 6.0;
    double row_height = 20.0;
    double row_bs_height_agl = 50.0;
    double row_street_from = 120.0;
    double row_street_to = 300.0;
};

namespace detail {

inline Building make_slab(double cx, double cy, double sx, double sy, double height, bool has_height)
{
    Building b;
    b.footprint = {{cx - sx / 2, cy - sy / 2}, {cx + sx / 2, cy - sy / 2}, {cx + sx / 2, cy + sy / 2},
                   {cx - sx / 2, cy + sy / 2}};
    b.height = height;
    b.has_height = has_height;
    b.finalize();
    return b;
}

} // namespace detail

inline Scene generate_city(const SyntheticCitySpec &spec, std::uint64_t seed)
{
    if (spec.archetypes.empty())
        throw std::invalid_argument("generate_city: no district archetypes");
    Scene scene;
    Rng master(seed);

    double extent_x, extent_y;
    if (spec.layout == SyntheticCitySpec::Layout::row)
    {
        extent_x = spec.cell_radius;
        extent_y = spec.cell_radius;
        double slab_pitch = spec.row_width + spec.row_gap;
        double x0 = -0.5 * static_cast<double>(spec.row_count - 1) * slab_pitch;
        for (int i = 0; i < spec.row_count; ++i)
            scene.buildings.push_back(detail::make_slab(x0 + i * slab_pitch, spec.row_y, spec.row_width,
                                                        spec.row_depth, spec.row_height, true));
        scene.streets.polylines.push_back({{0.0, spec.row_street_from}, {0.0, spec.row_street_to}});
        BaseStation bs;
        bs.id = "bs_row";
        bs.position = {0.0, 0.0};
        bs.height_agl = spec.row_bs_height_agl;
        bs.ground_elevation = spec.terrain_z0;
        scene.stations.push_back(bs);
    }
    else
    {
        const double d = 2.0 * spec.cell_radius; // district edge length
        extent_x = 0.5 * d * spec.cells_x;
        extent_y = 0.5 * d * spec.cells_y;
        int district = 0;
        for (int iy = 0; iy < spec.cells_y; ++iy)
            for (int ix = 0; ix < spec.cells_x; ++ix, ++district)
            {
                DistrictArchetype a =
                    spec.archetypes[static_cast<std::size_t>(district) % spec.archetypes.size()];
                Rng rng = master.substream("district", static_cast<std::uint64_t>(district));
                if (spec.jitter > 0.0)
                {
                    a.coverage *= 1.0 + spec.jitter * rng.uniform(-1.0, 1.0);
                    a.height_median *= 1.0 + spec.jitter * rng.uniform(-1.0, 1.0);
                    a.height_const *= 1.0 + spec.jitter * rng.uniform(-1.0, 1.0);
                    a.missing_fraction *= 1.0 + spec.jitter * rng.uniform(-1.0, 1.0);
                }
                double cx = -extent_x + (ix + 0.5) * d;
                double cy = -extent_y + (iy + 0.5) * d;

                if (a.coverage < 0.0 || a.coverage >= 1.0)
                    throw std::invalid_argument("generate_city: coverage must be in [0, 1)");
                double side = a.street_pitch * std::sqrt(a.coverage);
                if (side > a.street_pitch - 4.0)
                    throw std::invalid_argument(
                        "generate_city: coverage " + format_double(a.coverage) +
                        " infeasible for street pitch " + format_double(a.street_pitch));

                // fill blocks out to the edge of the analysis disk, so the
                // built-up fraction inside the disk matches the configured
                // coverage instead of being diluted by an empty annulus; clip
                // everything to the district square so neighboring districts
                // never leak into each other's disks
                const double R = spec.cell_radius;
                long half_blocks = static_cast<long>(std::ceil(R / a.street_pitch - 1e-9));
                // streets offset half a pitch: the BS sits on the central
                // block (rooftop deployment), not in an unobstructed canyon
                for (long k = -half_blocks - 1; k <= half_blocks; ++k)
                {
                    double off = (static_cast<double>(k) + 0.5) * a.street_pitch;
                    if (std::fabs(off) > R)
                        continue;
                    scene.streets.polylines.push_back({{cx - R, cy + off}, {cx + R, cy + off}});
                    scene.streets.polylines.push_back({{cx + off, cy - R}, {cx + off, cy + R}});
                }
                // one building per block with jittered size and placement (a
                // perfectly regular grid produces oscillating LOS curves that
                // no smooth model tracks); footprints straddling the district
                // edge are clipped to it. coverage 0 is an open field
                for (long bx = -half_blocks; side > 0.0 && bx <= half_blocks; ++bx)
                    for (long by = -half_blocks; by <= half_blocks; ++by)
                    {
                        double sx = std::min(side * rng.uniform(0.7, 1.3), a.street_pitch - 4.0);
                        double sy = std::min(side * rng.uniform(0.7, 1.3), a.street_pitch - 4.0);
                        double free_x = std::max((a.street_pitch - sx) / 2.0 - 2.0, 0.0);
                        double free_y = std::max((a.street_pitch - sy) / 2.0 - 2.0, 0.0);
                        double ox = static_cast<double>(bx) * a.street_pitch +
                                    rng.uniform(-free_x, free_x);
                        double oy = static_cast<double>(by) * a.street_pitch +
                                    rng.uniform(-free_y, free_y);
                        double h = a.constant_height
                                       ? a.height_const
                                       : a.height_median * std::exp(a.height_sigma_ln * rng.normal());
                        bool has_height = rng.uniform01() >= a.missing_fraction;
                        double x_lo = std::max(ox - sx / 2.0, -R), x_hi = std::min(ox + sx / 2.0, R);
                        double y_lo = std::max(oy - sy / 2.0, -R), y_hi = std::min(oy + sy / 2.0, R);
                        if (x_hi - x_lo < 0.5 || y_hi - y_lo < 0.5)
                            continue;
                        scene.buildings.push_back(detail::make_slab(
                            cx + 0.5 * (x_lo + x_hi), cy + 0.5 * (y_lo + y_hi), x_hi - x_lo,
                            y_hi - y_lo, h, has_height));
                    }

                BaseStation bs;
                // zero-padded so lexicographic file order equals district order
                char idbuf[16];
                std::snprintf(idbuf, sizeof(idbuf), "bs_%04d", district);
                bs.id = idbuf;
                bs.position = {cx, cy};
                bs.height_agl = a.bs_height_agl;
                bs.ground_elevation = spec.terrain_z0 + spec.terrain_slope_x * cx;
                scene.stations.push_back(bs);
            }
    }

    // terrain plane sampled onto the raster, with a margin beyond the city
    double margin = 2.0 * spec.terrain_cell;
    double x0 = -extent_x - margin, y0 = -extent_y - margin;
    std::size_t ncols = static_cast<std::size_t>((2.0 * (extent_x + margin)) / spec.terrain_cell) + 2;
    std::size_t nrows = static_cast<std::size_t>((2.0 * (extent_y + margin)) / spec.terrain_cell) + 2;
    scene.terrain.origin_x = x0;
    scene.terrain.origin_y = y0;
    scene.terrain.cell_size = spec.terrain_cell;
    scene.terrain.ncols = ncols;
    scene.terrain.nrows = nrows;
    scene.terrain.elevations.resize(ncols * nrows);
    for (std::size_t i = 0; i < nrows; ++i)
        for (std::size_t j = 0; j < ncols; ++j)
            scene.terrain.elevations[i * ncols + j] =
                spec.terrain_z0 + spec.terrain_slope_x * (x0 + static_cast<double>(j) * spec.terrain_cell);
    return scene;
}

inline void generate_city_files(const SyntheticCitySpec &spec, std::uint64_t seed,
                                const std::string &dir)
{
    std::filesystem::create_directories(dir);
    Scene scene = generate_city(spec, seed);
    save_scene(scene, dir + "/buildings.json", dir + "/terrain.txt", dir + "/streets.json",
               dir + "/stations.csv");
}

} // namespace losmodel

#endif
