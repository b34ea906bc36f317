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

#ifndef LOSMODEL_SCENE_HPP
#define LOSMODEL_SCENE_HPP

#include <atomic>
#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "losmodel/common.hpp"
#include "losmodel/geometry.hpp"

namespace losmodel {

// A building is the obstruction primitive: a closed simple footprint plus a
// height above local ground. has_height == false means the source record had
// no height attribute; such buildings never block (they are filtered out at
// the cell level instead of being guessed at).
struct Building {
    Polygon footprint;
    double height = 0.0;
    bool has_height = false;
    BoundingBox bbox;

    void finalize() { bbox = polygon_bbox(footprint); }
};

// Digital elevation raster, row-major. Node (row i, col j) sits at
// (origin_x + j*cell_size, origin_y + i*cell_size).
struct TerrainGrid {
    double origin_x = 0.0;
    double origin_y = 0.0;
    double cell_size = 1.0;
    std::size_t ncols = 0;
    std::size_t nrows = 0;
    std::vector<double> elevations;

    // queries outside the extent are clamped to the nearest edge; each such
    // query bumps this shared counter
    std::shared_ptr<std::atomic<std::uint64_t>> clamp_warnings =
        std::make_shared<std::atomic<std::uint64_t>>(0);

    double at(std::size_t row, std::size_t col) const { return elevations[row * ncols + col]; }
    std::uint64_t clamp_count() const { return clamp_warnings->load(); }

    bool empty() const { return ncols == 0 || nrows == 0; }
};

// Bilinear interpolation of the four surrounding nodes.
inline double terrain_elevation(const TerrainGrid &grid, Point2 p)
{
    if (grid.empty())
        return 0.0;
    double fx = (p.x - grid.origin_x) / grid.cell_size;
    double fy = (p.y - grid.origin_y) / grid.cell_size;
    double max_fx = static_cast<double>(grid.ncols - 1);
    double max_fy = static_cast<double>(grid.nrows - 1);
    if (fx < 0.0 || fx > max_fx || fy < 0.0 || fy > max_fy)
    {
        grid.clamp_warnings->fetch_add(1, std::memory_order_relaxed);
        fx = std::clamp(fx, 0.0, max_fx);
        fy = std::clamp(fy, 0.0, max_fy);
    }
    std::size_t j0 = static_cast<std::size_t>(fx);
    std::size_t i0 = static_cast<std::size_t>(fy);
    if (j0 >= grid.ncols - 1 && grid.ncols > 1)
        j0 = grid.ncols - 2;
    if (i0 >= grid.nrows - 1 && grid.nrows > 1)
        i0 = grid.nrows - 2;
    double tx = fx - static_cast<double>(j0);
    double ty = fy - static_cast<double>(i0);
    std::size_t j1 = (grid.ncols > 1) ? j0 + 1 : j0;
    std::size_t i1 = (grid.nrows > 1) ? i0 + 1 : i0;
    double z00 = grid.at(i0, j0), z01 = grid.at(i0, j1);
    double z10 = grid.at(i1, j0), z11 = grid.at(i1, j1);
    double top = z00 + tx * (z01 - z00);
    double bot = z10 + tx * (z11 - z10);
    return top + ty * (bot - top);
}

struct BaseStation {
    std::string id;
    Point2 position;
    double height_agl = 0.0;        // antenna height above ground, > 0
    double ground_elevation = 0.0;  // meters above sea level
};

struct StreetNetwork {
    std::vector<std::vector<Point2>> polylines; // road centerlines, >= 2 vertices each
};

// Immutable after load; safe for concurrent read access.
struct Scene {
    std::vector<Building> buildings;
    TerrainGrid terrain;
    StreetNetwork streets;
    std::vector<BaseStation> stations;
};

namespace detail {

inline std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw parse_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline nlohmann::json parse_json_file(const std::string &path)
{
    try
    {
        return nlohmann::json::parse(read_file(path));
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw parse_error(path + ": " + e.what());
    }
}

inline std::vector<std::string> split_csv_line(const std::string &line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line)
    {
        if (c == ',')
        {
            out.push_back(cur);
            cur.clear();
        }
        else if (c != '\r')
            cur += c;
    }
    out.push_back(cur);
    return out;
}

} // namespace detail

// Buildings: JSON feature collection. "crs" is "meters" (default) or "lonlat";
// lon/lat vertices are converted with the given local projection.
inline std::vector<Building> load_buildings(const std::string &path, const LocalProjection *proj = nullptr)
{
    nlohmann::json doc = detail::parse_json_file(path);
    if (!doc.is_object() || !doc.contains("features"))
        throw parse_error(path + ": expected object with 'features'");
    bool lonlat = doc.value("crs", std::string("meters")) == "lonlat";
    if (lonlat && proj == nullptr)
        throw parse_error(path + ": crs is lonlat but no projection reference available");

    std::vector<Building> out;
    std::size_t rec = 0;
    for (const auto &feat : doc["features"])
    {
        Building b;
        if (!feat.contains("polygon"))
            throw parse_error(path + ": feature " + std::to_string(rec) + " lacks 'polygon'");
        for (const auto &v : feat["polygon"])
        {
            if (!v.is_array() || v.size() != 2)
                throw parse_error(path + ": feature " + std::to_string(rec) + " has a malformed vertex");
            double x = v[0].get<double>();
            double y = v[1].get<double>();
            Point2 p = lonlat ? proj->to_meters(x, y) : Point2{x, y};
            if (!std::isfinite(p.x) || !std::isfinite(p.y))
                throw parse_error(path + ": feature " + std::to_string(rec) + " has a non-finite vertex");
            b.footprint.push_back(p);
        }
        // tolerate (and strip) a repeated closing vertex
        if (b.footprint.size() >= 2 && b.footprint.front().x == b.footprint.back().x &&
            b.footprint.front().y == b.footprint.back().y)
            b.footprint.pop_back();
        if (b.footprint.size() < 3)
            throw parse_error(path + ": feature " + std::to_string(rec) + " has fewer than 3 vertices");
        if (!polygon_is_simple(b.footprint))
            throw parse_error(path + ": feature " + std::to_string(rec) + " is self-intersecting");
        if (feat.contains("height"))
        {
            b.height = feat["height"].get<double>();
            if (!(b.height >= 0.0))
                throw parse_error(path + ": feature " + std::to_string(rec) + " has negative height");
            b.has_height = true;
        }
        b.finalize();
        out.push_back(std::move(b));
        ++rec;
    }
    return out;
}

// Terrain: "origin_x origin_y cell_size ncols nrows" header line, then
// nrows * ncols row-major elevation values.
inline TerrainGrid load_terrain(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open '" + path + "'");
    TerrainGrid g;
    long ncols = 0, nrows = 0;
    if (!(in >> g.origin_x >> g.origin_y >> g.cell_size >> ncols >> nrows))
        throw parse_error(path + ": malformed raster header");
    if (g.cell_size <= 0.0 || ncols <= 0 || nrows <= 0)
        throw parse_error(path + ": raster header values out of range");
    g.ncols = static_cast<std::size_t>(ncols);
    g.nrows = static_cast<std::size_t>(nrows);
    g.elevations.resize(g.ncols * g.nrows);
    for (std::size_t i = 0; i < g.elevations.size(); ++i)
    {
        if (!(in >> g.elevations[i]))
            throw parse_error(path + ": raster ended after " + std::to_string(i) + " of " +
                              std::to_string(g.elevations.size()) + " values");
        if (!std::isfinite(g.elevations[i]))
            throw parse_error(path + ": non-finite elevation at value " + std::to_string(i));
    }
    return g;
}

// Streets: JSON list of polylines, each a list of [x, y] pairs.
inline StreetNetwork load_streets(const std::string &path, const LocalProjection *proj = nullptr)
{
    nlohmann::json doc = detail::parse_json_file(path);
    bool lonlat = false;
    const nlohmann::json *lines = &doc;
    if (doc.is_object())
    {
        lonlat = doc.value("crs", std::string("meters")) == "lonlat";
        if (!doc.contains("polylines"))
            throw parse_error(path + ": expected list or object with 'polylines'");
        lines = &doc["polylines"];
    }
    if (lonlat && proj == nullptr)
        throw parse_error(path + ": crs is lonlat but no projection reference available");
    StreetNetwork net;
    std::size_t rec = 0;
    for (const auto &line : *lines)
    {
        std::vector<Point2> pl;
        for (const auto &v : line)
        {
            double x = v[0].get<double>();
            double y = v[1].get<double>();
            pl.push_back(lonlat ? proj->to_meters(x, y) : Point2{x, y});
        }
        if (pl.size() < 2)
            throw parse_error(path + ": polyline " + std::to_string(rec) + " has fewer than 2 vertices");
        net.polylines.push_back(std::move(pl));
        ++rec;
    }
    return net;
}

// Stations: CSV with header id,x,y,height_agl,ground_elevation.
inline std::vector<BaseStation> load_stations(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw parse_error(path + ": empty stations file");
    std::vector<BaseStation> out;
    std::size_t lineno = 1;
    while (std::getline(in, line))
    {
        ++lineno;
        if (line.empty())
            continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != 5)
            throw parse_error(path + ":" + std::to_string(lineno) + ": expected 5 columns");
        std::string ctx = path + ":" + std::to_string(lineno);
        BaseStation bs;
        bs.id = cells[0];
        bs.position.x = parse_double(cells[1], ctx);
        bs.position.y = parse_double(cells[2], ctx);
        bs.height_agl = parse_double(cells[3], ctx);
        bs.ground_elevation = parse_double(cells[4], ctx);
        if (!(bs.height_agl > 0.0))
            throw parse_error(ctx + ": station '" + bs.id + "' must have height_agl > 0");
        out.push_back(std::move(bs));
    }
    return out;
}

// Aggregates the four inputs. For lon/lat data the local projection reference
// is the centroid of the station coordinates, which keeps projection error
// negligible at the 1 km analysis radius.
inline Scene load_scene(const std::string &buildings_path, const std::string &terrain_path,
                        const std::string &streets_path, const std::string &stations_path)
{
    Scene scene;

    // peek at the buildings header to learn the scene CRS
    nlohmann::json bdoc = detail::parse_json_file(buildings_path);
    bool lonlat = bdoc.is_object() && bdoc.value("crs", std::string("meters")) == "lonlat";

    LocalProjection proj;
    std::vector<BaseStation> raw_stations = load_stations(stations_path);
    if (lonlat)
    {
        if (raw_stations.empty())
            throw parse_error(stations_path + ": lonlat scene requires at least one station");
        double lon = 0, lat = 0;
        for (const auto &s : raw_stations)
        {
            lon += s.position.x;
            lat += s.position.y;
        }
        proj.ref_lon_deg = lon / static_cast<double>(raw_stations.size());
        proj.ref_lat_deg = lat / static_cast<double>(raw_stations.size());
        for (auto &s : raw_stations)
            s.position = proj.to_meters(s.position.x, s.position.y);
    }
    scene.stations = std::move(raw_stations);
    scene.buildings = load_buildings(buildings_path, lonlat ? &proj : nullptr);
    scene.terrain = load_terrain(terrain_path);
    if (lonlat)
    {
        Point2 o = proj.to_meters(scene.terrain.origin_x, scene.terrain.origin_y);
        scene.terrain.origin_x = o.x;
        scene.terrain.origin_y = o.y;
    }
    scene.streets = load_streets(streets_path, lonlat ? &proj : nullptr);
    return scene;
}

inline void save_buildings(const std::vector<Building> &buildings, const std::string &path)
{
    nlohmann::json doc;
    doc["crs"] = "meters";
    doc["features"] = nlohmann::json::array();
    for (const auto &b : buildings)
    {
        nlohmann::json feat;
        feat["polygon"] = nlohmann::json::array();
        for (const auto &p : b.footprint)
            feat["polygon"].push_back({p.x, p.y});
        if (b.has_height)
            feat["height"] = b.height;
        doc["features"].push_back(std::move(feat));
    }
    std::ofstream out(path, std::ios::binary);
    out << doc.dump(1) << "\n";
}

inline void save_terrain(const TerrainGrid &g, const std::string &path)
{
    std::ofstream out(path, std::ios::binary);
    out << format_double(g.origin_x) << " " << format_double(g.origin_y) << " "
        << format_double(g.cell_size) << " " << g.ncols << " " << g.nrows << "\n";
    for (std::size_t i = 0; i < g.nrows; ++i)
    {
        for (std::size_t j = 0; j < g.ncols; ++j)
            out << (j ? " " : "") << format_double(g.at(i, j));
        out << "\n";
    }
}

inline void save_streets(const StreetNetwork &net, const std::string &path)
{
    nlohmann::json doc = nlohmann::json::array();
    for (const auto &pl : net.polylines)
    {
        nlohmann::json line = nlohmann::json::array();
        for (const auto &p : pl)
            line.push_back({p.x, p.y});
        doc.push_back(std::move(line));
    }
    std::ofstream out(path, std::ios::binary);
    out << doc.dump(1) << "\n";
}

inline void save_stations(const std::vector<BaseStation> &stations, const std::string &path)
{
    std::ofstream out(path, std::ios::binary);
    out << "id,x,y,height_agl,ground_elevation\n";
    for (const auto &s : stations)
        out << s.id << "," << format_double(s.position.x) << "," << format_double(s.position.y) << ","
            << format_double(s.height_agl) << "," << format_double(s.ground_elevation) << "\n";
}

inline void save_scene(const Scene &scene, const std::string &buildings_path,
                       const std::string &terrain_path, const std::string &streets_path,
                       const std::string &stations_path)
{
    save_buildings(scene.buildings, buildings_path);
    save_terrain(scene.terrain, terrain_path);
    save_streets(scene.streets, streets_path);
    save_stations(scene.stations, stations_path);
}

} // namespace losmodel

#endif
