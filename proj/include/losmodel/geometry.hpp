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

#ifndef LOSMODEL_GEOMETRY_HPP
#define LOSMODEL_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "losmodel/common.hpp"

namespace losmodel {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

struct Point3 {
    double x = 0.0; // meters east
    double y = 0.0; // meters north
    double z = 0.0; // meters above reference datum
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }

struct BoundingBox {
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    void expand(Point2 p)
    {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    bool valid() const { return min_x <= max_x && min_y <= max_y; }
    bool contains(Point2 p) const { return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y; }
    bool overlaps(const BoundingBox &o) const
    {
        return min_x <= o.max_x && o.min_x <= max_x && min_y <= o.max_y && o.min_y <= max_y;
    }
};

// Closed simple polygon. Vertices are stored without the repeated closing
// vertex; edges wrap around from back() to front().
using Polygon = std::vector<Point2>;

inline BoundingBox polygon_bbox(const Polygon &poly)
{
    BoundingBox box;
    for (const auto &p : poly)
        box.expand(p);
    return box;
}

// Shoelace area; sign depends on vertex order.
inline double polygon_signed_area(const Polygon &poly)
{
    double a = 0.0;
    for (std::size_t i = 0, n = poly.size(); i < n; ++i)
        a += cross(poly[i], poly[(i + 1) % n]);
    return 0.5 * a;
}

inline double polygon_area(const Polygon &poly) { return std::fabs(polygon_signed_area(poly)); }

// Area-weighted centroid; falls back to the vertex mean for degenerate rings.
inline Point2 polygon_centroid(const Polygon &poly)
{
    double a = 0.0, cx = 0.0, cy = 0.0;
    for (std::size_t i = 0, n = poly.size(); i < n; ++i)
    {
        const Point2 &p = poly[i];
        const Point2 &q = poly[(i + 1) % n];
        double w = cross(p, q);
        a += w;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    if (std::fabs(a) < 1e-12)
    {
        Point2 m{0, 0};
        for (const auto &p : poly)
            m = m + p;
        double inv = poly.empty() ? 0.0 : 1.0 / static_cast<double>(poly.size());
        return {m.x * inv, m.y * inv};
    }
    double inv = 1.0 / (3.0 * a);
    return {cx * inv, cy * inv};
}

// Crossing-number test. Points exactly on an edge count as inside, which makes
// blockage tests err toward obstruction rather than through-wall visibility.
inline bool point_in_polygon(Point2 p, const Polygon &poly)
{
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    {
        const Point2 &a = poly[j];
        const Point2 &b = poly[i];
        // on-edge check via collinearity within the edge's bounding range
        double c = cross(b - a, p - a);
        if (c == 0.0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
            std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y))
            return true;
        if ((b.y > p.y) != (a.y > p.y))
        {
            double t = (p.y - b.y) / (a.y - b.y);
            double xc = b.x + t * (a.x - b.x);
            if (p.x < xc)
                inside = !inside;
        }
    }
    return inside;
}

// Proper or touching intersection of segments [a,b] and [c,d].
inline bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d)
{
    auto orient = [](Point2 p, Point2 q, Point2 r) {
        double v = cross(q - p, r - p);
        if (v > 0.0)
            return 1;
        if (v < 0.0)
            return -1;
        return 0;
    };
    auto on_segment = [](Point2 p, Point2 q, Point2 r) {
        return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
               std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
    };
    int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4)
        return true;
    if (o1 == 0 && on_segment(a, b, c))
        return true;
    if (o2 == 0 && on_segment(a, b, d))
        return true;
    if (o3 == 0 && on_segment(c, d, a))
        return true;
    if (o4 == 0 && on_segment(c, d, b))
        return true;
    return false;
}

// True when segment [a,b] touches the polygon's interior or boundary.
inline bool segment_intersects_polygon(Point2 a, Point2 b, const Polygon &poly)
{
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++)
        if (segments_intersect(a, b, poly[j], poly[i]))
            return true;
    return point_in_polygon(a, poly) || point_in_polygon(b, poly);
}

inline bool segment_intersects_bbox(Point2 a, Point2 b, const BoundingBox &box)
{
    // Liang-Barsky style slab clipping of parameter range [0,1]
    double t0 = 0.0, t1 = 1.0;
    double dx = b.x - a.x, dy = b.y - a.y;
    auto clip = [&](double p, double q) {
        if (p == 0.0)
            return q >= 0.0;
        double r = q / p;
        if (p < 0.0)
        {
            if (r > t1)
                return false;
            if (r > t0)
                t0 = r;
        }
        else
        {
            if (r < t0)
                return false;
            if (r < t1)
                t1 = r;
        }
        return true;
    };
    return clip(-dx, a.x - box.min_x) && clip(dx, box.max_x - a.x) &&
           clip(-dy, a.y - box.min_y) && clip(dy, box.max_y - a.y);
}

// Parameter range [t0,t1] of segment [a,b] inside the box, or empty (t0 > t1).
inline bool segment_bbox_range(Point2 a, Point2 b, const BoundingBox &box, double &t0, double &t1)
{
    t0 = 0.0;
    t1 = 1.0;
    double dx = b.x - a.x, dy = b.y - a.y;
    auto clip = [&](double p, double q) {
        if (p == 0.0)
            return q >= 0.0;
        double r = q / p;
        if (p < 0.0)
        {
            if (r > t1)
                return false;
            if (r > t0)
                t0 = r;
        }
        else
        {
            if (r < t0)
                return false;
            if (r < t1)
                t1 = r;
        }
        return true;
    };
    return clip(-dx, a.x - box.min_x) && clip(dx, box.max_x - a.x) &&
           clip(-dy, a.y - box.min_y) && clip(dy, box.max_y - a.y);
}

// O(n^2) pairwise check; footprint rings are short so this is fine.
// Adjacent edges may share their common vertex, anything else is a defect.
inline bool polygon_is_simple(const Polygon &poly)
{
    const std::size_t n = poly.size();
    if (n < 3)
        return false;
    for (std::size_t i = 0; i < n; ++i)
    {
        Point2 a = poly[i], b = poly[(i + 1) % n];
        if (a.x == b.x && a.y == b.y)
            return false; // zero-length edge
        for (std::size_t j = i + 1; j < n; ++j)
        {
            bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            Point2 c = poly[j], d = poly[(j + 1) % n];
            if (!segments_intersect(a, b, c, d))
                continue;
            if (!adjacent)
                return false;
            // adjacent edges: only the shared endpoint may touch
            Point2 shared = (j == i + 1) ? b : a;
            Point2 other1 = (j == i + 1) ? a : b;
            Point2 other2 = (j == i + 1) ? d : c;
            auto collinear_overlap = [&]() {
                if (cross(b - a, d - c) != 0.0)
                    return false;
                // collinear adjacent edges overlap iff the non-shared ends are
                // on the same side of the shared vertex
                return dot(other1 - shared, other2 - shared) > 0.0;
            };
            if (collinear_overlap())
                return false;
        }
    }
    return true;
}

namespace detail {

// Signed area of triangle(origin, a, b) intersected with the disk of radius r
// centered at the origin. Summed over polygon edges this yields the signed
// area of polygon-disk intersection (Green's theorem with arc substitution).
inline double disk_triangle_area(Point2 a, Point2 b, double r)
{
    const double r2 = r * r;
    auto sector = [&](Point2 p, Point2 q) {
        // circular sector between directions p and q
        double ang = std::atan2(cross(p, q), dot(p, q));
        return 0.5 * r2 * ang;
    };
    auto inside = [&](Point2 p) { return dot(p, p) <= r2; };

    // intersection parameters of segment a + t(b-a) with the circle
    Point2 d = b - a;
    double A = dot(d, d);
    double B = 2.0 * dot(a, d);
    double C = dot(a, a) - r2;
    double ts[2];
    int nt = 0;
    if (A > 0.0)
    {
        double disc = B * B - 4.0 * A * C;
        if (disc > 0.0)
        {
            double sq = std::sqrt(disc);
            double t1 = (-B - sq) / (2.0 * A);
            double t2 = (-B + sq) / (2.0 * A);
            if (t1 > 0.0 && t1 < 1.0)
                ts[nt++] = t1;
            if (t2 > 0.0 && t2 < 1.0)
                ts[nt++] = t2;
        }
    }

    double area = 0.0;
    double t_prev = 0.0;
    Point2 p_prev = a;
    for (int i = 0; i <= nt; ++i)
    {
        double t_next = (i < nt) ? ts[i] : 1.0;
        Point2 p_next = {a.x + t_next * d.x, a.y + t_next * d.y};
        Point2 mid = {a.x + 0.5 * (t_prev + t_next) * d.x, a.y + 0.5 * (t_prev + t_next) * d.y};
        if (inside(mid))
            area += 0.5 * cross(p_prev, p_next);
        else
            area += sector(p_prev, p_next);
        t_prev = t_next;
        p_prev = p_next;
    }
    return area;
}

} // namespace detail

// Exact area of polygon-disk intersection. Orientation independent.
inline double polygon_disk_intersection_area(const Polygon &poly, Point2 center, double radius)
{
    double area = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i)
    {
        Point2 a = poly[i] - center;
        Point2 b = poly[(i + 1) % n] - center;
        area += detail::disk_triangle_area(a, b, radius);
    }
    return std::fabs(area);
}

// Local equirectangular projection: good to well under 0.1 m within a few km
// of the reference, which is all this toolkit analyzes.
struct LocalProjection {
    double ref_lon_deg = 0.0;
    double ref_lat_deg = 0.0;

    static constexpr double earth_radius_m = 6371008.8;
    static constexpr double deg = 0.017453292519943295;

    Point2 to_meters(double lon_deg, double lat_deg) const
    {
        double x = (lon_deg - ref_lon_deg) * deg * earth_radius_m * std::cos(ref_lat_deg * deg);
        double y = (lat_deg - ref_lat_deg) * deg * earth_radius_m;
        return {x, y};
    }
};

} // namespace losmodel

#endif
