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

#ifndef LOSMODEL_REPORT_IO_HPP
#define LOSMODEL_REPORT_IO_HPP

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "losmodel/empirical.hpp"
#include "losmodel/env_classify.hpp"
#include "losmodel/fit.hpp"
#include "losmodel/los_extract.hpp"
#include "losmodel/outage.hpp"

namespace losmodel {

// Write-to-temp-then-rename; a stage output either exists complete or not at all.
class AtomicWriter {
  public:
    explicit AtomicWriter(const std::string &path) : path_(path), tmp_(path + ".tmp")
    {
        out_.open(tmp_, std::ios::binary);
        if (!out_)
            throw stage_error("io", "cannot write '" + tmp_ + "'");
    }
    ~AtomicWriter()
    {
        if (!committed_)
        {
            out_.close();
            std::error_code ec;
            std::filesystem::remove(tmp_, ec);
        }
    }
    std::ofstream &stream() { return out_; }
    void commit()
    {
        out_.close();
        std::filesystem::rename(tmp_, path_);
        committed_ = true;
    }

  private:
    std::string path_, tmp_;
    std::ofstream out_;
    bool committed_ = false;
};

inline void write_samples_csv(const CellLosData &cell, const std::string &path)
{
    AtomicWriter w(path);
    w.stream() << "bs_id,x,y,distance_2d,is_los\n";
    for (const auto &s : cell.samples)
        w.stream() << cell.bs_id << "," << format_double(s.point.x) << "," << format_double(s.point.y)
                   << "," << format_double(s.distance_2d) << "," << (s.is_los ? 1 : 0) << "\n";
    w.commit();
}

inline std::vector<CellLosData> read_samples_csv(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw parse_error(path + ": empty samples file");
    std::map<std::string, CellLosData> cells;
    std::vector<std::string> order;
    std::size_t lineno = 1;
    while (std::getline(in, line))
    {
        ++lineno;
        if (line.empty())
            continue;
        auto f = detail::split_csv_line(line);
        if (f.size() != 5)
            throw parse_error(path + ":" + std::to_string(lineno) + ": expected 5 columns");
        std::string ctx = path + ":" + std::to_string(lineno);
        LosSample s;
        s.point.x = parse_double(f[1], ctx);
        s.point.y = parse_double(f[2], ctx);
        s.distance_2d = parse_double(f[3], ctx);
        s.is_los = parse_long(f[4], ctx) != 0;
        auto [it, inserted] = cells.try_emplace(f[0]);
        if (inserted)
        {
            it->second.bs_id = f[0];
            order.push_back(f[0]);
        }
        it->second.samples.push_back(s);
    }
    std::vector<CellLosData> out;
    for (const auto &id : order)
        out.push_back(std::move(cells[id]));
    return out;
}

struct CellClassification {
    std::string bs_id;
    CellStats stats;
    EnvClass env = EnvClass::RMa;
    bool kept = false;
};

inline void write_classification_csv(const std::vector<CellClassification> &rows, const std::string &path)
{
    AtomicWriter w(path);
    w.stream() << "bs_id,avg_height,coverage,ratio,class,kept_flag\n";
    for (const auto &r : rows)
        w.stream() << r.bs_id << "," << format_double(r.stats.avg_building_height) << ","
                   << format_double(r.stats.building_coverage) << ","
                   << format_double(r.stats.height_to_footprint_ratio) << "," << to_string(r.env) << ","
                   << (r.kept ? 1 : 0) << "\n";
    w.commit();
}

inline std::vector<CellClassification> read_classification_csv(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open '" + path + "'");
    std::string line;
    std::getline(in, line);
    std::vector<CellClassification> out;
    std::size_t lineno = 1;
    while (std::getline(in, line))
    {
        ++lineno;
        if (line.empty())
            continue;
        auto f = detail::split_csv_line(line);
        if (f.size() != 6)
            throw parse_error(path + ":" + std::to_string(lineno) + ": expected 6 columns");
        std::string ctx = path + ":" + std::to_string(lineno);
        CellClassification c;
        c.bs_id = f[0];
        c.stats.avg_building_height = parse_double(f[1], ctx);
        c.stats.building_coverage = parse_double(f[2], ctx);
        c.stats.height_to_footprint_ratio = parse_double(f[3], ctx);
        c.env = env_from_string(f[4]);
        c.kept = parse_long(f[5], ctx) != 0;
        out.push_back(std::move(c));
    }
    return out;
}

inline void write_curves_csv(const std::vector<LosCurve> &curves, const std::string &path)
{
    AtomicWriter w(path);
    w.stream() << "source,r_mean,p_emp,count\n";
    for (const auto &c : curves)
        for (const auto &bin : c.bins)
            w.stream() << c.source << "," << format_double(bin.r_mean) << "," << format_double(bin.p_emp)
                       << "," << bin.count << "\n";
    w.commit();
}

inline std::vector<LosCurve> read_curves_csv(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open '" + path + "'");
    std::string line;
    std::getline(in, line);
    std::map<std::string, LosCurve> curves;
    std::vector<std::string> order;
    std::size_t lineno = 1;
    while (std::getline(in, line))
    {
        ++lineno;
        if (line.empty())
            continue;
        auto f = detail::split_csv_line(line);
        if (f.size() != 4)
            throw parse_error(path + ":" + std::to_string(lineno) + ": expected 4 columns");
        std::string ctx = path + ":" + std::to_string(lineno);
        LosBin bin;
        bin.r_mean = parse_double(f[1], ctx);
        bin.p_emp = parse_double(f[2], ctx);
        bin.count = static_cast<std::size_t>(parse_long(f[3], ctx));
        auto [it, inserted] = curves.try_emplace(f[0]);
        if (inserted)
        {
            it->second.source = f[0];
            order.push_back(f[0]);
        }
        it->second.bins.push_back(bin);
    }
    std::vector<LosCurve> out;
    for (const auto &id : order)
        out.push_back(std::move(curves[id]));
    return out;
}

struct CellFitRow {
    std::string bs_id;
    EnvClass env = EnvClass::RMa;
    FitResult fit;
};

inline void write_fits_csv(const std::vector<CellFitRow> &rows, const std::string &path)
{
    AtomicWriter w(path);
    w.stream() << "bs_id,env,U,W,F,objective,mse_linear,nsse,is_outlier\n";
    for (const auto &r : rows)
        w.stream() << r.bs_id << "," << to_string(r.env) << "," << format_double(r.fit.params.U) << ","
                   << format_double(r.fit.params.W) << "," << format_double(r.fit.params.F) << ","
                   << format_double(r.fit.objective) << "," << format_double(r.fit.mse_linear) << ","
                   << format_double(r.fit.nsse) << "," << (r.fit.is_outlier ? 1 : 0) << "\n";
    w.commit();
}

inline std::vector<CellFitRow> read_fits_csv(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open '" + path + "'");
    std::string line;
    std::getline(in, line);
    std::vector<CellFitRow> out;
    std::size_t lineno = 1;
    while (std::getline(in, line))
    {
        ++lineno;
        if (line.empty())
            continue;
        auto f = detail::split_csv_line(line);
        if (f.size() != 9)
            throw parse_error(path + ":" + std::to_string(lineno) + ": expected 9 columns");
        std::string ctx = path + ":" + std::to_string(lineno);
        CellFitRow r;
        r.bs_id = f[0];
        r.env = env_from_string(f[1]);
        r.fit.params.U = parse_double(f[2], ctx);
        r.fit.params.W = parse_double(f[3], ctx);
        r.fit.params.F = parse_double(f[4], ctx);
        r.fit.objective = parse_double(f[5], ctx);
        r.fit.mse_linear = parse_double(f[6], ctx);
        r.fit.nsse = f[7] == "inf" ? std::numeric_limits<double>::infinity() : parse_double(f[7], ctx);
        r.fit.is_outlier = parse_long(f[8], ctx) != 0;
        out.push_back(std::move(r));
    }
    return out;
}

inline void write_triplets_csv(const std::vector<LosModelParams> &triplets, const std::string &path)
{
    AtomicWriter w(path);
    w.stream() << "U,W,F\n";
    for (const auto &t : triplets)
        w.stream() << format_double(t.U) << "," << format_double(t.W) << "," << format_double(t.F)
                   << "\n";
    w.commit();
}

inline void write_outage_csv(const std::vector<OutageResult> &results, const std::string &path)
{
    AtomicWriter w(path);
    w.stream() << "model,d_bs1,outage\n";
    for (const auto &r : results)
        for (double v : r.outage_values)
            w.stream() << r.model_tag << "," << format_double(r.d_bs1) << "," << format_double(v)
                       << "\n";
    w.commit();
}

inline void write_outage_cdf_csv(const std::vector<OutageResult> &results, const std::string &path)
{
    AtomicWriter w(path);
    w.stream() << "model,d_bs1,outage,cum_fraction\n";
    for (const auto &r : results)
        for (const auto &[x, p] : outage_cdf(r))
            w.stream() << r.model_tag << "," << format_double(r.d_bs1) << "," << format_double(x) << ","
                       << format_double(p) << "\n";
    w.commit();
}

} // namespace losmodel

#endif
