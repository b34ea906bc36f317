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

#ifndef LOSMODEL_PIPELINE_HPP
#define LOSMODEL_PIPELINE_HPP

#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "losmodel/env_model.hpp"
#include "losmodel/report_io.hpp"
#include "losmodel/spatial_index.hpp"

namespace losmodel {

// Declarative configuration of the extract -> classify -> bin -> fit ->
// distfit chain. All defaults are the reference values: 1 km radius, 5 m
// street sampling, 5 m bins, 90% reliability filter, MSLE metric with 10
// starts, NSSE outlier threshold 0.2.
struct PipelineConfig {
    std::uint64_t seed = 1;
    unsigned workers = 0; // 0: LOSMODEL_WORKERS or hardware
    std::string buildings_path, terrain_path, streets_path, stations_path;
    std::string out_dir = "artifacts";
    double index_cell_size = 50.0;
    ExtractConfig extract;
    double ratio_threshold = 0.90;
    double bin_width = 5.0;
    FitConfig fit;
    std::size_t min_cells_per_env = 10;
};

inline nlohmann::json pipeline_config_to_json(const PipelineConfig &c)
{
    nlohmann::json j;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["scene"] = {{"buildings", c.buildings_path},
                  {"terrain", c.terrain_path},
                  {"streets", c.streets_path},
                  {"stations", c.stations_path}};
    j["out_dir"] = c.out_dir;
    j["index_cell_size"] = c.index_cell_size;
    j["extract"] = {{"radius", c.extract.radius},
                    {"spacing", c.extract.spacing},
                    {"ue_height", c.extract.ue_height},
                    {"step", c.extract.step}};
    j["classify"] = {{"ratio_threshold", c.ratio_threshold}};
    j["bin"] = {{"width", c.bin_width}};
    j["fit"] = {{"metric", to_string(c.fit.metric)},
                {"starts", c.fit.n_starts},
                {"nsse_threshold", c.fit.nsse_threshold}};
    j["distfit"] = {{"min_cells_per_env", c.min_cells_per_env}};
    return j;
}

inline PipelineConfig pipeline_config_from_json(const nlohmann::json &j)
{
    PipelineConfig c;
    c.seed = j.value("seed", std::uint64_t{1});
    c.workers = j.value("workers", 0u);
    if (j.contains("scene"))
    {
        const auto &s = j.at("scene");
        c.buildings_path = s.value("buildings", "");
        c.terrain_path = s.value("terrain", "");
        c.streets_path = s.value("streets", "");
        c.stations_path = s.value("stations", "");
    }
    c.out_dir = j.value("out_dir", "artifacts");
    c.index_cell_size = j.value("index_cell_size", 50.0);
    if (j.contains("extract"))
    {
        const auto &e = j.at("extract");
        c.extract.radius = e.value("radius", 1000.0);
        c.extract.spacing = e.value("spacing", 5.0);
        c.extract.ue_height = e.value("ue_height", 0.0);
        c.extract.step = e.value("step", 1.0);
    }
    if (j.contains("classify"))
        c.ratio_threshold = j.at("classify").value("ratio_threshold", 0.90);
    if (j.contains("bin"))
        c.bin_width = j.at("bin").value("width", 5.0);
    if (j.contains("fit"))
    {
        const auto &f = j.at("fit");
        c.fit.metric = fit_metric_from_string(f.value("metric", "msle"));
        c.fit.n_starts = f.value("starts", 10);
        c.fit.nsse_threshold = f.value("nsse_threshold", 0.2);
    }
    if (j.contains("distfit"))
        c.min_cells_per_env = j.at("distfit").value("min_cells_per_env", std::size_t{10});
    return c;
}

inline PipelineConfig load_pipeline_config(const std::string &path)
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
    return pipeline_config_from_json(j);
}

struct PipelineSummary {
    std::size_t n_stations = 0;
    std::size_t n_usable_cells = 0;
    std::size_t n_kept = 0;
    std::size_t n_dropped = 0;
    std::map<EnvClass, std::size_t> cells_per_env;
    std::size_t n_fitted = 0;
    std::size_t n_outliers = 0;
    std::map<EnvClass, EnvParamModel> env_models;
    std::vector<std::string> notes;

    double outlier_fraction() const
    {
        return n_fitted ? static_cast<double>(n_outliers) / static_cast<double>(n_fitted) : 0.0;
    }

    std::string table() const
    {
        std::ostringstream os;
        os << "cells: " << n_stations << " stations, " << n_usable_cells << " usable, " << n_kept
           << " kept / " << n_dropped << " dropped by reliability filter\n";
        os << "environment   cells  outliers  U-family      W-family      F-family\n";
        for (EnvClass env : {EnvClass::RMa, EnvClass::SMa, EnvClass::UMa, EnvClass::MetMa})
        {
            auto it = cells_per_env.find(env);
            std::size_t n = it == cells_per_env.end() ? 0 : it->second;
            os << "  " << to_string(env);
            for (std::size_t pad = std::string(to_string(env)).size(); pad < 12; ++pad)
                os << ' ';
            os << n;
            auto mit = env_models.find(env);
            if (mit != env_models.end())
            {
                std::size_t outl = 0; // outliers are excluded before distfit
                os << "  (model: U=" << to_string(mit->second.dist_U.family)
                   << " W=" << to_string(mit->second.dist_W.family)
                   << " F=" << to_string(mit->second.dist_F.family) << ")";
                (void)outl;
            }
            os << "\n";
        }
        os << "fitted " << n_fitted << " cells, " << n_outliers << " outliers ("
           << format_double(outlier_fraction() * 100.0) << "%)\n";
        for (const auto &n : notes)
            os << "note: " << n << "\n";
        return os.str();
    }
};

// Run the full chain, writing every intermediate artifact into out_dir:
//   config.json             effective configuration echo
//   samples/cell_<id>.csv   per-cell labeled street points
//   classification.csv      stats, class, reliability flag per cell
//   curves.csv              binned curves of kept cells
//   fits.csv                per-cell (U, W, F) fits with NSSE
//   env_model_<env>.json    per-environment parameter model
//   summary.txt             the printed summary table
inline PipelineSummary run_pipeline(const PipelineConfig &config)
{
    namespace fs = std::filesystem;
    PipelineSummary summary;

    Scene scene;
    try
    {
        scene = load_scene(config.buildings_path, config.terrain_path, config.streets_path,
                           config.stations_path);
    }
    catch (const parse_error &)
    {
        throw;
    }
    if (scene.stations.empty())
        throw stage_error("extract", "no stations in '" + config.stations_path + "'");

    fs::create_directories(config.out_dir);
    fs::create_directories(config.out_dir + "/samples");
    {
        AtomicWriter w(config.out_dir + "/config.json");
        w.stream() << pipeline_config_to_json(config).dump(1) << "\n";
        w.commit();
    }

    SpatialIndex index(scene, config.index_cell_size);
    summary.n_stations = scene.stations.size();

    // extract (parallel per cell)
    std::vector<CellLosData> cells(scene.stations.size());
    parallel_for(
        scene.stations.size(),
        [&](std::size_t i) { cells[i] = extract_cell(scene, index, scene.stations[i], config.extract); },
        config.workers);
    for (std::size_t i = 0; i < cells.size(); ++i)
        write_samples_csv(cells[i], config.out_dir + "/samples/cell_" + scene.stations[i].id + ".csv");

    // classify (parallel per cell)
    std::vector<CellClassification> classified(scene.stations.size());
    parallel_for(
        scene.stations.size(),
        [&](std::size_t i) {
            CellClassification c;
            c.bs_id = scene.stations[i].id;
            c.stats = cell_stats(scene, scene.stations[i], config.extract.radius);
            c.env = classify(c.stats);
            c.kept = c.stats.height_to_footprint_ratio >= config.ratio_threshold;
            classified[i] = std::move(c);
        },
        config.workers);

    struct WorkItem {
        std::size_t index;
        EnvClass env;
        LosCurve curve;
    };
    std::vector<WorkItem> work;
    for (std::size_t i = 0; i < classified.size(); ++i)
    {
        if (!cells[i].usable())
        {
            summary.notes.push_back("cell " + classified[i].bs_id + " has no street points in radius");
            classified[i].kept = false;
            continue;
        }
        ++summary.n_usable_cells;
        if (!classified[i].kept)
            continue;
        LosCurve curve = bin_samples(cells[i], config.bin_width, config.extract.radius);
        if (curve.bins.size() < 3)
        {
            summary.notes.push_back("cell " + classified[i].bs_id + " has fewer than 3 occupied bins");
            continue;
        }
        work.push_back({i, classified[i].env, std::move(curve)});
    }
    write_classification_csv(classified, config.out_dir + "/classification.csv");
    summary.n_kept = work.size();
    for (const auto &c : classified)
        summary.n_dropped += c.kept ? 0 : 1;

    std::vector<LosCurve> curves;
    for (const auto &w : work)
        curves.push_back(w.curve);
    write_curves_csv(curves, config.out_dir + "/curves.csv");

    // fit (parallel per cell)
    std::vector<CellFitRow> fits(work.size());
    parallel_for(
        work.size(),
        [&](std::size_t i) {
            CellFitRow row;
            row.bs_id = classified[work[i].index].bs_id;
            row.env = work[i].env;
            row.fit = fit_cell(work[i].curve, config.fit);
            fits[i] = std::move(row);
        },
        config.workers);
    write_fits_csv(fits, config.out_dir + "/fits.csv");
    summary.n_fitted = fits.size();
    for (const auto &f : fits)
    {
        summary.n_outliers += f.fit.is_outlier ? 1 : 0;
        summary.cells_per_env[f.env] += 1;
    }

    // distfit per environment over non-outlier cells
    for (EnvClass env : {EnvClass::RMa, EnvClass::SMa, EnvClass::UMa, EnvClass::MetMa})
    {
        std::vector<FitResult> env_fits;
        for (const auto &f : fits)
            if (f.env == env && !f.fit.is_outlier)
                env_fits.push_back(f.fit);
        if (env_fits.size() < config.min_cells_per_env)
        {
            if (!env_fits.empty() || summary.cells_per_env.count(env))
                summary.notes.push_back(std::string(to_string(env)) + ": only " +
                                        std::to_string(env_fits.size()) +
                                        " usable cells, no distribution fit");
            continue;
        }
        try
        {
            EnvParamModel model = fit_environment(env_fits, env, config.min_cells_per_env);
            save_env_model(model, config.out_dir + "/env_model_" + to_string(env) + ".json");
            summary.env_models[env] = std::move(model);
        }
        catch (const dist_fit_error &e)
        {
            throw stage_error("distfit", e.what());
        }
    }

    {
        AtomicWriter w(config.out_dir + "/summary.txt");
        w.stream() << summary.table();
        w.commit();
    }
    return summary;
}

} // namespace losmodel

#endif
