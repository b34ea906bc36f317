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

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "losmodel/pipeline.hpp"
#include "losmodel/presets.hpp"
#include "losmodel/synth_city.hpp"

namespace fs = std::filesystem;
using namespace losmodel;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_input_error = 2;
constexpr int exit_stage_error = 3;

DistrictArchetype archetype_by_name(const std::string &name)
{
    DistrictArchetype a;
    if (name == "rural")
    {
        a.street_pitch = 400.0;
        a.coverage = 0.04;
        a.height_median = 4.0;
        a.bs_height_agl = 40.0;
    }
    else if (name == "suburban")
    {
        a.street_pitch = 150.0;
        a.coverage = 0.18;
        a.height_median = 6.0;
        a.bs_height_agl = 30.0;
    }
    else if (name == "urban")
    {
        a.street_pitch = 120.0;
        a.coverage = 0.25;
        a.height_median = 15.0;
        a.bs_height_agl = 28.0;
    }
    else if (name == "metro")
    {
        a.street_pitch = 100.0;
        a.coverage = 0.30;
        a.height_median = 40.0;
        a.height_sigma_ln = 0.4;
        a.bs_height_agl = 45.0;
    }
    else
        throw parse_error("unknown archetype '" + name + "' (rural|suburban|urban|metro)");
    return a;
}

struct SceneArgs {
    std::string buildings, terrain, streets, stations;
    void add_to(CLI::App *cmd)
    {
        cmd->add_option("--buildings", buildings, "buildings JSON")->required();
        cmd->add_option("--terrain", terrain, "terrain raster")->required();
        cmd->add_option("--streets", streets, "streets JSON")->required();
        cmd->add_option("--stations", stations, "stations CSV")->required();
    }
};

EnvClass parse_env(const std::string &s) { return env_from_string(s); }

int run(int argc, char **argv)
{
    CLI::App app{"LOS probability modeling toolkit: geospatial extraction, model fitting, "
                 "parameter statistics, and SIR outage simulation"};
    app.require_subcommand(1);

    // ---- generate-city ----
    auto *gen = app.add_subcommand("generate-city", "write a synthetic scene (grid or slab-row layout)");
    std::string gen_out = "city";
    std::uint64_t gen_seed = 1;
    std::string gen_layout = "grid";
    std::string gen_archetypes = "suburban";
    SyntheticCitySpec spec;
    double gen_coverage = -1, gen_pitch = -1, gen_height = -1, gen_missing = -1;
    gen->add_option("--out", gen_out, "output directory");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--layout", gen_layout, "grid|row");
    gen->add_option("--cells-x", spec.cells_x, "districts along x");
    gen->add_option("--cells-y", spec.cells_y, "districts along y");
    gen->add_option("--radius", spec.cell_radius, "district half-size / analysis radius");
    gen->add_option("--archetypes", gen_archetypes, "comma list cycled per district");
    gen->add_option("--jitter", spec.jitter, "relative per-district parameter jitter");
    gen->add_option("--coverage", gen_coverage, "override archetype coverage");
    gen->add_option("--pitch", gen_pitch, "override street pitch");
    gen->add_option("--height-median", gen_height, "override building height median");
    gen->add_option("--missing-fraction", gen_missing, "override missing-height fraction");
    gen->add_option("--terrain-z0", spec.terrain_z0, "base terrain elevation");
    gen->add_option("--terrain-slope", spec.terrain_slope_x, "elevation slope along x");
    gen->add_option("--row-count", spec.row_count, "row layout: number of slabs");
    gen->add_option("--row-height", spec.row_height, "row layout: slab height");
    gen->add_option("--row-y", spec.row_y, "row layout: slab center y");
    gen->add_option("--row-bs-height", spec.row_bs_height_agl, "row layout: BS height");

    // ---- extract ----
    auto *ext = app.add_subcommand("extract", "label street points LOS/NLOS by ray tracing");
    SceneArgs ext_scene;
    ext_scene.add_to(ext);
    std::string ext_out = "samples";
    ExtractConfig ext_cfg;
    double ext_index_cell = 50.0;
    ext->add_option("--out", ext_out, "output directory for per-cell CSVs");
    ext->add_option("--radius", ext_cfg.radius, "analysis radius [m]");
    ext->add_option("--spacing", ext_cfg.spacing, "street sampling interval [m]");
    ext->add_option("--ue-height", ext_cfg.ue_height, "street point height [m]");
    ext->add_option("--step", ext_cfg.step, "ray sampling step [m]");
    ext->add_option("--index-cell", ext_index_cell, "spatial index cell size [m]");

    // ---- classify ----
    auto *cls = app.add_subcommand("classify", "per-cell building statistics and environment class");
    SceneArgs cls_scene;
    cls_scene.add_to(cls);
    std::string cls_out = "classification.csv";
    double cls_radius = 1000.0, cls_threshold = 0.90;
    cls->add_option("--out", cls_out, "output CSV");
    cls->add_option("--radius", cls_radius, "analysis radius [m]");
    cls->add_option("--threshold", cls_threshold, "height-to-footprint reliability threshold");

    // ---- bin ----
    auto *bin = app.add_subcommand("bin", "distance-bin labeled samples into empirical curves");
    std::vector<std::string> bin_inputs;
    std::string bin_out = "curves.csv";
    double bin_width = 5.0, bin_max_radius = 1000.0;
    bin->add_option("--samples", bin_inputs, "sample CSVs or directories of them")->required();
    bin->add_option("--out", bin_out, "output curves CSV");
    bin->add_option("--width", bin_width, "bin width [m]");
    bin->add_option("--max-radius", bin_max_radius, "maximum distance [m]");

    // ---- fit ----
    auto *fit = app.add_subcommand("fit", "fit (U, W, F) to each curve");
    std::string fit_curves, fit_out = "fits.csv", fit_classification, fit_metric_name = "msle";
    FitConfig fit_cfg;
    fit->add_option("--curves", fit_curves, "curves CSV")->required();
    fit->add_option("--out", fit_out, "output fits CSV");
    fit->add_option("--classification", fit_classification,
                    "classification CSV supplying the environment column");
    fit->add_option("--metric", fit_metric_name, "mse|msle|wmse-r|wmse-invp");
    fit->add_option("--starts", fit_cfg.n_starts, "grid seeds for the multi-start descent");
    fit->add_option("--nsse-threshold", fit_cfg.nsse_threshold, "outlier threshold");
    bool fit_fix_f = false;
    fit->add_flag("--fix-f", fit_fix_f, "pin F at 1 (d1/d2 comparison mode)");

    // ---- distfit ----
    auto *dfit = app.add_subcommand("distfit", "fit parameter distributions per environment");
    std::string dfit_fits, dfit_out = ".";
    std::size_t dfit_min_cells = 10;
    dfit->add_option("--fits", dfit_fits, "fits CSV")->required();
    dfit->add_option("--out-dir", dfit_out, "directory for env_model_<env>.json");
    dfit->add_option("--min-cells", dfit_min_cells, "minimum non-outlier cells per environment");

    // ---- sample ----
    auto *smp = app.add_subcommand("sample", "generate correlated (U, W, F) triplets");
    std::string smp_model, smp_env = "uma", smp_out = "triplets.csv";
    std::size_t smp_count = 1000;
    std::uint64_t smp_seed = 1;
    smp->add_option("--model-json", smp_model, "environment model JSON (default: bundled preset)");
    smp->add_option("--env", smp_env, "rma|sma|uma|metma (for the bundled preset)");
    smp->add_option("--count", smp_count, "number of triplets");
    smp->add_option("--seed", smp_seed, "sampler seed");
    smp->add_option("--out", smp_out, "output CSV");

    // ---- simulate ----
    auto *sim = app.add_subcommand("simulate", "two-BS Monte Carlo SIR outage");
    std::string sim_model = "ensemble", sim_env = "uma", sim_model_json, sim_out = "outage";
    SimConfig sim_cfg;
    std::vector<double> sim_distances;
    sim->add_option("--model", sim_model, "ensemble|average|3gpp");
    sim->add_option("--env", sim_env, "rma|sma|uma|metma");
    sim->add_option("--model-json", sim_model_json, "fitted environment model JSON (ensemble mode)");
    sim->add_option("--out-dir", sim_out, "output directory");
    sim->add_option("--distances", sim_distances, "serving-BS distances [m]");
    sim->add_option("--pairs", sim_cfg.n_param_pairs, "parameter pairs per distance");
    sim->add_option("--realizations", sim_cfg.n_los_realizations, "LOS realizations per pair");
    sim->add_option("--seed", sim_cfg.seed, "simulation seed");
    sim->add_option("--threshold", sim_cfg.sir_threshold_db, "SIR outage threshold [dB]");
    sim->add_option("--ue-height", sim_cfg.ue_height, "UE height [m]");

    // ---- pipeline ----
    auto *pipe = app.add_subcommand("pipeline", "run extract -> classify -> bin -> fit -> distfit");
    std::string pipe_config;
    std::string pipe_out_override;
    std::uint64_t pipe_seed_override = 0;
    bool pipe_seed_set = false;
    pipe->add_option("--config", pipe_config, "pipeline config JSON")->required();
    pipe->add_option("--out-dir", pipe_out_override, "override the configured output directory");
    pipe->add_option("--seed", pipe_seed_override, "override the configured seed")
        ->each([&](const std::string &) { pipe_seed_set = true; });

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return exit_input_error;
    }

    if (gen->parsed())
    {
        spec.layout = gen_layout == "row" ? SyntheticCitySpec::Layout::row
                      : gen_layout == "grid"
                          ? SyntheticCitySpec::Layout::grid
                          : throw parse_error("unknown layout '" + gen_layout + "'");
        spec.archetypes.clear();
        std::stringstream ss(gen_archetypes);
        std::string name;
        while (std::getline(ss, name, ','))
            if (!name.empty())
                spec.archetypes.push_back(archetype_by_name(name));
        if (spec.archetypes.empty())
            spec.archetypes.push_back(DistrictArchetype{});
        for (auto &a : spec.archetypes)
        {
            if (gen_coverage >= 0)
                a.coverage = gen_coverage;
            if (gen_pitch > 0)
                a.street_pitch = gen_pitch;
            if (gen_height > 0)
                a.height_median = gen_height;
            if (gen_missing >= 0)
                a.missing_fraction = gen_missing;
        }
        generate_city_files(spec, gen_seed, gen_out);
        std::cout << "wrote scene to " << gen_out << "/\n";
        return exit_ok;
    }

    if (ext->parsed())
    {
        Scene scene = load_scene(ext_scene.buildings, ext_scene.terrain, ext_scene.streets,
                                 ext_scene.stations);
        if (scene.stations.empty())
            throw stage_error("extract", "no stations in '" + ext_scene.stations + "'");
        SpatialIndex index(scene, ext_index_cell);
        fs::create_directories(ext_out);
        std::vector<CellLosData> cells(scene.stations.size());
        parallel_for(scene.stations.size(), [&](std::size_t i) {
            cells[i] = extract_cell(scene, index, scene.stations[i], ext_cfg);
        });
        for (std::size_t i = 0; i < cells.size(); ++i)
            write_samples_csv(cells[i], ext_out + "/cell_" + scene.stations[i].id + ".csv");
        std::cout << "extracted " << cells.size() << " cells into " << ext_out << "/\n";
        return exit_ok;
    }

    if (cls->parsed())
    {
        Scene scene = load_scene(cls_scene.buildings, cls_scene.terrain, cls_scene.streets,
                                 cls_scene.stations);
        std::vector<CellClassification> rows(scene.stations.size());
        parallel_for(scene.stations.size(), [&](std::size_t i) {
            CellClassification c;
            c.bs_id = scene.stations[i].id;
            c.stats = cell_stats(scene, scene.stations[i], cls_radius);
            c.env = classify(c.stats);
            c.kept = c.stats.height_to_footprint_ratio >= cls_threshold;
            rows[i] = std::move(c);
        });
        write_classification_csv(rows, cls_out);
        std::size_t kept = 0;
        for (const auto &r : rows)
            kept += r.kept;
        std::cout << "classified " << rows.size() << " cells (" << kept << " kept) -> " << cls_out
                  << "\n";
        return exit_ok;
    }

    if (bin->parsed())
    {
        std::vector<LosCurve> curves;
        std::vector<std::string> files;
        for (const auto &input : bin_inputs)
        {
            if (fs::is_directory(input))
            {
                for (const auto &e : fs::directory_iterator(input))
                    if (e.path().extension() == ".csv")
                        files.push_back(e.path().string());
                std::sort(files.begin(), files.end());
            }
            else
                files.push_back(input);
        }
        for (const auto &f : files)
            for (const auto &cell : read_samples_csv(f))
                if (cell.usable())
                    curves.push_back(bin_samples(cell, bin_width, bin_max_radius));
        write_curves_csv(curves, bin_out);
        std::cout << "binned " << curves.size() << " cells -> " << bin_out << "\n";
        return exit_ok;
    }

    if (fit->parsed())
    {
        fit_cfg.metric = fit_metric_from_string(fit_metric_name);
        fit_cfg.fix_f = fit_fix_f;
        std::map<std::string, EnvClass> env_of;
        if (!fit_classification.empty())
            for (const auto &c : read_classification_csv(fit_classification))
                env_of[c.bs_id] = c.env;
        auto curves = read_curves_csv(fit_curves);
        std::vector<CellFitRow> rows(curves.size());
        parallel_for(curves.size(), [&](std::size_t i) {
            CellFitRow row;
            row.bs_id = curves[i].source;
            auto it = env_of.find(row.bs_id);
            row.env = it == env_of.end() ? EnvClass::UMa : it->second;
            row.fit = fit_cell(curves[i], fit_cfg);
            rows[i] = std::move(row);
        });
        write_fits_csv(rows, fit_out);
        std::size_t outliers = 0;
        for (const auto &r : rows)
            outliers += r.fit.is_outlier;
        std::cout << "fitted " << rows.size() << " curves (" << outliers << " outliers) -> " << fit_out
                  << "\n";
        return exit_ok;
    }

    if (dfit->parsed())
    {
        auto rows = read_fits_csv(dfit_fits);
        fs::create_directories(dfit_out);
        std::size_t written = 0;
        for (EnvClass env : {EnvClass::RMa, EnvClass::SMa, EnvClass::UMa, EnvClass::MetMa})
        {
            std::vector<FitResult> fits;
            for (const auto &r : rows)
                if (r.env == env && !r.fit.is_outlier)
                    fits.push_back(r.fit);
            if (fits.size() < dfit_min_cells)
                continue;
            EnvParamModel model = fit_environment(fits, env, dfit_min_cells);
            save_env_model(model, dfit_out + "/env_model_" + to_string(env) + ".json");
            std::cout << to_string(env) << ": " << fits.size() << " cells, U=" << to_string(model.dist_U.family)
                      << " W=" << to_string(model.dist_W.family)
                      << " F=" << to_string(model.dist_F.family) << "\n";
            ++written;
        }
        if (written == 0)
            throw stage_error("distfit", "no environment had enough non-outlier cells");
        return exit_ok;
    }

    if (smp->parsed())
    {
        EnvParamModel model = smp_model.empty() ? presets::environment_model(parse_env(smp_env))
                                                : load_env_model(smp_model);
        TripletSampler sampler(model, smp_seed);
        std::vector<LosModelParams> triplets(smp_count);
        for (auto &t : triplets)
            t = sampler.sample_triplet();
        write_triplets_csv(triplets, smp_out);
        std::cout << "sampled " << smp_count << " triplets -> " << smp_out << "\n";
        return exit_ok;
    }

    if (sim->parsed())
    {
        if (!sim_distances.empty())
            sim_cfg.d_bs1_values = sim_distances;
        EnvClass env = parse_env(sim_env);
        std::unique_ptr<ParamPairSource> source;
        std::string tag = sim_model;
        if (sim_model == "ensemble")
        {
            EnvParamModel model = sim_model_json.empty() ? presets::environment_model(env)
                                                         : load_env_model(sim_model_json);
            source = std::make_unique<EnsemblePairSource>(model, sim_cfg.seed ^ 0x9e3779b9ull);
        }
        else if (sim_model == "average")
        {
            LinkLosModel m = LinkLosModel::from_params(presets::average_model(env));
            source = std::make_unique<FixedPairSource>(m, m);
        }
        else if (sim_model == "3gpp")
        {
            LinkLosModel m = LinkLosModel::from_d1d2(presets::d1d2_3gpp());
            source = std::make_unique<FixedPairSource>(m, m);
        }
        else
            throw parse_error("unknown model '" + sim_model + "' (ensemble|average|3gpp)");
        auto results = simulate(*source, sim_cfg, tag);
        fs::create_directories(sim_out);
        write_outage_csv(results, sim_out + "/outage_" + tag + ".csv");
        write_outage_cdf_csv(results, sim_out + "/outage_cdf_" + tag + ".csv");
        for (const auto &r : results)
            std::cout << tag << " d_bs1=" << r.d_bs1 << " mean_outage=" << format_double(r.mean_outage)
                      << "\n";
        return exit_ok;
    }

    if (pipe->parsed())
    {
        PipelineConfig config = load_pipeline_config(pipe_config);
        if (!pipe_out_override.empty())
            config.out_dir = pipe_out_override;
        if (pipe_seed_set)
            config.seed = pipe_seed_override;
        PipelineSummary summary = run_pipeline(config);
        std::cout << summary.table();
        return exit_ok;
    }

    return exit_ok;
}

} // namespace

int main(int argc, char **argv)
{
    try
    {
        return run(argc, argv);
    }
    catch (const parse_error &e)
    {
        std::cerr << "input error: " << e.what() << "\n";
        return exit_input_error;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "input error: " << e.what() << "\n";
        return exit_input_error;
    }
    catch (const stage_error &e)
    {
        std::cerr << "stage failure: " << e.what() << "\n";
        return exit_stage_error;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_stage_error;
    }
}
