// Copyright 2026 The fieldseg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fieldseg/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fieldseg/errors.hpp"
#include "fieldseg/pipeline.hpp"
#include "fieldseg/png_io.hpp"
#include "fieldseg/synth.hpp"

namespace fieldseg {

namespace {

namespace fs = std::filesystem;

struct Overrides {
    std::string config;
    std::string image;
    std::vector<std::string> edge_maps;
    std::string mask;
    std::string gt;
    std::string model;
    std::string out;
    std::uint64_t seed = 0;
    std::string stages;
    bool debug_cuts = false;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* stages_opt = nullptr;
};

void add_run_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "Configuration file");
    cmd->add_option("--image", o.image, "Input RGB PNG");
    cmd->add_option("--edge-map", o.edge_maps, "Edge-probability PNG (repeatable; maps are averaged)");
    cmd->add_option("--mask", o.mask, "Cropland mask PNG");
    cmd->add_option("--gt", o.gt, "Ground-truth GeoJSON");
    cmd->add_option("--model", o.model, "Classifier model JSON");
    cmd->add_option("--out", o.out, "Output directory");
    o.seed_opt = cmd->add_option("--seed", o.seed, "Random seed");
    o.stages_opt = cmd->add_option("--stages", o.stages, "Comma-separated stages: pp,mc,lcd,nonag");
    cmd->add_flag("--debug-cuts", o.debug_cuts, "Write candidate and chosen cuts");
}

RunConfig resolve(const Overrides& o) {
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (!o.image.empty()) cfg.input_image = o.image;
    if (!o.edge_maps.empty()) cfg.edge_maps = o.edge_maps;
    if (!o.mask.empty()) cfg.cropland_mask = o.mask;
    if (!o.gt.empty()) cfg.gt = o.gt;
    if (!o.model.empty()) cfg.model_path = o.model;
    if (!o.out.empty()) cfg.output_dir = o.out;
    if (o.seed_opt && o.seed_opt->count() > 0) cfg.seed = o.seed;
    if (o.stages_opt && o.stages_opt->count() > 0) cfg.stages = parse_stages(o.stages);
    if (o.debug_cuts) cfg.debug_cuts = true;
    cfg.validate();
    return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
}

fs::path prepare_out(const std::string& dir) {
    const fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw InputError("cannot create output directory " + dir + ": " + ec.message());
    return p;
}

std::optional<ForestModel> model_for(const RunConfig& cfg) {
    if (!cfg.stages.nonag) return std::nullopt;
    return load_model(cfg.model_path);
}

std::string summary_json(const PipelineResult& r) {
    nlohmann::json timings = nlohmann::json::object();
    for (const auto& [name, secs] : r.timings) timings[name] = secs;
    const nlohmann::json doc = {{"counts",
                                 {{"extracted", r.counts.extracted},
                                  {"filtered", r.counts.filtered},
                                  {"mincut", r.counts.mincut},
                                  {"localized", r.counts.localized},
                                  {"ag", r.counts.ag}}},
                                {"timings_s", timings}};
    return doc.dump(1) + "\n";
}

int cmd_run(const Overrides& o) {
    const RunConfig cfg = resolve(o);
    const std::optional<ForestModel> model = model_for(cfg);
    const PipelineInputs in = load_inputs(cfg);
    std::vector<LabeledRegion> gt;
    if (!cfg.gt.empty()) gt = read_geojson(cfg.gt, in.image.width(), in.image.height());

    const PipelineResult r = run_pipeline(in, cfg, model ? &*model : nullptr);
    const fs::path out = prepare_out(cfg.output_dir);
    write_text(out / "parcels.geojson", parcels_to_geojson(r.parcels, cfg.affine));
    write_png_rgb((out / "overlay.png").string(), render_overlay(in.image, r.parcels));
    write_text(out / "audit.json", audit_json(r.dropped));
    if (cfg.debug_cuts) write_text(out / "cuts.json", cuts_json(r.trace));
    if (!cfg.gt.empty()) {
        const EvalReport rep = evaluate_result(r, gt, in.image.width(), in.image.height(), cfg);
        write_text(out / "metrics.csv", report_csv(rep));
        write_text(out / "metrics.json", report_to_json(rep) + "\n");
        std::cout << report_csv(rep);
    }
    write_text(out / "summary.json", summary_json(r));
    std::cout << r.parcels.size() << " parcels (" << r.counts.ag << " Ag) written to " << out.string() << "\n";
    return 0;
}

int cmd_ablate(const Overrides& o) {
    const RunConfig cfg = resolve(o);
    if (cfg.gt.empty()) throw ConfigError("ablate needs ground truth (--gt)");
    const std::optional<ForestModel> model = model_for(cfg);
    const PipelineInputs in = load_inputs(cfg);
    const std::vector<LabeledRegion> gt = read_geojson(cfg.gt, in.image.width(), in.image.height());
    const std::vector<AblationRow> rows = run_ablation(in, cfg, model ? &*model : nullptr, gt);
    const fs::path out = prepare_out(cfg.output_dir);
    const std::string csv = ablation_csv(rows);
    write_text(out / "ablation.csv", csv);
    std::cout << csv;
    return 0;
}

struct TrainArgs {
    std::string config;
    std::string manifest;
    std::string dir;
    std::string model;
    int folds = 5;
    std::uint64_t seed = 0;
};

int cmd_train(const TrainArgs& a) {
    const RunConfig cfg = a.config.empty() ? RunConfig{} : load_config(a.config);
    cfg.forest.validate();
    if (a.model.empty()) throw ConfigError("train needs an output model path (--model)");
    const std::string dir = a.dir.empty() ? fs::path(a.manifest).parent_path().string() : a.dir;
    const std::vector<LabeledSample> data = load_training_set(a.manifest, dir.empty() ? "." : dir);
    const CrossValidation cv = cross_validate(data, a.folds, cfg.forest, a.seed);
    std::printf("%-12s %10s %10s\n", "", "pred Ag", "pred NonAg");
    std::printf("%-12s %10ld %10ld\n", "true Ag", cv.total[0][0], cv.total[0][1]);
    std::printf("%-12s %10ld %10ld\n", "true NonAg", cv.total[1][0], cv.total[1][1]);
    std::printf("accuracy %.4f  macro-F1 %.4f  (%d folds, %zu samples)\n", cv.accuracy, cv.macro_f1, a.folds,
                data.size());
    const ForestModel model = train_forest(data, cfg.forest, a.seed);
    save_model(a.model, model);
    std::printf("model written to %s (out-of-bag accuracy %.4f)\n", a.model.c_str(), model.oob_accuracy);
    return 0;
}

struct EvalArgs {
    std::string config;
    std::string gt;
    std::string det;
    std::string image;
    int width = 0;
    int height = 0;
    std::string out;
};

int cmd_eval(const EvalArgs& a) {
    const RunConfig cfg = a.config.empty() ? RunConfig{} : load_config(a.config);
    int w = a.width;
    int h = a.height;
    if (!a.image.empty()) {
        const RgbImage img = read_png_rgb(a.image);
        w = img.width();
        h = img.height();
    }
    if (w < 1 || h < 1) throw ConfigError("eval needs the frame size (--image or --width/--height)");
    std::vector<Region> g;
    for (LabeledRegion& r : read_geojson(a.gt, w, h)) {
        if (r.label != CropClass::NonAg) g.push_back(std::move(r.region));
    }
    std::vector<Region> d;
    for (LabeledRegion& r : read_geojson(a.det, w, h)) {
        if (r.label != CropClass::NonAg) d.push_back(std::move(r.region));
    }
    const EvalReport rep = evaluate(g, d, w, h, cfg.link_min_overlap, cfg.log_base);
    if (!a.out.empty()) {
        const fs::path out = prepare_out(a.out);
        write_text(out / "metrics.csv", report_csv(rep));
        write_text(out / "metrics.json", report_to_json(rep) + "\n");
    }
    std::cout << report_csv(rep);
    return 0;
}

int cmd_synth(const SynthSpec& spec, const std::string& out_dir) {
    const SynthScene scene = synth_generate(spec);
    const fs::path out = prepare_out(out_dir);
    write_png_rgb((out / "image.png").string(), scene.image);
    write_text(out / "gt.geojson", scene.gt_geojson);
    std::cout << "wrote " << (out / "image.png").string() << " (" << scene.image.width() << "x"
              << scene.image.height() << ") and " << scene.gt.size() << " ground-truth fields\n";
    return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"fieldseg: agricultural field boundary extraction"};
    app.require_subcommand(1);

    Overrides run_o;
    add_run_flags(app.add_subcommand("run", "Run the pipeline on one image"), run_o);
    Overrides abl_o;
    add_run_flags(app.add_subcommand("ablate", "Score PP, PP+MC, PP+LCD and PP+MC+LCD against ground truth"), abl_o);

    TrainArgs train;
    CLI::App* train_cmd = app.add_subcommand("train", "Cross-validate and train the Ag / NonAg classifier");
    train_cmd->add_option("--config", train.config, "Configuration file");
    train_cmd->add_option("--manifest", train.manifest, "CSV of id,label")->required();
    train_cmd->add_option("--dir", train.dir, "Directory holding <id>.png crops (default: manifest directory)");
    train_cmd->add_option("--model", train.model, "Output model JSON");
    train_cmd->add_option("--folds", train.folds, "Cross-validation folds");
    train_cmd->add_option("--seed", train.seed, "Random seed");

    EvalArgs ev;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Score detected polygons against ground truth");
    eval_cmd->add_option("--config", ev.config, "Configuration file");
    eval_cmd->add_option("--gt", ev.gt, "Ground-truth GeoJSON")->required();
    eval_cmd->add_option("--det", ev.det, "Detected GeoJSON")->required();
    eval_cmd->add_option("--image", ev.image, "Image giving the frame size");
    eval_cmd->add_option("--width", ev.width, "Frame width");
    eval_cmd->add_option("--height", ev.height, "Frame height");
    eval_cmd->add_option("--out", ev.out, "Output directory for metrics");

    SynthSpec synth;
    std::string synth_out = "synth";
    CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic field grid and its ground truth");
    synth_cmd->add_option("--rows", synth.rows, "Grid rows");
    synth_cmd->add_option("--cols", synth.cols, "Grid columns");
    synth_cmd->add_option("--cell", synth.cell, "Cell pitch in pixels");
    synth_cmd->add_option("--boundary", synth.boundary, "Boundary width in pixels");
    synth_cmd->add_option("--jitter", synth.jitter, "Field intensity noise (standard deviation)");
    synth_cmd->add_option("--faint", synth.faint_boundaries, "Number of faint internal boundaries");
    synth_cmd->add_option("--pockets", synth.nonag_pockets, "Number of NonAg texture cells");
    synth_cmd->add_option("--seed", synth.seed, "Random seed");
    synth_cmd->add_option("--out", synth_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand("run")) return cmd_run(run_o);
        if (app.got_subcommand("ablate")) return cmd_ablate(abl_o);
        if (app.got_subcommand("train")) return cmd_train(train);
        if (app.got_subcommand("eval")) return cmd_eval(ev);
        if (app.got_subcommand("synth")) return cmd_synth(synth, synth_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 4;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

}  // namespace fieldseg
