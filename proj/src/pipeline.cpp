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

#include "fieldseg/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "fieldseg/errors.hpp"
#include "fieldseg/png_io.hpp"

namespace fieldseg {

PipelineInputs load_inputs(const RunConfig& cfg) {
    if (cfg.input_image.empty()) throw InputError("no input image given (--image)");
    PipelineInputs in;
    in.image = read_png_rgb(cfg.input_image);
    for (const std::string& path : cfg.edge_maps) {
        EdgeMap m = load_edge_map(path);
        if (m.width() != in.image.width() || m.height() != in.image.height()) {
            throw InputError("edge map " + path + " is " + std::to_string(m.width()) + "x" +
                             std::to_string(m.height()) + " but the image is " + std::to_string(in.image.width()) +
                             "x" + std::to_string(in.image.height()));
        }
        in.edge_maps.push_back(std::move(m));
    }
    if (!cfg.cropland_mask.empty()) {
        BinaryMask m = read_png_mask(cfg.cropland_mask);
        if (m.width() != in.image.width() || m.height() != in.image.height()) {
            throw InputError("cropland mask " + cfg.cropland_mask + " does not match the image size");
        }
        in.cropland = std::move(m);
    }
    return in;
}

EdgeMap stage1_edge_map(const PipelineInputs& in, const RunConfig& cfg) {
    if (!in.edge_maps.empty()) return fuse_edge_maps(in.edge_maps);
    const GrayImage gray = to_gray(in.image);
    const BinaryMask region = in.cropland ? *in.cropland : BinaryMask(gray.width(), gray.height(), true);
    if (region.count() == 0) throw InputError("cropland mask selects no pixels");
    const HysteresisParams hp = local_hysteresis_params(gray, region, cfg.canny.k_low, cfg.canny.k_high, cfg.canny.sigma);
    return canny(gray, hp);
}

namespace {

class StageClock {
public:
    explicit StageClock(std::vector<std::pair<std::string, double>>& out) : out_(out) {}
    void lap(const std::string& name) {
        const auto now = std::chrono::steady_clock::now();
        out_.emplace_back(name, std::chrono::duration<double>(now - last_).count());
        last_ = now;
    }

private:
    std::vector<std::pair<std::string, double>>& out_;
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

void sort_by_id(std::vector<Parcel>& v) {
    std::stable_sort(v.begin(), v.end(), [](const Parcel& a, const Parcel& b) { return id_less(a.id(), b.id()); });
}

}  // namespace

PipelineResult run_pipeline(const PipelineInputs& in, const RunConfig& cfg, const ForestModel* model) {
    cfg.validate();
    if (cfg.stages.nonag && model == nullptr) throw ModelError("the nonag stage needs a classifier model");
    PipelineResult r;
    StageClock clock(r.timings);

    r.stage1_edges = stage1_edge_map(in, cfg);
    std::vector<Parcel> parcels = extract_parcels(r.stage1_edges, in.cropland, cfg.extraction);
    r.counts.extracted = parcels.size();
    clock.lap("extract");

    if (cfg.stages.pp) {
        FilterResult f = apply_filter(parcels, cfg.thresholds);
        parcels = std::move(f.kept);
        r.dropped = std::move(f.dropped);
    }
    r.counts.filtered = parcels.size();
    clock.lap("filter");

    if (cfg.stages.mc) {
        SplitParams sp = cfg.split;
        sp.min_sub_contour = cfg.thresholds.sub_polygon_min_contour;
        const DirectionalDistanceField dcd = build_directional_field(r.stage1_edges, sp);
        std::vector<Parcel> next;
        for (const Parcel& p : parcels) {
            for (Parcel& c : split_mincut(p, r.stage1_edges, dcd, sp, cfg.debug_cuts ? &r.trace : nullptr)) {
                next.push_back(std::move(c));
            }
        }
        parcels = std::move(next);
        sort_by_id(parcels);
    }
    r.counts.mincut = parcels.size();
    clock.lap("mincut");

    if (cfg.stages.lcd) {
        const GrayImage gray = to_gray(in.image);
        std::vector<Parcel> next;
        for (const Parcel& p : parcels) {
            for (Parcel& c : split_localized(p, gray, cfg.extraction, cfg.thresholds, cfg.lcd)) next.push_back(std::move(c));
        }
        parcels = std::move(next);
        sort_by_id(parcels);
    }
    r.counts.localized = parcels.size();
    clock.lap("localized");

    for (Parcel& p : parcels) {
        ClassifiedParcel cp{std::move(p), CropClass::Ag, 0.0};
        if (cfg.stages.nonag) {
            try {
                const FeatureVector f = extract_features(cp.parcel, in.image);
                const Prediction pred = predict(*model, f.values);
                cp.label = pred.label;
                cp.confidence = pred.confidence;
            } catch (const InputError&) {
                // Too small to describe: not kept as a field.
                cp.label = CropClass::NonAg;
            }
        }
        if (cp.label == CropClass::Ag) ++r.counts.ag;
        r.parcels.push_back(std::move(cp));
    }
    clock.lap("classify");
    return r;
}

EvalReport evaluate_result(const PipelineResult& result, std::span<const LabeledRegion> gt, int width, int height,
                           const RunConfig& cfg) {
    std::vector<Region> g;
    for (const LabeledRegion& r : gt) {
        if (r.label != CropClass::NonAg) g.push_back(r.region);
    }
    std::vector<Region> d;
    for (const ClassifiedParcel& cp : result.parcels) {
        if (cp.label == CropClass::Ag) d.push_back(Region::from_parcel(cp.parcel));
    }
    return evaluate(g, d, width, height, cfg.link_min_overlap, cfg.log_base);
}

std::vector<AblationRow> run_ablation(const PipelineInputs& in, const RunConfig& cfg, const ForestModel* model,
                                      std::span<const LabeledRegion> gt) {
    struct Variant {
        const char* name;
        bool mc;
        bool lcd;
    };
    const Variant variants[] = {{"PP", false, false}, {"PP+MC", true, false}, {"PP+LCD", false, true},
                                {"PP+MC+LCD", true, true}};
    std::vector<AblationRow> rows;
    for (const Variant& v : variants) {
        RunConfig c = cfg;
        c.stages.pp = true;
        c.stages.mc = v.mc;
        c.stages.lcd = v.lcd;
        c.debug_cuts = false;
        const PipelineResult res = run_pipeline(in, c, model);
        const EvalReport rep = evaluate_result(res, gt, in.image.width(), in.image.height(), c);
        rows.push_back({v.name, rep.image, rep.detection_rate});
    }
    return rows;
}

std::string ablation_csv(std::span<const AblationRow> rows) {
    std::string out = "Method,Precision,Recall,F1,DetectionRate\n";
    char line[256];
    for (const AblationRow& r : rows) {
        std::snprintf(line, sizeof line, "%s,%.6f,%.6f,%.6f,%.6f\n", r.name.c_str(), r.metrics.precision,
                      r.metrics.recall, r.metrics.f1, r.detection_rate);
        out += line;
    }
    return out;
}

RgbImage render_overlay(const RgbImage& base, std::span<const ClassifiedParcel> parcels) {
    constexpr double kAlpha = 0.45;
    RgbImage out = base;
    for (const ClassifiedParcel& cp : parcels) {
        const std::uint8_t tint[3] = {static_cast<std::uint8_t>(cp.label == CropClass::Ag ? 255 : 128),
                                      static_cast<std::uint8_t>(cp.label == CropClass::Ag ? 255 : 0),
                                      static_cast<std::uint8_t>(cp.label == CropClass::Ag ? 0 : 128)};
        const BinaryMask& m = cp.parcel.mask();
        const Point o = cp.parcel.origin();
        for (int y = 0; y < m.height(); ++y) {
            for (int x = 0; x < m.width(); ++x) {
                if (!m.at(x, y) || !out.contains(o.x + x, o.y + y)) continue;
                std::uint8_t px[3];
                for (int ch = 0; ch < 3; ++ch) {
                    const double v = (1.0 - kAlpha) * base.at(o.x + x, o.y + y, ch) + kAlpha * tint[ch];
                    px[ch] = static_cast<std::uint8_t>(std::lround(v));
                }
                out.set(o.x + x, o.y + y, px[0], px[1], px[2]);
            }
        }
    }
    return out;
}

std::string audit_json(std::span<const std::pair<Parcel, FilterVerdict>> dropped) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& [p, v] : dropped) {
        list.push_back({{"id", p.id()},
                        {"rule", std::string(to_string(v.rule_fired))},
                        {"area", area(p)},
                        {"perimeter", perimeter(p)}});
    }
    return list.dump(1) + "\n";
}

namespace {

nlohmann::json cut_json(const Cut& c) {
    return {{"i", c.i},
            {"j", c.j},
            {"a", {c.a.x, c.a.y}},
            {"b", {c.b.x, c.b.y}},
            {"euclid", c.euclid},
            {"along_contour", c.along_contour},
            {"strength", c.strength},
            {"admissible", c.admissible}};
}

}  // namespace

std::string cuts_json(const SplitTrace& trace) {
    nlohmann::json list = nlohmann::json::array();
    for (const SplitTrace::Step& s : trace.steps) {
        nlohmann::json points = nlohmann::json::array();
        for (const Point& q : s.cut_points) points.push_back({q.x, q.y});
        nlohmann::json cands = nlohmann::json::array();
        for (const Cut& c : s.candidates) cands.push_back(cut_json(c));
        list.push_back({{"parcel", s.parcel_id},
                        {"cut_points", points},
                        {"candidates", cands},
                        {"chosen", s.chosen ? cut_json(*s.chosen) : nlohmann::json(nullptr)}});
    }
    return list.dump(1) + "\n";
}

}  // namespace fieldseg
