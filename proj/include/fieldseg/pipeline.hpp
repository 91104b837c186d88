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

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fieldseg/config.hpp"

namespace fieldseg {

struct PipelineInputs {
    RgbImage image;
    std::vector<EdgeMap> edge_maps;
    std::optional<BinaryMask> cropland;
};

/// Reads the image, edge maps and cropland mask named in the config. Dimension mismatches
/// raise InputError.
PipelineInputs load_inputs(const RunConfig& cfg);

struct StageCounts {
    std::size_t extracted = 0;
    std::size_t filtered = 0;
    std::size_t mincut = 0;
    std::size_t localized = 0;
    std::size_t ag = 0;
};

struct PipelineResult {
    std::vector<ClassifiedParcel> parcels;
    std::vector<std::pair<Parcel, FilterVerdict>> dropped;
    StageCounts counts;
    /// Wall time per stage in seconds.
    std::vector<std::pair<std::string, double>> timings;
    SplitTrace trace;
    EdgeMap stage1_edges;
};

/// The stage-1 edge map: the fused input maps, or a contour pass over the whole scene with
/// thresholds scaled by the mean intensity of the cropland.
EdgeMap stage1_edge_map(const PipelineInputs& in, const RunConfig& cfg);

/// Extraction, then filtering, min-cut and localized splitting and classification as the
/// stage toggles allow. `model` is required when the nonag stage is on; without it every
/// parcel is labelled Ag with confidence 0.
PipelineResult run_pipeline(const PipelineInputs& in, const RunConfig& cfg, const ForestModel* model);

/// Ground-truth fields (features not labelled NonAg) against detections labelled Ag.
EvalReport evaluate_result(const PipelineResult& result, std::span<const LabeledRegion> gt, int width, int height,
                           const RunConfig& cfg);

struct AblationRow {
    std::string name;
    ImageMetrics metrics;
    double detection_rate = 0.0;
};

/// PP, PP+MC, PP+LCD and PP+MC+LCD, in that order.
std::vector<AblationRow> run_ablation(const PipelineInputs& in, const RunConfig& cfg, const ForestModel* model,
                                      std::span<const LabeledRegion> gt);

std::string ablation_csv(std::span<const AblationRow> rows);

/// Ag parcels blended with yellow, NonAg parcels with purple.
RgbImage render_overlay(const RgbImage& base, std::span<const ClassifiedParcel> parcels);

std::string audit_json(std::span<const std::pair<Parcel, FilterVerdict>> dropped);
std::string cuts_json(const SplitTrace& trace);

}  // namespace fieldseg
