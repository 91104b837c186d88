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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fieldseg/classify.hpp"
#include "fieldseg/evaluate.hpp"
#include "fieldseg/extract.hpp"
#include "fieldseg/filter.hpp"
#include "fieldseg/geojson.hpp"
#include "fieldseg/split.hpp"

namespace fieldseg {

struct StageToggles {
    bool pp = true;
    bool mc = true;
    bool lcd = true;
    bool nonag = false;
};

/// Comma-separated subset of pp, mc, lcd, nonag; "none" or an empty string turns all off.
StageToggles parse_stages(const std::string& text);
std::string format_stages(const StageToggles& s);

struct RunConfig {
    std::string input_image;
    std::vector<std::string> edge_maps;
    std::string cropland_mask;
    std::string gt;
    std::string model_path;
    std::string output_dir = ".";
    std::uint64_t seed = 0;
    double gsd_m_per_px = 1.19;
    StageToggles stages;
    bool debug_cuts = false;
    std::optional<Affine> affine;

    ExtractionParams extraction;
    ShapeThresholds thresholds = ShapeThresholds::from_gsd(1.19);
    SplitParams split;
    LocalContourParams lcd;
    /// Multipliers of the whole-scene contour pass used when no edge map is supplied.
    LocalContourParams canny;
    ForestParams forest;
    double link_min_overlap = 0.1;
    LogBase log_base = LogBase::Natural;

    /// Throws ConfigError.
    void validate() const;
};

/// Reads `[section]` / `key = value` files; `#` and `;` start comments and string values
/// may be quoted. Filter defaults follow `run.gsd_m_per_px` unless given explicitly.
/// Unknown keys and malformed values raise ConfigError.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);

}  // namespace fieldseg
