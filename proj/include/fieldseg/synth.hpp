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
#include <string>
#include <vector>

#include "fieldseg/geojson.hpp"

namespace fieldseg {

/// A grid of dark fields separated by bright boundary lines. The image is
/// `cols * cell + boundary` wide; cell (r, c) covers x in [c*cell + boundary, (c+1)*cell)
/// and likewise in y.
struct SynthSpec {
    int rows = 3;
    int cols = 3;
    int cell = 40;
    int boundary = 2;
    /// Standard deviation of per-pixel intensity noise inside fields.
    double jitter = 4.0;
    /// Internal boundary segments drawn barely brighter than the fields beside them.
    int faint_boundaries = 0;
    /// Cells filled with blocky high-variance texture and labelled NonAg.
    int nonag_pockets = 0;
    std::uint64_t seed = 0;

    /// Throws ConfigError on non-positive sizes or counts beyond the grid.
    void validate() const;
};

struct SynthScene {
    RgbImage image;
    /// One region per cell, ids "1".."rows*cols" in raster order.
    std::vector<LabeledRegion> gt;
    std::string gt_geojson;
};

SynthScene synth_generate(const SynthSpec& spec);

}  // namespace fieldseg
