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
#include <vector>

#include "fieldseg/edges.hpp"
#include "fieldseg/geometry.hpp"

namespace fieldseg {

struct ExtractionParams {
    double binarize_threshold = 0.5;
    int dilate_radius = 1;
    int erode_radius = 1;
    int min_component_area = 20;

    void validate() const;
};

struct Extraction {
    /// Edge and non-cropland pixels that separate parcels.
    BinaryMask barrier;
    std::vector<Parcel> parcels;
};

/// Dilate, erode and thin a binarised edge mask. Erosion replicates the frame border so
/// edge lines reaching the frame are not shortened.
BinaryMask clean_edges(const BinaryMask& edges, const ExtractionParams& params);

/// Regions between boundary lines become parcels: 4-connected components of non-barrier
/// pixels with at least `min_area` pixels. Holes are filled. Components inside another
/// component's holes are absorbed by it, unless the enclosing component touches the frame:
/// then it is dropped and the inner ones remain. Parcels are numbered `<prefix><k>` in
/// raster order of their first pixel, starting at 1. `origin` offsets local coordinates.
std::vector<Parcel> parcels_from_free_space(const BinaryMask& free, int min_area, const std::string& id_prefix,
                                            ParcelStage stage, Point origin = {0, 0});

/// Binarise, clean up, add cropland barriers and collect parcels.
Extraction extract_regions(const EdgeMap& edge_map, const std::optional<BinaryMask>& cropland,
                           const ExtractionParams& params);

std::vector<Parcel> extract_parcels(const EdgeMap& edge_map, const std::optional<BinaryMask>& cropland,
                                    const ExtractionParams& params);

}  // namespace fieldseg
