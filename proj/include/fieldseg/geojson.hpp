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

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fieldseg/classify.hpp"
#include "fieldseg/evaluate.hpp"

namespace fieldseg {

/// Pixel-to-world map, x' = c0 + c1*x + c2*y and y' = c3 + c4*x + c5*y.
using Affine = std::array<double, 6>;

/// FeatureCollection of closed crack-boundary polygons with id, label, confidence and
/// stage properties. Coordinates are pixel corners unless an affine map is given.
std::string parcels_to_geojson(std::span<const ClassifiedParcel> parcels, const std::optional<Affine>& affine);

struct LabeledRegion {
    Region region;
    std::optional<CropClass> label;
};

/// Polygon and MultiPolygon features in pixel coordinates, rasterised by pixel centre with
/// the even-odd rule. Ids come from `properties.id`, then the feature id, then the 1-based
/// feature position. Throws InputError on malformed documents.
std::vector<LabeledRegion> regions_from_geojson(const std::string& text, int width, int height);
std::vector<LabeledRegion> read_geojson(const std::string& path, int width, int height);

}  // namespace fieldseg
