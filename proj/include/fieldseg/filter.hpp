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

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "fieldseg/geometry.hpp"

namespace fieldseg {

/// Lengths in pixels, areas in pixels squared.
struct ShapeThresholds {
    double min_perimeter = 50.0;
    double min_area = 280.0;
    double convexity_max_ratio = 1.3;
    double convexity_area_cap = 7000.0;
    double min_area_perimeter_ratio = 1.7;
    double ap_area_cap = 1750.0;
    double min_aspect_ratio = 0.12;
    double sub_polygon_min_contour = 60.0;

    /// Defaults stated in metres (60 m, 400 m2, 1 ha, 2 m, 0.25 ha) converted at the given
    /// ground sample distance. `sub_polygon_min_contour` stays in pixels.
    static ShapeThresholds from_gsd(double metres_per_pixel);

    /// Throws ConfigError on non-positive values, ratio <= 1 or aspect outside (0,1).
    void validate() const;
};

enum class FilterRule { None, Small, NonConvex, ElongatedNoise, ThinStrip };

std::string_view to_string(FilterRule rule);

struct FilterVerdict {
    bool kept = true;
    FilterRule rule_fired = FilterRule::None;
};

bool rule1_small(const Parcel& p, const ShapeThresholds& t);
bool rule2_nonconvex(const Parcel& p, const ShapeThresholds& t);
bool rule3_elongated_noise(const Parcel& p, const ShapeThresholds& t);
bool rule4_thin_strip(const Parcel& p, const ShapeThresholds& t);

/// First firing rule in order 1 to 4.
FilterVerdict evaluate_rules(const Parcel& p, const ShapeThresholds& t);

struct FilterResult {
    std::vector<Parcel> kept;
    std::vector<std::pair<Parcel, FilterVerdict>> dropped;
};

/// Both outputs are ordered by parcel id.
FilterResult apply_filter(std::span<const Parcel> parcels, const ShapeThresholds& t);

}  // namespace fieldseg
