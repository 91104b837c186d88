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

#include "fieldseg/filter.hpp"

#include <algorithm>
#include <cmath>

#include "fieldseg/errors.hpp"

namespace fieldseg {

ShapeThresholds ShapeThresholds::from_gsd(double metres_per_pixel) {
    if (!(metres_per_pixel > 0.0) || !std::isfinite(metres_per_pixel)) {
        throw ConfigError("gsd_m_per_px must be positive");
    }
    const double px = metres_per_pixel;
    const double px2 = px * px;
    ShapeThresholds t;
    t.min_perimeter = 60.0 / px;
    t.min_area = 400.0 / px2;
    t.convexity_max_ratio = 1.3;
    t.convexity_area_cap = 10000.0 / px2;
    t.min_area_perimeter_ratio = 2.0 / px;
    t.ap_area_cap = 2500.0 / px2;
    t.min_aspect_ratio = 0.12;
    return t;
}

void ShapeThresholds::validate() const {
    for (double v : {min_perimeter, min_area, convexity_max_ratio, convexity_area_cap, min_area_perimeter_ratio,
                     ap_area_cap, min_aspect_ratio, sub_polygon_min_contour}) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("filter thresholds must be positive and finite");
    }
    if (!(convexity_max_ratio > 1.0)) throw ConfigError("filter.convexity_max_ratio must exceed 1");
    if (!(min_aspect_ratio < 1.0)) throw ConfigError("filter.min_aspect_ratio must lie in (0,1)");
}

std::string_view to_string(FilterRule rule) {
    switch (rule) {
        case FilterRule::None: return "none";
        case FilterRule::Small: return "r1_small";
        case FilterRule::NonConvex: return "r2_nonconvex";
        case FilterRule::ElongatedNoise: return "r3_elongated_noise";
        case FilterRule::ThinStrip: return "r4_thin_strip";
    }
    return "none";
}

bool rule1_small(const Parcel& p, const ShapeThresholds& t) {
    return perimeter(p) < t.min_perimeter && area(p) < t.min_area;
}

bool rule2_nonconvex(const Parcel& p, const ShapeThresholds& t) {
    const double a = area(p);
    return convex_hull(p).area / a > t.convexity_max_ratio && a < t.convexity_area_cap;
}

bool rule3_elongated_noise(const Parcel& p, const ShapeThresholds& t) {
    const double a = area(p);
    return a / perimeter(p) < t.min_area_perimeter_ratio && a < t.ap_area_cap;
}

bool rule4_thin_strip(const Parcel& p, const ShapeThresholds& t) { return aspect_ratio(p) < t.min_aspect_ratio; }

FilterVerdict evaluate_rules(const Parcel& p, const ShapeThresholds& t) {
    if (rule1_small(p, t)) return {false, FilterRule::Small};
    if (rule2_nonconvex(p, t)) return {false, FilterRule::NonConvex};
    if (rule3_elongated_noise(p, t)) return {false, FilterRule::ElongatedNoise};
    if (rule4_thin_strip(p, t)) return {false, FilterRule::ThinStrip};
    return {};
}

FilterResult apply_filter(std::span<const Parcel> parcels, const ShapeThresholds& t) {
    FilterResult out;
    for (const Parcel& p : parcels) {
        const FilterVerdict v = evaluate_rules(p, t);
        if (v.kept) {
            out.kept.push_back(p);
        } else {
            out.dropped.emplace_back(p, v);
        }
    }
    std::stable_sort(out.kept.begin(), out.kept.end(),
                     [](const Parcel& a, const Parcel& b) { return id_less(a.id(), b.id()); });
    std::stable_sort(out.dropped.begin(), out.dropped.end(),
                     [](const auto& a, const auto& b) { return id_less(a.first.id(), b.first.id()); });
    return out;
}

}  // namespace fieldseg
