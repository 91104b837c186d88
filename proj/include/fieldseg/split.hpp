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
#include "fieldseg/extract.hpp"
#include "fieldseg/filter.hpp"
#include "fieldseg/geometry.hpp"

namespace fieldseg {

struct Cut {
    std::size_t i = 0;
    std::size_t j = 0;
    Point a;
    Point b;
    double euclid = 0.0;
    double along_contour = 0.0;
    double strength = 0.0;
    bool admissible = false;
};

struct SplitParams {
    int curvature_window = 5;
    double curvature_min_angle = 60.0;  // degrees
    double max_cut_euclid = 25.0;
    double min_cut_contour = 80.0;
    double beta = 0.5;
    double min_sub_contour = 60.0;
    int max_recursion_depth = 8;
    /// Admissible cuts weaker than this are never applied; 0 applies any admissible cut.
    double min_strength = 0.0;
    int chamfer_bins = 8;
    /// Edge-map probability above which a pixel seeds the directional distance field.
    double chamfer_edge_threshold = 0.25;

    void validate() const;
};

/// Turn-angle maxima at or above the minimum angle. Within `curvature_window` indices the
/// larger angle wins, ties going to the lower index.
std::vector<std::size_t> find_cut_points(const Parcel& p, const SplitParams& params);

/// Nearest contour point whose contour distance exceeds both the straight distance and
/// the minimum cut contour; ties go to the lower index.
std::optional<Cut> pair_cut_point(const Parcel& p, std::size_t c, const SplitParams& params);

/// Paired cut points that pass both length gates, symmetric duplicates removed, ordered
/// by (i, j) with i < j. The admissibility flag is filled in; strength is not.
std::vector<Cut> candidate_cuts(const Parcel& p, const SplitParams& params);

double combine_strength(double beta, double c_dist, double c_prob);

DirectionalDistanceField build_directional_field(const EdgeMap& edges, const SplitParams& params);

double cut_strength(const Parcel& p, const Cut& cut, const EdgeMap& edges, const DirectionalDistanceField& dcd,
                    const SplitParams& params);

bool admissible(const Parcel& p, const Cut& cut, const SplitParams& params);

struct SplitTrace {
    struct Step {
        std::string parcel_id;
        std::vector<Point> cut_points;
        std::vector<Cut> candidates;
        std::optional<Cut> chosen;
    };
    std::vector<Step> steps;
};

/// Recursive min-cut splitting. Children of parcel `x` are `x.1` and `x.2` in raster order.
std::vector<Parcel> split_mincut(const Parcel& p, const EdgeMap& edges, const DirectionalDistanceField& dcd,
                                 const SplitParams& params, SplitTrace* trace = nullptr);

struct LocalContourParams {
    double k_low = 0.66;
    double k_high = 1.33;
    double sigma = 1.4;

    void validate() const;
};

/// Second contour pass over the parcel alone, with thresholds taken from its own mean
/// intensity. Fragments must survive the small-polygon and elongated-noise rules; two or
/// more survivors replace the parcel.
std::vector<Parcel> split_localized(const Parcel& p, const GrayImage& img, const ExtractionParams& extraction,
                                    const ShapeThresholds& t, const LocalContourParams& local);

}  // namespace fieldseg
