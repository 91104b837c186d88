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
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fieldseg/classify.hpp"
#include "fieldseg/edges.hpp"
#include "fieldseg/evaluate.hpp"
#include "fieldseg/filter.hpp"
#include "fieldseg/geometry.hpp"
#include "fieldseg/split.hpp"

namespace fixtures {

using fieldseg::BinaryMask;
using fieldseg::EdgeMap;
using fieldseg::Parcel;
using fieldseg::Point;

BinaryMask rect_mask(int w, int h);
/// Frame-sized mask with the axis-aligned box [x0, x0+w) x [y0, y0+h) set.
void fill_box(BinaryMask& m, int x0, int y0, int w, int h);

/// Parcel from a frame-sized mask holding exactly one component.
Parcel parcel_of(const BinaryMask& frame_mask, const std::string& id = "1");
Parcel rectangle(int w, int h, Point origin = {0, 0}, const std::string& id = "1");

/// Two 40x40 lobes joined by an 8-px-high, 10-px-long neck, top-left lobe corner at `o`.
/// The neck spans x in [o.x+40, o.x+50), y in [o.y+16, o.y+24).
BinaryMask dumbbell_mask(int width, int height, Point o);
/// Three lobes in a row joined by two such necks.
BinaryMask three_lobe_mask(int width, int height, Point o);

/// Probability 1 on pixels outside `mask` that touch it (8-neighbourhood), plus faint
/// segments drawn at `faint` without lowering existing values.
EdgeMap ring_edge_map(const BinaryMask& mask, const std::vector<std::pair<Point, Point>>& faint_lines = {},
                      double faint = 0.3);

/// Random blobby mask: a few random rectangles and discs.
BinaryMask random_blobs(int w, int h, std::mt19937_64& rng);

/// Nearest set pixel distance by exhaustive search (+inf if none).
double brute_nearest(const BinaryMask& seeds, int x, int y);

/// Convex hull area over pixel corners by gift wrapping.
double brute_hull_area(const BinaryMask& mask);

/// Every admissible cut by exhaustive pairing: all cut points, every partner index, the
/// stated length gates and admissibility, strength evaluated.
std::vector<fieldseg::Cut> brute_candidate_cuts(const Parcel& p, const EdgeMap& edges,
                                                const fieldseg::DirectionalDistanceField& dcd,
                                                const fieldseg::SplitParams& params);

/// Shape-filter suite: a 2x2 dot, a two-pixel-thick V (each pixel blown up to
/// scale x scale), a 3-px-wide meander about 200 px long and a 1x40 strip.
Parcel dot();
Parcel v_shape(int scale);
Parcel snake();
Parcel strip();
/// Thresholds the suite is stated against: rule 1 (20 px, 50 px2), rule 2 (1.5, 500 px2),
/// rule 3 (1.5 px, 300 px2), rule 4 (0.15).
fieldseg::ShapeThresholds suite_thresholds();

/// A dark two-tone block (left half 10, right half 100) inside a bright scene.
struct TwoToneScene {
    fieldseg::RgbImage image;
    BinaryMask block;       // the whole block (one parcel at stage 1)
    BinaryMask left_half;   // the field
    EdgeMap edges;          // ring around the block
};
TwoToneScene two_tone_scene();

/// Separable synthetic feature data: `n` samples of dimension `d`, two Gaussian clusters
/// `separation` standard deviations apart in the first two coordinates.
std::vector<fieldseg::LabeledSample> gaussian_clusters(int n, int d, double separation, std::uint64_t seed);

/// Writes `n` parcel crops to `dir` as `<k>.png` plus `manifest.csv`. Even k are Ag
/// (smooth greenish fields with mild noise), odd k are NonAg (blocky grey texture).
/// Crop sizes vary between 24 and 40 px. Returns the manifest path.
std::string write_training_corpus(const std::string& dir, int n, std::uint64_t seed);

/// Fresh empty directory under the system temp directory.
std::string temp_dir(const std::string& name);

}  // namespace fixtures
