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
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fieldseg/geometry.hpp"

namespace fieldseg {

enum class CropClass { Ag = 0, NonAg = 1 };

std::string_view to_string(CropClass c);
/// Accepts "Ag" / "NonAg" in any case, also "non-ag" and "non_ag". Throws InputError otherwise.
CropClass parse_crop_class(std::string_view s);

inline constexpr std::size_t kShapeFeatures = 7;
inline constexpr std::size_t kColorBins = 16;
inline constexpr std::size_t kColorFeatures = 3 * kColorBins;
inline constexpr std::size_t kTextureFeatures = 256;
inline constexpr std::size_t kFeatureCount = kShapeFeatures + kColorFeatures + kTextureFeatures;

/// Shape block, colour histograms (R, G, B), LBP histogram, in that order.
struct FeatureVector {
    std::vector<double> values;

    std::span<const double> shape() const { return {values.data(), kShapeFeatures}; }
    std::span<const double> color() const { return {values.data() + kShapeFeatures, kColorFeatures}; }
    std::span<const double> texture() const {
        return {values.data() + kShapeFeatures + kColorFeatures, kTextureFeatures};
    }
};

/// LBP offsets for 8 samples at radius 3, starting east and turning counter-clockwise as
/// displayed. Bit k of a code is set when sample k is at least as bright as the centre.
inline constexpr std::array<Point, 8> kLbpOffsets{{{3, 0}, {2, -2}, {0, -3}, {-2, -2}, {-3, 0}, {-2, 2}, {0, 3}, {2, 2}}};

/// Throws InputError if the parcel leaves the image or no parcel pixel has all of its LBP
/// samples inside the parcel.
FeatureVector extract_features(const Parcel& p, const RgbImage& img);

struct ClassifiedParcel {
    Parcel parcel;
    CropClass label = CropClass::Ag;
    double confidence = 0.0;
};

struct LabeledSample {
    std::vector<double> features;
    CropClass label = CropClass::Ag;
};

struct ForestParams {
    int n_trees = 100;
    int max_depth = 12;
    /// Features tried per node; 0 means ceil(sqrt(feature count)).
    int mtry = 0;
    bool bootstrap = true;

    void validate() const;
};

struct TreeNode {
    /// -1 marks a leaf.
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    CropClass leaf = CropClass::Ag;
    std::array<int, 2> votes{0, 0};
};

struct ForestModel {
    ForestParams params;
    std::uint64_t seed = 0;
    std::size_t n_features = 0;
    std::vector<std::vector<TreeNode>> trees;
    /// Out-of-bag accuracy; NaN when no sample was ever out of bag.
    double oob_accuracy = 0.0;
};

/// Gini trees, `x <= threshold` goes left. Throws InputError on fewer than two samples,
/// ragged features or a single class.
ForestModel train_forest(std::span<const LabeledSample> data, const ForestParams& params, std::uint64_t seed);

struct Prediction {
    CropClass label = CropClass::Ag;
    double confidence = 0.0;
};

/// Majority vote; ties go to Ag.
Prediction predict(const ForestModel& model, std::span<const double> features);

std::string model_to_json(const ForestModel& model);
/// Throws ModelError on malformed documents.
ForestModel model_from_json(const std::string& text);
void save_model(const std::string& path, const ForestModel& model);
ForestModel load_model(const std::string& path);

/// Confusion counts indexed [truth][prediction], Ag first.
using Confusion = std::array<std::array<long, 2>, 2>;

struct CrossValidation {
    std::vector<Confusion> per_fold;
    Confusion total{};
    double accuracy = 0.0;
    double macro_f1 = 0.0;
};

double macro_f1(const Confusion& c);

/// Stratified folds: each class is shuffled with the seed and dealt round-robin.
CrossValidation cross_validate(std::span<const LabeledSample> data, int folds, const ForestParams& params,
                               std::uint64_t seed);

/// CSV of `id,label` rows (a header row is skipped). Each id names `<dir>/<id>.png` and an
/// optional `<dir>/<id>.mask.png`; without a mask the whole crop is the parcel.
std::vector<LabeledSample> load_training_set(const std::string& manifest, const std::string& dir);

}  // namespace fieldseg
