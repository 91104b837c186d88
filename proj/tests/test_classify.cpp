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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fieldseg/classify.hpp"
#include "fieldseg/errors.hpp"
#include "fixtures.hpp"

using namespace fieldseg;

namespace {

RgbImage noise_image(int w, int h, std::uint64_t seed, int lo = 0, int hi = 200) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> v(lo, hi);
    RgbImage img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto g = static_cast<std::uint8_t>(v(rng));
            img.set(x, y, g, g, g);
        }
    }
    return img;
}

/// LBP histogram by direct evaluation: samples at angle 45k degrees, radius 3, rounded to
/// the nearest pixel, y pointing down.
std::vector<double> lbp_oracle(const Parcel& p, const RgbImage& img) {
    std::vector<double> hist(256, 0.0);
    double n = 0.0;
    const auto in = [&](int x, int y) { return p.covers({x, y}); };
    const auto g = [&](int x, int y) { return int(luma(img.at(x, y, 0), img.at(x, y, 1), img.at(x, y, 2))); };
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            if (!in(x, y)) continue;
            int code = 0;
            bool ok = true;
            for (int k = 0; k < 8; ++k) {
                const double t = k * M_PI / 4.0;
                const int sx = x + int(std::lround(3.0 * std::cos(t)));
                const int sy = y - int(std::lround(3.0 * std::sin(t)));
                if (!in(sx, sy)) {
                    ok = false;
                    break;
                }
                if (g(sx, sy) >= g(x, y)) code |= 1 << k;
            }
            if (!ok) continue;
            hist[static_cast<std::size_t>(code)] += 1.0;
            n += 1.0;
        }
    }
    for (double& v : hist) v /= n;
    return hist;
}

/// Weighted Gini impurity of the best threshold split on one feature, by trying every gap.
double best_stump(const std::vector<LabeledSample>& d) {
    std::vector<double> xs;
    for (const auto& s : d) xs.push_back(s.features[0]);
    std::sort(xs.begin(), xs.end());
    double best = 1e9, thr = 0.0;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        if (xs[k] == xs[k + 1]) continue;
        const double t = 0.5 * (xs[k] + xs[k + 1]);
        double n[2][2] = {{0, 0}, {0, 0}};
        for (const auto& s : d) n[s.features[0] <= t ? 0 : 1][static_cast<int>(s.label)] += 1;
        double imp = 0.0;
        for (auto& side : n) {
            const double tot = side[0] + side[1];
            if (tot > 0) imp += tot * (1.0 - (side[0] / tot) * (side[0] / tot) - (side[1] / tot) * (side[1] / tot));
        }
        if (imp < best) {
            best = imp;
            thr = t;
        }
    }
    return thr;
}

}  // namespace

TEST_CASE("crop classes parse leniently") {
    CHECK(parse_crop_class("Ag") == CropClass::Ag);
    CHECK(parse_crop_class("NONAG") == CropClass::NonAg);
    CHECK(parse_crop_class("non-ag") == CropClass::NonAg);
    CHECK(parse_crop_class("Non_Ag") == CropClass::NonAg);
    CHECK_THROWS_AS(parse_crop_class("forest"), InputError);
    CHECK(to_string(CropClass::NonAg) == "NonAg");
}

TEST_CASE("a constant patch puts all texture mass on the all-ones code") {
    const RgbImage img(40, 40, 128);
    const FeatureVector f = extract_features(fixtures::rectangle(20, 20, {10, 10}), img);
    REQUIRE(f.values.size() == 311);
    CHECK(f.texture()[255] == doctest::Approx(1.0));
    CHECK(std::accumulate(f.texture().begin(), f.texture().end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("a solid red parcel fills the top red bin and the bottom green and blue bins") {
    RgbImage img(30, 30);
    for (int y = 0; y < 30; ++y) {
        for (int x = 0; x < 30; ++x) img.set(x, y, 255, 0, 0);
    }
    const FeatureVector f = extract_features(fixtures::rectangle(12, 12, {5, 5}), img);
    const auto c = f.color();
    CHECK(c[15] == doctest::Approx(1.0));
    CHECK(c[16] == doctest::Approx(1.0));
    CHECK(c[32] == doctest::Approx(1.0));
    for (int ch = 0; ch < 3; ++ch) {
        double s = 0.0;
        for (int b = 0; b < 16; ++b) s += c[ch * 16 + b];
        CHECK(s == doctest::Approx(1.0));
    }
}

TEST_CASE("shape block matches geometry and texture matches direct LBP evaluation") {
    const RgbImage img = noise_image(60, 50, 3);
    BinaryMask m(60, 50);
    fixtures::fill_box(m, 5, 5, 30, 20);
    fixtures::fill_box(m, 20, 20, 25, 25);
    const Parcel p = fixtures::parcel_of(m);
    const FeatureVector f = extract_features(p, img);
    const ConvexHull hull = convex_hull(p);
    const double expect[7] = {perimeter(p),    double(area(p)), hull.perimeter, hull.area, hull.area / area(p),
                              area(p) / perimeter(p), aspect_ratio(p)};
    for (int k = 0; k < 7; ++k) CHECK(f.shape()[k] == doctest::Approx(expect[k]));
    const auto oracle = lbp_oracle(p, img);
    for (std::size_t k = 0; k < 256; ++k) CHECK(f.texture()[k] == doctest::Approx(oracle[k]));
}

TEST_CASE("features are translation invariant and texture ignores a brightness offset") {
    const RgbImage img = noise_image(40, 40, 11);
    RgbImage moved(70, 60, 0);
    RgbImage brighter(40, 40);
    for (int y = 0; y < 40; ++y) {
        for (int x = 0; x < 40; ++x) {
            const auto v = img.at(x, y, 0);
            moved.set(x + 25, y + 17, v, v, v);
            const auto b = static_cast<std::uint8_t>(v + 40);
            brighter.set(x, y, b, b, b);
        }
    }
    const FeatureVector a = extract_features(fixtures::rectangle(30, 25, {4, 6}), img);
    const FeatureVector b = extract_features(fixtures::rectangle(30, 25, {29, 23}), moved);
    CHECK(a.values == b.values);
    const FeatureVector c = extract_features(fixtures::rectangle(30, 25, {4, 6}), brighter);
    for (std::size_t k = 0; k < 256; ++k) CHECK(c.texture()[k] == a.texture()[k]);
}

TEST_CASE("feature extraction rejects parcels that are too small or off the image") {
    const RgbImage img(20, 20, 100);
    CHECK_THROWS_AS(extract_features(fixtures::rectangle(6, 6, {2, 2}), img), InputError);
    CHECK_THROWS_AS(extract_features(fixtures::rectangle(10, 10, {15, 15}), img), InputError);
    CHECK_NOTHROW(extract_features(fixtures::rectangle(7, 7, {2, 2}), img));
}

TEST_CASE("forest on separated clusters has high out-of-bag accuracy") {
    const auto data = fixtures::gaussian_clusters(200, 311, 6.0, 5);
    ForestParams p;
    p.n_trees = 50;
    const ForestModel m = train_forest(data, p, 42);
    CHECK(m.trees.size() == 50);
    CHECK(m.n_features == 311);
    CHECK(m.oob_accuracy >= 0.95);
    // Bit-for-bit determinism.
    CHECK(model_to_json(train_forest(data, p, 42)) == model_to_json(m));
    CHECK(model_to_json(train_forest(data, p, 43)) != model_to_json(m));
    for (const auto& s : data) {
        const Prediction pr = predict(m, s.features);
        const double votes = pr.confidence * 50.0;
        CHECK(votes == doctest::Approx(std::round(votes)));
        CHECK(pr.confidence >= 0.5);
    }
}

TEST_CASE("a stump reproduces the best split threshold") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<LabeledSample> d;
    for (int i = 0; i < 40; ++i) {
        const double x = u(rng) * 10.0;
        d.push_back({{x}, x < 4.2 ? CropClass::Ag : CropClass::NonAg});
    }
    ForestParams p;
    p.n_trees = 1;
    p.max_depth = 1;
    p.bootstrap = false;
    const ForestModel m = train_forest(d, p, 1);
    REQUIRE(m.trees[0].size() == 3);
    CHECK(m.trees[0][0].feature == 0);
    CHECK(m.trees[0][0].threshold == doctest::Approx(best_stump(d)));
    for (const auto& s : d) CHECK(predict(m, s.features).label == s.label);
}

TEST_CASE("a deep single tree memorises its training data") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    std::vector<LabeledSample> d;
    for (int i = 0; i < 80; ++i) {
        d.push_back({{n(rng), n(rng), n(rng)}, coin(rng) ? CropClass::Ag : CropClass::NonAg});
    }
    ForestParams p;
    p.n_trees = 1;
    p.max_depth = 64;
    p.mtry = 3;
    p.bootstrap = false;
    const ForestModel m = train_forest(d, p, 2);
    for (const auto& s : d) {
        const Prediction pr = predict(m, s.features);
        CHECK(pr.label == s.label);
        CHECK(pr.confidence == 1.0);
    }
}

TEST_CASE("votes: unanimity, ties to Ag, length checks") {
    ForestModel m;
    m.n_features = 2;
    TreeNode ag;
    ag.leaf = CropClass::Ag;
    TreeNode non;
    non.leaf = CropClass::NonAg;
    m.trees = {{ag}, {ag}};
    const std::vector<double> x{0.0, 1.0};
    CHECK(predict(m, x).label == CropClass::Ag);
    CHECK(predict(m, x).confidence == 1.0);
    m.trees = {{ag}, {non}};
    CHECK(predict(m, x).label == CropClass::Ag);
    CHECK(predict(m, x).confidence == 0.5);
    m.trees = {{non}, {non}, {ag}};
    CHECK(predict(m, x).label == CropClass::NonAg);
    CHECK(predict(m, x).confidence == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(predict(m, std::vector<double>{1.0}), InputError);
}

TEST_CASE("training rejects degenerate data") {
    std::vector<LabeledSample> one_class{{{1.0}, CropClass::Ag}, {{2.0}, CropClass::Ag}};
    CHECK_THROWS_AS(train_forest(one_class, ForestParams{}, 0), InputError);
    std::vector<LabeledSample> ragged{{{1.0}, CropClass::Ag}, {{2.0, 3.0}, CropClass::NonAg}};
    CHECK_THROWS_AS(train_forest(ragged, ForestParams{}, 0), InputError);
    CHECK_THROWS_AS(train_forest(std::vector<LabeledSample>{{{1.0}, CropClass::Ag}}, ForestParams{}, 0), InputError);
    ForestParams bad;
    bad.n_trees = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("models round-trip through JSON") {
    const auto data = fixtures::gaussian_clusters(60, 5, 4.0, 8);
    ForestParams p;
    p.n_trees = 7;
    const ForestModel m = train_forest(data, p, 77);
    const ForestModel back = model_from_json(model_to_json(m));
    CHECK(model_to_json(back) == model_to_json(m));
    CHECK(back.seed == 77);
    for (const auto& s : data) CHECK(predict(back, s.features).label == predict(m, s.features).label);
    CHECK_THROWS_AS(model_from_json("{"), ModelError);
    CHECK_THROWS_AS(model_from_json(R"({"version": 99})"), ModelError);
    CHECK_THROWS_AS(load_model("/nonexistent/model.json"), ModelError);
}

TEST_CASE("macro F1 from confusion counts") {
    // Ag: tp 8, fp 2, fn 2 -> 0.8; NonAg: tp 8, fp 2, fn 2 -> 0.8.
    CHECK(macro_f1(Confusion{{{8, 2}, {2, 8}}}) == doctest::Approx(0.8));
    // Ag: p 1, r 0.5 -> 2/3; NonAg: p 10/15, r 1 -> 0.8.
    CHECK(macro_f1(Confusion{{{5, 5}, {0, 10}}}) == doctest::Approx((2.0 / 3.0 + 0.8) / 2.0));
}

TEST_CASE("cross-validation: separable, permuted and partition properties") {
    ForestParams p;
    p.n_trees = 25;
    const auto sep = fixtures::gaussian_clusters(100, 6, 10.0, 1);
    const CrossValidation a = cross_validate(sep, 5, p, 3);
    CHECK(a.accuracy == 1.0);
    CHECK(a.macro_f1 == 1.0);
    CHECK(a.per_fold.size() == 5);
    long sum = 0;
    for (const auto& row : a.total) sum += row[0] + row[1];
    CHECK(sum == 100);
    const CrossValidation again = cross_validate(sep, 5, p, 3);
    CHECK(again.total == a.total);

    double acc = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto shuffled = fixtures::gaussian_clusters(100, 6, 0.0, 20 + seed);
        std::mt19937_64 rng(seed);
        std::vector<CropClass> labels;
        for (const auto& s : shuffled) labels.push_back(s.label);
        std::shuffle(labels.begin(), labels.end(), rng);
        for (std::size_t i = 0; i < shuffled.size(); ++i) shuffled[i].label = labels[i];
        acc += cross_validate(shuffled, 5, p, seed).accuracy;
    }
    CHECK(std::abs(acc / 5.0 - 0.5) <= 0.1);

    CHECK_THROWS(cross_validate(sep, 1, p, 0));
    CHECK_THROWS(cross_validate(std::vector<LabeledSample>(sep.begin(), sep.begin() + 3), 5, p, 0));
}
