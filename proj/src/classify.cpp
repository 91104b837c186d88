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

#include "fieldseg/classify.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "fieldseg/errors.hpp"
#include "fieldseg/png_io.hpp"

namespace fieldseg {

std::string_view to_string(CropClass c) { return c == CropClass::Ag ? "Ag" : "NonAg"; }

CropClass parse_crop_class(std::string_view s) {
    std::string lower;
    for (char ch : s) {
        if (ch != '-' && ch != '_') lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    if (lower == "ag") return CropClass::Ag;
    if (lower == "nonag") return CropClass::NonAg;
    throw InputError("unknown class label '" + std::string(s) + "'");
}

FeatureVector extract_features(const Parcel& p, const RgbImage& img) {
    const BinaryMask& m = p.mask();
    const Point o = p.origin();
    if (o.x < 0 || o.y < 0 || o.x + m.width() > img.width() || o.y + m.height() > img.height()) {
        throw InputError("extract_features: parcel " + p.id() + " lies outside the image");
    }
    FeatureVector f;
    f.values.assign(kFeatureCount, 0.0);

    const double a = area(p);
    const double per = perimeter(p);
    const ConvexHull hull = convex_hull(p);
    const double shape[kShapeFeatures] = {per, a, hull.perimeter, hull.area, hull.area / a, a / per, aspect_ratio(p)};
    std::copy(std::begin(shape), std::end(shape), f.values.begin());

    // Luma of the parcel's bounding box, for the texture codes.
    GrayImage gray(m.width(), m.height());
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            const int ix = o.x + x;
            const int iy = o.y + y;
            gray.set(x, y, luma(img.at(ix, iy, 0), img.at(ix, iy, 1), img.at(ix, iy, 2)));
            if (!m.at(x, y)) continue;
            for (int ch = 0; ch < 3; ++ch) {
                f.values[kShapeFeatures + ch * kColorBins + img.at(ix, iy, ch) / 16] += 1.0;
            }
        }
    }
    for (std::size_t i = 0; i < kColorFeatures; ++i) f.values[kShapeFeatures + i] /= a;

    double coded = 0.0;
    const std::size_t tex = kShapeFeatures + kColorFeatures;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (!m.at(x, y)) continue;
            bool interior = true;
            for (const Point& d : kLbpOffsets) interior = interior && m.get(x + d.x, y + d.y);
            if (!interior) continue;
            const int centre = gray.at(x, y);
            int code = 0;
            for (std::size_t k = 0; k < kLbpOffsets.size(); ++k) {
                if (gray.at(x + kLbpOffsets[k].x, y + kLbpOffsets[k].y) >= centre) code |= 1 << k;
            }
            f.values[tex + static_cast<std::size_t>(code)] += 1.0;
            coded += 1.0;
        }
    }
    if (coded == 0.0) throw InputError("extract_features: parcel " + p.id() + " is too small for texture codes");
    for (std::size_t i = 0; i < kTextureFeatures; ++i) f.values[tex + i] /= coded;
    return f;
}

void ForestParams::validate() const {
    if (n_trees < 1) throw ConfigError("classify.n_trees must be >= 1");
    if (max_depth < 1) throw ConfigError("classify.max_depth must be >= 1");
    if (mtry < 0) throw ConfigError("classify.mtry must be >= 0");
}

namespace {

double gini(double c0, double c1) {
    const double n = c0 + c1;
    if (n == 0.0) return 0.0;
    const double p0 = c0 / n;
    const double p1 = c1 / n;
    return 1.0 - p0 * p0 - p1 * p1;
}

class TreeGrower {
public:
    TreeGrower(std::span<const LabeledSample> data, std::size_t mtry, int max_depth, std::mt19937_64& rng,
               std::vector<TreeNode>& nodes)
        : data_(data), mtry_(mtry), max_depth_(max_depth), rng_(rng), nodes_(nodes) {}

    int grow(std::vector<std::size_t> idx, int depth) {
        const int self = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        std::array<int, 2> counts{0, 0};
        for (std::size_t i : idx) ++counts[static_cast<int>(data_[i].label)];
        nodes_[self].votes = counts;
        nodes_[self].leaf = counts[1] > counts[0] ? CropClass::NonAg : CropClass::Ag;
        if (depth >= max_depth_ || counts[0] == 0 || counts[1] == 0) return self;

        const std::size_t d = data_[0].features.size();
        std::vector<std::size_t> feats(d);
        std::iota(feats.begin(), feats.end(), std::size_t{0});
        const std::size_t tries = std::min(mtry_, d);
        for (std::size_t k = 0; k < tries; ++k) {
            std::uniform_int_distribution<std::size_t> pick(k, d - 1);
            std::swap(feats[k], feats[pick(rng_)]);
        }

        const double n = static_cast<double>(idx.size());
        double best_score = std::numeric_limits<double>::infinity();
        int best_feat = -1;
        double best_thresh = 0.0;
        std::vector<std::size_t> order = idx;
        for (std::size_t k = 0; k < tries; ++k) {
            const std::size_t f = feats[k];
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return data_[a].features[f] < data_[b].features[f];
            });
            std::array<double, 2> left{0.0, 0.0};
            for (std::size_t r = 0; r + 1 < order.size(); ++r) {
                left[static_cast<int>(data_[order[r]].label)] += 1.0;
                const double v = data_[order[r]].features[f];
                const double next = data_[order[r + 1]].features[f];
                if (v == next) continue;
                const double nl = static_cast<double>(r + 1);
                const double rc0 = counts[0] - left[0];
                const double rc1 = counts[1] - left[1];
                const double score = nl / n * gini(left[0], left[1]) + (n - nl) / n * gini(rc0, rc1);
                if (score < best_score) {
                    best_score = score;
                    best_feat = static_cast<int>(f);
                    double mid = v + (next - v) / 2.0;
                    if (!(mid < next)) mid = v;
                    best_thresh = mid;
                }
            }
        }
        if (best_feat < 0) return self;

        std::vector<std::size_t> lo, hi;
        for (std::size_t i : idx) {
            (data_[i].features[static_cast<std::size_t>(best_feat)] <= best_thresh ? lo : hi).push_back(i);
        }
        nodes_[self].feature = best_feat;
        nodes_[self].threshold = best_thresh;
        const int l = grow(std::move(lo), depth + 1);
        const int r = grow(std::move(hi), depth + 1);
        nodes_[self].left = l;
        nodes_[self].right = r;
        return self;
    }

private:
    std::span<const LabeledSample> data_;
    std::size_t mtry_;
    int max_depth_;
    std::mt19937_64& rng_;
    std::vector<TreeNode>& nodes_;
};

CropClass tree_vote(const std::vector<TreeNode>& nodes, std::span<const double> x) {
    int at = 0;
    while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
        const TreeNode& n = nodes[static_cast<std::size_t>(at)];
        at = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(at)].leaf;
}

}  // namespace

ForestModel train_forest(std::span<const LabeledSample> data, const ForestParams& params, std::uint64_t seed) {
    params.validate();
    if (data.size() < 2) throw InputError("train_forest: need at least two samples");
    const std::size_t d = data[0].features.size();
    if (d == 0) throw InputError("train_forest: empty feature vectors");
    std::array<int, 2> classes{0, 0};
    for (const LabeledSample& s : data) {
        if (s.features.size() != d) throw InputError("train_forest: feature vectors differ in length");
        ++classes[static_cast<int>(s.label)];
    }
    if (classes[0] == 0 || classes[1] == 0) throw InputError("train_forest: training data holds a single class");

    ForestModel model;
    model.params = params;
    model.seed = seed;
    model.n_features = d;
    const std::size_t mtry = params.mtry > 0 ? static_cast<std::size_t>(params.mtry)
                                             : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
    std::vector<std::array<int, 2>> oob(data.size(), {0, 0});
    for (int t = 0; t < params.n_trees; ++t) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(t)};
        std::mt19937_64 rng(seq);
        std::vector<std::size_t> idx(data.size());
        std::vector<char> in_bag(data.size(), 0);
        if (params.bootstrap) {
            std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
            for (std::size_t& i : idx) {
                i = pick(rng);
                in_bag[i] = 1;
            }
        } else {
            std::iota(idx.begin(), idx.end(), std::size_t{0});
            std::fill(in_bag.begin(), in_bag.end(), 1);
        }
        std::vector<TreeNode> nodes;
        TreeGrower(data, mtry, params.max_depth, rng, nodes).grow(std::move(idx), 0);
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (!in_bag[i]) ++oob[i][static_cast<int>(tree_vote(nodes, data[i].features))];
        }
        model.trees.push_back(std::move(nodes));
    }
    long seen = 0;
    long right = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (oob[i][0] + oob[i][1] == 0) continue;
        ++seen;
        const CropClass vote = oob[i][1] > oob[i][0] ? CropClass::NonAg : CropClass::Ag;
        if (vote == data[i].label) ++right;
    }
    model.oob_accuracy = seen == 0 ? std::numeric_limits<double>::quiet_NaN()
                                   : static_cast<double>(right) / static_cast<double>(seen);
    return model;
}

Prediction predict(const ForestModel& model, std::span<const double> features) {
    if (features.size() != model.n_features) {
        throw InputError("predict: expected " + std::to_string(model.n_features) + " features, got " +
                         std::to_string(features.size()));
    }
    if (model.trees.empty()) throw ModelError("predict: model has no trees");
    std::array<int, 2> votes{0, 0};
    for (const auto& tree : model.trees) ++votes[static_cast<int>(tree_vote(tree, features))];
    Prediction p;
    p.label = votes[1] > votes[0] ? CropClass::NonAg : CropClass::Ag;
    p.confidence = static_cast<double>(votes[static_cast<int>(p.label)]) / static_cast<double>(model.trees.size());
    return p;
}

std::string model_to_json(const ForestModel& model) {
    using nlohmann::json;
    json doc;
    doc["version"] = 1;
    doc["seed"] = model.seed;
    doc["params"] = {{"n_trees", model.params.n_trees},
                     {"max_depth", model.params.max_depth},
                     {"mtry", model.params.mtry},
                     {"bootstrap", model.params.bootstrap},
                     {"n_features", model.n_features}};
    doc["oob_accuracy"] = std::isnan(model.oob_accuracy) ? json(nullptr) : json(model.oob_accuracy);
    json trees = json::array();
    for (const auto& tree : model.trees) {
        json nodes = json::array();
        for (const TreeNode& n : tree) {
            if (n.feature >= 0) {
                nodes.push_back({{"feat", n.feature}, {"thresh", n.threshold}, {"left", n.left}, {"right", n.right}});
            } else {
                nodes.push_back({{"leaf", std::string(to_string(n.leaf))}, {"votes", {n.votes[0], n.votes[1]}}});
            }
        }
        trees.push_back({{"nodes", nodes}});
    }
    doc["trees"] = trees;
    return doc.dump(1);
}

ForestModel model_from_json(const std::string& text) {
    using nlohmann::json;
    ForestModel model;
    try {
        const json doc = json::parse(text);
        if (doc.at("version").get<int>() != 1) throw ModelError("unsupported model version");
        model.seed = doc.at("seed").get<std::uint64_t>();
        const json& params = doc.at("params");
        model.params.n_trees = params.at("n_trees").get<int>();
        model.params.max_depth = params.at("max_depth").get<int>();
        model.params.mtry = params.at("mtry").get<int>();
        model.params.bootstrap = params.at("bootstrap").get<bool>();
        model.n_features = params.at("n_features").get<std::size_t>();
        const json& oob = doc.at("oob_accuracy");
        model.oob_accuracy = oob.is_null() ? std::numeric_limits<double>::quiet_NaN() : oob.get<double>();
        for (const json& t : doc.at("trees")) {
            const json& nodes = t.at("nodes");
            if (nodes.empty()) throw ModelError("model tree has no nodes");
            std::vector<TreeNode> tree;
            const int count = static_cast<int>(nodes.size());
            for (int i = 0; i < count; ++i) {
                const json& n = nodes[static_cast<std::size_t>(i)];
                TreeNode node;
                if (n.contains("leaf")) {
                    node.leaf = parse_crop_class(n.at("leaf").get<std::string>());
                    node.votes = {n.at("votes").at(0).get<int>(), n.at("votes").at(1).get<int>()};
                } else {
                    node.feature = n.at("feat").get<int>();
                    node.threshold = n.at("thresh").get<double>();
                    node.left = n.at("left").get<int>();
                    node.right = n.at("right").get<int>();
                    if (node.feature < 0 || static_cast<std::size_t>(node.feature) >= model.n_features) {
                        throw ModelError("model node references an invalid feature");
                    }
                    if (node.left <= i || node.right <= i || node.left >= count || node.right >= count) {
                        throw ModelError("model node references an invalid child");
                    }
                }
                tree.push_back(node);
            }
            model.trees.push_back(std::move(tree));
        }
    } catch (const json::exception& e) {
        throw ModelError(std::string("malformed model: ") + e.what());
    } catch (const InputError& e) {
        throw ModelError(std::string("malformed model: ") + e.what());
    }
    if (model.trees.empty()) throw ModelError("model has no trees");
    return model;
}

void save_model(const std::string& path, const ForestModel& model) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write model to " + path);
    out << model_to_json(model) << '\n';
}

ForestModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot read model " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

double macro_f1(const Confusion& c) {
    double sum = 0.0;
    for (int k = 0; k < 2; ++k) {
        const double tp = static_cast<double>(c[k][k]);
        const double fp = static_cast<double>(c[1 - k][k]);
        const double fn = static_cast<double>(c[k][1 - k]);
        const double denom = 2.0 * tp + fp + fn;
        sum += denom == 0.0 ? 0.0 : 2.0 * tp / denom;
    }
    return sum / 2.0;
}

CrossValidation cross_validate(std::span<const LabeledSample> data, int folds, const ForestParams& params,
                               std::uint64_t seed) {
    if (folds < 2) throw InputError("cross_validate: need at least two folds");
    if (data.size() < static_cast<std::size_t>(folds)) throw InputError("cross_validate: fewer samples than folds");
    std::vector<int> fold_of(data.size(), 0);
    std::mt19937_64 rng(seed);
    for (CropClass cls : {CropClass::Ag, CropClass::NonAg}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (data[i].label == cls) members.push_back(i);
        }
        std::shuffle(members.begin(), members.end(), rng);
        for (std::size_t k = 0; k < members.size(); ++k) fold_of[members[k]] = static_cast<int>(k % folds);
    }
    CrossValidation cv;
    for (int f = 0; f < folds; ++f) {
        std::vector<LabeledSample> train;
        std::vector<std::size_t> test;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (fold_of[i] == f) {
                test.push_back(i);
            } else {
                train.push_back(data[i]);
            }
        }
        const ForestModel model = train_forest(train, params, seed + static_cast<std::uint64_t>(f) + 1);
        Confusion c{};
        for (std::size_t i : test) {
            const Prediction p = predict(model, data[i].features);
            ++c[static_cast<int>(data[i].label)][static_cast<int>(p.label)];
        }
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) cv.total[a][b] += c[a][b];
        }
        cv.per_fold.push_back(c);
    }
    const double n = static_cast<double>(data.size());
    cv.accuracy = static_cast<double>(cv.total[0][0] + cv.total[1][1]) / n;
    cv.macro_f1 = macro_f1(cv.total);
    return cv;
}

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

}  // namespace

std::vector<LabeledSample> load_training_set(const std::string& manifest, const std::string& dir) {
    std::ifstream in(manifest);
    if (!in) throw InputError("cannot read manifest " + manifest);
    namespace fs = std::filesystem;
    std::vector<LabeledSample> out;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InputError("manifest row without a label: " + line);
        const std::string id = trim(line.substr(0, comma));
        const std::string label = trim(line.substr(comma + 1));
        if (first) {
            first = false;
            std::string lower = label;
            std::transform(lower.begin(), lower.end(), lower.begin(),
                           [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
            if (lower == "label") continue;
        }
        const RgbImage img = read_png_rgb((fs::path(dir) / (id + ".png")).string());
        const fs::path mask_path = fs::path(dir) / (id + ".mask.png");
        BinaryMask mask = fs::exists(mask_path) ? read_png_mask(mask_path.string())
                                                : BinaryMask(img.width(), img.height(), true);
        if (mask.width() != img.width() || mask.height() != img.height()) {
            throw InputError("mask size differs from crop for " + id);
        }
        const Parcel p = Parcel::from_mask(mask, {0, 0}, id, ParcelStage::Extracted);
        out.push_back({extract_features(p, img).values, parse_crop_class(label)});
    }
    return out;
}

}  // namespace fieldseg
