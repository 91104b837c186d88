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

#include "fieldseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "fieldseg/errors.hpp"

namespace fieldseg {

void SynthSpec::validate() const {
    if (rows < 1 || cols < 1) throw ConfigError("synth: rows and cols must be >= 1");
    if (boundary < 1 || cell <= boundary + 2) throw ConfigError("synth: need boundary >= 1 and cell > boundary + 2");
    if (!(jitter >= 0.0)) throw ConfigError("synth: jitter must be >= 0");
    const int internal = rows * (cols - 1) + cols * (rows - 1);
    if (faint_boundaries < 0 || faint_boundaries > internal) {
        throw ConfigError("synth: faint_boundaries must lie in [0, " + std::to_string(internal) + "]");
    }
    if (nonag_pockets < 0 || nonag_pockets > rows * cols) throw ConfigError("synth: too many nonag pockets");
}

namespace {

std::uint8_t clamp8(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

struct Segment {
    int x0, y0, x1, y1;  // half-open pixel box
    int cell_a, cell_b;
};

}  // namespace

SynthScene synth_generate(const SynthSpec& s) {
    s.validate();
    const int b = s.boundary;
    const int width = s.cols * s.cell + b;
    const int height = s.rows * s.cell + b;
    const int cells = s.rows * s.cols;
    std::mt19937_64 rng(s.seed);

    std::vector<int> base(static_cast<std::size_t>(cells));
    std::uniform_int_distribution<int> base_dist(40, 90);
    for (int& v : base) v = base_dist(rng);

    std::vector<int> order(static_cast<std::size_t>(cells));
    for (int i = 0; i < cells; ++i) order[static_cast<std::size_t>(i)] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<char> pocket(static_cast<std::size_t>(cells), 0);
    for (int i = 0; i < s.nonag_pockets; ++i) pocket[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;

    std::vector<Segment> internal;
    for (int r = 0; r < s.rows; ++r) {
        for (int c = 0; c + 1 < s.cols; ++c) {
            const int x = (c + 1) * s.cell;
            internal.push_back({x, r * s.cell + b, x + b, (r + 1) * s.cell, r * s.cols + c, r * s.cols + c + 1});
        }
    }
    for (int r = 0; r + 1 < s.rows; ++r) {
        for (int c = 0; c < s.cols; ++c) {
            const int y = (r + 1) * s.cell;
            internal.push_back({c * s.cell + b, y, (c + 1) * s.cell, y + b, r * s.cols + c, (r + 1) * s.cols + c});
        }
    }
    std::shuffle(internal.begin(), internal.end(), rng);
    internal.resize(static_cast<std::size_t>(s.faint_boundaries));

    SynthScene scene;
    scene.image = RgbImage(width, height);
    std::uniform_int_distribution<int> bright(235, 250);
    std::normal_distribution<double> noise(0.0, s.jitter > 0.0 ? s.jitter : 1.0);
    std::uniform_int_distribution<int> texture(40, 200);
    // Boundary grid first, then field interiors, then faint segments on top.
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const bool on_line = x % s.cell < b || y % s.cell < b;
            if (!on_line) continue;
            const int v = bright(rng);
            scene.image.set(x, y, clamp8(v), clamp8(v), clamp8(v * 0.97));
        }
    }
    for (int r = 0; r < s.rows; ++r) {
        for (int c = 0; c < s.cols; ++c) {
            const int k = r * s.cols + c;
            const int x0 = c * s.cell + b;
            const int y0 = r * s.cell + b;
            const int x1 = (c + 1) * s.cell;
            const int y1 = (r + 1) * s.cell;
            if (pocket[static_cast<std::size_t>(k)]) {
                // 3x3 blocks of unrelated grey levels.
                const int bw = (x1 - x0 + 2) / 3;
                const int bh = (y1 - y0 + 2) / 3;
                std::vector<int> blocks(static_cast<std::size_t>(bw * bh));
                for (int& v : blocks) v = texture(rng);
                for (int y = y0; y < y1; ++y) {
                    for (int x = x0; x < x1; ++x) {
                        const int v = blocks[static_cast<std::size_t>((y - y0) / 3 * bw + (x - x0) / 3)];
                        scene.image.set(x, y, clamp8(v * 0.9), clamp8(v), clamp8(v * 0.8));
                    }
                }
                continue;
            }
            const double g = base[static_cast<std::size_t>(k)];
            for (int y = y0; y < y1; ++y) {
                for (int x = x0; x < x1; ++x) {
                    const double n = s.jitter > 0.0 ? noise(rng) : 0.0;
                    scene.image.set(x, y, clamp8(0.85 * g + n), clamp8(g + n), clamp8(0.7 * g + n));
                }
            }
        }
    }
    for (const Segment& seg : internal) {
        const double g = std::max(base[static_cast<std::size_t>(seg.cell_a)], base[static_cast<std::size_t>(seg.cell_b)]) + 35.0;
        for (int y = seg.y0; y < seg.y1; ++y) {
            for (int x = seg.x0; x < seg.x1; ++x) scene.image.set(x, y, clamp8(0.85 * g), clamp8(g), clamp8(0.7 * g));
        }
    }

    nlohmann::json features = nlohmann::json::array();
    for (int r = 0; r < s.rows; ++r) {
        for (int c = 0; c < s.cols; ++c) {
            const int k = r * s.cols + c;
            const int x0 = c * s.cell + b;
            const int y0 = r * s.cell + b;
            const int x1 = (c + 1) * s.cell;
            const int y1 = (r + 1) * s.cell;
            const std::string id = std::to_string(k + 1);
            const CropClass label = pocket[static_cast<std::size_t>(k)] ? CropClass::NonAg : CropClass::Ag;
            nlohmann::json ring = nlohmann::json::array({{x0, y0}, {x0, y1}, {x1, y1}, {x1, y0}, {x0, y0}});
            features.push_back({{"type", "Feature"},
                                {"geometry", {{"type", "Polygon"}, {"coordinates", nlohmann::json::array({ring})}}},
                                {"properties", {{"id", id}, {"label", std::string(to_string(label))}}}});
            scene.gt.push_back({Region{id, {x0, y0}, BinaryMask(x1 - x0, y1 - y0, true)}, label});
        }
    }
    scene.gt_geojson = nlohmann::json({{"type", "FeatureCollection"}, {"features", features}}).dump(1) + "\n";
    return scene;
}

}  // namespace fieldseg
