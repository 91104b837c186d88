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

#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

#include "fieldseg/png_io.hpp"

namespace fixtures {

using namespace fieldseg;

BinaryMask rect_mask(int w, int h) { return BinaryMask(w, h, true); }

void fill_box(BinaryMask& m, int x0, int y0, int w, int h) {
    for (int y = y0; y < y0 + h; ++y) {
        for (int x = x0; x < x0 + w; ++x) m.set(x, y);
    }
}

Parcel parcel_of(const BinaryMask& frame_mask, const std::string& id) {
    int x0 = frame_mask.width(), y0 = frame_mask.height(), x1 = -1, y1 = -1;
    for (int y = 0; y < frame_mask.height(); ++y) {
        for (int x = 0; x < frame_mask.width(); ++x) {
            if (!frame_mask.at(x, y)) continue;
            x0 = std::min(x0, x);
            y0 = std::min(y0, y);
            x1 = std::max(x1, x);
            y1 = std::max(y1, y);
        }
    }
    BinaryMask local(x1 - x0 + 1, y1 - y0 + 1);
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) local.set(x - x0, y - y0, frame_mask.at(x, y));
    }
    return Parcel::from_mask(local, {x0, y0}, id, ParcelStage::Extracted);
}

Parcel rectangle(int w, int h, Point origin, const std::string& id) {
    return Parcel::from_mask(rect_mask(w, h), origin, id, ParcelStage::Extracted);
}

BinaryMask dumbbell_mask(int width, int height, Point o) {
    BinaryMask m(width, height);
    fill_box(m, o.x, o.y, 40, 40);
    fill_box(m, o.x + 40, o.y + 16, 10, 8);
    fill_box(m, o.x + 50, o.y, 40, 40);
    return m;
}

BinaryMask three_lobe_mask(int width, int height, Point o) {
    BinaryMask m = dumbbell_mask(width, height, o);
    fill_box(m, o.x + 90, o.y + 16, 10, 8);
    fill_box(m, o.x + 100, o.y, 40, 40);
    return m;
}

EdgeMap ring_edge_map(const BinaryMask& mask, const std::vector<std::pair<Point, Point>>& faint_lines, double faint) {
    EdgeMap e(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (mask.at(x, y)) continue;
            bool touches = false;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) touches = touches || mask.get(x + dx, y + dy);
            }
            if (touches) e.set(x, y, 1.0);
        }
    }
    for (const auto& [a, b] : faint_lines) {
        for (const Point& q : bresenham(a, b)) e.set(q.x, q.y, std::max(e.at(q.x, q.y), faint));
    }
    return e;
}

BinaryMask random_blobs(int w, int h, std::mt19937_64& rng) {
    BinaryMask m(w, h);
    std::uniform_int_distribution<int> count(1, 5);
    std::uniform_int_distribution<int> px(0, w - 1);
    std::uniform_int_distribution<int> py(0, h - 1);
    std::uniform_int_distribution<int> size(1, std::max(2, w / 3));
    std::bernoulli_distribution disc(0.5);
    const int n = count(rng);
    for (int k = 0; k < n; ++k) {
        const int cx = px(rng);
        const int cy = py(rng);
        const int r = size(rng);
        const bool round = disc(rng);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const bool in = round ? (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r
                                      : std::abs(x - cx) <= r && std::abs(y - cy) <= r / 2;
                if (in) m.set(x, y);
            }
        }
    }
    // Sprinkle single pixels so that thin and diagonal configurations occur.
    std::uniform_int_distribution<int> specks(0, 8);
    const int s = specks(rng);
    for (int k = 0; k < s; ++k) m.set(px(rng), py(rng));
    return m;
}

double brute_nearest(const BinaryMask& seeds, int x, int y) {
    double best = std::numeric_limits<double>::infinity();
    for (int sy = 0; sy < seeds.height(); ++sy) {
        for (int sx = 0; sx < seeds.width(); ++sx) {
            if (seeds.at(sx, sy)) best = std::min(best, std::hypot(double(sx - x), double(sy - y)));
        }
    }
    return best;
}

double brute_hull_area(const BinaryMask& mask) {
    std::set<std::pair<int, int>> corners;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.at(x, y)) continue;
            corners.insert({x, y});
            corners.insert({x + 1, y});
            corners.insert({x, y + 1});
            corners.insert({x + 1, y + 1});
        }
    }
    std::vector<std::pair<int, int>> pts(corners.begin(), corners.end());
    if (pts.size() < 3) return 0.0;
    // Gift wrapping from the lowest-x point; collinear points are skipped by taking the farthest.
    const auto cross = [](std::pair<int, int> o, std::pair<int, int> a, std::pair<int, int> b) {
        return static_cast<long long>(a.first - o.first) * (b.second - o.second) -
               static_cast<long long>(a.second - o.second) * (b.first - o.first);
    };
    const auto dist2 = [](std::pair<int, int> a, std::pair<int, int> b) {
        const long long dx = a.first - b.first;
        const long long dy = a.second - b.second;
        return dx * dx + dy * dy;
    };
    std::vector<std::pair<int, int>> hull;
    const std::pair<int, int> start = pts.front();
    std::pair<int, int> cur = start;
    do {
        hull.push_back(cur);
        std::pair<int, int> next = pts[0] == cur ? pts[1] : pts[0];
        for (const auto& q : pts) {
            if (q == cur) continue;
            const long long c = cross(cur, next, q);
            if (c < 0 || (c == 0 && dist2(cur, q) > dist2(cur, next))) next = q;
        }
        cur = next;
    } while (cur != start && hull.size() <= pts.size());
    double twice = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const auto& a = hull[i];
        const auto& b = hull[(i + 1) % hull.size()];
        twice += static_cast<double>(a.first) * b.second - static_cast<double>(b.first) * a.second;
    }
    return std::abs(twice) / 2.0;
}

namespace {

double step_length(Point a, Point b) { return (a.x != b.x && a.y != b.y) ? std::sqrt(2.0) : 1.0; }

}  // namespace

std::vector<Cut> brute_candidate_cuts(const Parcel& p, const EdgeMap& edges, const DirectionalDistanceField& dcd,
                                      const SplitParams& params) {
    const Contour& c = p.contour();
    const std::size_t n = c.size();
    std::vector<double> arc(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) arc[k + 1] = arc[k] + step_length(c[k], c[(k + 1) % n]);
    const double total = arc[n];
    const auto along = [&](std::size_t i, std::size_t j) {
        const double d = std::abs(arc[j] - arc[i]);
        return std::min(d, total - d);
    };
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<Cut> out;
    for (std::size_t i : find_cut_points(p, params)) {
        std::size_t best = n;
        double best_e = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (c[j] == c[i]) continue;
            const double e = std::hypot(double(c[i].x - c[j].x), double(c[i].y - c[j].y));
            const double a = along(i, j);
            if (a > e && a >= params.min_cut_contour && e < best_e) {
                best_e = e;
                best = j;
            }
        }
        if (best == n || !(best_e < params.max_cut_euclid) || !(along(i, best) > params.min_cut_contour)) continue;
        const std::size_t lo = std::min(i, best);
        const std::size_t hi = std::max(i, best);
        if (!seen.insert({lo, hi}).second) continue;
        Cut cut{lo, hi, c[lo], c[hi], best_e, along(lo, hi), 0.0, false};
        bool inside = true;
        for (const Point& q : bresenham(cut.a, cut.b)) inside = inside && p.covers(q);
        const double d = arc[hi] - arc[lo];
        cut.admissible = inside && d + best_e >= params.min_sub_contour && total - d + best_e >= params.min_sub_contour;
        if (cut.admissible) cut.strength = cut_strength(p, cut, edges, dcd, params);
        out.push_back(cut);
    }
    return out;
}

Parcel dot() { return rectangle(2, 2, {5, 5}, "dot"); }

Parcel v_shape(int scale) {
    BinaryMask base(21, 11);
    for (int i = 0; i < 10; ++i) {
        base.set(i, i);
        base.set(i + 1, i);
        base.set(20 - i, i);
        base.set(19 - i, i);
    }
    BinaryMask m(21 * scale, 11 * scale);
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) m.set(x, y, base.at(x / scale, y / scale));
    }
    return Parcel::from_mask(m, {0, 0}, "v", ParcelStage::Extracted);
}

Parcel snake() {
    BinaryMask m(40, 27);
    for (int k = 0; k < 5; ++k) {
        fill_box(m, 0, 6 * k, 40, 3);
        if (k < 4) fill_box(m, k % 2 == 0 ? 37 : 0, 6 * k + 3, 3, 3);
    }
    return Parcel::from_mask(m, {0, 0}, "snake", ParcelStage::Extracted);
}

Parcel strip() { return rectangle(40, 1, {0, 0}, "strip"); }

ShapeThresholds suite_thresholds() {
    ShapeThresholds t;
    t.min_perimeter = 20;
    t.min_area = 50;
    t.convexity_max_ratio = 1.5;
    t.convexity_area_cap = 500;
    t.min_area_perimeter_ratio = 1.5;
    t.ap_area_cap = 300;
    t.min_aspect_ratio = 0.15;
    return t;
}

TwoToneScene two_tone_scene() {
    constexpr int kW = 240;
    constexpr int kH = 160;
    TwoToneScene s;
    s.image = RgbImage(kW, kH, 230);
    s.block = BinaryMask(kW, kH);
    s.left_half = BinaryMask(kW, kH);
    fill_box(s.block, 60, 50, 120, 60);
    fill_box(s.left_half, 60, 50, 60, 60);
    for (int y = 50; y < 110; ++y) {
        for (int x = 60; x < 180; ++x) {
            const std::uint8_t v = x < 120 ? 10 : 100;
            s.image.set(x, y, v, v, v);
        }
    }
    s.edges = ring_edge_map(s.block);
    return s;
}

std::vector<LabeledSample> gaussian_clusters(int n, int d, double separation, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<LabeledSample> out;
    for (int i = 0; i < n; ++i) {
        LabeledSample s;
        s.label = i % 2 == 0 ? CropClass::Ag : CropClass::NonAg;
        const double centre = s.label == CropClass::Ag ? 0.0 : separation;
        for (int k = 0; k < d; ++k) s.features.push_back(noise(rng) + (k < 2 ? centre : 0.0));
        out.push_back(std::move(s));
    }
    return out;
}

std::string write_training_corpus(const std::string& dir, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> size(24, 40);
    std::uniform_int_distribution<int> base(50, 110);
    std::uniform_int_distribution<int> block(40, 200);
    std::normal_distribution<double> noise(0.0, 3.0);
    std::ofstream manifest(dir + "/manifest.csv");
    manifest << "id,label\n";
    for (int k = 0; k < n; ++k) {
        const int w = size(rng), h = size(rng);
        RgbImage img(w, h);
        const bool ag = k % 2 == 0;
        const int g = base(rng);
        std::vector<int> blocks(static_cast<std::size_t>((w / 3 + 1) * (h / 3 + 1)));
        for (int& b : blocks) b = block(rng);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (ag) {
                    const double v = g + noise(rng);
                    const auto c = [](double x) { return static_cast<std::uint8_t>(std::clamp(std::lround(x), 0L, 255L)); };
                    img.set(x, y, c(0.85 * v), c(v), c(0.7 * v));
                } else {
                    const auto v = static_cast<std::uint8_t>(blocks[static_cast<std::size_t>((y / 3) * (w / 3 + 1) + x / 3)]);
                    img.set(x, y, v, v, v);
                }
            }
        }
        write_png_rgb(dir + "/" + std::to_string(k) + ".png", img);
        manifest << k << "," << (ag ? "Ag" : "NonAg") << "\n";
    }
    return dir + "/manifest.csv";
}

std::string temp_dir(const std::string& name) {
    const auto p = std::filesystem::temp_directory_path() / ("fieldseg_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p.string();
}

}  // namespace fixtures
