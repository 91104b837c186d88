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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fieldseg/errors.hpp"
#include "fieldseg/geometry.hpp"

namespace fieldseg {

namespace {

constexpr double kBig = 1.0e20;

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher) over one line of squared distances.
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v, std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < n; ++q) {
        auto meet = [&](int p) {
            return ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) / (2.0 * q - 2.0 * p);
        };
        double s = meet(v[k]);
        while (s <= z[k]) {
            --k;
            s = meet(v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

}  // namespace

std::vector<double> euclidean_distance_transform(const BinaryMask& seeds) {
    const int w = seeds.width();
    const int h = seeds.height();
    std::vector<double> grid(static_cast<std::size_t>(w) * h);
    bool any = false;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const bool s = seeds.at(x, y);
            any = any || s;
            grid[static_cast<std::size_t>(y) * w + x] = s ? 0.0 : kBig;
        }
    }
    if (!any) return std::vector<double>(grid.size(), std::numeric_limits<double>::infinity());

    const int n = std::max(w, h);
    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<int> v(n);
    f.resize(h);
    d.resize(h);
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) f[y] = grid[static_cast<std::size_t>(y) * w + x];
        edt_1d(f, d, v, z);
        for (int y = 0; y < h; ++y) grid[static_cast<std::size_t>(y) * w + x] = d[y];
    }
    f.resize(w);
    d.resize(w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) f[x] = grid[static_cast<std::size_t>(y) * w + x];
        edt_1d(f, d, v, z);
        for (int x = 0; x < w; ++x) grid[static_cast<std::size_t>(y) * w + x] = std::sqrt(d[x]);
    }
    return grid;
}

int DirectionalDistanceField::bin_of(double orientation) const {
    const double pi = std::numbers::pi;
    double t = std::fmod(orientation, pi);
    if (t < 0.0) t += pi;
    const int b = static_cast<int>(std::floor(t / (pi / bins_) + 0.5));
    return b % bins_;
}

DirectionalDistanceField DirectionalDistanceField::build(const BinaryMask& edges,
                                                         std::span<const double> gradient_angles, int bins) {
    if (bins < 1) throw InputError("directional chamfer: bins must be >= 1");
    const int w = edges.width();
    const int h = edges.height();
    if (gradient_angles.size() != static_cast<std::size_t>(w) * h) {
        throw InputError("directional chamfer: orientation grid does not match the edge mask");
    }
    DirectionalDistanceField field;
    field.bins_ = bins;
    field.width_ = w;
    field.height_ = h;
    std::vector<BinaryMask> seeds(static_cast<std::size_t>(bins), BinaryMask(w, h));
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!edges.at(x, y)) continue;
            const double tangent = gradient_angles[static_cast<std::size_t>(y) * w + x] + std::numbers::pi / 2.0;
            seeds[static_cast<std::size_t>(field.bin_of(tangent))].set(x, y);
        }
    }
    field.fields_.reserve(seeds.size());
    for (const BinaryMask& s : seeds) field.fields_.push_back(euclidean_distance_transform(s));
    return field;
}

double DirectionalDistanceField::query(Point a, Point b) const {
    auto inside = [&](Point p) { return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_; };
    if (!inside(a) || !inside(b)) throw InputError("directional chamfer query: endpoint outside the field");
    if (a == b) throw InputError("directional chamfer query: degenerate segment");
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const int bin = bin_of(std::atan2(dy, dx));
    const int samples = std::max(8, static_cast<int>(std::ceil(std::hypot(dx, dy))));
    double sum = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double t = static_cast<double>(k) / (samples - 1);
        const int x = static_cast<int>(std::lround(a.x + t * dx));
        const int y = static_cast<int>(std::lround(a.y + t * dy));
        sum += std::min(distance(bin, x, y), kChamferFar);
    }
    return sum / samples;
}

}  // namespace fieldseg
