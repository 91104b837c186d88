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

#include "fieldseg/edges.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fieldseg/errors.hpp"
#include "fieldseg/png_io.hpp"

namespace fieldseg {

EdgeMap::EdgeMap(int width, int height, double fill) : width_(width), height_(height) {
    if (width < 1 || height < 1) throw InputError("EdgeMap: dimensions must be >= 1");
    prob_.assign(static_cast<std::size_t>(width) * height, std::clamp(fill, 0.0, 1.0));
}

EdgeMap::EdgeMap(int width, int height, std::vector<double> prob)
    : width_(width), height_(height), prob_(std::move(prob)) {
    if (width < 1 || height < 1) throw InputError("EdgeMap: dimensions must be >= 1");
    if (prob_.size() != static_cast<std::size_t>(width) * height) {
        throw InputError("EdgeMap: data length does not match width*height");
    }
    for (double p : prob_) {
        if (!(p >= 0.0 && p <= 1.0)) throw InputError("EdgeMap: probabilities must lie in [0,1]");
    }
}

void EdgeMap::set(int x, int y, double p) {
    prob_[static_cast<std::size_t>(y) * width_ + x] = std::clamp(p, 0.0, 1.0);
}

void HysteresisParams::validate() const {
    if (!(low >= 0.0 && low <= high && high <= 1.0)) {
        throw ConfigError("hysteresis thresholds must satisfy 0 <= low <= high <= 1");
    }
    if (!(gaussian_sigma > 0.0)) throw ConfigError("gaussian_sigma must be > 0");
}

EdgeMap load_edge_map(const std::string& path) {
    const GrayImage g = read_png_gray(path);
    std::vector<double> prob(g.data().size());
    for (std::size_t i = 0; i < prob.size(); ++i) prob[i] = g.data()[i] / 255.0;
    return EdgeMap(g.width(), g.height(), std::move(prob));
}

GrayImage edge_map_to_gray(const EdgeMap& map) {
    GrayImage g(map.width(), map.height());
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            g.set(x, y, static_cast<std::uint8_t>(std::lround(255.0 * map.at(x, y))));
        }
    }
    return g;
}

void save_edge_map(const std::string& path, const EdgeMap& map) { write_png_gray(path, edge_map_to_gray(map)); }

EdgeMap fuse_edge_maps(std::span<const EdgeMap> maps) {
    if (maps.empty()) throw InputError("fuse_edge_maps: no edge maps given");
    const int w = maps.front().width();
    const int h = maps.front().height();
    std::vector<double> sum(static_cast<std::size_t>(w) * h, 0.0);
    for (const EdgeMap& m : maps) {
        if (m.width() != w || m.height() != h) throw InputError("fuse_edge_maps: edge map dimensions differ");
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += m.prob()[i];
    }
    const double n = static_cast<double>(maps.size());
    for (double& v : sum) v = std::clamp(v / n, 0.0, 1.0);
    return EdgeMap(w, h, std::move(sum));
}

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> k(2 * radius + 1);
    double total = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
        total += k[i + radius];
    }
    for (double& v : k) v /= total;
    return k;
}

std::vector<double> gaussian_blur(std::span<const double> values, int width, int height, double sigma) {
    const std::vector<double> k = gaussian_kernel(sigma);
    const int r = static_cast<int>(k.size() / 2);
    std::vector<double> tmp(values.size());
    std::vector<double> out(values.size());
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i) {
                const int sx = std::clamp(x + i, 0, width - 1);
                acc += k[i + r] * values[static_cast<std::size_t>(y) * width + sx];
            }
            tmp[static_cast<std::size_t>(y) * width + x] = acc;
        }
    }
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i) {
                const int sy = std::clamp(y + i, 0, height - 1);
                acc += k[i + r] * tmp[static_cast<std::size_t>(sy) * width + x];
            }
            out[static_cast<std::size_t>(y) * width + x] = acc;
        }
    }
    return out;
}

namespace {

struct Gradients {
    std::vector<double> gx;
    std::vector<double> gy;
};

Gradients sobel(const std::vector<double>& s, int w, int h) {
    Gradients g{std::vector<double>(s.size()), std::vector<double>(s.size())};
    auto at = [&](int x, int y) {
        return s[static_cast<std::size_t>(std::clamp(y, 0, h - 1)) * w + std::clamp(x, 0, w - 1)];
    };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double gx = (at(x + 1, y - 1) + 2 * at(x + 1, y) + at(x + 1, y + 1)) -
                              (at(x - 1, y - 1) + 2 * at(x - 1, y) + at(x - 1, y + 1));
            const double gy = (at(x - 1, y + 1) + 2 * at(x, y + 1) + at(x + 1, y + 1)) -
                              (at(x - 1, y - 1) + 2 * at(x, y - 1) + at(x + 1, y - 1));
            g.gx[static_cast<std::size_t>(y) * w + x] = gx;
            g.gy[static_cast<std::size_t>(y) * w + x] = gy;
        }
    }
    return g;
}

}  // namespace

CannyResult canny_detail(const GrayImage& img, const HysteresisParams& params) {
    params.validate();
    const int w = img.width();
    const int h = img.height();
    const std::size_t n = static_cast<std::size_t>(w) * h;

    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = img.data()[i];
    const std::vector<double> smooth = gaussian_blur(values, w, h, params.gaussian_sigma);
    const Gradients grad = sobel(smooth, w, h);

    // Smoothed Sobel response to a 0 -> 255 step: 4 * 255 * (g(0) + g(1)).
    const std::vector<double> k = gaussian_kernel(params.gaussian_sigma);
    const std::size_t c = k.size() / 2;
    const double norm = 4.0 * 255.0 * (k[c] + k[c + 1]);

    std::vector<double> mag(n);
    for (std::size_t i = 0; i < n; ++i) mag[i] = std::hypot(grad.gx[i], grad.gy[i]) / norm;

    constexpr double kTan22 = 0.41421356237309503;
    std::vector<double> nms(n, 0.0);
    for (int y = 1; y + 1 < h; ++y) {
        for (int x = 1; x + 1 < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const double m = mag[i];
            if (m <= 0.0) continue;
            const double gx = grad.gx[i];
            const double gy = grad.gy[i];
            const double ax = std::abs(gx);
            const double ay = std::abs(gy);
            int dx;
            int dy;
            if (ay <= ax * kTan22) {
                dx = 1;
                dy = 0;
            } else if (ax <= ay * kTan22) {
                dx = 0;
                dy = 1;
            } else if ((gx > 0) == (gy > 0)) {
                dx = 1;
                dy = 1;
            } else {
                dx = -1;
                dy = 1;
            }
            const double before = mag[static_cast<std::size_t>(y - dy) * w + (x - dx)];
            const double after = mag[static_cast<std::size_t>(y + dy) * w + (x + dx)];
            // Strict on one side so plateaus of equal response keep exactly one pixel.
            if (m > before && m >= after) nms[i] = m;
        }
    }

    EdgeMap edges(w, h, 0.0);
    std::vector<int> stack;
    std::vector<std::uint8_t> kept(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (nms[i] > 0.0 && nms[i] >= params.high) {
            kept[i] = 1;
            stack.push_back(static_cast<int>(i));
        }
    }
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        const int x = i % w;
        const int y = i / w;
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int nx = x + dx;
                const int ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
                if (kept[j] || !(nms[j] > 0.0 && nms[j] >= params.low)) continue;
                kept[j] = 1;
                stack.push_back(static_cast<int>(j));
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (kept[i]) edges.set(static_cast<int>(i % w), static_cast<int>(i / w), 1.0);
    }
    return CannyResult{std::move(edges), std::move(nms)};
}

EdgeMap canny(const GrayImage& img, const HysteresisParams& params) { return canny_detail(img, params).edges; }

HysteresisParams local_hysteresis_params(const GrayImage& img, const BinaryMask& region, double k_low,
                                         double k_high, double sigma) {
    if (img.width() != region.width() || img.height() != region.height()) {
        throw InputError("local_hysteresis_params: image and region dimensions differ");
    }
    if (!(k_low > 0.0 && k_low < k_high)) throw ConfigError("hysteresis multipliers must satisfy 0 < k_low < k_high");
    double sum = 0.0;
    std::size_t count = 0;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            if (!region.at(x, y)) continue;
            sum += img.at(x, y);
            ++count;
        }
    }
    if (count == 0) throw InputError("local_hysteresis_params: region is empty");
    const double mu = sum / static_cast<double>(count) / 255.0;
    HysteresisParams p;
    p.low = std::clamp(k_low * mu, 0.0, 1.0);
    p.high = std::clamp(k_high * mu, 0.0, 1.0);
    p.gaussian_sigma = sigma;
    return p;
}

BinaryMask binarize_edges(const EdgeMap& map, double threshold) {
    BinaryMask m(map.width(), map.height());
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) m.set(x, y, map.at(x, y) >= threshold);
    }
    return m;
}

std::vector<double> gradient_orientations(const EdgeMap& map, double sigma) {
    const int w = map.width();
    const int h = map.height();
    const Gradients g = sobel(map.prob(), w, h);
    const std::size_t n = g.gx.size();
    std::vector<double> jxx(n), jxy(n), jyy(n);
    for (std::size_t i = 0; i < n; ++i) {
        jxx[i] = g.gx[i] * g.gx[i];
        jxy[i] = g.gx[i] * g.gy[i];
        jyy[i] = g.gy[i] * g.gy[i];
    }
    jxx = gaussian_blur(jxx, w, h, sigma);
    jxy = gaussian_blur(jxy, w, h, sigma);
    jyy = gaussian_blur(jyy, w, h, sigma);
    std::vector<double> angle(n);
    for (std::size_t i = 0; i < n; ++i) {
        double a = 0.5 * std::atan2(2.0 * jxy[i], jxx[i] - jyy[i]);
        if (a < 0.0) a += std::numbers::pi;
        if (a >= std::numbers::pi) a -= std::numbers::pi;
        angle[i] = a;
    }
    return angle;
}

}  // namespace fieldseg
