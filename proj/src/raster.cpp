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

#include "fieldseg/raster.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

#include "fieldseg/errors.hpp"

namespace fieldseg {

namespace {

void check_dims(int width, int height, const char* what) {
    if (width < 1 || height < 1) {
        throw InputError(std::string(what) + ": dimensions must be >= 1, got " + std::to_string(width) +
                         "x" + std::to_string(height));
    }
}

}  // namespace

RgbImage::RgbImage(int width, int height, std::uint8_t fill) : width_(width), height_(height) {
    check_dims(width, height, "RgbImage");
    data_.assign(static_cast<std::size_t>(width) * height * 3, fill);
}

RgbImage::RgbImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height, "RgbImage");
    if (data_.size() != static_cast<std::size_t>(width) * height * 3) {
        throw InputError("RgbImage: data length does not match width*height*3");
    }
}

void RgbImage::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    data_[i] = r;
    data_[i + 1] = g;
    data_[i + 2] = b;
}

GrayImage::GrayImage(int width, int height, std::uint8_t fill) : width_(width), height_(height) {
    check_dims(width, height, "GrayImage");
    data_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height, "GrayImage");
    if (data_.size() != static_cast<std::size_t>(width) * height) {
        throw InputError("GrayImage: data length does not match width*height");
    }
}

BinaryMask::BinaryMask(int width, int height, bool fill) : width_(width), height_(height) {
    check_dims(width, height, "BinaryMask");
    bits_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BinaryMask BinaryMask::complement() const {
    BinaryMask out = *this;
    for (auto& b : out.bits_) b = b ? 0 : 1;
    return out;
}

BinaryMask& BinaryMask::operator|=(const BinaryMask& other) {
    if (other.width_ != width_ || other.height_ != height_) {
        throw std::invalid_argument("BinaryMask |=: dimension mismatch");
    }
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] = (bits_[i] | other.bits_[i]);
    return *this;
}

BinaryMask& BinaryMask::operator&=(const BinaryMask& other) {
    if (other.width_ != width_ || other.height_ != height_) {
        throw std::invalid_argument("BinaryMask &=: dimension mismatch");
    }
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] = (bits_[i] & other.bits_[i]);
    return *this;
}

std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const long v = std::lround(0.299 * r + 0.587 * g + 0.114 * b);
    return static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
}

GrayImage to_gray(const RgbImage& img) {
    GrayImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            out.set(x, y, luma(img.at(x, y, 0), img.at(x, y, 1), img.at(x, y, 2)));
        }
    }
    return out;
}

namespace {

// One-dimensional pass of a separable square min/max filter. For erosion the window
// must be fully inside the frame and fully set; for dilation any set pixel suffices.
BinaryMask morph_pass(const BinaryMask& in, int radius, bool horizontal, bool is_erode) {
    BinaryMask out(in.width(), in.height());
    const int w = in.width();
    const int h = in.height();
    const int len = horizontal ? w : h;
    const int lines = horizontal ? h : w;
    std::vector<int> prefix(static_cast<std::size_t>(len) + 1);
    for (int line = 0; line < lines; ++line) {
        prefix[0] = 0;
        for (int i = 0; i < len; ++i) {
            const bool v = horizontal ? in.at(i, line) : in.at(line, i);
            prefix[i + 1] = prefix[i] + (v ? 1 : 0);
        }
        for (int i = 0; i < len; ++i) {
            const int lo = i - radius;
            const int hi = i + radius;
            const int clo = std::max(lo, 0);
            const int chi = std::min(hi, len - 1);
            const int set = prefix[chi + 1] - prefix[clo];
            bool v;
            if (is_erode) {
                v = lo >= 0 && hi < len && set == 2 * radius + 1;
            } else {
                v = set > 0;
            }
            if (horizontal) {
                out.set(i, line, v);
            } else {
                out.set(line, i, v);
            }
        }
    }
    return out;
}

}  // namespace

BinaryMask erode(const BinaryMask& mask, int radius) {
    if (radius < 1) throw std::invalid_argument("erode: radius must be >= 1");
    return morph_pass(morph_pass(mask, radius, true, true), radius, false, true);
}

BinaryMask dilate(const BinaryMask& mask, int radius) {
    if (radius < 1) throw std::invalid_argument("dilate: radius must be >= 1");
    return morph_pass(morph_pass(mask, radius, true, false), radius, false, false);
}

BinaryMask thin(const BinaryMask& mask) {
    BinaryMask cur = mask;
    const int w = cur.width();
    const int h = cur.height();
    std::vector<std::size_t> to_clear;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int pass = 0; pass < 2; ++pass) {
            to_clear.clear();
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    if (!cur.at(x, y)) continue;
                    // P2..P9 clockwise from north.
                    const int p[8] = {
                        cur.get(x, y - 1),     cur.get(x + 1, y - 1), cur.get(x + 1, y),
                        cur.get(x + 1, y + 1), cur.get(x, y + 1),     cur.get(x - 1, y + 1),
                        cur.get(x - 1, y),     cur.get(x - 1, y - 1),
                    };
                    int b = 0;
                    int a = 0;
                    for (int k = 0; k < 8; ++k) {
                        b += p[k];
                        if (p[k] == 0 && p[(k + 1) % 8] == 1) ++a;
                    }
                    if (b < 2 || b > 6 || a != 1) continue;
                    const int n = p[0], e = p[2], s = p[4], wv = p[6];
                    if (pass == 0) {
                        if (n * e * s != 0 || e * s * wv != 0) continue;
                    } else {
                        if (n * e * wv != 0 || n * s * wv != 0) continue;
                    }
                    to_clear.push_back(static_cast<std::size_t>(y) * w + x);
                }
            }
            for (std::size_t idx : to_clear) {
                cur.set(static_cast<int>(idx % w), static_cast<int>(idx / w), false);
            }
            if (!to_clear.empty()) changed = true;
        }
    }
    return cur;
}

GrayImage apply_mask(const GrayImage& img, const BinaryMask& mask, std::uint8_t fill) {
    if (img.width() != mask.width() || img.height() != mask.height()) {
        throw std::invalid_argument("apply_mask: image and mask dimensions differ");
    }
    GrayImage out = img;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            if (!mask.at(x, y)) out.set(x, y, fill);
        }
    }
    return out;
}

BinaryMask resample_nearest(const BinaryMask& mask, int width, int height) {
    BinaryMask out(width, height);
    for (int y = 0; y < height; ++y) {
        const int sy = std::min(mask.height() - 1, static_cast<int>((y + 0.5) * mask.height() / height));
        for (int x = 0; x < width; ++x) {
            const int sx = std::min(mask.width() - 1, static_cast<int>((x + 0.5) * mask.width() / width));
            out.set(x, y, mask.at(sx, sy));
        }
    }
    return out;
}

std::vector<int> label_components4(const BinaryMask& mask, int* count) {
    const int w = mask.width();
    const int h = mask.height();
    std::vector<int> labels(static_cast<std::size_t>(w) * h, 0);
    int next = 0;
    std::vector<int> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (!mask.at(x, y) || labels[i] != 0) continue;
            ++next;
            labels[i] = next;
            stack.assign(1, static_cast<int>(i));
            while (!stack.empty()) {
                const int cur = stack.back();
                stack.pop_back();
                const int cx = cur % w;
                const int cy = cur / w;
                const int nx[4] = {cx + 1, cx - 1, cx, cx};
                const int ny[4] = {cy, cy, cy + 1, cy - 1};
                for (int k = 0; k < 4; ++k) {
                    if (!mask.get(nx[k], ny[k])) continue;
                    const int ni = ny[k] * w + nx[k];
                    if (labels[ni] != 0) continue;
                    labels[ni] = next;
                    stack.push_back(ni);
                }
            }
        }
    }
    if (count) *count = next;
    return labels;
}

BinaryMask fill_holes(const BinaryMask& mask) {
    const int w = mask.width();
    const int h = mask.height();
    BinaryMask outside(w, h);
    std::deque<Point> queue;
    auto seed = [&](int x, int y) {
        if (!mask.at(x, y) && !outside.at(x, y)) {
            outside.set(x, y);
            queue.push_back({x, y});
        }
    };
    for (int x = 0; x < w; ++x) {
        seed(x, 0);
        seed(x, h - 1);
    }
    for (int y = 0; y < h; ++y) {
        seed(0, y);
        seed(w - 1, y);
    }
    while (!queue.empty()) {
        const Point p = queue.front();
        queue.pop_front();
        const int nx[4] = {p.x + 1, p.x - 1, p.x, p.x};
        const int ny[4] = {p.y, p.y, p.y + 1, p.y - 1};
        for (int k = 0; k < 4; ++k) {
            if (mask.contains(nx[k], ny[k])) seed(nx[k], ny[k]);
        }
    }
    return outside.complement();
}

}  // namespace fieldseg
