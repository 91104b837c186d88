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

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fieldseg {

struct Point {
    int x = 0;
    int y = 0;

    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point&, const Point&) = default;
};

/// Row-major 8-bit RGB raster.
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height, std::uint8_t fill = 0);
    RgbImage(int width, int height, std::vector<std::uint8_t> data);

    int width() const { return width_; }
    int height() const { return height_; }
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    std::uint8_t at(int x, int y, int channel) const {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + channel];
    }
    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);

    const std::vector<std::uint8_t>& data() const { return data_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Row-major 8-bit single-channel raster.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, std::uint8_t fill = 0);
    GrayImage(int width, int height, std::vector<std::uint8_t> data);

    int width() const { return width_; }
    int height() const { return height_; }
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    std::uint8_t at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    void set(int x, int y, std::uint8_t v) { data_[static_cast<std::size_t>(y) * width_ + x] = v; }

    const std::vector<std::uint8_t>& data() const { return data_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Row-major boolean raster. Stored one byte per pixel (0 or 1).
class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height, bool fill = false);

    int width() const { return width_; }
    int height() const { return height_; }
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    bool at(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
    /// Out-of-frame reads return false.
    bool get(int x, int y) const { return contains(x, y) && at(x, y); }
    void set(int x, int y, bool v = true) { bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0; }

    std::size_t count() const;
    bool empty_set() const { return count() == 0; }

    BinaryMask complement() const;
    BinaryMask& operator|=(const BinaryMask& other);
    BinaryMask& operator&=(const BinaryMask& other);

    const std::vector<std::uint8_t>& bits() const { return bits_; }

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// Luminance round(0.299 R + 0.587 G + 0.114 B).
/// Rounded Rec. 601 luma.
std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b);
GrayImage to_gray(const RgbImage& img);

/// Square (Chebyshev) structuring element. Pixels outside the frame count as clear.
BinaryMask erode(const BinaryMask& mask, int radius);
BinaryMask dilate(const BinaryMask& mask, int radius);

/// Zhang-Suen thinning iterated to a fixpoint.
BinaryMask thin(const BinaryMask& mask);

/// Replaces pixels where `mask` is clear by `fill`. Throws std::invalid_argument on size mismatch.
GrayImage apply_mask(const GrayImage& img, const BinaryMask& mask, std::uint8_t fill);

/// Nearest-neighbour resample, used to bring a coarse cropland mask to image resolution.
BinaryMask resample_nearest(const BinaryMask& mask, int width, int height);

/// Label 4-connected components of set pixels. Labels start at 1, 0 marks clear pixels.
/// Components are numbered in raster order of their first pixel.
std::vector<int> label_components4(const BinaryMask& mask, int* count = nullptr);

/// Set pixels plus every clear pixel that cannot reach the frame border through clear
/// 4-neighbours.
BinaryMask fill_holes(const BinaryMask& mask);

}  // namespace fieldseg
