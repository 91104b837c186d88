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

#include <span>
#include <string>
#include <vector>

#include "fieldseg/raster.hpp"

namespace fieldseg {

/// Per-pixel edge probability in [0,1].
class EdgeMap {
public:
    EdgeMap() = default;
    EdgeMap(int width, int height, double fill = 0.0);
    EdgeMap(int width, int height, std::vector<double> prob);

    int width() const { return width_; }
    int height() const { return height_; }
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    double at(int x, int y) const { return prob_[static_cast<std::size_t>(y) * width_ + x]; }
    /// Clamps to [0,1].
    void set(int x, int y, double p);

    const std::vector<double>& prob() const { return prob_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> prob_;
};

struct HysteresisParams {
    double low = 0.1;
    double high = 0.3;
    double gaussian_sigma = 1.4;

    /// Throws ConfigError unless 0 <= low <= high <= 1 and sigma > 0.
    void validate() const;
};

/// prob = intensity / 255 of an 8-bit grayscale PNG.
EdgeMap load_edge_map(const std::string& path);
/// intensity = round(255 * prob).
void save_edge_map(const std::string& path, const EdgeMap& map);
GrayImage edge_map_to_gray(const EdgeMap& map);

/// Per-pixel arithmetic mean (fused output averaged with the side outputs).
EdgeMap fuse_edge_maps(std::span<const EdgeMap> maps);

struct CannyResult {
    EdgeMap edges;
    /// Normalised gradient magnitude after non-maximum suppression (0 where suppressed).
    std::vector<double> suppressed_magnitude;
};

/// Gaussian smoothing, Sobel gradients, non-maximum suppression and 8-connected hysteresis.
/// Magnitudes are divided by the response of the smoothed Sobel operator to a full-range
/// (0 -> 255) axis-aligned step, so an ideal step of contrast d scores d / 255.
EdgeMap canny(const GrayImage& img, const HysteresisParams& params);
CannyResult canny_detail(const GrayImage& img, const HysteresisParams& params);

/// Thresholds from the mean intensity mu (in [0,1]) of `img` over the set pixels of `region`:
/// low = clamp(k_low * mu), high = clamp(k_high * mu). Sigma is copied from `sigma`.
HysteresisParams local_hysteresis_params(const GrayImage& img, const BinaryMask& region, double k_low,
                                         double k_high, double sigma = 1.4);

/// Set iff prob >= threshold.
BinaryMask binarize_edges(const EdgeMap& map, double threshold);

/// Dominant gradient angle (radians, in [0, pi)) per pixel from a smoothed structure tensor.
/// Stable on thin ridge lines where the plain gradient vanishes.
std::vector<double> gradient_orientations(const EdgeMap& map, double sigma = 1.0);

/// Separable Gaussian blur with replicated borders; radius ceil(3 sigma).
std::vector<double> gaussian_blur(std::span<const double> values, int width, int height, double sigma);
std::vector<double> gaussian_kernel(double sigma);

}  // namespace fieldseg
