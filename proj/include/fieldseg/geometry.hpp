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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fieldseg/raster.hpp"

namespace fieldseg {

/// Closed 8-connected chain of pixel centres, counter-clockwise as displayed (y axis down).
/// Chains around one-pixel-wide spurs revisit pixels in reverse; that is legal.
class Contour {
public:
    Contour() = default;
    /// Throws InputError if consecutive points (including last -> first) are not 8-neighbours.
    explicit Contour(std::vector<Point> points);

    const std::vector<Point>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    const Point& operator[](std::size_t i) const { return points_[i]; }
    /// Cyclic access.
    const Point& wrap(long i) const;

    /// Fewer than three points: single pixels and dominoes, never a parcel outline.
    bool degenerate() const { return points_.size() < 3; }

    /// Sum of step lengths (1 axis, sqrt 2 diagonal), closing step included.
    double length() const { return cumulative_.empty() ? 0.0 : total_; }
    /// Arc length from point 0 to point i.
    double arc_to(std::size_t i) const { return cumulative_[i]; }

private:
    std::vector<Point> points_;
    std::vector<double> cumulative_;
    double total_ = 0.0;
};

enum class ParcelStage { Extracted, SplitMincut, SplitLcd };

std::string_view to_string(ParcelStage stage);

/// A candidate field: filled region mask in a tight local frame plus its traced outline
/// in image coordinates.
class Parcel {
public:
    /// Builds a parcel from a mask holding one 4-connected component (holes are filled).
    /// `origin` is the image position of the mask's (0,0). Throws InputError when the mask
    /// is empty, has several components, or outlines fewer than three contour points.
    static Parcel from_mask(const BinaryMask& local, Point origin, std::string id, ParcelStage stage);

    const std::string& id() const { return id_; }
    ParcelStage stage() const { return stage_; }
    const Contour& contour() const { return contour_; }
    const BinaryMask& mask() const { return mask_; }
    /// Image position of mask(0,0).
    Point origin() const { return origin_; }
    int area() const { return area_; }

    /// True if the image pixel lies inside the parcel.
    bool covers(Point p) const { return mask_.get(p.x - origin_.x, p.y - origin_.y); }

    /// The same region under a new identity.
    Parcel relabeled(std::string id, ParcelStage stage) const;

private:
    Parcel() = default;

    std::string id_;
    ParcelStage stage_ = ParcelStage::Extracted;
    Contour contour_;
    BinaryMask mask_;
    Point origin_;
    int area_ = 0;
};

/// Orders dot-separated numeric ids ("3" < "3.1" < "3.2" < "10").
bool id_less(std::string_view a, std::string_view b);

/// One outer contour per 4-connected component (Moore-neighbour tracing, Jacob's stopping
/// criterion), in raster order of each component's first pixel. Holes are ignored.
std::vector<Contour> trace_contours(const BinaryMask& mask);

/// Pixels enclosed by the chain (chain pixels included), in a frame of the given size.
BinaryMask fill_contour(const Contour& contour, int width, int height);

int area(const Parcel& p);
double perimeter(const Parcel& p);
/// Number of unit pixel edges between the region and its exterior.
int edge_perimeter(const Parcel& p);

struct ConvexHull {
    /// Hull vertices over contour pixel centres, counter-clockwise as displayed.
    std::vector<Point> vertices;
    /// Area of the hull over pixel corners, so it is comparable with the pixel-count area.
    double area = 0.0;
    /// Perimeter of the pixel-centre hull, comparable with the contour chain length.
    double perimeter = 0.0;
};

ConvexHull convex_hull(const Parcel& p);

/// Mean over contour pixels of min(horizontal run, vertical run) through that pixel.
double mean_width(const Parcel& p);
/// width / length with length = max(W, P/2 - W), P the pixel-edge perimeter; clamped to 1.
double aspect_ratio(const Parcel& p);

/// Angle in degrees between (p[i-w] -> p[i]) and (p[i] -> p[i+w]), indices cyclic.
double turn_angle(const Contour& c, std::size_t i, std::size_t window);

/// Shorter of the two along-chain distances between indices i and j.
double contour_distance(const Contour& c, std::size_t i, std::size_t j);

double euclidean(Point a, Point b);

/// Bresenham rasterisation from a to b, both endpoints included.
std::vector<Point> bresenham(Point a, Point b);

/// Every pixel of the rasterised segment lies in the parcel.
bool segment_inside(const Parcel& p, Point a, Point b);

/// Outer boundary of the parcel mask along pixel edges, as image-space corner coordinates,
/// counter-clockwise as displayed. Collinear corners are dropped. First vertex not repeated.
std::vector<Point> boundary_polygon(const Parcel& p);

/// Pixel-centre-in-polygon (even-odd) rasterisation of a ring of corner coordinates into a
/// width x height frame.
BinaryMask rasterize_polygon(std::span<const std::pair<double, double>> ring, int width, int height);

/// Distance returned for samples whose orientation bin holds no edge pixels.
inline constexpr double kChamferFar = 1.0e6;

/// Per-orientation Euclidean distance transforms of an edge set.
class DirectionalDistanceField {
public:
    /// Edge pixels are bucketed by their tangent orientation (gradient angle + pi/2, modulo pi)
    /// into `bins` bins centred on multiples of pi / bins.
    static DirectionalDistanceField build(const BinaryMask& edges, std::span<const double> gradient_angles,
                                          int bins);

    int bins() const { return bins_; }
    int width() const { return width_; }
    int height() const { return height_; }
    /// Distance from (x,y) to the nearest edge pixel in `bin`; +infinity if the bin is empty.
    double distance(int bin, int x, int y) const {
        return fields_[static_cast<std::size_t>(bin)][static_cast<std::size_t>(y) * width_ + x];
    }
    /// Bin of an undirected line orientation in radians.
    int bin_of(double orientation) const;

    /// Mean distance in the segment's orientation bin over K = max(8, ceil(|ab|)) samples
    /// spaced uniformly from a to b and snapped to pixel centres. Throws InputError when an
    /// endpoint is out of bounds or a == b.
    double query(Point a, Point b) const;

private:
    int bins_ = 0;
    int width_ = 0;
    int height_ = 0;
    std::vector<std::vector<double>> fields_;
};

/// Exact Euclidean distance transform (two separable passes); +infinity with no seeds.
std::vector<double> euclidean_distance_transform(const BinaryMask& seeds);

}  // namespace fieldseg
