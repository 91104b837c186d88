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

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fieldseg/errors.hpp"
#include "fieldseg/geometry.hpp"
#include "fixtures.hpp"

using namespace fieldseg;

namespace {

// One 4-connected component of `m` (label l), as a frame-sized mask.
BinaryMask component(const std::vector<int>& labels, int l, int w, int h) {
    BinaryMask out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) out.set(x, y, labels[static_cast<std::size_t>(y) * w + x] == l);
    }
    return out;
}

}  // namespace

TEST_CASE("contours reject gaps") {
    CHECK_THROWS_AS(Contour({{0, 0}, {2, 0}}), InputError);
    CHECK_THROWS_AS(Contour({{0, 0}, {0, 0}}), InputError);
    const Contour c({{0, 0}, {1, 0}, {1, 1}});
    CHECK(c.length() == doctest::Approx(2.0 + std::sqrt(2.0)));
    CHECK(c.wrap(-1) == Point{1, 1});
    CHECK(c.wrap(3) == Point{0, 0});
}

TEST_CASE("square measures") {
    const Parcel p = fixtures::rectangle(10, 10, {3, 4});
    CHECK(area(p) == 100);
    CHECK(perimeter(p) == doctest::Approx(36.0));
    CHECK(edge_perimeter(p) == 40);
    const ConvexHull h = convex_hull(p);
    CHECK(h.area == doctest::Approx(100.0));
    CHECK(h.perimeter == doctest::Approx(36.0));
    CHECK(h.vertices.size() == 4);
    CHECK(mean_width(p) == doctest::Approx(10.0));
    CHECK(aspect_ratio(p) == doctest::Approx(1.0));
    CHECK(p.covers({3, 4}));
    CHECK_FALSE(p.covers({13, 4}));
}

TEST_CASE("thin rectangle width and aspect") {
    const Parcel p = fixtures::rectangle(100, 10);
    CHECK(std::abs(mean_width(p) - 10.0) < 1e-9);
    CHECK(std::abs(aspect_ratio(p) - 0.1) < 1e-9);
}

TEST_CASE("L-shape hull ratio over pixel corners") {
    BinaryMask m(10, 10, true);
    for (int y = 0; y < 5; ++y) {
        for (int x = 5; x < 10; ++x) m.set(x, y, false);
    }
    const Parcel p = Parcel::from_mask(m, {0, 0}, "1", ParcelStage::Extracted);
    CHECK(area(p) == 75);
    // Corners hull: the 10x10 square minus the triangle (5,0)-(10,0)-(10,5).
    CHECK(convex_hull(p).area == doctest::Approx(87.5));
}

TEST_CASE("hull area matches gift wrapping on random parcels") {
    std::mt19937_64 rng(17);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const BinaryMask m = fixtures::random_blobs(24, 24, rng);
        int count = 0;
        const std::vector<int> labels = label_components4(m, &count);
        for (int l = 1; l <= count; ++l) {
            const BinaryMask c = fill_holes(component(labels, l, 24, 24));
            if (c.count() < 3) continue;
            Parcel p = fixtures::parcel_of(c);
            const ConvexHull h = convex_hull(p);
            CHECK(h.area == doctest::Approx(fixtures::brute_hull_area(c)).epsilon(1e-12));
            CHECK(h.area + 1e-9 >= area(p));
            ++checked;
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("trace and fill round trip on random masks") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const BinaryMask m = fixtures::random_blobs(32, 32, rng);
        int count = 0;
        const std::vector<int> labels = label_components4(m, &count);
        const std::vector<Contour> contours = trace_contours(m);
        REQUIRE(contours.size() == static_cast<std::size_t>(count));
        for (int l = 1; l <= count; ++l) {
            const BinaryMask expected = fill_holes(component(labels, l, 32, 32));
            CHECK(fill_contour(contours[static_cast<std::size_t>(l - 1)], 32, 32) == expected);
        }
    }
}

TEST_CASE("parcels need one component and a real outline") {
    BinaryMask two(5, 1);
    two.set(0, 0);
    two.set(3, 0);
    CHECK_THROWS_AS(Parcel::from_mask(two, {0, 0}, "1", ParcelStage::Extracted), InputError);
    CHECK_THROWS_AS(Parcel::from_mask(BinaryMask(3, 3), {0, 0}, "1", ParcelStage::Extracted), InputError);
    CHECK_THROWS_AS(Parcel::from_mask(BinaryMask(2, 1, true), {0, 0}, "1", ParcelStage::Extracted), InputError);

    BinaryMask ring(5, 5, true);
    ring.set(2, 2, false);
    const Parcel p = Parcel::from_mask(ring, {1, 1}, "7", ParcelStage::SplitLcd);
    CHECK(area(p) == 25);
    CHECK(p.id() == "7");
    CHECK(to_string(p.stage()) == "split_lcd");
    const Parcel q = p.relabeled("7.1", ParcelStage::SplitMincut);
    CHECK(q.id() == "7.1");
    CHECK(q.mask() == p.mask());
}

TEST_CASE("turn angles") {
    const Parcel p = fixtures::rectangle(20, 20);
    const Contour& c = p.contour();
    int right_angles = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double a = turn_angle(c, i, 3);
        if (std::abs(a - 90.0) < 1e-9) ++right_angles;
    }
    CHECK(right_angles == 4);
    CHECK(turn_angle(c, 8, 3) == doctest::Approx(0.0));
}

TEST_CASE("contour distance is the shorter way round") {
    const Parcel p = fixtures::rectangle(10, 10);
    const Contour& c = p.contour();
    for (std::size_t i = 0; i < c.size(); i += 5) {
        for (std::size_t j = 0; j < c.size(); j += 3) {
            const double d = contour_distance(c, i, j);
            CHECK(d <= c.length() / 2 + 1e-12);
            CHECK(d + 1e-12 >= euclidean(c[i], c[j]));
            CHECK(d == doctest::Approx(contour_distance(c, j, i)));
        }
    }
}

TEST_CASE("bresenham lines are 8-connected with both endpoints") {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> v(-20, 20);
    for (int trial = 0; trial < 200; ++trial) {
        const Point a{v(rng), v(rng)};
        const Point b{v(rng), v(rng)};
        const std::vector<Point> line = bresenham(a, b);
        CHECK(line.front() == a);
        CHECK(line.back() == b);
        CHECK(line.size() == static_cast<std::size_t>(std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)) + 1));
        for (std::size_t i = 1; i < line.size(); ++i) {
            CHECK(std::max(std::abs(line[i].x - line[i - 1].x), std::abs(line[i].y - line[i - 1].y)) == 1);
        }
    }
}

TEST_CASE("segments inside and outside a concave parcel") {
    BinaryMask u(20, 20, true);
    for (int y = 0; y < 15; ++y) {
        for (int x = 5; x < 15; ++x) u.set(x, y, false);
    }
    const Parcel p = Parcel::from_mask(u, {0, 0}, "1", ParcelStage::Extracted);
    CHECK(segment_inside(p, {0, 0}, {0, 19}));
    CHECK_FALSE(segment_inside(p, {2, 2}, {17, 2}));
}

TEST_CASE("boundary polygons re-rasterise to the mask") {
    std::mt19937_64 rng(42);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const BinaryMask m = fixtures::random_blobs(30, 30, rng);
        int count = 0;
        const std::vector<int> labels = label_components4(m, &count);
        for (int l = 1; l <= count; ++l) {
            const BinaryMask c = fill_holes(component(labels, l, 30, 30));
            if (c.count() < 3) continue;
            const Parcel p = fixtures::parcel_of(c);
            std::vector<std::pair<double, double>> ring;
            for (const Point& q : boundary_polygon(p)) ring.emplace_back(q.x, q.y);
            CHECK(rasterize_polygon(ring, 30, 30) == c);
            ++checked;
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("ids sort numerically by segment") {
    CHECK(id_less("2", "10"));
    CHECK(id_less("1.2", "1.10"));
    CHECK(id_less("1", "1.1"));
    CHECK_FALSE(id_less("1.1", "1"));
    CHECK_FALSE(id_less("3", "3"));
}

TEST_CASE("exact distance transform matches brute force") {
    std::mt19937_64 rng(8);
    std::bernoulli_distribution on(0.08);
    for (int trial = 0; trial < 30; ++trial) {
        BinaryMask seeds(17, 13);
        for (int y = 0; y < 13; ++y) {
            for (int x = 0; x < 17; ++x) seeds.set(x, y, on(rng));
        }
        const std::vector<double> d = euclidean_distance_transform(seeds);
        for (int y = 0; y < 13; ++y) {
            for (int x = 0; x < 17; ++x) {
                const double want = fixtures::brute_nearest(seeds, x, y);
                if (std::isinf(want)) {
                    CHECK(std::isinf(d[static_cast<std::size_t>(y) * 17 + x]));
                } else {
                    CHECK(std::abs(d[static_cast<std::size_t>(y) * 17 + x] - want) < 1e-9);
                }
            }
        }
    }
}

TEST_CASE("single-bin chamfer field equals nearest-edge distance") {
    std::mt19937_64 rng(12);
    std::bernoulli_distribution on(0.1);
    std::uniform_real_distribution<double> ang(0.0, std::numbers::pi);
    for (int trial = 0; trial < 100; ++trial) {
        BinaryMask edges(16, 16);
        std::vector<double> angles(256);
        for (int i = 0; i < 256; ++i) {
            edges.set(i % 16, i / 16, on(rng));
            angles[static_cast<std::size_t>(i)] = ang(rng);
        }
        const DirectionalDistanceField f = DirectionalDistanceField::build(edges, angles, 1);
        for (int y = 0; y < 16; ++y) {
            for (int x = 0; x < 16; ++x) {
                const double want = fixtures::brute_nearest(edges, x, y);
                const double got = f.distance(0, x, y);
                if (std::isinf(want)) {
                    CHECK(std::isinf(got));
                } else {
                    CHECK(std::abs(got - want) < 1e-6);
                }
            }
        }
    }
}

TEST_CASE("directional chamfer bins by tangent orientation") {
    // Vertical edge line: gradient along x, tangent vertical.
    BinaryMask edges(21, 21);
    std::vector<double> angles(441, 0.0);
    for (int y = 0; y < 21; ++y) edges.set(10, y);
    const DirectionalDistanceField f = DirectionalDistanceField::build(edges, angles, 4);
    const int vertical = f.bin_of(std::numbers::pi / 2);
    const int horizontal = f.bin_of(0.0);
    CHECK(vertical != horizontal);
    CHECK(f.distance(vertical, 13, 5) == doctest::Approx(3.0));
    CHECK(std::isinf(f.distance(horizontal, 13, 5)));
    CHECK(f.query({10, 2}, {10, 18}) == doctest::Approx(0.0));
    CHECK(f.query({12, 2}, {12, 18}) == doctest::Approx(2.0));
    CHECK(f.query({0, 5}, {20, 5}) == kChamferFar);
    CHECK_THROWS_AS(f.query({0, 0}, {0, 0}), InputError);
    CHECK_THROWS_AS(f.query({0, 0}, {30, 0}), InputError);
}
