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

#include <filesystem>
#include <queue>
#include <random>

#include "fieldseg/errors.hpp"
#include "fieldseg/png_io.hpp"
#include "fieldseg/raster.hpp"
#include "fixtures.hpp"

using namespace fieldseg;

namespace {

BinaryMask brute_dilate(const BinaryMask& m, int r) {
    BinaryMask out(m.width(), m.height());
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            bool any = false;
            for (int dy = -r; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) any = any || m.get(x + dx, y + dy);
            }
            out.set(x, y, any);
        }
    }
    return out;
}

BinaryMask brute_erode(const BinaryMask& m, int r) {
    BinaryMask out(m.width(), m.height());
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            bool all = true;
            for (int dy = -r; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) all = all && m.get(x + dx, y + dy);
            }
            out.set(x, y, all);
        }
    }
    return out;
}

int count_components(const BinaryMask& m, bool eight) {
    std::vector<char> seen(static_cast<std::size_t>(m.width()) * m.height(), 0);
    int n = 0;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (!m.at(x, y) || seen[static_cast<std::size_t>(y) * m.width() + x]) continue;
            ++n;
            std::queue<Point> q;
            q.push({x, y});
            seen[static_cast<std::size_t>(y) * m.width() + x] = 1;
            while (!q.empty()) {
                const Point p = q.front();
                q.pop();
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if ((dx == 0 && dy == 0) || (!eight && dx != 0 && dy != 0)) continue;
                        const int nx = p.x + dx;
                        const int ny = p.y + dy;
                        if (!m.get(nx, ny) || seen[static_cast<std::size_t>(ny) * m.width() + nx]) continue;
                        seen[static_cast<std::size_t>(ny) * m.width() + nx] = 1;
                        q.push({nx, ny});
                    }
                }
            }
        }
    }
    return n;
}

}  // namespace

TEST_CASE("luma uses rounded Rec. 601 weights") {
    // 0.299*100 + 0.587*200 + 0.114*50 = 153.0
    RgbImage img(1, 1);
    img.set(0, 0, 100, 200, 50);
    CHECK(to_gray(img).at(0, 0) == 153);
    img.set(0, 0, 255, 255, 255);
    CHECK(to_gray(img).at(0, 0) == 255);
    img.set(0, 0, 0, 0, 0);
    CHECK(to_gray(img).at(0, 0) == 0);
}

TEST_CASE("image constructors reject empty frames") {
    CHECK_THROWS_AS(GrayImage(0, 3), InputError);
    CHECK_THROWS_AS(BinaryMask(3, 0), InputError);
    CHECK_THROWS_AS(RgbImage(2, 2, std::vector<std::uint8_t>(5)), InputError);
}

TEST_CASE("morphology matches square-window brute force") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const BinaryMask m = fixtures::random_blobs(24, 20, rng);
        for (int r = 1; r <= 2; ++r) {
            CHECK(dilate(m, r) == brute_dilate(m, r));
            CHECK(erode(m, r) == brute_erode(m, r));
        }
    }
    CHECK_THROWS_AS(erode(BinaryMask(3, 3), 0), std::invalid_argument);
}

TEST_CASE("erosion and dilation are dual away from the frame") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const BinaryMask m = fixtures::random_blobs(30, 30, rng);
        const BinaryMask a = dilate(m, 2);
        const BinaryMask b = erode(m.complement(), 2).complement();
        for (int y = 2; y < 28; ++y) {
            for (int x = 2; x < 28; ++x) CHECK(a.at(x, y) == b.at(x, y));
        }
    }
}

TEST_CASE("thinning keeps a subset with the same 8-connected components") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const BinaryMask m = fixtures::random_blobs(28, 28, rng);
        const BinaryMask t = thin(m);
        for (int y = 0; y < m.height(); ++y) {
            for (int x = 0; x < m.width(); ++x) CHECK((!t.at(x, y) || m.at(x, y)));
        }
        CHECK(count_components(t, true) == count_components(m, true));
    }
}

TEST_CASE("thinning a thick bar leaves a one-pixel line") {
    BinaryMask m(40, 15);
    fixtures::fill_box(m, 5, 5, 30, 5);
    const BinaryMask t = thin(m);
    for (int x = 8; x < 32; ++x) {
        int n = 0;
        for (int y = 0; y < 15; ++y) n += t.at(x, y);
        CHECK(n == 1);
    }
}

TEST_CASE("4-connected labels agree with flood fill and follow raster order") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const BinaryMask m = fixtures::random_blobs(25, 25, rng);
        int count = 0;
        const std::vector<int> labels = label_components4(m, &count);
        CHECK(count == count_components(m, false));
        int next = 1;
        for (int y = 0; y < 25; ++y) {
            for (int x = 0; x < 25; ++x) {
                const int l = labels[static_cast<std::size_t>(y) * 25 + x];
                CHECK((l > 0) == m.at(x, y));
                if (l == next) ++next;
                CHECK(l < next);
                if (x + 1 < 25 && m.at(x, y) && m.at(x + 1, y)) CHECK(labels[y * 25 + x + 1] == l);
                if (y + 1 < 25 && m.at(x, y) && m.at(x, y + 1)) CHECK(labels[(y + 1) * 25 + x] == l);
            }
        }
    }
}

TEST_CASE("fill_holes closes enclosed background only") {
    BinaryMask ring(7, 7);
    fixtures::fill_box(ring, 1, 1, 5, 5);
    ring.set(3, 3, false);
    ring.set(2, 3, false);
    const BinaryMask filled = fill_holes(ring);
    CHECK(filled.count() == 25);
    CHECK_FALSE(filled.at(0, 0));

    BinaryMask open = ring;
    open.set(1, 3, false);
    open.set(3, 3, false);
    CHECK(fill_holes(open) == open);
}

TEST_CASE("apply_mask and resample_nearest") {
    GrayImage g(2, 2, 9);
    BinaryMask m(2, 2);
    m.set(1, 1);
    const GrayImage out = apply_mask(g, m, 0);
    CHECK(out.at(1, 1) == 9);
    CHECK(out.at(0, 0) == 0);

    BinaryMask small(2, 1);
    small.set(1, 0);
    const BinaryMask big = resample_nearest(small, 4, 2);
    CHECK(big.count() == 4);
    CHECK(big.at(3, 1));
    CHECK_FALSE(big.at(1, 0));
}

TEST_CASE("PNG round trips") {
    const auto dir = std::filesystem::temp_directory_path() / "fieldseg_png_test";
    std::filesystem::create_directories(dir);
    RgbImage rgb(3, 2);
    rgb.set(2, 1, 10, 20, 30);
    write_png_rgb((dir / "a.png").string(), rgb);
    const RgbImage back = read_png_rgb((dir / "a.png").string());
    CHECK(back.data() == rgb.data());

    GrayImage g(4, 3, 7);
    g.set(0, 2, 200);
    write_png_gray((dir / "g.png").string(), g);
    CHECK(read_png_gray((dir / "g.png").string()) == g);
    const BinaryMask m = read_png_mask((dir / "g.png").string());
    CHECK(m.count() == 1);
    CHECK(m.at(0, 2));

    CHECK_THROWS_AS(read_png_gray((dir / "a.png").string()), InputError);
    CHECK_THROWS_AS(read_png_rgb((dir / "missing.png").string()), InputError);
    std::filesystem::remove_all(dir);
}
