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

#include "fieldseg/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <set>

#include "fieldseg/errors.hpp"

namespace fieldseg {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

// Clockwise as displayed, starting west.
constexpr int kDx[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
constexpr int kDy[8] = {0, -1, -1, -1, 0, 1, 1, 1};

int direction_of(int dx, int dy) {
    for (int d = 0; d < 8; ++d) {
        if (kDx[d] == dx && kDy[d] == dy) return d;
    }
    return -1;
}

double step_length(Point a, Point b) { return (a.x != b.x && a.y != b.y) ? kSqrt2 : (a == b ? 0.0 : 1.0); }

bool neighbours8(Point a, Point b) { return std::abs(a.x - b.x) <= 1 && std::abs(a.y - b.y) <= 1; }

// Moore-neighbour trace of the component whose pixels satisfy `inside`, starting from its
// first pixel in raster order. Returns the chain clockwise as displayed.
template <class Inside>
std::vector<Point> moore_trace(Point start, Inside inside) {
    std::vector<Point> chain{start};
    Point cur = start;
    int back = 0;  // west of the first raster pixel is never inside
    std::optional<Point> second;
    for (;;) {
        int found = -1;
        for (int k = 1; k <= 8; ++k) {
            const int d = (back + k) % 8;
            if (inside(cur.x + kDx[d], cur.y + kDy[d])) {
                found = k;
                break;
            }
        }
        if (found < 0) return chain;  // isolated pixel
        const int d = (back + found) % 8;
        const int prev = (back + found - 1) % 8;
        const Point next{cur.x + kDx[d], cur.y + kDy[d]};
        const Point back_px{cur.x + kDx[prev], cur.y + kDy[prev]};
        // Jacob's criterion: the first move is about to repeat.
        if (cur == start && second && next == *second) break;
        if (!second) second = next;
        back = direction_of(back_px.x - next.x, back_px.y - next.y);
        cur = next;
        chain.push_back(cur);
    }
    chain.pop_back();  // the closing return to start
    return chain;
}

std::vector<Point> to_display_ccw(std::vector<Point> cw) {
    if (cw.size() > 2) std::reverse(cw.begin() + 1, cw.end());
    return cw;
}

std::vector<Point> monotone_chain(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end(), [](Point a, Point b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    auto cross = [](Point o, Point a, Point b) {
        return static_cast<long long>(a.x - o.x) * (b.y - o.y) - static_cast<long long>(a.y - o.y) * (b.x - o.x);
    };
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Point& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

double shoelace(const std::vector<Point>& poly) {
    long long twice = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % poly.size()];
        twice += static_cast<long long>(a.x) * b.y - static_cast<long long>(b.x) * a.y;
    }
    return std::abs(static_cast<double>(twice)) / 2.0;
}

double ring_length(const std::vector<Point>& poly) {
    if (poly.size() < 2) return 0.0;
    double len = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) len += euclidean(poly[i], poly[(i + 1) % poly.size()]);
    return len;
}

}  // namespace

Contour::Contour(std::vector<Point> points) : points_(std::move(points)) {
    if (points_.empty()) throw InputError("Contour: empty chain");
    const std::size_t n = points_.size();
    cumulative_.resize(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cumulative_[i] = acc;
        const Point& a = points_[i];
        const Point& b = points_[(i + 1) % n];
        if (n > 1 && (a == b || !neighbours8(a, b))) {
            throw InputError("Contour: consecutive points must be distinct 8-neighbours");
        }
        acc += n > 1 ? step_length(a, b) : 0.0;
    }
    total_ = acc;
}

const Point& Contour::wrap(long i) const {
    const long n = static_cast<long>(points_.size());
    return points_[static_cast<std::size_t>(((i % n) + n) % n)];
}

std::string_view to_string(ParcelStage stage) {
    switch (stage) {
        case ParcelStage::Extracted: return "extracted";
        case ParcelStage::SplitMincut: return "split_mincut";
        case ParcelStage::SplitLcd: return "split_lcd";
    }
    return "extracted";
}

Parcel Parcel::from_mask(const BinaryMask& local, Point origin, std::string id, ParcelStage stage) {
    int x0 = local.width(), y0 = local.height(), x1 = -1, y1 = -1;
    for (int y = 0; y < local.height(); ++y) {
        for (int x = 0; x < local.width(); ++x) {
            if (!local.at(x, y)) continue;
            x0 = std::min(x0, x);
            y0 = std::min(y0, y);
            x1 = std::max(x1, x);
            y1 = std::max(y1, y);
        }
    }
    if (x1 < 0) throw InputError("Parcel: empty mask");
    BinaryMask tight(x1 - x0 + 1, y1 - y0 + 1);
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) tight.set(x - x0, y - y0, local.at(x, y));
    }
    int components = 0;
    label_components4(tight, &components);
    if (components != 1) throw InputError("Parcel: mask must hold exactly one 4-connected component");

    Parcel p;
    p.mask_ = fill_holes(tight);
    p.origin_ = {origin.x + x0, origin.y + y0};
    p.area_ = static_cast<int>(p.mask_.count());
    std::vector<Contour> traced = trace_contours(p.mask_);
    std::vector<Point> pts = traced.front().points();
    for (Point& q : pts) {
        q.x += p.origin_.x;
        q.y += p.origin_.y;
    }
    p.contour_ = Contour(std::move(pts));
    if (p.contour_.degenerate()) throw InputError("Parcel: outline has fewer than three contour points");
    p.id_ = std::move(id);
    p.stage_ = stage;
    return p;
}

Parcel Parcel::relabeled(std::string id, ParcelStage stage) const {
    Parcel p = *this;
    p.id_ = std::move(id);
    p.stage_ = stage;
    return p;
}

bool id_less(std::string_view a, std::string_view b) {
    while (!a.empty() && !b.empty()) {
        const auto da = a.find('.');
        const auto db = b.find('.');
        const std::string_view sa = a.substr(0, da);
        const std::string_view sb = b.substr(0, db);
        long long na = 0;
        long long nb = 0;
        const auto ra = std::from_chars(sa.data(), sa.data() + sa.size(), na);
        const auto rb = std::from_chars(sb.data(), sb.data() + sb.size(), nb);
        const bool numeric = ra.ec == std::errc{} && ra.ptr == sa.data() + sa.size() && rb.ec == std::errc{} &&
                             rb.ptr == sb.data() + sb.size();
        if (numeric) {
            if (na != nb) return na < nb;
        } else if (sa != sb) {
            return sa < sb;
        }
        a = da == std::string_view::npos ? std::string_view{} : a.substr(da + 1);
        b = db == std::string_view::npos ? std::string_view{} : b.substr(db + 1);
    }
    return a.empty() && !b.empty();
}

std::vector<Contour> trace_contours(const BinaryMask& mask) {
    int count = 0;
    const std::vector<int> labels = label_components4(mask, &count);
    const int w = mask.width();
    const int h = mask.height();
    std::vector<Point> first(static_cast<std::size_t>(count) + 1, Point{-1, -1});
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int l = labels[static_cast<std::size_t>(y) * w + x];
            if (l > 0 && first[l].x < 0) first[l] = {x, y};
        }
    }
    std::vector<Contour> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int l = 1; l <= count; ++l) {
        auto inside = [&](int x, int y) {
            return x >= 0 && y >= 0 && x < w && y < h && labels[static_cast<std::size_t>(y) * w + x] == l;
        };
        out.emplace_back(to_display_ccw(moore_trace(first[l], inside)));
    }
    return out;
}

BinaryMask fill_contour(const Contour& contour, int width, int height) {
    BinaryMask walls(width, height);
    for (const Point& p : contour.points()) {
        if (!walls.contains(p.x, p.y)) throw InputError("fill_contour: contour leaves the frame");
        walls.set(p.x, p.y);
    }
    return fill_holes(walls);
}

int area(const Parcel& p) { return p.area(); }

double perimeter(const Parcel& p) { return p.contour().length(); }

int edge_perimeter(const Parcel& p) {
    const BinaryMask& m = p.mask();
    int edges = 0;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (!m.at(x, y)) continue;
            edges += !m.get(x + 1, y) + !m.get(x - 1, y) + !m.get(x, y + 1) + !m.get(x, y - 1);
        }
    }
    return edges;
}

ConvexHull convex_hull(const Parcel& p) {
    const auto& pts = p.contour().points();
    std::vector<Point> corners;
    corners.reserve(pts.size() * 4);
    for (const Point& q : pts) {
        corners.push_back({q.x, q.y});
        corners.push_back({q.x + 1, q.y});
        corners.push_back({q.x, q.y + 1});
        corners.push_back({q.x + 1, q.y + 1});
    }
    ConvexHull hull;
    hull.vertices = monotone_chain(pts);
    // monotone_chain yields counter-clockwise in y-up terms; flip for display order.
    if (hull.vertices.size() > 2) std::reverse(hull.vertices.begin() + 1, hull.vertices.end());
    hull.area = shoelace(monotone_chain(std::move(corners)));
    hull.perimeter = ring_length(hull.vertices);
    return hull;
}

double mean_width(const Parcel& p) {
    const BinaryMask& m = p.mask();
    const Point o = p.origin();
    std::set<Point> seen;
    double sum = 0.0;
    for (const Point& g : p.contour().points()) {
        if (!seen.insert(g).second) continue;
        const int x = g.x - o.x;
        const int y = g.y - o.y;
        int l = x;
        int r = x;
        while (m.get(l - 1, y)) --l;
        while (m.get(r + 1, y)) ++r;
        int t = y;
        int b = y;
        while (m.get(x, t - 1)) --t;
        while (m.get(x, b + 1)) ++b;
        sum += std::min(r - l + 1, b - t + 1);
    }
    return seen.empty() ? 0.0 : sum / static_cast<double>(seen.size());
}

double aspect_ratio(const Parcel& p) {
    const double width = mean_width(p);
    const double per = edge_perimeter(p);
    const double length = std::max(width, per / 2.0 - width);
    if (length <= 0.0) return 1.0;
    return std::min(width / length, 1.0);
}

double turn_angle(const Contour& c, std::size_t i, std::size_t window) {
    const long li = static_cast<long>(i);
    const long lw = static_cast<long>(window);
    const Point a = c.wrap(li - lw);
    const Point b = c.wrap(li);
    const Point d = c.wrap(li + lw);
    const double v1x = b.x - a.x, v1y = b.y - a.y;
    const double v2x = d.x - b.x, v2y = d.y - b.y;
    const double n1 = std::hypot(v1x, v1y);
    const double n2 = std::hypot(v2x, v2y);
    if (n1 == 0.0 || n2 == 0.0) return 0.0;
    const double cosang = std::clamp((v1x * v2x + v1y * v2y) / (n1 * n2), -1.0, 1.0);
    return std::acos(cosang) * 180.0 / std::numbers::pi;
}

double contour_distance(const Contour& c, std::size_t i, std::size_t j) {
    const double d = std::abs(c.arc_to(j) - c.arc_to(i));
    return std::min(d, c.length() - d);
}

double euclidean(Point a, Point b) { return std::hypot(static_cast<double>(a.x - b.x), static_cast<double>(a.y - b.y)); }

std::vector<Point> bresenham(Point a, Point b) {
    std::vector<Point> out;
    int x = a.x;
    int y = a.y;
    const int dx = std::abs(b.x - a.x);
    const int dy = -std::abs(b.y - a.y);
    const int sx = a.x < b.x ? 1 : -1;
    const int sy = a.y < b.y ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        out.push_back({x, y});
        if (x == b.x && y == b.y) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
    }
    return out;
}

bool segment_inside(const Parcel& p, Point a, Point b) {
    for (const Point& q : bresenham(a, b)) {
        if (!p.covers(q)) return false;
    }
    return true;
}

std::vector<Point> boundary_polygon(const Parcel& p) {
    const BinaryMask& m = p.mask();
    const Point o = p.origin();
    // Directed pixel-edge graph, region kept on the same side; keyed by start corner.
    std::multimap<Point, Point> out_edges;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (!m.at(x, y)) continue;
            if (!m.get(x, y - 1)) out_edges.insert({{x + 1, y}, {x, y}});
            if (!m.get(x - 1, y)) out_edges.insert({{x, y}, {x, y + 1}});
            if (!m.get(x, y + 1)) out_edges.insert({{x, y + 1}, {x + 1, y + 1}});
            if (!m.get(x + 1, y)) out_edges.insert({{x + 1, y + 1}, {x + 1, y}});
        }
    }
    // First raster pixel's top edge lies on the outer boundary.
    Point start{-1, -1};
    for (int y = 0; y < m.height() && start.x < 0; ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (m.at(x, y)) {
                start = {x + 1, y};
                break;
            }
        }
    }
    std::vector<Point> ring;
    Point cur = start;
    Point heading{-1, 0};
    do {
        ring.push_back(cur);
        auto [lo, hi] = out_edges.equal_range(cur);
        auto chosen = lo;
        if (std::distance(lo, hi) > 1) {
            // Pinch corner: turn left as displayed so diagonal pixels stay unconnected.
            const Point left{heading.y, -heading.x};
            for (auto it = lo; it != hi; ++it) {
                if (it->second.x - cur.x == left.x && it->second.y - cur.y == left.y) chosen = it;
            }
        }
        const Point next = chosen->second;
        heading = {next.x - cur.x, next.y - cur.y};
        out_edges.erase(chosen);
        cur = next;
    } while (cur != start);

    std::vector<Point> simplified;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = ring[(i + n - 1) % n];
        const Point& b = ring[i];
        const Point& c = ring[(i + 1) % n];
        const long long cross =
            static_cast<long long>(b.x - a.x) * (c.y - b.y) - static_cast<long long>(b.y - a.y) * (c.x - b.x);
        if (cross != 0) simplified.push_back({b.x + o.x, b.y + o.y});
    }
    return simplified;
}

BinaryMask rasterize_polygon(std::span<const std::pair<double, double>> ring, int width, int height) {
    BinaryMask out(width, height);
    const std::size_t n = ring.size();
    if (n < 3) return out;
    std::vector<double> xs;
    for (int y = 0; y < height; ++y) {
        const double cy = y + 0.5;
        xs.clear();
        for (std::size_t i = 0; i < n; ++i) {
            const auto [ax, ay] = ring[i];
            const auto [bx, by] = ring[(i + 1) % n];
            if ((ay <= cy) == (by <= cy)) continue;
            xs.push_back(ax + (cy - ay) * (bx - ax) / (by - ay));
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            // Centres x + 0.5 strictly between the crossings.
            const int from = std::max(0, static_cast<int>(std::ceil(xs[k] - 0.5)));
            const int to = std::min(width - 1, static_cast<int>(std::ceil(xs[k + 1] - 0.5)) - 1);
            for (int x = from; x <= to; ++x) out.set(x, y);
        }
    }
    return out;
}

}  // namespace fieldseg
