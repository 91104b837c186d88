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

#include "fieldseg/split.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "fieldseg/errors.hpp"

namespace fieldseg {

void SplitParams::validate() const {
    if (curvature_window < 1) throw ConfigError("split.curvature_window must be >= 1");
    if (!(curvature_min_angle >= 0.0 && curvature_min_angle <= 180.0)) {
        throw ConfigError("split.curvature_min_angle must lie in [0,180]");
    }
    if (!(max_cut_euclid > 0.0)) throw ConfigError("split.max_cut_euclid must be positive");
    if (!(min_cut_contour > max_cut_euclid)) throw ConfigError("split.min_cut_contour must exceed max_cut_euclid");
    if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("split.beta must lie in [0,1]");
    if (!(min_sub_contour > 0.0)) throw ConfigError("split.min_sub_contour must be positive");
    if (max_recursion_depth < 1) throw ConfigError("split.max_recursion_depth must be >= 1");
    if (!(min_strength >= 0.0 && min_strength <= 1.0)) throw ConfigError("split.min_strength must lie in [0,1]");
    if (chamfer_bins < 1) throw ConfigError("split.chamfer_bins must be >= 1");
    if (!(chamfer_edge_threshold >= 0.0 && chamfer_edge_threshold <= 1.0)) {
        throw ConfigError("split.chamfer_edge_threshold must lie in [0,1]");
    }
}

void LocalContourParams::validate() const {
    if (!(k_low > 0.0) || !(k_high > k_low)) throw ConfigError("lcd multipliers need 0 < k_low < k_high");
    if (!(sigma > 0.0)) throw ConfigError("lcd.sigma must be positive");
}

std::vector<std::size_t> find_cut_points(const Parcel& p, const SplitParams& params) {
    const Contour& c = p.contour();
    const std::size_t n = c.size();
    const auto w = static_cast<std::size_t>(params.curvature_window);
    if (n <= 2 * w) return {};
    std::vector<double> angle(n);
    for (std::size_t i = 0; i < n; ++i) angle[i] = turn_angle(c, i, w);

    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (angle[i] < params.curvature_min_angle) continue;
        bool is_max = true;
        for (std::size_t k = 1; k <= w && is_max; ++k) {
            for (std::size_t j : {(i + k) % n, (i + n - k) % n}) {
                if (angle[j] > angle[i] || (angle[j] == angle[i] && j < i)) {
                    is_max = false;
                    break;
                }
            }
        }
        if (is_max) out.push_back(i);
    }
    return out;
}

std::optional<Cut> pair_cut_point(const Parcel& p, std::size_t c, const SplitParams& params) {
    const Contour& con = p.contour();
    if (c >= con.size()) throw std::invalid_argument("pair_cut_point: index out of range");
    const Point a = con[c];
    std::optional<Cut> best;
    for (std::size_t j = 0; j < con.size(); ++j) {
        const Point b = con[j];
        if (b == a) continue;
        const double e = euclidean(a, b);
        const double along = contour_distance(con, c, j);
        if (!(along > e) || along < params.min_cut_contour) continue;
        if (!best || e < best->euclid) {
            best = Cut{c, j, a, b, e, along, 0.0, false};
        }
    }
    return best;
}

bool admissible(const Parcel& p, const Cut& cut, const SplitParams& params) {
    const Contour& c = p.contour();
    if (!segment_inside(p, c[cut.i], c[cut.j])) return false;
    const double d = std::abs(c.arc_to(cut.j) - c.arc_to(cut.i));
    const double chord = euclidean(c[cut.i], c[cut.j]);
    return d + chord >= params.min_sub_contour && (c.length() - d) + chord >= params.min_sub_contour;
}

std::vector<Cut> candidate_cuts(const Parcel& p, const SplitParams& params) {
    std::vector<Cut> out;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t c : find_cut_points(p, params)) {
        std::optional<Cut> cut = pair_cut_point(p, c, params);
        if (!cut || !(cut->euclid < params.max_cut_euclid) || !(cut->along_contour > params.min_cut_contour)) continue;
        if (cut->i > cut->j) {
            std::swap(cut->i, cut->j);
            std::swap(cut->a, cut->b);
        }
        if (!seen.insert({cut->i, cut->j}).second) continue;
        cut->admissible = admissible(p, *cut, params);
        out.push_back(*cut);
    }
    std::sort(out.begin(), out.end(), [](const Cut& x, const Cut& y) { return std::tie(x.i, x.j) < std::tie(y.i, y.j); });
    return out;
}

double combine_strength(double beta, double c_dist, double c_prob) { return beta * c_dist + (1.0 - beta) * c_prob; }

DirectionalDistanceField build_directional_field(const EdgeMap& edges, const SplitParams& params) {
    const std::vector<double> angles = gradient_orientations(edges);
    return DirectionalDistanceField::build(binarize_edges(edges, params.chamfer_edge_threshold), angles,
                                           params.chamfer_bins);
}

double cut_strength(const Parcel& p, const Cut& cut, const EdgeMap& edges, const DirectionalDistanceField& dcd,
                    const SplitParams& params) {
    const Point a = p.contour()[cut.i];
    const Point b = p.contour()[cut.j];
    const double c_dist = 1.0 / (1.0 + dcd.query(a, b));
    const std::vector<Point> line = bresenham(a, b);
    double sum = 0.0;
    for (const Point& q : line) {
        if (!edges.contains(q.x, q.y)) throw InputError("cut_strength: cut leaves the edge map");
        sum += edges.at(q.x, q.y);
    }
    const double c_prob = sum / static_cast<double>(line.size());
    return combine_strength(params.beta, c_dist, c_prob);
}

namespace {

// The two pieces left after removing the cut pixels, or nothing if the cut does not
// separate the parcel into exactly two usable halves.
std::optional<std::vector<Parcel>> apply_cut(const Parcel& p, const Cut& cut, const SplitParams& params) {
    BinaryMask free = p.mask();
    const Point o = p.origin();
    for (const Point& q : bresenham(cut.a, cut.b)) free.set(q.x - o.x, q.y - o.y, false);
    int count = 0;
    label_components4(free, &count);
    if (count != 2) return std::nullopt;
    std::vector<Parcel> halves = parcels_from_free_space(free, 1, p.id() + ".", ParcelStage::SplitMincut, o);
    if (halves.size() != 2) return std::nullopt;
    for (const Parcel& h : halves) {
        if (perimeter(h) < params.min_sub_contour) return std::nullopt;
    }
    return halves;
}

void split_recursive(const Parcel& p, const EdgeMap& edges, const DirectionalDistanceField& dcd,
                     const SplitParams& params, int depth, SplitTrace* trace, std::vector<Parcel>& out) {
    if (depth >= params.max_recursion_depth) {
        out.push_back(p);
        return;
    }
    std::vector<Cut> cuts = candidate_cuts(p, params);
    for (Cut& c : cuts) {
        if (c.admissible) c.strength = cut_strength(p, c, edges, dcd, params);
    }
    std::vector<const Cut*> order;
    for (const Cut& c : cuts) {
        if (c.admissible && c.strength >= params.min_strength) order.push_back(&c);
    }
    std::stable_sort(order.begin(), order.end(), [](const Cut* x, const Cut* y) { return x->strength > y->strength; });

    SplitTrace::Step step;
    if (trace) {
        step.parcel_id = p.id();
        for (std::size_t i : find_cut_points(p, params)) step.cut_points.push_back(p.contour()[i]);
        step.candidates = cuts;
    }
    for (const Cut* c : order) {
        std::optional<std::vector<Parcel>> halves = apply_cut(p, *c, params);
        if (!halves) continue;
        if (trace) {
            step.chosen = *c;
            trace->steps.push_back(step);
        }
        for (const Parcel& h : *halves) split_recursive(h, edges, dcd, params, depth + 1, trace, out);
        return;
    }
    if (trace) trace->steps.push_back(step);
    out.push_back(p);
}

}  // namespace

std::vector<Parcel> split_mincut(const Parcel& p, const EdgeMap& edges, const DirectionalDistanceField& dcd,
                                 const SplitParams& params, SplitTrace* trace) {
    params.validate();
    std::vector<Parcel> out;
    split_recursive(p, edges, dcd, params, 0, trace, out);
    std::stable_sort(out.begin(), out.end(), [](const Parcel& a, const Parcel& b) { return id_less(a.id(), b.id()); });
    return out;
}

std::vector<Parcel> split_localized(const Parcel& p, const GrayImage& img, const ExtractionParams& extraction,
                                    const ShapeThresholds& t, const LocalContourParams& local) {
    local.validate();
    extraction.validate();
    constexpr int kMargin = 3;
    const BinaryMask& m = p.mask();
    const Point o = p.origin();
    if (o.x < 0 || o.y < 0 || o.x + m.width() > img.width() || o.y + m.height() > img.height()) {
        throw InputError("split_localized: parcel lies outside the image");
    }
    double sum = 0.0;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (m.at(x, y)) sum += img.at(o.x + x, o.y + y);
        }
    }
    const auto fill = static_cast<std::uint8_t>(std::lround(sum / p.area()));

    const int w = m.width() + 2 * kMargin;
    const int h = m.height() + 2 * kMargin;
    GrayImage crop(w, h, fill);
    BinaryMask region(w, h);
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (!m.at(x, y)) continue;
            crop.set(x + kMargin, y + kMargin, img.at(o.x + x, o.y + y));
            region.set(x + kMargin, y + kMargin);
        }
    }
    const HysteresisParams hp = local_hysteresis_params(crop, region, local.k_low, local.k_high, local.sigma);
    BinaryMask barrier = clean_edges(binarize_edges(canny(crop, hp), 0.5), extraction);
    barrier |= region.complement();

    std::vector<Parcel> pieces = parcels_from_free_space(barrier.complement(), extraction.min_component_area, "",
                                                         ParcelStage::SplitLcd, {o.x - kMargin, o.y - kMargin});
    std::vector<Parcel> survivors;
    for (const Parcel& f : pieces) {
        if (rule1_small(f, t) || rule3_elongated_noise(f, t)) continue;
        survivors.push_back(f.relabeled(p.id() + "." + std::to_string(survivors.size() + 1), ParcelStage::SplitLcd));
    }
    if (survivors.size() < 2) return {p};
    return survivors;
}

}  // namespace fieldseg
