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

#include "fieldseg/extract.hpp"

#include <algorithm>

#include "fieldseg/errors.hpp"

namespace fieldseg {

void ExtractionParams::validate() const {
    if (!(binarize_threshold >= 0.0 && binarize_threshold <= 1.0)) {
        throw ConfigError("extract.binarize_threshold must lie in [0,1]");
    }
    if (dilate_radius < 0 || erode_radius < 0) throw ConfigError("extract radii must be >= 0");
    if (min_component_area < 1) throw ConfigError("extract.min_component_area must be >= 1");
}

namespace {

BinaryMask erode_replicated(const BinaryMask& mask, int radius) {
    const int w = mask.width();
    const int h = mask.height();
    BinaryMask padded(w + 2 * radius, h + 2 * radius);
    for (int y = 0; y < padded.height(); ++y) {
        const int sy = std::clamp(y - radius, 0, h - 1);
        for (int x = 0; x < padded.width(); ++x) {
            padded.set(x, y, mask.at(std::clamp(x - radius, 0, w - 1), sy));
        }
    }
    const BinaryMask eroded = erode(padded, radius);
    BinaryMask out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) out.set(x, y, eroded.at(x + radius, y + radius));
    }
    return out;
}

}  // namespace

BinaryMask clean_edges(const BinaryMask& edges, const ExtractionParams& params) {
    BinaryMask m = edges;
    if (params.dilate_radius > 0) m = dilate(m, params.dilate_radius);
    if (params.erode_radius > 0) m = erode_replicated(m, params.erode_radius);
    return thin(m);
}

std::vector<Parcel> parcels_from_free_space(const BinaryMask& free, int min_area, const std::string& id_prefix,
                                            ParcelStage stage, Point origin) {
    const int w = free.width();
    const int h = free.height();
    int count = 0;
    const std::vector<int> labels = label_components4(free, &count);

    struct Component {
        int label = 0;
        int x0 = 0, y0 = 0, x1 = -1, y1 = -1;
        int pixels = 0;
        Point first{-1, -1};
        BinaryMask filled;
        std::size_t filled_area = 0;
    };
    std::vector<Component> comps(static_cast<std::size_t>(count) + 1);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int l = labels[static_cast<std::size_t>(y) * w + x];
            if (l == 0) continue;
            Component& c = comps[l];
            if (c.pixels == 0) {
                c.label = l;
                c.first = {x, y};
                c.x0 = c.x1 = x;
                c.y0 = c.y1 = y;
            }
            ++c.pixels;
            c.x0 = std::min(c.x0, x);
            c.x1 = std::max(c.x1, x);
            c.y0 = std::min(c.y0, y);
            c.y1 = std::max(c.y1, y);
        }
    }
    // Dominoes and single pixels cannot outline a contour.
    const int effective_min = std::max(min_area, 3);
    std::vector<Component*> kept;
    for (int l = 1; l <= count; ++l) {
        Component& c = comps[l];
        if (c.pixels < effective_min) continue;
        BinaryMask local(c.x1 - c.x0 + 1, c.y1 - c.y0 + 1);
        for (int y = c.y0; y <= c.y1; ++y) {
            for (int x = c.x0; x <= c.x1; ++x) {
                if (labels[static_cast<std::size_t>(y) * w + x] == l) local.set(x - c.x0, y - c.y0);
            }
        }
        c.filled = fill_holes(local);
        c.filled_area = c.filled.count();
        kept.push_back(&c);
    }

    // A closed component absorbs the components inside its holes. One that touches the
    // frame is open background wrapped around them and is dropped instead.
    std::vector<std::vector<int>> inner(static_cast<std::size_t>(count) + 1);
    std::vector<char> is_kept(static_cast<std::size_t>(count) + 1, 0);
    for (const Component* c : kept) is_kept[c->label] = 1;
    for (Component* c : kept) {
        std::vector<char> seen(static_cast<std::size_t>(count) + 1, 0);
        for (int y = 0; y < c->filled.height(); ++y) {
            for (int x = 0; x < c->filled.width(); ++x) {
                if (!c->filled.at(x, y)) continue;
                const int l = labels[static_cast<std::size_t>(c->y0 + y) * w + (c->x0 + x)];
                if (l != 0 && l != c->label && is_kept[l] && !seen[l]) {
                    seen[l] = 1;
                    inner[c->label].push_back(l);
                }
            }
        }
    }
    std::vector<Component*> by_size = kept;
    std::stable_sort(by_size.begin(), by_size.end(),
                     [](const Component* a, const Component* b) { return a->filled_area > b->filled_area; });
    std::vector<char> emitted(static_cast<std::size_t>(count) + 1, 0);
    std::vector<char> absorbed(static_cast<std::size_t>(count) + 1, 0);
    for (Component* c : by_size) {
        if (absorbed[c->label]) continue;
        const bool touches_frame = c->x0 == 0 || c->y0 == 0 || c->x1 == w - 1 || c->y1 == h - 1;
        if (touches_frame && !inner[c->label].empty()) continue;
        emitted[c->label] = 1;
        for (int l : inner[c->label]) absorbed[l] = 1;
    }

    std::vector<Parcel> parcels;
    int next_id = 1;
    for (Component* c : kept) {
        if (!emitted[c->label]) continue;
        parcels.push_back(Parcel::from_mask(c->filled, {origin.x + c->x0, origin.y + c->y0},
                                            id_prefix + std::to_string(next_id++), stage));
    }
    return parcels;
}

Extraction extract_regions(const EdgeMap& edge_map, const std::optional<BinaryMask>& cropland,
                           const ExtractionParams& params) {
    params.validate();
    BinaryMask barrier = clean_edges(binarize_edges(edge_map, params.binarize_threshold), params);
    if (cropland) {
        if (cropland->width() != edge_map.width() || cropland->height() != edge_map.height()) {
            throw InputError("extract: cropland mask dimensions differ from the edge map");
        }
        barrier |= cropland->complement();
    }
    Extraction out;
    out.parcels = parcels_from_free_space(barrier.complement(), params.min_component_area, "", ParcelStage::Extracted);
    out.barrier = std::move(barrier);
    return out;
}

std::vector<Parcel> extract_parcels(const EdgeMap& edge_map, const std::optional<BinaryMask>& cropland,
                                    const ExtractionParams& params) {
    return extract_regions(edge_map, cropland, params).parcels;
}

}  // namespace fieldseg
