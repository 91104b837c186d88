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

#include "fieldseg/geojson.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fieldseg/errors.hpp"

namespace fieldseg {

using nlohmann::json;

std::string parcels_to_geojson(std::span<const ClassifiedParcel> parcels, const std::optional<Affine>& affine) {
    json features = json::array();
    for (const ClassifiedParcel& cp : parcels) {
        std::vector<Point> ring = boundary_polygon(cp.parcel);
        ring.push_back(ring.front());
        json coords = json::array();
        for (const Point& q : ring) {
            if (affine) {
                const Affine& c = *affine;
                coords.push_back({c[0] + c[1] * q.x + c[2] * q.y, c[3] + c[4] * q.x + c[5] * q.y});
            } else {
                coords.push_back({q.x, q.y});
            }
        }
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({coords})}}},
                            {"properties",
                             {{"id", cp.parcel.id()},
                              {"label", std::string(to_string(cp.label))},
                              {"confidence", cp.confidence},
                              {"stage", std::string(to_string(cp.parcel.stage()))}}}});
    }
    const json doc = {{"type", "FeatureCollection"}, {"features", features}};
    return doc.dump(1) + "\n";
}

namespace {

void rasterize_rings(const json& rings, BinaryMask& acc, int width, int height) {
    for (const json& ring : rings) {
        std::vector<std::pair<double, double>> pts;
        for (const json& c : ring) pts.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
        if (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
        const BinaryMask m = rasterize_polygon(pts, width, height);
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                if (m.at(x, y)) acc.set(x, y, !acc.at(x, y));
            }
        }
    }
}

Region crop_region(std::string id, const BinaryMask& full) {
    int x0 = full.width(), y0 = full.height(), x1 = -1, y1 = -1;
    for (int y = 0; y < full.height(); ++y) {
        for (int x = 0; x < full.width(); ++x) {
            if (!full.at(x, y)) continue;
            x0 = std::min(x0, x);
            y0 = std::min(y0, y);
            x1 = std::max(x1, x);
            y1 = std::max(y1, y);
        }
    }
    if (x1 < 0) return {std::move(id), {0, 0}, BinaryMask(1, 1)};
    BinaryMask m(x1 - x0 + 1, y1 - y0 + 1);
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) m.set(x - x0, y - y0, full.at(x, y));
    }
    return {std::move(id), {x0, y0}, std::move(m)};
}

std::string id_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    return v.dump();
}

}  // namespace

std::vector<LabeledRegion> regions_from_geojson(const std::string& text, int width, int height) {
    std::vector<LabeledRegion> out;
    try {
        const json doc = json::parse(text);
        if (doc.at("type").get<std::string>() != "FeatureCollection") {
            throw InputError("GeoJSON: expected a FeatureCollection");
        }
        std::size_t position = 0;
        for (const json& f : doc.at("features")) {
            ++position;
            const json& geom = f.at("geometry");
            const std::string type = geom.at("type").get<std::string>();
            BinaryMask full(width, height);
            if (type == "Polygon") {
                rasterize_rings(geom.at("coordinates"), full, width, height);
            } else if (type == "MultiPolygon") {
                for (const json& poly : geom.at("coordinates")) rasterize_rings(poly, full, width, height);
            } else {
                continue;
            }
            const json props = f.contains("properties") && f["properties"].is_object() ? f["properties"] : json::object();
            std::string id = props.contains("id") ? id_text(props["id"])
                             : f.contains("id")   ? id_text(f["id"])
                                                  : std::to_string(position);
            LabeledRegion r{crop_region(std::move(id), full), std::nullopt};
            if (props.contains("label") && props["label"].is_string()) {
                r.label = parse_crop_class(props["label"].get<std::string>());
            }
            out.push_back(std::move(r));
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("GeoJSON: ") + e.what());
    }
    return out;
}

std::vector<LabeledRegion> read_geojson(const std::string& path, int width, int height) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return regions_from_geojson(ss.str(), width, height);
}

}  // namespace fieldseg
