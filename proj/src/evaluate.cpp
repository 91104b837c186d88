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

#include "fieldseg/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include <json.hpp>

#include "fieldseg/errors.hpp"

namespace fieldseg {

Region Region::from_parcel(const Parcel& p) { return {p.id(), p.origin(), p.mask()}; }

std::string_view to_string(InstanceKind kind) {
    switch (kind) {
        case InstanceKind::Right: return "right";
        case InstanceKind::OverSegmented: return "over_segmented";
        case InstanceKind::UnderSegmented: return "under_segmented";
        case InstanceKind::FalsePositive: return "false_positive";
    }
    return "right";
}

namespace {

struct Box {
    int x0, y0, x1, y1;  // half-open
};

Box box_of(const Region& r) { return {r.origin.x, r.origin.y, r.origin.x + r.mask.width(), r.origin.y + r.mask.height()}; }

long overlap(const Region& a, const Region& b) {
    const Box ba = box_of(a);
    const Box bb = box_of(b);
    const int x0 = std::max(ba.x0, bb.x0);
    const int x1 = std::min(ba.x1, bb.x1);
    const int y0 = std::max(ba.y0, bb.y0);
    const int y1 = std::min(ba.y1, bb.y1);
    long n = 0;
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            if (a.mask.at(x - a.origin.x, y - a.origin.y) && b.mask.at(x - b.origin.x, y - b.origin.y)) ++n;
        }
    }
    return n;
}

void check_frame(std::span<const Region> regions, int width, int height) {
    for (const Region& r : regions) {
        const Box b = box_of(r);
        if (b.x0 < 0 || b.y0 < 0 || b.x1 > width || b.y1 > height) {
            throw InputError("region " + r.id + " leaves the " + std::to_string(width) + "x" +
                             std::to_string(height) + " frame");
        }
    }
}

struct Link {
    std::size_t g;
    std::size_t d;
    long overlap;
    bool alive = true;
};

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

std::vector<std::size_t> order_by_id(std::span<const Region> regions) {
    std::vector<std::size_t> order(regions.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return id_less(regions[a].id, regions[b].id); });
    return order;
}

}  // namespace

std::vector<MappingInstance> build_mapping(std::span<const Region> gt_in, std::span<const Region> det_in, int width,
                                           int height, double link_min_overlap) {
    if (!(link_min_overlap > 0.0 && link_min_overlap <= 1.0)) {
        throw ConfigError("evaluate.link_min_overlap must lie in (0,1]");
    }
    check_frame(gt_in, width, height);
    check_frame(det_in, width, height);
    // Work in id order so results do not depend on input order.
    std::vector<const Region*> gt;
    std::vector<const Region*> det;
    for (std::size_t i : order_by_id(gt_in)) gt.push_back(&gt_in[i]);
    for (std::size_t i : order_by_id(det_in)) det.push_back(&det_in[i]);
    const std::size_t ng = gt.size();
    const std::size_t nd = det.size();

    std::vector<long> gt_area(ng), det_area(nd);
    for (std::size_t g = 0; g < ng; ++g) gt_area[g] = gt[g]->area();
    for (std::size_t d = 0; d < nd; ++d) det_area[d] = det[d]->area();

    std::vector<Link> links;
    for (std::size_t g = 0; g < ng; ++g) {
        for (std::size_t d = 0; d < nd; ++d) {
            const long ov = overlap(*gt[g], *det[d]);
            if (ov > 0 && static_cast<double>(ov) >= link_min_overlap * static_cast<double>(std::min(gt_area[g], det_area[d]))) {
                links.push_back({g, d, ov});
            }
        }
    }

    // Break many-to-many groups: drop the weakest link whose endpoints both keep another
    // link, until none is left. What remains are stars.
    const auto components = [&] {
        UnionFind uf(ng + nd);
        for (const Link& l : links) {
            if (l.alive) uf.unite(l.g, ng + l.d);
        }
        return uf;
    };
    {
        UnionFind uf = components();
        std::map<std::size_t, std::pair<int, int>> sizes;
        std::vector<int> deg(ng + nd, 0);
        for (const Link& l : links) {
            ++deg[l.g];
            ++deg[ng + l.d];
        }
        for (std::size_t g = 0; g < ng; ++g) {
            if (deg[g] > 0) ++sizes[uf.find(g)].first;
        }
        for (std::size_t d = 0; d < nd; ++d) {
            if (deg[ng + d] > 0) ++sizes[uf.find(ng + d)].second;
        }
        std::vector<char> mixed(ng + nd, 0);
        for (const auto& [root, s] : sizes) {
            if (s.first > 1 && s.second > 1) mixed[root] = 1;
        }
        while (true) {
            Link* weakest = nullptr;
            for (Link& l : links) {
                if (!l.alive || !mixed[uf.find(l.g)] || deg[l.g] < 2 || deg[ng + l.d] < 2) continue;
                if (!weakest || l.overlap < weakest->overlap) weakest = &l;
            }
            if (!weakest) break;
            weakest->alive = false;
            --deg[weakest->g];
            --deg[ng + weakest->d];
        }
    }

    UnionFind uf = components();
    std::vector<char> linked(ng + nd, 0);
    for (const Link& l : links) {
        if (!l.alive) continue;
        linked[l.g] = 1;
        linked[ng + l.d] = 1;
    }
    std::map<std::size_t, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> members;
    for (std::size_t g = 0; g < ng; ++g) {
        if (linked[g]) members[uf.find(g)].first.push_back(g);
    }
    for (std::size_t d = 0; d < nd; ++d) {
        if (linked[ng + d]) members[uf.find(ng + d)].second.push_back(d);
    }

    std::vector<MappingInstance> out;
    for (const auto& [root, m] : members) {
        const auto& [gs, ds] = m;
        MappingInstance inst;
        for (std::size_t g : gs) inst.gt_ids.push_back(gt[g]->id);
        for (std::size_t d : ds) inst.det_ids.push_back(det[d]->id);
        inst.kind = gs.size() == 1 && ds.size() == 1 ? InstanceKind::Right
                    : gs.size() == 1                 ? InstanceKind::OverSegmented
                                                     : InstanceKind::UnderSegmented;
        Box b{width, height, 0, 0};
        for (std::size_t g : gs) {
            const Box r = box_of(*gt[g]);
            b = {std::min(b.x0, r.x0), std::min(b.y0, r.y0), std::max(b.x1, r.x1), std::max(b.y1, r.y1)};
        }
        for (std::size_t d : ds) {
            const Box r = box_of(*det[d]);
            b = {std::min(b.x0, r.x0), std::min(b.y0, r.y0), std::max(b.x1, r.x1), std::max(b.y1, r.y1)};
        }
        BinaryMask gu(b.x1 - b.x0, b.y1 - b.y0);
        BinaryMask du(b.x1 - b.x0, b.y1 - b.y0);
        const auto paint = [&](BinaryMask& u, const Region& r) {
            for (int y = 0; y < r.mask.height(); ++y) {
                for (int x = 0; x < r.mask.width(); ++x) {
                    if (r.mask.at(x, y)) u.set(r.origin.x + x - b.x0, r.origin.y + y - b.y0);
                }
            }
        };
        for (std::size_t g : gs) paint(gu, *gt[g]);
        for (std::size_t d : ds) paint(du, *det[d]);
        for (std::size_t i = 0; i < gu.bits().size(); ++i) {
            const bool ing = gu.bits()[i] != 0;
            const bool ind = du.bits()[i] != 0;
            inst.tp += ing && ind;
            inst.fn += ing && !ind;
            inst.fp += !ing && ind;
        }
        out.push_back(std::move(inst));
    }
    std::stable_sort(out.begin(), out.end(), [](const MappingInstance& a, const MappingInstance& b) {
        return id_less(a.gt_ids.front(), b.gt_ids.front());
    });
    for (std::size_t d = 0; d < nd; ++d) {
        if (linked[ng + d]) continue;
        MappingInstance inst;
        inst.det_ids.push_back(det[d]->id);
        inst.kind = InstanceKind::FalsePositive;
        inst.fp = det_area[d];
        if (inst.fp > 0) out.push_back(std::move(inst));
    }
    return out;
}

InstanceMetrics instance_metrics(const MappingInstance& inst) {
    if (inst.tp < 0 || inst.fp < 0 || inst.fn < 0) throw InputError("instance tallies must be non-negative");
    if (inst.tp + inst.fp + inst.fn == 0) throw InputError("instance_metrics: empty instance");
    InstanceMetrics m;
    const double tp = static_cast<double>(inst.tp);
    if (inst.tp + inst.fp > 0) m.precision = tp / static_cast<double>(inst.tp + inst.fp);
    if (inst.tp + inst.fn > 0) m.recall = tp / static_cast<double>(inst.tp + inst.fn);
    if (m.precision + m.recall > 0.0) m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

double agglomeration_metric(long k, LogBase base) {
    if (k < 1) throw InputError("k-metric needs k >= 1");
    const double kd = static_cast<double>(k);
    return 1.0 / (1.0 + (base == LogBase::Natural ? std::log(kd) : std::log10(kd)));
}

double fragmentation_metric(long k, LogBase base) { return agglomeration_metric(k, base); }

EvalReport aggregate(std::span<const MappingInstance> instances, std::size_t gt_field_count, LogBase base) {
    if (gt_field_count == 0) throw InputError("aggregate: no ground-truth fields");
    EvalReport r;
    double gt_pixels = 0.0;
    double mapped_det = 0.0;
    double unmapped_det = 0.0;
    std::size_t mapped_fields = 0;
    for (const MappingInstance& inst : instances) {
        InstanceReport ir{inst, instance_metrics(inst), 1.0, 1.0};
        if (inst.kind != InstanceKind::FalsePositive) {
            ir.agglomeration = agglomeration_metric(static_cast<long>(inst.gt_ids.size()), base);
            ir.fragmentation = fragmentation_metric(static_cast<long>(inst.det_ids.size()), base);
            gt_pixels += static_cast<double>(inst.tp + inst.fn);
            mapped_det += static_cast<double>(inst.tp + inst.fp);
            mapped_fields += inst.gt_ids.size();
        } else {
            unmapped_det += static_cast<double>(inst.fp);
        }
        r.per_instance.push_back(std::move(ir));
    }
    if (mapped_fields > gt_field_count) throw InputError("aggregate: more mapped fields than ground-truth fields");
    r.detection_rate = static_cast<double>(mapped_fields) / static_cast<double>(gt_field_count);
    if (gt_pixels == 0.0) return r;
    for (const InstanceReport& ir : r.per_instance) {
        if (ir.instance.kind == InstanceKind::FalsePositive) continue;
        const double w = static_cast<double>(ir.instance.tp + ir.instance.fn);
        r.image.precision += w * ir.metrics.precision;
        r.image.recall += w * ir.metrics.recall;
        r.image.f1 += w * ir.metrics.f1;
        r.image.agglomeration += w * ir.agglomeration;
        r.image.fragmentation += w * ir.fragmentation;
    }
    for (double* m : {&r.image.precision, &r.image.recall, &r.image.f1, &r.image.agglomeration,
                      &r.image.fragmentation}) {
        *m /= gt_pixels;
    }
    if (mapped_det + unmapped_det > 0.0) r.image.precision *= mapped_det / (mapped_det + unmapped_det);
    return r;
}

EvalReport evaluate(std::span<const Region> gt, std::span<const Region> det, int width, int height,
                    double link_min_overlap, LogBase base) {
    const std::vector<MappingInstance> inst = build_mapping(gt, det, width, height, link_min_overlap);
    return aggregate(inst, gt.size(), base);
}

std::string report_to_json(const EvalReport& report) {
    using nlohmann::json;
    json doc;
    doc["image"] = {{"precision", report.image.precision},
                    {"recall", report.image.recall},
                    {"f1", report.image.f1},
                    {"agglomeration", report.image.agglomeration},
                    {"fragmentation", report.image.fragmentation}};
    doc["detection_rate"] = report.detection_rate;
    json list = json::array();
    for (const InstanceReport& ir : report.per_instance) {
        const bool fp = ir.instance.kind == InstanceKind::FalsePositive;
        list.push_back({{"gt_ids", ir.instance.gt_ids},
                        {"det_ids", ir.instance.det_ids},
                        {"kind", std::string(to_string(ir.instance.kind))},
                        {"tp", ir.instance.tp},
                        {"fp", ir.instance.fp},
                        {"fn", ir.instance.fn},
                        {"precision", ir.metrics.precision},
                        {"recall", ir.metrics.recall},
                        {"f1", ir.metrics.f1},
                        {"agglomeration", fp ? json(nullptr) : json(ir.agglomeration)},
                        {"fragmentation", fp ? json(nullptr) : json(ir.fragmentation)}});
    }
    doc["instances"] = list;
    return doc.dump(2);
}

std::string report_csv(const EvalReport& report) {
    char row[256];
    std::snprintf(row, sizeof row, "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", report.image.precision, report.image.recall,
                  report.image.f1, report.image.agglomeration, report.image.fragmentation, report.detection_rate);
    return std::string("Precision,Recall,F1,Agglomeration,Fragmentation,DetectionRate\n") + row;
}

}  // namespace fieldseg
