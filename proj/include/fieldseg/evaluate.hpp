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
#include <string_view>
#include <vector>

#include "fieldseg/geometry.hpp"

namespace fieldseg {

/// A labelled pixel set in image coordinates; ground-truth fields need not be parcels.
struct Region {
    std::string id;
    Point origin;
    BinaryMask mask;

    static Region from_parcel(const Parcel& p);
    long area() const { return static_cast<long>(mask.count()); }
};

enum class InstanceKind { Right, OverSegmented, UnderSegmented, FalsePositive };

std::string_view to_string(InstanceKind kind);

struct MappingInstance {
    std::vector<std::string> gt_ids;
    std::vector<std::string> det_ids;
    InstanceKind kind = InstanceKind::Right;
    long tp = 0;
    long fp = 0;
    long fn = 0;
};

/// Links ground-truth and detected regions that share at least `link_min_overlap` of the
/// smaller region, groups them by connected component and breaks mixed groups by dropping
/// their weakest links until every group is one-to-one, one-to-many or many-to-one.
/// Detections linked to nothing become false-positive instances. Throws InputError when a
/// region leaves the width x height frame.
std::vector<MappingInstance> build_mapping(std::span<const Region> gt, std::span<const Region> det, int width,
                                           int height, double link_min_overlap = 0.1);

struct InstanceMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

InstanceMetrics instance_metrics(const MappingInstance& inst);

enum class LogBase { Natural, Ten };

/// 1 / (1 + log k).
double agglomeration_metric(long k, LogBase base = LogBase::Natural);
double fragmentation_metric(long k, LogBase base = LogBase::Natural);

struct InstanceReport {
    MappingInstance instance;
    InstanceMetrics metrics;
    double agglomeration = 1.0;
    double fragmentation = 1.0;
};

struct ImageMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double agglomeration = 0.0;
    double fragmentation = 0.0;
};

struct EvalReport {
    std::vector<InstanceReport> per_instance;
    ImageMetrics image;
    double detection_rate = 0.0;
};

/// Image metrics are means over mapped instances weighted by ground-truth pixels. Image
/// precision is further scaled by the share of detected pixels that belong to mapped
/// instances. Throws InputError when `gt_field_count` is zero.
EvalReport aggregate(std::span<const MappingInstance> instances, std::size_t gt_field_count,
                     LogBase base = LogBase::Natural);

EvalReport evaluate(std::span<const Region> gt, std::span<const Region> det, int width, int height,
                    double link_min_overlap = 0.1, LogBase base = LogBase::Natural);

std::string report_to_json(const EvalReport& report);
/// Header and one row: Precision, Recall, F1 first.
std::string report_csv(const EvalReport& report);

}  // namespace fieldseg
