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

#include "fieldseg/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fieldseg/errors.hpp"

namespace fieldseg {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

StageToggles parse_stages(const std::string& text) {
    StageToggles s{false, false, false, false};
    const std::string t = trim(text);
    if (t.empty() || t == "none") return s;
    for (const std::string& tok : split_list(t)) {
        if (tok == "pp") {
            s.pp = true;
        } else if (tok == "mc") {
            s.mc = true;
        } else if (tok == "lcd") {
            s.lcd = true;
        } else if (tok == "nonag") {
            s.nonag = true;
        } else {
            throw ConfigError("unknown stage '" + tok + "' (expected pp, mc, lcd, nonag)");
        }
    }
    return s;
}

std::string format_stages(const StageToggles& s) {
    std::string out;
    const auto add = [&](bool on, const char* name) {
        if (!on) return;
        if (!out.empty()) out += ",";
        out += name;
    };
    add(s.pp, "pp");
    add(s.mc, "mc");
    add(s.lcd, "lcd");
    add(s.nonag, "nonag");
    return out.empty() ? "none" : out;
}

void RunConfig::validate() const {
    if (!(gsd_m_per_px > 0.0)) throw ConfigError("run.gsd_m_per_px must be positive");
    if (stages.nonag && model_path.empty()) throw ConfigError("the nonag stage needs a classifier model (--model)");
    extraction.validate();
    thresholds.validate();
    split.validate();
    lcd.validate();
    canny.validate();
    forest.validate();
    if (!(link_min_overlap > 0.0 && link_min_overlap <= 1.0)) {
        throw ConfigError("evaluate.link_min_overlap must lie in (0,1]");
    }
}

namespace {

// Drops a trailing comment: `;` or `#` after whitespace, outside quotes.
std::string strip_comment(const std::string& raw) {
    char quote = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const char c = raw[i];
        if (quote) {
            if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if ((c == ';' || c == '#') && i > 0 && std::isspace(static_cast<unsigned char>(raw[i - 1]))) {
            return raw.substr(0, i);
        }
    }
    return raw;
}

std::string unquote(const std::string& raw) {
    std::string v = trim(strip_comment(raw));
    if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) {
        v = v.substr(1, v.size() - 2);
    }
    return v;
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc{} || r.ptr != v.data() + v.size()) throw ConfigError(key + ": not a number: '" + v + "'");
    return out;
}

long long to_int(const std::string& key, const std::string& v) {
    long long out = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc{} || r.ptr != v.data() + v.size()) throw ConfigError(key + ": not an integer: '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key + ": not a boolean: '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

template <typename Get>
Setter real_at(Get get) {
    return [get](RunConfig& c, const std::string& k, const std::string& v) { get(c) = to_double(k, v); };
}

template <typename Get>
Setter int_at(Get get) {
    return [get](RunConfig& c, const std::string& k, const std::string& v) {
        get(c) = static_cast<std::remove_reference_t<decltype(get(c))>>(to_int(k, v));
    };
}

template <typename Get>
Setter bool_at(Get get) {
    return [get](RunConfig& c, const std::string& k, const std::string& v) { get(c) = to_bool(k, v); };
}

template <typename Get>
Setter text_at(Get get) {
    return [get](RunConfig& c, const std::string&, const std::string& v) { get(c) = v; };
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        t["run.image"] = text_at([](RunConfig& c) -> std::string& { return c.input_image; });
        t["run.edge_maps"] = [](RunConfig& c, const std::string&, const std::string& v) { c.edge_maps = split_list(v); };
        t["run.mask"] = text_at([](RunConfig& c) -> std::string& { return c.cropland_mask; });
        t["run.gt"] = text_at([](RunConfig& c) -> std::string& { return c.gt; });
        t["run.model"] = text_at([](RunConfig& c) -> std::string& { return c.model_path; });
        t["run.out"] = text_at([](RunConfig& c) -> std::string& { return c.output_dir; });
        t["run.seed"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            const long long s = to_int(k, v);
            if (s < 0) throw ConfigError(k + ": must be non-negative");
            c.seed = static_cast<std::uint64_t>(s);
        };
        t["run.gsd_m_per_px"] = [](RunConfig&, const std::string&, const std::string&) {};  // read first
        t["run.stages"] = [](RunConfig& c, const std::string&, const std::string& v) { c.stages = parse_stages(v); };
        t["run.debug_cuts"] = bool_at([](RunConfig& c) -> bool& { return c.debug_cuts; });
        t["run.affine"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            const std::vector<std::string> parts = split_list(v);
            if (parts.size() != 6) throw ConfigError(k + ": expected six comma-separated numbers");
            Affine a{};
            for (std::size_t i = 0; i < 6; ++i) a[i] = to_double(k, parts[i]);
            c.affine = a;
        };

        t["extract.binarize_threshold"] = real_at([](RunConfig& c) -> double& { return c.extraction.binarize_threshold; });
        t["extract.dilate_radius"] = int_at([](RunConfig& c) -> int& { return c.extraction.dilate_radius; });
        t["extract.erode_radius"] = int_at([](RunConfig& c) -> int& { return c.extraction.erode_radius; });
        t["extract.min_component_area"] = int_at([](RunConfig& c) -> int& { return c.extraction.min_component_area; });

        t["filter.min_perimeter"] = real_at([](RunConfig& c) -> double& { return c.thresholds.min_perimeter; });
        t["filter.min_area"] = real_at([](RunConfig& c) -> double& { return c.thresholds.min_area; });
        t["filter.convexity_max_ratio"] = real_at([](RunConfig& c) -> double& { return c.thresholds.convexity_max_ratio; });
        t["filter.convexity_area_cap"] = real_at([](RunConfig& c) -> double& { return c.thresholds.convexity_area_cap; });
        t["filter.min_area_perimeter_ratio"] =
            real_at([](RunConfig& c) -> double& { return c.thresholds.min_area_perimeter_ratio; });
        t["filter.ap_area_cap"] = real_at([](RunConfig& c) -> double& { return c.thresholds.ap_area_cap; });
        t["filter.min_aspect_ratio"] = real_at([](RunConfig& c) -> double& { return c.thresholds.min_aspect_ratio; });
        t["filter.sub_polygon_min_contour"] =
            real_at([](RunConfig& c) -> double& { return c.thresholds.sub_polygon_min_contour; });

        t["split.curvature_window"] = int_at([](RunConfig& c) -> int& { return c.split.curvature_window; });
        t["split.curvature_min_angle"] = real_at([](RunConfig& c) -> double& { return c.split.curvature_min_angle; });
        t["split.max_cut_euclid"] = real_at([](RunConfig& c) -> double& { return c.split.max_cut_euclid; });
        t["split.min_cut_contour"] = real_at([](RunConfig& c) -> double& { return c.split.min_cut_contour; });
        t["split.beta"] = real_at([](RunConfig& c) -> double& { return c.split.beta; });
        t["split.max_recursion_depth"] = int_at([](RunConfig& c) -> int& { return c.split.max_recursion_depth; });
        t["split.min_strength"] = real_at([](RunConfig& c) -> double& { return c.split.min_strength; });
        t["split.chamfer_bins"] = int_at([](RunConfig& c) -> int& { return c.split.chamfer_bins; });
        t["split.chamfer_edge_threshold"] =
            real_at([](RunConfig& c) -> double& { return c.split.chamfer_edge_threshold; });

        t["lcd.k_low"] = real_at([](RunConfig& c) -> double& { return c.lcd.k_low; });
        t["lcd.k_high"] = real_at([](RunConfig& c) -> double& { return c.lcd.k_high; });
        t["lcd.sigma"] = real_at([](RunConfig& c) -> double& { return c.lcd.sigma; });
        t["canny.k_low"] = real_at([](RunConfig& c) -> double& { return c.canny.k_low; });
        t["canny.k_high"] = real_at([](RunConfig& c) -> double& { return c.canny.k_high; });
        t["canny.sigma"] = real_at([](RunConfig& c) -> double& { return c.canny.sigma; });

        t["classify.n_trees"] = int_at([](RunConfig& c) -> int& { return c.forest.n_trees; });
        t["classify.max_depth"] = int_at([](RunConfig& c) -> int& { return c.forest.max_depth; });
        t["classify.mtry"] = int_at([](RunConfig& c) -> int& { return c.forest.mtry; });
        t["classify.bootstrap"] = bool_at([](RunConfig& c) -> bool& { return c.forest.bootstrap; });

        t["evaluate.link_min_overlap"] = real_at([](RunConfig& c) -> double& { return c.link_min_overlap; });
        t["evaluate.log_base"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            if (v == "e" || v == "natural") {
                c.log_base = LogBase::Natural;
            } else if (v == "10") {
                c.log_base = LogBase::Ten;
            } else {
                throw ConfigError(k + ": expected 'e' or '10'");
            }
        };
        return t;
    }();
    return table;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            entries.emplace_back("run." + section, unquote(body.data()));
            continue;
        }
        for (const auto& [key, value] : body) entries.emplace_back(section + "." + key, unquote(value.data()));
    }

    RunConfig cfg;
    for (const auto& [key, value] : entries) {
        if (key == "run.gsd_m_per_px") cfg.gsd_m_per_px = to_double(key, value);
    }
    const double sub_min = cfg.thresholds.sub_polygon_min_contour;
    cfg.thresholds = ShapeThresholds::from_gsd(cfg.gsd_m_per_px);
    cfg.thresholds.sub_polygon_min_contour = sub_min;

    const auto& table = setters();
    for (const auto& [key, value] : entries) {
        const auto it = table.find(key);
        if (it == table.end()) throw ConfigError("config: unknown key '" + key + "'");
        it->second(cfg, key, value);
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace fieldseg
