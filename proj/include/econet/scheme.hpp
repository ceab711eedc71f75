#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "econet/errors.hpp"

namespace econet {

// Region scheme: which regions are kept as-is, which fold into the aggregate
// region, and the industry classification shared by all regions.
//
// The aggregate region (row_code) is appended after the kept regions on the
// region axis. A scheme may omit it for self-contained worlds that aggregate
// nothing.
class RegionScheme {
public:
    std::vector<std::string> kept_regions;
    std::string row_code;  // empty: no aggregate region
    std::unordered_map<std::string, std::string> aggregation_map;
    std::vector<std::string> industry_codes;

    // Checks the invariants and builds the lookup tables. Must be called once
    // the public fields are filled; load() and from_json() call it themselves.
    void finalize() {
        if (kept_regions.empty()) throw schema_error("scheme: kept_regions is empty");
        if (industry_codes.empty()) throw schema_error("scheme: industry_codes is empty");

        regions_ = kept_regions;
        if (!row_code.empty()) {
            for (const auto& r : kept_regions)
                if (r == row_code)
                    throw schema_error("scheme: kept_regions must not contain the aggregate code '" +
                                       row_code + "'");
            regions_.push_back(row_code);
        }

        region_lookup_.clear();
        for (std::size_t i = 0; i < regions_.size(); ++i) {
            check_code(regions_[i], /*is_region=*/true);
            if (!region_lookup_.emplace(regions_[i], static_cast<int>(i)).second)
                throw schema_error("scheme: duplicate region code '" + regions_[i] + "'");
        }
        industry_lookup_.clear();
        for (std::size_t i = 0; i < industry_codes.size(); ++i) {
            check_code(industry_codes[i], /*is_region=*/false);
            if (!industry_lookup_.emplace(industry_codes[i], static_cast<int>(i)).second)
                throw schema_error("scheme: duplicate industry code '" + industry_codes[i] + "'");
        }

        for (const auto& [src, dst] : aggregation_map) {
            check_code(src, /*is_region=*/true);
            auto it = region_lookup_.find(dst);
            if (it == region_lookup_.end())
                throw schema_error("scheme: aggregation target '" + dst +
                                   "' is neither a kept region nor the aggregate code");
            if (region_lookup_.count(src) && src != dst)
                throw schema_error("scheme: kept region '" + src + "' must map to itself");
        }
    }

    // Kept regions followed by the aggregate region, when one is configured.
    const std::vector<std::string>& regions() const { return regions_; }
    int region_count() const { return static_cast<int>(regions_.size()); }
    int industry_count() const { return static_cast<int>(industry_codes.size()); }
    int node_count() const { return region_count() * industry_count(); }

    // Source region code -> index into regions(), through the aggregation map;
    // -1 when nothing maps.
    int map_region(std::string_view code) const {
        if (auto it = aggregation_map.find(std::string(code)); it != aggregation_map.end())
            return region_lookup_.at(it->second);
        if (auto it = region_lookup_.find(std::string(code)); it != region_lookup_.end())
            return it->second;
        return -1;
    }

    int industry_index(std::string_view code) const {
        auto it = industry_lookup_.find(std::string(code));
        return it == industry_lookup_.end() ? -1 : it->second;
    }

    int node_index(int region, int industry) const {
        return region * industry_count() + industry;
    }

    std::string node_code(int node) const {
        return regions_[node / industry_count()] + "." + industry_codes[node % industry_count()];
    }

    // "REGION.industry" -> (region index, industry index); region codes never
    // contain a dot, so the first dot separates the parts.
    std::optional<std::pair<int, int>> parse_node_code(std::string_view code) const {
        auto dot = code.find('.');
        if (dot == std::string_view::npos) return std::nullopt;
        auto rit = region_lookup_.find(std::string(code.substr(0, dot)));
        if (rit == region_lookup_.end()) return std::nullopt;
        int ind = industry_index(code.substr(dot + 1));
        if (ind < 0) return std::nullopt;
        return std::make_pair(rit->second, ind);
    }

    static RegionScheme from_json(const nlohmann::json& j) {
        RegionScheme s;
        try {
            s.kept_regions = j.at("kept_regions").get<std::vector<std::string>>();
            s.industry_codes = j.at("industry_codes").get<std::vector<std::string>>();
            if (j.contains("row_code") && !j.at("row_code").is_null())
                s.row_code = j.at("row_code").get<std::string>();
            if (j.contains("aggregation_map"))
                s.aggregation_map =
                    j.at("aggregation_map").get<std::unordered_map<std::string, std::string>>();
        } catch (const nlohmann::json::exception& e) {
            throw schema_error(std::string("scheme: ") + e.what());
        }
        s.finalize();
        return s;
    }

    static RegionScheme load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw io_error("cannot open scheme file: " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw parse_error("scheme file " + path + ": " + e.what());
        }
        return from_json(j);
    }

private:
    static void check_code(const std::string& code, bool is_region) {
        if (code.empty()) throw schema_error("scheme: empty code");
        for (char c : code)
            if (c == ',' || c == '\n' || c == '\r' || (is_region && c == '.'))
                throw schema_error("scheme: code '" + code + "' contains a reserved character");
    }

    std::vector<std::string> regions_;
    std::unordered_map<std::string, int> region_lookup_;
    std::unordered_map<std::string, int> industry_lookup_;
};

}  // namespace econet
