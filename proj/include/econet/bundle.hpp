#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "econet/errors.hpp"
#include "econet/io_table.hpp"

namespace econet {

// FNV-1a over arbitrary bytes; used to fingerprint serialized inputs so
// derived artifacts can be cache-keyed.
inline std::uint64_t fnv1a(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string fnv1a_hex(const void* data, std::size_t size) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(data, size)));
    return buf;
}

// Everything `ingest` produces for one flows file: the per-year tables plus
// their validation reports, serializable to CBOR for fast reload.
struct TableBundle {
    std::map<int, IOTable> tables;
    std::map<int, ValidationReport> validation;

    static constexpr const char* kFormat = "econet-bundle";
    static constexpr int kVersion = 1;
};

inline nlohmann::json to_json(const IOTable& t) {
    nlohmann::json j;
    j["year"] = t.year;
    j["regions"] = t.regions;
    j["industries"] = t.industries;
    j["sales"] = t.sales.values();
    j["final_use"] = t.final_use;
    j["clamp_count"] = t.clamp_count;
    return j;
}

inline IOTable io_table_from_json(const nlohmann::json& j) {
    IOTable t;
    t.year = j.at("year").get<int>();
    t.regions = j.at("regions").get<std::vector<std::string>>();
    t.industries = j.at("industries").get<std::vector<std::string>>();
    auto values = j.at("sales").get<std::vector<double>>();
    std::size_t n = t.regions.size() * t.industries.size();
    if (values.size() != n * n) throw schema_error("bundle: sales matrix size mismatch");
    t.sales = Matrix(n, n);
    std::copy(values.begin(), values.end(), t.sales.values().begin());
    t.final_use = j.at("final_use").get<std::vector<double>>();
    if (t.final_use.size() != n) throw schema_error("bundle: final_use size mismatch");
    t.clamp_count = j.at("clamp_count").get<long>();
    return t;
}

inline nlohmann::json to_json(const ValidationReport& r) {
    return {{"year", r.year},
            {"dimensions_ok", r.dimensions_ok},
            {"clamp_count", r.clamp_count},
            {"zero_revenue_nodes", r.zero_revenue_nodes},
            {"nonzero_fraction", r.nonzero_fraction}};
}

inline ValidationReport validation_from_json(const nlohmann::json& j) {
    ValidationReport r;
    r.year = j.at("year").get<int>();
    r.dimensions_ok = j.at("dimensions_ok").get<bool>();
    r.clamp_count = j.at("clamp_count").get<long>();
    r.zero_revenue_nodes = j.at("zero_revenue_nodes").get<std::vector<std::string>>();
    r.nonzero_fraction = j.at("nonzero_fraction").get<double>();
    return r;
}

inline nlohmann::json to_json(const TableBundle& b) {
    nlohmann::json j;
    j["format"] = TableBundle::kFormat;
    j["version"] = TableBundle::kVersion;
    nlohmann::json tables = nlohmann::json::array();
    for (const auto& [year, table] : b.tables) tables.push_back(to_json(table));
    j["tables"] = std::move(tables);
    nlohmann::json reports = nlohmann::json::array();
    for (const auto& [year, report] : b.validation) reports.push_back(to_json(report));
    j["validation"] = std::move(reports);
    return j;
}

inline TableBundle bundle_from_json(const nlohmann::json& j) {
    if (!j.is_object() || j.value("format", "") != TableBundle::kFormat)
        throw schema_error("bundle: unrecognized format");
    if (j.value("version", 0) != TableBundle::kVersion)
        throw schema_error("bundle: unsupported version");
    TableBundle b;
    for (const auto& tj : j.at("tables")) {
        IOTable t = io_table_from_json(tj);
        int year = t.year;
        if (!b.tables.emplace(year, std::move(t)).second)
            throw schema_error("bundle: duplicate year");
    }
    for (const auto& rj : j.at("validation")) {
        ValidationReport r = validation_from_json(rj);
        b.validation[r.year] = std::move(r);
    }
    return b;
}

inline std::vector<std::uint8_t> bundle_to_cbor(const TableBundle& b) {
    return nlohmann::json::to_cbor(to_json(b));
}

inline TableBundle bundle_from_cbor(const std::vector<std::uint8_t>& bytes) {
    nlohmann::json j;
    try {
        j = nlohmann::json::from_cbor(bytes);
    } catch (const nlohmann::json::exception& e) {
        throw schema_error(std::string("bundle: ") + e.what());
    }
    try {
        return bundle_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw schema_error(std::string("bundle: ") + e.what());
    }
}

inline void save_bundle(const std::string& path, const TableBundle& b) {
    std::vector<std::uint8_t> bytes = bundle_to_cbor(b);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot open for writing: " + path);
    os.write(reinterpret_cast<const char*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size()));
    if (!os) throw io_error("write failed: " + path);
}

inline TableBundle load_bundle(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("cannot open: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                                    std::istreambuf_iterator<char>());
    return bundle_from_cbor(bytes);
}

// Fingerprint of a bundle's canonical CBOR encoding.
inline std::string bundle_fingerprint(const TableBundle& b) {
    std::vector<std::uint8_t> bytes = bundle_to_cbor(b);
    return fnv1a_hex(bytes.data(), bytes.size());
}

}  // namespace econet
