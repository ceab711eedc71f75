#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "econet/flows.hpp"
#include "econet/matrix.hpp"
#include "econet/text.hpp"

namespace econet {

// One year of the aggregated world flow table. Rows are supplying nodes,
// columns are buying nodes (node = region x industry, region-major order);
// final_use holds each node's sales to final demand, summed over all
// consuming regions. Entries are non-negative once built.
struct IOTable {
    int year = 0;
    std::vector<std::string> regions;
    std::vector<std::string> industries;
    Matrix sales;
    std::vector<double> final_use;
    long clamp_count = 0;

    int node_count() const { return sales.rows(); }
    int industry_count() const { return static_cast<int>(industries.size()); }
    int region_count() const { return static_cast<int>(regions.size()); }
    int node_index(int region, int industry) const { return region * industry_count() + industry; }
    int region_of(int node) const { return node / industry_count(); }
    std::string node_code(int node) const {
        return regions[region_of(node)] + "." + industries[node % industry_count()];
    }

    bool operator==(const IOTable&) const = default;
};

// Zeroes negative entries in place; returns how many were clamped.
inline long clamp_negative(Matrix& sales, std::vector<double>& final_use) {
    long clamped = 0;
    for (double& v : sales.values())
        if (v < 0.0) {
            v = 0.0;
            ++clamped;
        }
    for (double& v : final_use)
        if (v < 0.0) {
            v = 0.0;
            ++clamped;
        }
    return clamped;
}

// Accumulates flow records into one year's table. Records may arrive in any
// order; negatives are clamped only once at finish(), after all aggregation.
class IOTableBuilder {
public:
    IOTableBuilder(const RegionScheme& scheme, int year)
        : scheme_(&scheme), table_{} {
        table_.year = year;
        table_.regions = scheme.regions();
        table_.industries = scheme.industry_codes;
        table_.sales = Matrix(scheme.node_count(), scheme.node_count());
        table_.final_use.assign(scheme.node_count(), 0.0);
    }

    void add(const RawFlowRecord& rec) {
        add(rec.year, rec.supplier_region, rec.supplier_industry, rec.buyer_region, rec.buyer_kind,
            rec.buyer_industry, rec.value);
    }

    void add(int year, std::string_view supplier_region, std::string_view supplier_industry,
             std::string_view buyer_region, BuyerKind kind, std::string_view buyer_industry,
             double value) {
        if (year != table_.year)
            throw input_error("record year " + std::to_string(year) + " does not match table year " +
                              std::to_string(table_.year));
        int sup_region = scheme_->map_region(supplier_region);
        if (sup_region < 0)
            throw scheme_error("unmapped supplier region '" + std::string(supplier_region) + "'");
        int sup_industry = scheme_->industry_index(supplier_industry);
        if (sup_industry < 0)
            throw schema_error("unknown industry code '" + std::string(supplier_industry) + "'");
        int supplier = scheme_->node_index(sup_region, sup_industry);

        if (kind == BuyerKind::final_use) {
            // Final-demand origin is irrelevant to the model; any consumer
            // region is accepted and summed.
            table_.final_use[supplier] += value;
            return;
        }
        int buy_region = scheme_->map_region(buyer_region);
        if (buy_region < 0)
            throw scheme_error("unmapped buyer region '" + std::string(buyer_region) + "'");
        int buy_industry = scheme_->industry_index(buyer_industry);
        if (buy_industry < 0)
            throw schema_error("unknown industry code '" + std::string(buyer_industry) + "'");
        table_.sales(supplier, scheme_->node_index(buy_region, buy_industry)) += value;
    }

    IOTable finish() {
        table_.clamp_count = clamp_negative(table_.sales, table_.final_use);
        return std::move(table_);
    }

private:
    const RegionScheme* scheme_;
    IOTable table_;
};

inline IOTable build_io_table(const std::vector<RawFlowRecord>& records, const RegionScheme& scheme,
                              int year) {
    IOTableBuilder builder(scheme, year);
    for (const auto& rec : records) builder.add(rec);
    return builder.finish();
}

// Streaming end-to-end ingest: canonical CSV to per-year tables without
// materializing the record list.
inline std::map<int, IOTable> ingest_flows(std::istream& in, const RegionScheme& scheme) {
    FlowReader reader(in, scheme);
    std::map<int, IOTableBuilder> builders;
    RawFlowRecord rec;
    while (reader.next(rec)) {
        auto it = builders.find(rec.year);
        if (it == builders.end())
            it = builders.emplace(rec.year, IOTableBuilder(scheme, rec.year)).first;
        it->second.add(rec);
    }
    std::map<int, IOTable> tables;
    for (auto& [year, builder] : builders) tables.emplace(year, builder.finish());
    return tables;
}

struct ValidationReport {
    int year = 0;
    bool dimensions_ok = true;
    long clamp_count = 0;
    std::vector<std::string> zero_revenue_nodes;
    double nonzero_fraction = 0.0;

    bool ok() const { return dimensions_ok; }

    std::string summary() const {
        std::ostringstream os;
        os << "year " << year << ": " << (dimensions_ok ? "ok" : "DIMENSION MISMATCH")
           << ", clamped " << clamp_count << " cells, " << format_sig(100.0 * nonzero_fraction, 4)
           << "% cells nonzero, " << zero_revenue_nodes.size() << " zero-revenue nodes";
        return os.str();
    }
};

inline ValidationReport validate_table(const IOTable& table) {
    ValidationReport report;
    report.year = table.year;
    int n = table.region_count() * table.industry_count();
    report.dimensions_ok = table.sales.rows() == n && table.sales.cols() == n &&
                           static_cast<int>(table.final_use.size()) == n;
    report.clamp_count = table.clamp_count;
    if (!report.dimensions_ok) return report;

    long nonzero = 0;
    for (double v : table.sales.values())
        if (v != 0.0) ++nonzero;
    report.nonzero_fraction =
        table.sales.values().empty() ? 0.0 : double(nonzero) / double(table.sales.values().size());

    for (int i = 0; i < n; ++i)
        if (table.sales.row_sum(i) + table.final_use[i] == 0.0)
            report.zero_revenue_nodes.push_back(table.node_code(i));
    return report;
}

}  // namespace econet
