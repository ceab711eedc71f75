#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "econet/errors.hpp"
#include "econet/io_table.hpp"
#include "econet/matrix.hpp"

namespace econet {

struct NodeId {
    int region = 0;
    int industry = 0;

    int flat(int industry_count) const { return region * industry_count + industry; }
    static NodeId from_flat(int node, int industry_count) {
        return {node / industry_count, node % industry_count};
    }
    bool operator==(const NodeId&) const = default;
};

// Which sales count toward a node's revenue base. The default treats total
// output (intermediate plus final use) as revenue; the intermediate-only base
// exists for sensitivity runs.
enum class RevenueBase { total_output, intermediate_only };

inline std::string_view to_string(RevenueBase base) {
    return base == RevenueBase::total_output ? "total_output" : "intermediate_only";
}

// Immutable money-flow view of one year's table. Rows are suppliers: the
// failure of buyer j removes sales(i, j) from supplier i's income. The link
// direction reversal relative to the product-supply network is this reading
// of the rows, not a stored transpose.
class EconNetwork {
public:
    explicit EconNetwork(const IOTable& table, RevenueBase base = RevenueBase::total_output)
        : year_(table.year),
          regions_(table.regions),
          industries_(table.industries),
          base_(base),
          sales_(table.sales) {
        const int n = table.region_count() * table.industry_count();
        if (sales_.rows() != n || sales_.cols() != n ||
            static_cast<int>(table.final_use.size()) != n)
            throw input_error("network construction: table dimensions do not match region and "
                              "industry counts");
        revenue_.resize(n);
        for (int i = 0; i < n; ++i) {
            revenue_[i] = sales_.row_sum(i);
            if (base_ == RevenueBase::total_output) revenue_[i] += table.final_use[i];
        }
    }

    int node_count() const { return sales_.rows(); }
    int region_count() const { return static_cast<int>(regions_.size()); }
    int industry_count() const { return static_cast<int>(industries_.size()); }
    int region_of(int node) const { return node / industry_count(); }
    int year() const { return year_; }
    RevenueBase revenue_base() const { return base_; }

    const Matrix& sales() const { return sales_; }
    double sale(int supplier, int buyer) const { return sales_(supplier, buyer); }
    double revenue(int node) const { return revenue_[node]; }

    const std::vector<std::string>& regions() const { return regions_; }
    const std::vector<std::string>& industries() const { return industries_; }

    std::string node_code(int node) const {
        return regions_[region_of(node)] + "." + industries_[node % industry_count()];
    }

    std::optional<int> find_node(std::string_view region, std::string_view industry) const {
        int r = -1, i = -1;
        for (std::size_t k = 0; k < regions_.size(); ++k)
            if (regions_[k] == region) r = static_cast<int>(k);
        for (std::size_t k = 0; k < industries_.size(); ++k)
            if (industries_[k] == industry) i = static_cast<int>(k);
        if (r < 0 || i < 0) return std::nullopt;
        return r * industry_count() + i;
    }

    // "REGION.industry"; the first dot separates the parts.
    std::optional<int> parse_node_code(std::string_view code) const {
        auto dot = code.find('.');
        if (dot == std::string_view::npos) return std::nullopt;
        return find_node(code.substr(0, dot), code.substr(dot + 1));
    }

private:
    int year_;
    std::vector<std::string> regions_;
    std::vector<std::string> industries_;
    RevenueBase base_;
    Matrix sales_;
    std::vector<double> revenue_;
};

inline EconNetwork build_network(const IOTable& table,
                                 RevenueBase base = RevenueBase::total_output) {
    return EconNetwork(table, base);
}

// Cumulative fraction of `node`'s revenue lost to the failed set: the sum of
// its sales to failed buyers (cross-region buyers only, under domestic
// exclusion) divided by its revenue base. Zero-revenue nodes lose nothing by
// definition.
inline double loss_fraction(const EconNetwork& net, int node, const std::vector<bool>& failed,
                            bool exclude_domestic = true) {
    if (node < 0 || node >= net.node_count()) throw contract_error("loss_fraction: node out of range");
    if (static_cast<int>(failed.size()) != net.node_count())
        throw contract_error("loss_fraction: failed-set size does not match the network");
    if (failed[node]) throw contract_error("loss_fraction: node is already failed");

    double revenue = net.revenue(node);
    if (revenue <= 0.0) return 0.0;
    const double* row = net.sales().row(node);
    const int region = net.region_of(node);
    double lost = 0.0;
    for (int j = 0; j < net.node_count(); ++j) {
        if (!failed[j]) continue;
        if (exclude_domestic && net.region_of(j) == region) continue;
        lost += row[j];
    }
    return lost / revenue;
}

}  // namespace econet
