#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "econet/errors.hpp"
#include "econet/io_table.hpp"
#include "econet/pc.hpp"
#include "econet/text.hpp"

namespace econet {

// Which of a country's per-industry critical tolerances enter its score:
// all of them, or only the top k.
struct SelectionRule {
    int top_k = 0;  // 0 = all industries

    static SelectionRule all() { return {0}; }
    static SelectionRule top(int k) {
        if (k <= 0) throw contract_error("selection rule: k must be positive");
        return {k};
    }
    bool is_all() const { return top_k == 0; }
    std::string name() const { return is_all() ? "all" : "top" + std::to_string(top_k); }
};

namespace detail {
// Mean of the selected pc values; NaN when the country has no usable entries.
inline double selected_mean(std::vector<double>& vals, const SelectionRule& rule) {
    if (vals.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (!rule.is_all() && static_cast<std::size_t>(rule.top_k) < vals.size()) {
        std::partial_sort(vals.begin(), vals.begin() + rule.top_k, vals.end(),
                          std::greater<double>());
        vals.resize(rule.top_k);
    }
    double sum = 0.0;
    for (double v : vals) sum += v;
    return sum / double(vals.size());
}
}  // namespace detail

struct CountryImportance {
    std::string region;
    int year = 0;
    SelectionRule rule;
    double importance = 0.0;
};

// Country score for one year: mean critical tolerance across its industries
// (optionally restricted to the k most critical ones). Countries with no
// entries for the year are omitted.
inline std::vector<CountryImportance> country_importance(const PcTable& table, int year,
                                                         const SelectionRule& rule) {
    int y = table.year_index(year);
    if (y < 0) throw lookup_error("country_importance: year not in table");

    std::vector<CountryImportance> out;
    for (std::size_t r = 0; r < table.regions.size(); ++r) {
        std::vector<double> vals;
        vals.reserve(table.industries.size());
        for (std::size_t i = 0; i < table.industries.size(); ++i)
            if (table.has(y, static_cast<int>(r), static_cast<int>(i)))
                vals.push_back(table.at(y, static_cast<int>(r), static_cast<int>(i)));
        double m = detail::selected_mean(vals, rule);
        if (!std::isnan(m)) out.push_back({table.regions[r], year, rule, m});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const CountryImportance& a, const CountryImportance& b) {
                         return a.importance > b.importance;
                     });
    return out;
}

struct IndustryImportance {
    std::string region;
    std::string industry;
    double importance = 0.0;  // mean pc over the years present
    int years_present = 0;
};

// Industry score within one country: critical tolerance averaged over years.
inline std::vector<IndustryImportance> industry_importance(const PcTable& table,
                                                           std::string_view region) {
    int r = table.region_index(region);
    if (r < 0) throw lookup_error("industry_importance: unknown region");

    std::vector<IndustryImportance> out;
    for (std::size_t i = 0; i < table.industries.size(); ++i) {
        double sum = 0.0;
        int n = 0;
        for (std::size_t y = 0; y < table.years.size(); ++y)
            if (table.has(static_cast<int>(y), r, static_cast<int>(i))) {
                sum += table.at(static_cast<int>(y), r, static_cast<int>(i));
                ++n;
            }
        if (n > 0)
            out.push_back({std::string(region), table.industries[i], sum / n, n});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const IndustryImportance& a, const IndustryImportance& b) {
                         return a.importance > b.importance;
                     });
    return out;
}

// Industries ranked by their score averaged across all countries, for
// cross-country league tables. `limit` 0 keeps every industry.
inline std::vector<IndustryImportance> top_industries(const PcTable& table, int limit = 20) {
    std::vector<IndustryImportance> out;
    for (std::size_t i = 0; i < table.industries.size(); ++i) {
        double sum = 0.0;
        int n = 0;
        for (std::size_t r = 0; r < table.regions.size(); ++r)
            for (std::size_t y = 0; y < table.years.size(); ++y)
                if (table.has(static_cast<int>(y), static_cast<int>(r), static_cast<int>(i))) {
                    sum += table.at(static_cast<int>(y), static_cast<int>(r),
                                    static_cast<int>(i));
                    ++n;
                }
        if (n > 0) out.push_back({"", table.industries[i], sum / n, n});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const IndustryImportance& a, const IndustryImportance& b) {
                         return a.importance > b.importance;
                     });
    if (limit > 0 && out.size() > static_cast<std::size_t>(limit)) out.resize(limit);
    return out;
}

// Pair counts underlying the rank correlation between two vectors observed on
// the same items. tau-a divides by all pairs (ties count in neither
// direction); tau-b corrects the denominator for ties.
struct KendallStats {
    std::int64_t concordant = 0;
    std::int64_t discordant = 0;
    std::int64_t tied_x = 0;   // tied in x only
    std::int64_t tied_y = 0;   // tied in y only
    std::int64_t tied_both = 0;
    int n = 0;

    std::int64_t total_pairs() const { return std::int64_t(n) * (n - 1) / 2; }

    double tau_a() const {
        std::int64_t tp = total_pairs();
        if (tp == 0) return std::numeric_limits<double>::quiet_NaN();
        return double(concordant - discordant) / double(tp);
    }
    double tau_b() const {
        std::int64_t tp = total_pairs();
        double denom = std::sqrt(double(tp - (tied_x + tied_both))) *
                       std::sqrt(double(tp - (tied_y + tied_both)));
        if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
        return double(concordant - discordant) / denom;
    }
};

inline KendallStats kendall_stats(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw contract_error("kendall: length mismatch");
    if (x.size() < 2) throw contract_error("kendall: need at least two items");
    KendallStats s;
    s.n = static_cast<int>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            double dx = x[i] - x[j], dy = y[i] - y[j];
            if (dx == 0.0 && dy == 0.0)
                ++s.tied_both;
            else if (dx == 0.0)
                ++s.tied_x;
            else if (dy == 0.0)
                ++s.tied_y;
            else if ((dx > 0.0) == (dy > 0.0))
                ++s.concordant;
            else
                ++s.discordant;
        }
    return s;
}

enum class TauVariant { tau_a, tau_b };

inline double kendall_tau(const std::vector<double>& x, const std::vector<double>& y,
                          TauVariant variant = TauVariant::tau_a) {
    KendallStats s = kendall_stats(x, y);
    return variant == TauVariant::tau_a ? s.tau_a() : s.tau_b();
}

// Year-by-year rank stability of one country's industry profile: tau between
// the pc vectors of every ordered year pair (upper triangle; diagonal 1).
struct KendallMatrix {
    std::string region;
    std::vector<int> years;
    Matrix tau;  // years x years, symmetric

    double at(int a, int b) const { return tau(a, b); }
};

inline KendallMatrix kendall_matrix(const PcTable& table, std::string_view region,
                                    TauVariant variant = TauVariant::tau_a) {
    int r = table.region_index(region);
    if (r < 0) throw lookup_error("kendall_matrix: unknown region");
    if (table.years.size() < 2)
        throw input_error("kendall_matrix: need at least two years");

    // Industries observed in every year, so each pair compares a common set.
    std::vector<int> common;
    for (std::size_t i = 0; i < table.industries.size(); ++i) {
        bool everywhere = true;
        for (std::size_t y = 0; y < table.years.size() && everywhere; ++y)
            everywhere = table.has(static_cast<int>(y), r, static_cast<int>(i));
        if (everywhere) common.push_back(static_cast<int>(i));
    }
    if (common.size() < 2)
        throw input_error("kendall_matrix: fewer than two industries observed in every year");

    std::vector<std::vector<double>> profiles(table.years.size());
    for (std::size_t y = 0; y < table.years.size(); ++y) {
        profiles[y].reserve(common.size());
        for (int i : common) profiles[y].push_back(table.at(static_cast<int>(y), r, i));
    }

    KendallMatrix m;
    m.region = std::string(region);
    m.years = table.years;
    m.tau = Matrix(table.years.size(), table.years.size(), 1.0);
    for (std::size_t a = 0; a < table.years.size(); ++a)
        for (std::size_t b = a + 1; b < table.years.size(); ++b) {
            double t = kendall_tau(profiles[a], profiles[b], variant);
            m.tau(a, b) = t;
            m.tau(b, a) = t;
        }
    return m;
}

// Optional value-added series, one row per country-year:
// country,year,value_added
inline std::map<std::pair<std::string, int>, double> read_value_added_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw parse_error("empty value-added file", 1);
    if (trim(line) != "country,year,value_added")
        throw parse_error("bad value-added header", 1);
    std::map<std::pair<std::string, int>, double> out;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty()) continue;
        auto fields = split(sv, ',');
        if (fields.size() != 3) throw parse_error("expected 3 columns", line_no);
        int year = 0;
        double value = 0.0;
        if (!parse_int(fields[1], year) || !parse_double(fields[2], value))
            throw parse_error("bad value-added row", line_no);
        out[{std::string(trim(fields[0])), year}] = value;
    }
    return out;
}

struct OutputPoint {
    std::string region;
    int year = 0;
    double output = 0.0;
    std::string components;  // which terms the figure includes
};

// A country's cross-border intermediate sales in one table: every flow from
// the country's industries to buyers in other regions. Domestic sales and all
// final use are excluded — final-use columns carry no buyer region once
// ingested. When a value-added series is supplied its figure for the
// country-year is added on top.
inline std::vector<OutputPoint> country_output_series(
    const std::map<int, IOTable>& tables,
    const std::map<std::pair<std::string, int>, double>* value_added = nullptr) {
    if (tables.empty()) throw input_error("country_output_series: no tables");
    std::vector<OutputPoint> out;
    for (const auto& [year, table] : tables) {
        const std::size_t icount = table.industries.size();
        const std::size_t ncols = static_cast<std::size_t>(table.sales.cols());
        for (std::size_t r = 0; r < table.regions.size(); ++r) {
            double total = 0.0;
            for (std::size_t i = 0; i < icount; ++i) {
                const double* row = table.sales.row(static_cast<int>(r * icount + i));
                for (std::size_t b = 0; b < ncols; ++b)
                    if (b / icount != r) total += row[b];
            }
            std::string components = "cross_border_sales";
            if (value_added) {
                auto it = value_added->find({table.regions[r], year});
                if (it != value_added->end()) {
                    total += it->second;
                    components += "+value_added";
                }
            }
            out.push_back({table.regions[r], year, total, std::move(components)});
        }
    }
    return out;
}

// --- CSV emitters -----------------------------------------------------------

inline void write_country_importance_csv(std::ostream& os,
                                         const std::vector<CountryImportance>& rows) {
    os << "country,year,rule,importance\n";
    for (const auto& r : rows)
        os << r.region << ',' << r.year << ',' << r.rule.name() << ','
           << format_sig(r.importance) << '\n';
}

inline void write_industry_importance_csv(std::ostream& os,
                                          const std::vector<IndustryImportance>& rows) {
    os << "country,industry,importance\n";
    for (const auto& r : rows)
        os << r.region << ',' << r.industry << ',' << format_sig(r.importance) << '\n';
}

inline void write_kendall_csv(std::ostream& os, const KendallMatrix& m) {
    os << "country,year_a,year_b,tau\n";
    for (std::size_t a = 0; a < m.years.size(); ++a)
        for (std::size_t b = a + 1; b < m.years.size(); ++b)
            os << m.region << ',' << m.years[a] << ',' << m.years[b] << ','
               << format_sig(m.tau(a, b)) << '\n';
}

inline void write_outputs_csv(std::ostream& os, const std::vector<OutputPoint>& rows) {
    os << "country,year,output,components\n";
    for (const auto& r : rows)
        os << r.region << ',' << r.year << ',' << format_sig(r.output) << ',' << r.components
           << '\n';
}

}  // namespace econet
