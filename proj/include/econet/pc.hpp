#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "econet/cascade.hpp"
#include "econet/errors.hpp"
#include "econet/network.hpp"
#include "econet/text.hpp"

namespace econet {

struct SolverConfig {
    double survivor_threshold = 0.30;  // in (0, 1)
    double epsilon = 1e-4;             // bisection resolution
    std::vector<double> grid;          // curve evaluation points; empty -> default_grid()
    CascadeConfig cascade;             // p is ignored, supplied per evaluation

    // 0 to 1 in `steps` equal divisions (201 points at the default 0.005 step).
    static std::vector<double> default_grid(int steps = 200) {
        std::vector<double> g(steps + 1);
        for (int k = 0; k <= steps; ++k) g[k] = double(k) / double(steps);
        return g;
    }

    void check() const {
        if (!(survivor_threshold > 0.0 && survivor_threshold < 1.0))
            throw contract_error("solver: survivor_threshold must lie in (0, 1)");
        if (!(epsilon > 0.0)) throw contract_error("solver: epsilon must be positive");
    }
};

struct CurvePoint {
    double p = 0.0;
    double survivor = 0.0;
    int steps = 0;
};

namespace detail {
inline double survivors_at(const EconNetwork& net, int seed, const SolverConfig& config, double p) {
    CascadeConfig cc = config.cascade;
    cc.p = p;
    std::array<int, 1> seeds{seed};
    CascadeResult r = run_cascade(net, seeds, cc);
    return survivor_metric(net, r, cc.metric);
}
}  // namespace detail

// One cascade per grid tolerance. The survivor values are non-decreasing in p
// (guaranteed by cascade monotonicity, not re-checked here).
inline std::vector<CurvePoint> survivor_curve(const EconNetwork& net, int seed,
                                              const SolverConfig& config) {
    config.check();
    const std::vector<double>& grid = config.grid.empty() ? SolverConfig::default_grid()
                                                          : config.grid;
    if (grid.empty()) throw contract_error("survivor_curve: empty grid");
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1]))
            throw contract_error("survivor_curve: grid must be sorted ascending");

    std::vector<CurvePoint> curve;
    curve.reserve(grid.size());
    for (double p : grid) {
        CascadeConfig cc = config.cascade;
        cc.p = p;
        std::array<int, 1> seeds{seed};
        CascadeResult r = run_cascade(net, seeds, cc);
        curve.push_back({p, survivor_metric(net, r, cc.metric), r.steps});
    }
    return curve;
}

struct PcResult {
    double pc = 0.0;
    bool saturated = false;  // no tolerance keeps the survivor share above threshold
};

// Critical tolerance: the infimum p at which the post-cascade survivor share
// exceeds the threshold, located by bisection on [0, 1]. Monotonicity of the
// survivor share in p makes the bracket [lo, hi] an invariant: survivors(lo)
// stays at or below the threshold, survivors(hi) above. At most
// 2 + ceil(log2(1/epsilon)) cascades per call (16 at the default epsilon).
inline PcResult find_pc(const EconNetwork& net, int seed, const SolverConfig& config) {
    config.check();
    if (detail::survivors_at(net, seed, config, 0.0) > config.survivor_threshold)
        return {0.0, false};
    if (detail::survivors_at(net, seed, config, 1.0) <= config.survivor_threshold)
        return {1.0, true};

    double lo = 0.0, hi = 1.0;
    while (hi - lo > config.epsilon) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (detail::survivors_at(net, seed, config, mid) > config.survivor_threshold)
            hi = mid;
        else
            lo = mid;
    }
    return {hi, false};
}

struct PcEntry {
    int year = 0;
    std::string region;
    std::string industry;
    double pc = 0.0;
    bool saturated = false;
};

// The central analytic product: critical tolerances indexed by
// (year, region, industry), stored densely with NaN for absent entries, plus
// the configuration fingerprint the values were computed under.
struct PcTable {
    std::vector<int> years;
    std::vector<std::string> regions;
    std::vector<std::string> industries;
    std::vector<double> pc;          // [year][region][industry]
    std::vector<std::uint8_t> saturated;

    double survivor_threshold = 0.30;
    double epsilon = 1e-4;
    SurvivorMetric metric = SurvivorMetric::survivor_fraction;
    bool exclude_domestic = true;
    bool strict = true;
    RevenueBase revenue_base = RevenueBase::total_output;

    bool partial = false;
    std::vector<int> missing_years;

    int year_index(int year) const {
        for (std::size_t i = 0; i < years.size(); ++i)
            if (years[i] == year) return static_cast<int>(i);
        return -1;
    }
    int region_index(std::string_view code) const {
        for (std::size_t i = 0; i < regions.size(); ++i)
            if (regions[i] == code) return static_cast<int>(i);
        return -1;
    }
    int industry_index(std::string_view code) const {
        for (std::size_t i = 0; i < industries.size(); ++i)
            if (industries[i] == code) return static_cast<int>(i);
        return -1;
    }

    std::size_t slot(int year_idx, int region_idx, int industry_idx) const {
        return (static_cast<std::size_t>(year_idx) * regions.size() + region_idx) *
                   industries.size() +
               industry_idx;
    }
    double at(int year_idx, int region_idx, int industry_idx) const {
        return pc[slot(year_idx, region_idx, industry_idx)];
    }
    bool has(int year_idx, int region_idx, int industry_idx) const {
        return !std::isnan(at(year_idx, region_idx, industry_idx));
    }

    std::vector<PcEntry> entries() const {
        std::vector<PcEntry> out;
        for (std::size_t y = 0; y < years.size(); ++y)
            for (std::size_t r = 0; r < regions.size(); ++r)
                for (std::size_t i = 0; i < industries.size(); ++i) {
                    std::size_t s = slot(static_cast<int>(y), static_cast<int>(r),
                                         static_cast<int>(i));
                    if (std::isnan(pc[s])) continue;
                    out.push_back({years[y], regions[r], industries[i], pc[s],
                                   saturated[s] != 0});
                }
        return out;
    }
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

// Work-pool width: explicit request, then the ECONET_THREADS environment
// variable, then hardware concurrency.
inline unsigned resolve_threads(unsigned requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("ECONET_THREADS")) {
        int v = 0;
        if (parse_int(env, v) && v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Critical tolerance of every node in every network. Evaluations are
// independent and run on a work pool; each result lands in a preassigned slot
// so the merge is deterministic regardless of scheduling. `progress` (when
// set) is invoked from worker threads. Requested years with no network are
// recorded and mark the table partial.
inline PcTable build_pc_table(const std::map<int, EconNetwork>& networks,
                              const SolverConfig& config, unsigned threads = 0,
                              const ProgressFn& progress = {},
                              const std::vector<int>& requested_years = {}) {
    config.check();
    if (networks.empty()) throw input_error("build_pc_table: no networks supplied");

    const EconNetwork& first = networks.begin()->second;
    for (const auto& [year, net] : networks)
        if (net.regions() != first.regions() || net.industries() != first.industries())
            throw input_error("build_pc_table: networks do not share node indexing");

    PcTable table;
    table.regions = first.regions();
    table.industries = first.industries();
    table.survivor_threshold = config.survivor_threshold;
    table.epsilon = config.epsilon;
    table.metric = config.cascade.metric;
    table.exclude_domestic = config.cascade.exclude_domestic;
    table.strict = config.cascade.strict;
    table.revenue_base = first.revenue_base();

    for (int y : requested_years)
        if (!networks.count(y)) table.missing_years.push_back(y);
    table.partial = !table.missing_years.empty();

    std::vector<const EconNetwork*> nets;
    for (const auto& [year, net] : networks) {
        table.years.push_back(year);
        nets.push_back(&net);
    }

    const int nodes = first.node_count();
    const std::size_t total = table.years.size() * static_cast<std::size_t>(nodes);
    table.pc.assign(total, std::numeric_limits<double>::quiet_NaN());
    table.saturated.assign(total, 0);

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    auto worker = [&]() {
        for (std::size_t task = next.fetch_add(1); task < total; task = next.fetch_add(1)) {
            const std::size_t year_idx = task / nodes;
            const int node = static_cast<int>(task % nodes);
            PcResult r = find_pc(*nets[year_idx], node, config);
            table.pc[task] = r.pc;
            table.saturated[task] = r.saturated ? 1 : 0;
            std::size_t d = done.fetch_add(1) + 1;
            if (progress && (d % 64 == 0 || d == total)) progress(d, total);
        }
    };

    unsigned width = std::min<std::size_t>(resolve_threads(threads), total);
    if (width <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(width);
        for (unsigned t = 0; t < width; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return table;
}

inline void write_pc_csv(std::ostream& os, const PcTable& table) {
    os << "year,region,industry,pc,saturated\n";
    for (const PcEntry& e : table.entries())
        os << e.year << ',' << e.region << ',' << e.industry << ',' << format_sig(e.pc) << ','
           << (e.saturated ? 1 : 0) << '\n';
}

// Reads a pc CSV back into a dense table. Axis orders follow first
// appearance, which for files written by write_pc_csv reproduces the original
// region and industry order.
inline PcTable read_pc_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw parse_error("empty pc table", 1);
    std::string_view header = trim(line);
    if (header != "year,region,industry,pc,saturated")
        throw parse_error("bad pc table header", 1);

    struct Row {
        int year;
        std::string region, industry;
        double pc;
        bool saturated;
    };
    std::vector<Row> rows;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty()) continue;
        auto fields = split(sv, ',');
        if (fields.size() != 5) throw parse_error("expected 5 columns", line_no);
        Row row;
        int sat = 0;
        if (!parse_int(fields[0], row.year) || !parse_double(fields[3], row.pc) ||
            !parse_int(fields[4], sat))
            throw parse_error("bad pc row", line_no);
        row.region = trim(fields[1]);
        row.industry = trim(fields[2]);
        row.saturated = sat != 0;
        rows.push_back(std::move(row));
    }

    PcTable table;
    for (const Row& r : rows) {
        if (table.year_index(r.year) < 0) table.years.push_back(r.year);
        if (table.region_index(r.region) < 0) table.regions.push_back(r.region);
        if (table.industry_index(r.industry) < 0) table.industries.push_back(r.industry);
    }
    table.pc.assign(table.years.size() * table.regions.size() * table.industries.size(),
                    std::numeric_limits<double>::quiet_NaN());
    table.saturated.assign(table.pc.size(), 0);
    for (const Row& r : rows) {
        std::size_t s = table.slot(table.year_index(r.year), table.region_index(r.region),
                                   table.industry_index(r.industry));
        table.pc[s] = r.pc;
        table.saturated[s] = r.saturated ? 1 : 0;
    }
    return table;
}

// Config fingerprint sidecar, written next to every serialized pc table.
inline nlohmann::json pc_sidecar_json(const PcTable& table, const std::string& fingerprint = {}) {
    nlohmann::json j;
    if (!fingerprint.empty()) j["fingerprint"] = fingerprint;
    j["survivor_threshold"] = table.survivor_threshold;
    j["epsilon"] = table.epsilon;
    j["metric"] = std::string(to_string(table.metric));
    j["exclude_domestic"] = table.exclude_domestic;
    j["strict"] = table.strict;
    j["revenue_base"] = std::string(to_string(table.revenue_base));
    j["years"] = table.years;
    if (table.partial) j["missing_years"] = table.missing_years;
    return j;
}

}  // namespace econet
