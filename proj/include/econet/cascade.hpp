#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "econet/errors.hpp"
#include "econet/network.hpp"

namespace econet {

enum class SurvivorMetric { survivor_fraction, largest_component };

inline std::string_view to_string(SurvivorMetric m) {
    return m == SurvivorMetric::survivor_fraction ? "survivor_fraction" : "largest_component";
}

struct CascadeConfig {
    double p = 0.0;                 // tolerance fraction, in [0, 1]
    bool exclude_domestic = true;   // same-country failures cost no revenue
    SurvivorMetric metric = SurvivorMetric::survivor_fraction;
    bool strict = true;             // fail on loss > p; when off, on loss >= p
};

struct CascadeResult {
    std::vector<bool> failed;              // per node, seeds included
    std::vector<std::vector<int>> rounds;  // newly failed per round; round 1 = seeds
    int steps = 0;                         // rounds with at least one failure
    double survivor_fraction = 0.0;
    std::optional<double> largest_component_fraction;  // filled when the config asks for it

    int failed_count() const {
        return static_cast<int>(std::count(failed.begin(), failed.end(), true));
    }
};

// Fraction of all nodes inside the largest weakly-connected component of the
// surviving subgraph; an edge exists where either direction carries sales.
inline double largest_component_fraction(const EconNetwork& net, const std::vector<bool>& failed) {
    const int n = net.node_count();
    const Matrix& sales = net.sales();
    std::vector<char> seen(n, 0);
    std::vector<int> stack;
    int best = 0;
    for (int start = 0; start < n; ++start) {
        if (failed[start] || seen[start]) continue;
        int size = 0;
        seen[start] = 1;
        stack.push_back(start);
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            ++size;
            for (int j = 0; j < n; ++j) {
                if (failed[j] || seen[j]) continue;
                if (sales(i, j) > 0.0 || sales(j, i) > 0.0) {
                    seen[j] = 1;
                    stack.push_back(j);
                }
            }
        }
        best = std::max(best, size);
    }
    return n == 0 ? 0.0 : double(best) / double(n);
}

// Synchronous cascade: round 1 fails exactly the seeds; every later round
// simultaneously fails each survivor whose cumulative loss fraction against
// the current failed set exceeds the tolerance. Failures discovered in a
// round never influence that same round. The per-node accumulated loss makes
// each round O(new failures x nodes) instead of a full recompute; it must
// agree with loss_fraction() on every comparison.
inline CascadeResult run_cascade(const EconNetwork& net, std::span<const int> seeds,
                                 const CascadeConfig& config) {
    const int n = net.node_count();
    if (seeds.empty()) throw contract_error("cascade: seed set is empty");
    for (int s : seeds)
        if (s < 0 || s >= n) throw contract_error("cascade: seed node out of range");
    if (!(config.p >= 0.0 && config.p <= 1.0))
        throw contract_error("cascade: tolerance p must lie in [0, 1]");

    CascadeResult result;
    result.failed.assign(n, false);

    std::vector<int> first_round;
    for (int s : seeds)
        if (!result.failed[s]) {
            result.failed[s] = true;
            first_round.push_back(s);
        }
    std::sort(first_round.begin(), first_round.end());
    result.rounds.push_back(std::move(first_round));

    const Matrix& sales = net.sales();
    std::vector<double> lost(n, 0.0);  // cumulative revenue lost per surviving node
    std::size_t folded = 0;            // rounds already added into `lost`

    while (true) {
        for (; folded < result.rounds.size(); ++folded) {
            for (int j : result.rounds[folded]) {
                const int buyer_region = net.region_of(j);
                for (int i = 0; i < n; ++i) {
                    if (result.failed[i]) continue;
                    if (config.exclude_domestic && net.region_of(i) == buyer_region) continue;
                    lost[i] += sales(i, j);
                }
            }
        }
        std::vector<int> next;
        for (int i = 0; i < n; ++i) {
            if (result.failed[i]) continue;
            const double revenue = net.revenue(i);
            if (revenue <= 0.0) continue;  // nothing to lose, never fails
            const double fraction = lost[i] / revenue;
            if (config.strict ? fraction > config.p : fraction >= config.p) next.push_back(i);
        }
        if (next.empty()) break;
        for (int i : next) result.failed[i] = true;
        result.rounds.push_back(std::move(next));
    }

    result.steps = static_cast<int>(result.rounds.size());
    result.survivor_fraction = 1.0 - double(result.failed_count()) / double(n);
    if (config.metric == SurvivorMetric::largest_component)
        result.largest_component_fraction = largest_component_fraction(net, result.failed);
    return result;
}

inline CascadeResult run_cascade(const EconNetwork& net, std::initializer_list<int> seeds,
                                 const CascadeConfig& config) {
    return run_cascade(net, std::span<const int>(seeds.begin(), seeds.size()), config);
}

inline double survivor_metric(const EconNetwork& net, const CascadeResult& result,
                              SurvivorMetric metric) {
    if (metric == SurvivorMetric::survivor_fraction) return result.survivor_fraction;
    if (result.largest_component_fraction) return *result.largest_component_fraction;
    return largest_component_fraction(net, result.failed);
}

}  // namespace econet
