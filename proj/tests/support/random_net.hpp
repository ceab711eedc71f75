#pragma once

// Random small-world instances for property tests. RandomSpec weights are
// integers so loss sums are exact in floating point and the optimized engine
// must agree with the oracle bit-for-bit.

#include <cmath>
#include <random>
#include <string>

#include <econet/io_table.hpp>
#include <econet/network.hpp>

namespace testsupport {

struct RandomSpec {
    int min_regions = 2, max_regions = 6;
    int min_industries = 2, max_industries = 8;
    double density = 0.35;   // probability a given sales cell is nonzero
    int max_weight = 9;      // uniform integer weights 1..max_weight
    int max_final_use = 20;  // uniform integer final use 0..max_final_use
};

inline econet::IOTable random_table(std::mt19937& rng, const RandomSpec& spec = {}) {
    std::uniform_int_distribution<int> rcount(spec.min_regions, spec.max_regions);
    std::uniform_int_distribution<int> icount(spec.min_industries, spec.max_industries);
    const int nr = rcount(rng), ni = icount(rng);

    econet::IOTable t;
    t.year = 2000;
    for (int r = 0; r < nr; ++r) t.regions.push_back("R" + std::to_string(r));
    for (int i = 0; i < ni; ++i) t.industries.push_back("i" + std::to_string(i + 1));

    const int n = nr * ni;
    t.sales = econet::Matrix(n, n);
    std::bernoulli_distribution has_edge(spec.density);
    std::uniform_int_distribution<int> weight(1, spec.max_weight);
    for (int s = 0; s < n; ++s)
        for (int b = 0; b < n; ++b)
            if (s != b && has_edge(rng)) t.sales(s, b) = double(weight(rng));

    std::uniform_int_distribution<int> fin(0, spec.max_final_use);
    t.final_use.resize(n);
    for (int i = 0; i < n; ++i) t.final_use[i] = double(fin(rng));
    return t;
}

inline econet::EconNetwork random_network(std::mt19937& rng, const RandomSpec& spec = {}) {
    return econet::build_network(random_table(rng, spec));
}

// Dense instances with log-uniform weights spanning several decades, echoing
// the heavy spread of real trade links. The heterogeneity staggers the loss
// fractions, so near-critical cascades creep through long marginal chains
// instead of collapsing in one synchronized flood.
struct HeterogeneousSpec {
    int min_regions = 12, max_regions = 15;
    int min_industries = 15, max_industries = 25;
    double weight_exp_lo = -1.0, weight_exp_hi = 2.0;  // weight = 10^U(lo,hi)
    double final_exp_lo = 0.0, final_exp_hi = 3.0;     // final use likewise
};

inline econet::IOTable heterogeneous_table(std::mt19937& rng,
                                           const HeterogeneousSpec& spec = {}) {
    std::uniform_int_distribution<int> rcount(spec.min_regions, spec.max_regions);
    std::uniform_int_distribution<int> icount(spec.min_industries, spec.max_industries);
    const int nr = rcount(rng), ni = icount(rng);

    econet::IOTable t;
    t.year = 2000;
    for (int r = 0; r < nr; ++r) t.regions.push_back("R" + std::to_string(r));
    for (int i = 0; i < ni; ++i) t.industries.push_back("i" + std::to_string(i + 1));

    const int n = nr * ni;
    t.sales = econet::Matrix(n, n);
    std::uniform_real_distribution<double> wexp(spec.weight_exp_lo, spec.weight_exp_hi);
    for (int s = 0; s < n; ++s)
        for (int b = 0; b < n; ++b)
            if (s != b) t.sales(s, b) = std::pow(10.0, wexp(rng));

    std::uniform_real_distribution<double> fexp(spec.final_exp_lo, spec.final_exp_hi);
    t.final_use.resize(n);
    for (int i = 0; i < n; ++i) t.final_use[i] = std::pow(10.0, fexp(rng));
    return t;
}

inline econet::EconNetwork heterogeneous_network(std::mt19937& rng,
                                                 const HeterogeneousSpec& spec = {}) {
    return econet::build_network(heterogeneous_table(rng, spec));
}

}  // namespace testsupport
