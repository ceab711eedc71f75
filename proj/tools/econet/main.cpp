// econet — stress-testing toolkit for world input-output networks.
//
// Subcommands: ingest, cascade, pc, rank, kendall, outputs. Exit codes:
// 0 success, 1 usage, 2 data/schema, 3 internal.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <econet/econet.hpp>

namespace {

using nlohmann::json;

// Flag misuse discovered after CLI11 parsing (bad seed code, missing year...).
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw econet::io_error("cannot open: " + path);
    return in;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw econet::io_error("cannot open for writing: " + path);
    os << content;
    if (!os) throw econet::io_error("write failed: " + path);
}

// Reports go to the --out path when given, stdout otherwise.
void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        write_file(out_path, content);
}

// Optional JSON config file; its values override the corresponding flags.
// Each command consumes the keys it understands via the take() helpers.
struct ConfigFile {
    json data = json::object();

    static ConfigFile load(const std::string& path) {
        ConfigFile cfg;
        if (path.empty()) return cfg;
        std::ifstream in = open_input(path);
        try {
            cfg.data = json::parse(in);
        } catch (const json::exception& e) {
            throw econet::parse_error(std::string("config: ") + e.what(), 0);
        }
        if (!cfg.data.is_object()) throw econet::schema_error("config: expected a JSON object");
        return cfg;
    }

    template <typename T>
    void take(const char* key, T& slot) const {
        if (!data.contains(key)) return;
        try {
            slot = data.at(key).get<T>();
        } catch (const json::exception&) {
            throw econet::schema_error(std::string("config: bad value for \"") + key + '"');
        }
    }
};

econet::RevenueBase parse_revenue_base(const std::string& s) {
    if (s == "total") return econet::RevenueBase::total_output;
    if (s == "intermediate") return econet::RevenueBase::intermediate_only;
    throw usage_error("--revenue-base must be 'total' or 'intermediate'");
}

econet::SurvivorMetric parse_metric(const std::string& s) {
    if (s == "fraction") return econet::SurvivorMetric::survivor_fraction;
    if (s == "component") return econet::SurvivorMetric::largest_component;
    throw usage_error("--metric must be 'fraction' or 'component'");
}

std::string code_listing(const econet::EconNetwork& net) {
    std::string msg = "valid regions:";
    for (const auto& r : net.regions()) msg += ' ' + r;
    msg += "; valid industries:";
    for (const auto& i : net.industries()) msg += ' ' + i;
    return msg;
}

int resolve_seed(const econet::EconNetwork& net, const std::string& code) {
    std::optional<int> node = net.parse_node_code(code);
    if (!node) throw usage_error("unknown seed '" + code + "'; " + code_listing(net));
    return *node;
}

// Pick the working year: an explicit --year, or the bundle's only year.
const econet::IOTable& select_year(const econet::TableBundle& bundle,
                                   std::optional<int> year) {
    if (year) {
        auto it = bundle.tables.find(*year);
        if (it == bundle.tables.end()) {
            std::string have;
            for (const auto& [y, t] : bundle.tables) have += ' ' + std::to_string(y);
            throw usage_error("year " + std::to_string(*year) +
                              " not in bundle; have:" + have);
        }
        return it->second;
    }
    if (bundle.tables.size() == 1) return bundle.tables.begin()->second;
    throw usage_error("bundle covers multiple years; pick one with --year");
}

// ---- ingest ---------------------------------------------------------------

int cmd_ingest(const std::string& flows_path, const std::string& scheme_path,
               const std::string& out_path) {
    econet::RegionScheme scheme = econet::RegionScheme::load(scheme_path);
    std::ifstream in = open_input(flows_path);
    econet::TableBundle bundle;
    bundle.tables = econet::ingest_flows(in, scheme);
    if (bundle.tables.empty()) throw econet::input_error("no flow rows in " + flows_path);
    for (const auto& [year, table] : bundle.tables) {
        econet::ValidationReport report = econet::validate_table(table);
        std::cout << report.summary() << '\n';
        bundle.validation.emplace(year, std::move(report));
    }
    econet::save_bundle(out_path, bundle);
    std::cout << "wrote " << out_path << " (" << bundle.tables.size() << " tables, fingerprint "
              << econet::bundle_fingerprint(bundle) << ")\n";
    return 0;
}

// ---- cascade --------------------------------------------------------------

json trace_json(const econet::EconNetwork& net, const econet::CascadeResult& result,
                const std::string& seed_code, double p) {
    json rounds = json::array();
    for (const auto& round : result.rounds) {
        json codes = json::array();
        for (int node : round) codes.push_back(net.node_code(node));
        rounds.push_back(std::move(codes));
    }
    json j;
    j["year"] = net.year();
    j["seed"] = seed_code;
    j["p"] = p;
    j["rounds"] = std::move(rounds);
    j["failed"] = result.failed_count();
    j["steps"] = result.steps;
    j["survivor_fraction"] = result.survivor_fraction;
    return j;
}

int cmd_cascade(const std::string& bundle_path, std::optional<int> year,
                const std::string& seed_code, double p, bool no_domestic_exclusion,
                const std::string& revenue_base, const std::string& trace_path) {
    econet::TableBundle bundle = econet::load_bundle(bundle_path);
    const econet::IOTable& table = select_year(bundle, year);
    econet::EconNetwork net = econet::build_network(table, parse_revenue_base(revenue_base));

    int seed = resolve_seed(net, seed_code);
    if (p < 0.0 || p > 1.0) throw usage_error("--p must lie in [0, 1]");

    econet::CascadeConfig config;
    config.p = p;
    config.exclude_domestic = !no_domestic_exclusion;
    econet::CascadeResult result = econet::run_cascade(net, {seed}, config);

    if (!trace_path.empty())
        write_file(trace_path, trace_json(net, result, seed_code, p).dump(2) + "\n");

    char line[64];
    std::snprintf(line, sizeof line, "failed=%d steps=%d survivors=%.3f\n",
                  result.failed_count(), result.steps, result.survivor_fraction);
    std::cout << line;
    return 0;
}

// ---- pc -------------------------------------------------------------------

std::string pc_csv(const econet::PcTable& table) {
    std::ostringstream os;
    econet::write_pc_csv(os, table);
    return os.str();
}

// Cache key: bundle bytes + every solver/config field that affects values.
std::string pc_fingerprint(const econet::TableBundle& bundle, const econet::SolverConfig& config,
                           const std::string& revenue_base, const std::string& years,
                           const std::string& seed) {
    std::vector<std::uint8_t> bytes = econet::bundle_to_cbor(bundle);
    std::ostringstream tag;
    tag << "thr=" << config.survivor_threshold << ";eps=" << config.epsilon
        << ";metric=" << to_string(config.cascade.metric)
        << ";dom=" << config.cascade.exclude_domestic << ";strict=" << config.cascade.strict
        << ";base=" << revenue_base << ";years=" << years << ";seed=" << seed;
    std::string t = tag.str();
    bytes.insert(bytes.end(), t.begin(), t.end());
    return econet::fnv1a_hex(bytes.data(), bytes.size());
}

int cmd_pc(const std::string& bundle_path, std::vector<int> years, const std::string& seed_code,
           double threshold, double epsilon, const std::string& revenue_base,
           bool no_domestic_exclusion, const std::string& metric, unsigned threads,
           const std::string& cache_dir, const std::string& out_path,
           const std::string& curve_path) {
    econet::TableBundle bundle = econet::load_bundle(bundle_path);

    econet::SolverConfig config;
    config.survivor_threshold = threshold;
    config.epsilon = epsilon;
    config.cascade.exclude_domestic = !no_domestic_exclusion;
    config.cascade.metric = parse_metric(metric);
    config.check();

    econet::RevenueBase base = parse_revenue_base(revenue_base);
    std::map<int, econet::EconNetwork> networks;
    std::vector<int> requested = years;
    if (years.empty())
        for (const auto& [y, t] : bundle.tables) years.push_back(y);
    for (int y : years) {
        auto it = bundle.tables.find(y);
        if (it == bundle.tables.end()) continue;  // recorded as missing below
        networks.emplace(y, econet::build_network(it->second, base));
    }
    if (networks.empty()) throw usage_error("no requested year is present in the bundle");

    if (!curve_path.empty()) {
        if (seed_code.empty()) throw usage_error("--curve needs --seed");
        if (networks.size() != 1) throw usage_error("--curve needs a single --year");
        const econet::EconNetwork& net = networks.begin()->second;
        int seed = resolve_seed(net, seed_code);
        std::ostringstream os;
        os << "p,survivors,steps\n";
        for (const econet::CurvePoint& pt : econet::survivor_curve(net, seed, config))
            os << econet::format_sig(pt.p) << ',' << econet::format_sig(pt.survivor) << ','
               << pt.steps << '\n';
        write_file(curve_path, os.str());
    }

    // Single-seed runs are cheap; skip the table machinery and the cache.
    if (!seed_code.empty()) {
        std::ostringstream os;
        os << "year,region,industry,pc,saturated\n";
        for (const auto& [y, net] : networks) {
            int seed = resolve_seed(net, seed_code);
            econet::PcResult r = econet::find_pc(net, seed, config);
            os << y << ',' << net.regions()[net.region_of(seed)] << ','
               << net.industries()[seed % net.industry_count()] << ','
               << econet::format_sig(r.pc) << ',' << (r.saturated ? 1 : 0) << '\n';
        }
        emit(out_path, os.str());
        return 0;
    }

    std::string fingerprint;
    std::filesystem::path cache_csv, cache_meta;
    if (!cache_dir.empty()) {
        std::string year_tag;
        for (int y : requested.empty() ? years : requested) year_tag += std::to_string(y) + '+';
        fingerprint = pc_fingerprint(bundle, config, revenue_base, year_tag, "all");
        std::filesystem::create_directories(cache_dir);
        cache_csv = std::filesystem::path(cache_dir) / ("pc-" + fingerprint + ".csv");
        cache_meta = std::filesystem::path(cache_dir) / ("pc-" + fingerprint + ".json");
        if (std::filesystem::exists(cache_csv)) {
            try {
                std::ifstream in = open_input(cache_csv.string());
                std::ostringstream buf;
                buf << in.rdbuf();
                std::istringstream check(buf.str());
                econet::read_pc_csv(check);  // corruption check
                std::cerr << "pc: cache hit " << cache_csv.string() << '\n';
                emit(out_path, buf.str());
                return 0;
            } catch (const econet::error& e) {
                std::cerr << "pc: cache entry unreadable (" << e.what() << "), rebuilding\n";
            }
        }
    }

    const std::size_t total_tasks =
        networks.size() * static_cast<std::size_t>(networks.begin()->second.node_count());
    econet::ProgressFn progress;
    if (total_tasks >= 500)
        progress = [total_tasks](std::size_t done, std::size_t total) {
            std::fprintf(stderr, "pc: %zu/%zu\r", done, total);
            if (done == total) std::fputc('\n', stderr);
        };

    econet::PcTable table =
        econet::build_pc_table(networks, config, threads, progress, requested);
    if (table.partial) {
        std::cerr << "pc: warning: missing years:";
        for (int y : table.missing_years) std::cerr << ' ' << y;
        std::cerr << '\n';
    }

    std::string csv = pc_csv(table);
    if (!cache_dir.empty()) {
        write_file(cache_csv.string(), csv);
        write_file(cache_meta.string(),
                   econet::pc_sidecar_json(table, fingerprint).dump(2) + "\n");
    }
    emit(out_path, csv);
    return 0;
}

// ---- rank -----------------------------------------------------------------

econet::PcTable load_pc_table(const std::string& path) {
    std::ifstream in = open_input(path);
    return econet::read_pc_csv(in);
}

int cmd_rank(const std::string& table_path, const std::string& mode, int top_m,
             const std::string& svg_path, const std::string& out_path) {
    econet::PcTable table = load_pc_table(table_path);
    if (top_m <= 0) throw usage_error("--top-m must be positive");

    std::ostringstream os;
    if (mode == "country") {
        os << "country,year,rule,importance\n";
        auto emit_rows = [&](int year, const econet::SelectionRule& rule) {
            for (const auto& row : econet::country_importance(table, year, rule))
                os << row.region << ',' << row.year << ',' << row.rule.name() << ','
                   << econet::format_sig(row.importance) << '\n';
        };
        for (int year : table.years) {
            emit_rows(year, econet::SelectionRule::all());
            emit_rows(year, econet::SelectionRule::top(top_m));
        }

        if (!svg_path.empty()) {
            econet::Heatmap map;
            map.title = "Country importance (top" + std::to_string(top_m) + ")";
            map.row_labels = table.regions;
            for (int y : table.years) map.col_labels.push_back(std::to_string(y));
            map.values = econet::Matrix(table.regions.size(), table.years.size(),
                                        std::numeric_limits<double>::quiet_NaN());
            for (std::size_t y = 0; y < table.years.size(); ++y)
                for (const auto& row :
                     econet::country_importance(table, table.years[y],
                                                econet::SelectionRule::top(top_m)))
                    map.values(table.region_index(row.region), y) = row.importance;
            write_file(svg_path, econet::render_heatmap_svg(map));
        }
    } else if (mode == "industry") {
        os << "country,industry,importance\n";
        for (const auto& region : table.regions)
            for (const auto& row : econet::industry_importance(table, region))
                os << row.region << ',' << row.industry << ','
                   << econet::format_sig(row.importance) << '\n';

        if (!svg_path.empty()) {
            econet::Heatmap map;
            map.title = "Industry importance";
            map.row_labels = table.industries;
            map.col_labels = table.regions;
            map.values = econet::Matrix(table.industries.size(), table.regions.size(),
                                        std::numeric_limits<double>::quiet_NaN());
            for (std::size_t r = 0; r < table.regions.size(); ++r)
                for (const auto& row : econet::industry_importance(table, table.regions[r]))
                    map.values(table.industry_index(row.industry), r) = row.importance;
            write_file(svg_path, econet::render_heatmap_svg(map));
        }
    } else {
        throw usage_error("mode must be 'country' or 'industry'");
    }

    emit(out_path, os.str());
    return 0;
}

// ---- kendall --------------------------------------------------------------

int cmd_kendall(const std::string& table_path, const std::string& country, bool tau_b,
                const std::string& svg_path, const std::string& out_path) {
    econet::PcTable table = load_pc_table(table_path);
    if (table.years.size() < 2)
        throw usage_error("kendall needs a table covering at least two years");
    if (table.region_index(country) < 0) {
        std::string msg = "unknown country '" + country + "'; valid:";
        for (const auto& r : table.regions) msg += ' ' + r;
        throw usage_error(msg);
    }

    econet::KendallMatrix m = econet::kendall_matrix(
        table, country, tau_b ? econet::TauVariant::tau_b : econet::TauVariant::tau_a);

    std::ostringstream os;
    econet::write_kendall_csv(os, m);
    emit(out_path, os.str());

    if (!svg_path.empty()) {
        econet::Heatmap map;
        map.title = "Rank stability: " + country;
        for (int y : m.years) {
            map.row_labels.push_back(std::to_string(y));
            map.col_labels.push_back(std::to_string(y));
        }
        map.values = m.tau;
        write_file(svg_path, econet::render_heatmap_svg(map));
    }
    return 0;
}

// ---- outputs --------------------------------------------------------------

int cmd_outputs(const std::string& bundle_path, const std::string& value_added_path,
                const std::string& out_path) {
    econet::TableBundle bundle = econet::load_bundle(bundle_path);
    std::map<std::pair<std::string, int>, double> value_added;
    const std::map<std::pair<std::string, int>, double>* va = nullptr;
    if (!value_added_path.empty()) {
        std::ifstream in = open_input(value_added_path);
        value_added = econet::read_value_added_csv(in);
        va = &value_added;
    }
    std::ostringstream os;
    econet::write_outputs_csv(os, econet::country_output_series(bundle.tables, va));
    emit(out_path, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"econet — stress testing for world input-output networks"};
    app.require_subcommand(1);

    // ingest
    std::string in_flows, in_scheme, in_out;
    auto* ingest = app.add_subcommand("ingest", "Build per-year IO tables from a flows CSV");
    ingest->add_option("flows", in_flows, "flows CSV path")->required();
    ingest->add_option("scheme", in_scheme, "region scheme JSON")->required();
    ingest->add_option("-o,--out", in_out, "bundle output path")->required();

    // cascade
    std::string ca_bundle, ca_seed, ca_trace, ca_base = "total", ca_config;
    std::optional<int> ca_year;
    double ca_p = 0.0;
    bool ca_no_dom = false;
    auto* cascade = app.add_subcommand("cascade", "Run one cascading-failure simulation");
    cascade->add_option("bundle", ca_bundle, "table bundle path")->required();
    cascade->add_option("--year", ca_year, "table year (optional for single-year bundles)");
    cascade->add_option("--seed", ca_seed, "seed node REGION.industry")->required();
    cascade->add_option("--p", ca_p, "tolerance fraction in [0,1]")->required();
    cascade->add_flag("--no-domestic-exclusion", ca_no_dom,
                      "let failures hit same-region buyers too");
    cascade->add_option("--revenue-base", ca_base, "revenue base: total|intermediate");
    cascade->add_option("--trace", ca_trace, "write per-round trace JSON here");
    cascade->add_option("--config", ca_config, "JSON config file overriding flags");

    // pc
    std::string pc_bundle, pc_seed, pc_base = "total", pc_metric = "fraction";
    std::string pc_cache, pc_out, pc_curve, pc_config;
    std::vector<int> pc_years;
    double pc_threshold = 0.30, pc_epsilon = 1e-4;
    unsigned pc_threads = 0;
    bool pc_no_dom = false, pc_all_years = false, pc_all_seeds = false;
    auto* pc = app.add_subcommand("pc", "Compute critical tolerances");
    pc->add_option("bundle", pc_bundle, "table bundle path")->required();
    pc->add_option("--year", pc_years, "year(s) to solve (default: all)");
    pc->add_flag("--all-years", pc_all_years, "solve every year in the bundle (default)");
    pc->add_option("--seed", pc_seed, "single seed REGION.industry");
    pc->add_flag("--all-seeds", pc_all_seeds, "solve every node (default)");
    pc->add_option("--threshold", pc_threshold, "survivor threshold in (0,1)");
    pc->add_option("--epsilon", pc_epsilon, "bisection resolution");
    pc->add_option("--revenue-base", pc_base, "revenue base: total|intermediate");
    pc->add_flag("--no-domestic-exclusion", pc_no_dom,
                 "let failures hit same-region buyers too");
    pc->add_option("--metric", pc_metric, "survivor metric: fraction|component");
    pc->add_option("--threads", pc_threads, "work-pool width (or ECONET_THREADS)");
    pc->add_option("--cache-dir", pc_cache, "cache directory for solved tables");
    pc->add_option("-o,--out", pc_out, "CSV output path (default stdout)");
    pc->add_option("--curve", pc_curve, "also write the survivor curve CSV here");
    pc->add_option("--config", pc_config, "JSON config file overriding flags");

    // rank
    std::string rk_table, rk_mode, rk_svg, rk_out, rk_config;
    int rk_top = 4;
    auto* rank = app.add_subcommand("rank", "Country/industry importance rankings");
    rank->add_option("pc-table", rk_table, "pc table CSV path")->required();
    rank->add_option("mode", rk_mode, "country|industry")->required();
    rank->add_option("--top-m", rk_top, "k for the top-k selection rule");
    rank->add_option("--svg", rk_svg, "write a heatmap SVG here");
    rank->add_option("-o,--out", rk_out, "CSV output path (default stdout)");
    rank->add_option("--config", rk_config, "JSON config file overriding flags");

    // kendall
    std::string kd_table, kd_country, kd_svg, kd_out, kd_config;
    bool kd_tau_b = false;
    auto* kendall = app.add_subcommand("kendall", "Year-pair rank correlation matrix");
    kendall->add_option("pc-table", kd_table, "pc table CSV path")->required();
    kendall->add_option("--country", kd_country, "country code")->required();
    kendall->add_flag("--tau-b", kd_tau_b, "tie-corrected variant");
    kendall->add_option("--svg", kd_svg, "write a heatmap SVG here");
    kendall->add_option("-o,--out", kd_out, "CSV output path (default stdout)");
    kendall->add_option("--config", kd_config, "JSON config file overriding flags");

    // outputs
    std::string ou_bundle, ou_va, ou_out;
    auto* outputs = app.add_subcommand("outputs", "Country cross-border output series");
    outputs->add_option("bundle", ou_bundle, "table bundle path")->required();
    outputs->add_option("--value-added", ou_va, "country,year,value_added CSV to add on top");
    outputs->add_option("-o,--out", ou_out, "CSV output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*ingest) return cmd_ingest(in_flows, in_scheme, in_out);
        if (*cascade) {
            ConfigFile cfg = ConfigFile::load(ca_config);
            cfg.take("p", ca_p);
            cfg.take("revenue_base", ca_base);
            bool exclude = !ca_no_dom;
            cfg.take("exclude_domestic", exclude);
            return cmd_cascade(ca_bundle, ca_year, ca_seed, ca_p, !exclude, ca_base, ca_trace);
        }
        if (*pc) {
            ConfigFile cfg = ConfigFile::load(pc_config);
            cfg.take("threshold", pc_threshold);
            cfg.take("epsilon", pc_epsilon);
            cfg.take("revenue_base", pc_base);
            cfg.take("metric", pc_metric);
            cfg.take("threads", pc_threads);
            bool exclude = !pc_no_dom;
            cfg.take("exclude_domestic", exclude);
            if (pc_all_years) pc_years.clear();
            if (pc_all_seeds) pc_seed.clear();
            return cmd_pc(pc_bundle, pc_years, pc_seed, pc_threshold, pc_epsilon, pc_base,
                          !exclude, pc_metric, pc_threads, pc_cache, pc_out, pc_curve);
        }
        if (*rank) {
            ConfigFile cfg = ConfigFile::load(rk_config);
            cfg.take("top_m", rk_top);
            return cmd_rank(rk_table, rk_mode, rk_top, rk_svg, rk_out);
        }
        if (*kendall) {
            ConfigFile cfg = ConfigFile::load(kd_config);
            cfg.take("tau_b", kd_tau_b);
            return cmd_kendall(kd_table, kd_country, kd_tau_b, kd_svg, kd_out);
        }
        if (*outputs) return cmd_outputs(ou_bundle, ou_va, ou_out);
        return 1;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const econet::contract_error& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    } catch (const econet::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}
