#include <algorithm>
#include <random>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include <econet/flows.hpp>
#include <econet/io_table.hpp>

#include "support/toy.hpp"

using namespace econet;

static std::map<int, IOTable> ingest(const std::string& text, const RegionScheme& scheme) {
    std::istringstream in(text);
    return ingest_flows(in, scheme);
}

TEST_CASE("toy flows build the toy table") {
    RegionScheme scheme = toy::scheme();
    auto tables = ingest(toy::flows_csv(), scheme);
    REQUIRE(tables.size() == 1);
    CHECK(tables.at(2000) == toy::table());
}

TEST_CASE("ingest splits records by year") {
    RegionScheme scheme = toy::scheme();
    auto tables = ingest(toy::flows_csv_two_years(), scheme);
    REQUIRE(tables.size() == 2);
    CHECK(tables.at(2000).year == 2000);
    CHECK(tables.at(2001).year == 2001);
    CHECK(tables.at(2001).sales(toy::Y2, toy::X2) == 20.0);
}

TEST_CASE("aggregation folds mapped regions into the aggregate") {
    RegionScheme scheme;
    scheme.kept_regions = {"A"};
    scheme.row_code = "ROW";
    scheme.aggregation_map = {{"B", "ROW"}, {"C", "ROW"}};
    scheme.industry_codes = {"c1"};
    scheme.finalize();

    std::vector<RawFlowRecord> records = {
        {2000, "B", "c1", "A", BuyerKind::industry, "c1", 3.0},
        {2000, "C", "c1", "A", BuyerKind::industry, "c1", 4.0},
        {2000, "A", "c1", "B", BuyerKind::industry, "c1", 5.0},
        {2000, "A", "c1", "C", BuyerKind::industry, "c1", 6.0},
        {2000, "B", "c1", "C", BuyerKind::final_use, "", 7.0},
    };
    IOTable t = build_io_table(records, scheme, 2000);
    REQUIRE(t.regions == std::vector<std::string>{"A", "ROW"});
    CHECK(t.sales(1, 0) == 7.0);      // B + C selling to A
    CHECK(t.sales(0, 1) == 11.0);     // A selling to B + C
    CHECK(t.final_use[1] == 7.0);     // B's final-use sales
}

TEST_CASE("final-use rows accept any buyer region") {
    RegionScheme scheme = toy::scheme();
    std::vector<RawFlowRecord> records = {
        {2000, "X", "1", "ELSEWHERE", BuyerKind::final_use, "", 12.0},
    };
    IOTable t = build_io_table(records, scheme, 2000);
    CHECK(t.final_use[toy::X1] == 12.0);
}

TEST_CASE("unmapped intermediate regions are rejected") {
    RegionScheme scheme = toy::scheme();
    std::vector<RawFlowRecord> bad_supplier = {
        {2000, "Z", "1", "X", BuyerKind::industry, "1", 1.0}};
    CHECK_THROWS_AS(build_io_table(bad_supplier, scheme, 2000), scheme_error);

    std::vector<RawFlowRecord> bad_buyer = {
        {2000, "X", "1", "Z", BuyerKind::industry, "1", 1.0}};
    CHECK_THROWS_AS(build_io_table(bad_buyer, scheme, 2000), scheme_error);
}

TEST_CASE("builder rejects records from another year") {
    RegionScheme scheme = toy::scheme();
    IOTableBuilder builder(scheme, 2000);
    RawFlowRecord rec{2001, "X", "1", "Y", BuyerKind::industry, "1", 1.0};
    CHECK_THROWS_AS(builder.add(rec), input_error);
}

TEST_CASE("duplicate cells accumulate") {
    RegionScheme scheme = toy::scheme();
    std::vector<RawFlowRecord> records = {
        {2000, "X", "1", "Y", BuyerKind::industry, "2", 2.0},
        {2000, "X", "1", "Y", BuyerKind::industry, "2", 3.0},
    };
    IOTable t = build_io_table(records, scheme, 2000);
    CHECK(t.sales(toy::X1, toy::Y2) == 5.0);
}

TEST_CASE("negative entries are clamped after aggregation") {
    RegionScheme scheme;
    scheme.kept_regions = {"A"};
    scheme.row_code = "ROW";
    scheme.aggregation_map = {{"B", "ROW"}, {"C", "ROW"}};
    scheme.industry_codes = {"c1"};
    scheme.finalize();

    // B->A is -2 and C->A is +5: the aggregated cell is +3, so nothing is
    // clamped — aggregation happens first.
    std::vector<RawFlowRecord> records = {
        {2000, "B", "c1", "A", BuyerKind::industry, "c1", -2.0},
        {2000, "C", "c1", "A", BuyerKind::industry, "c1", 5.0},
    };
    IOTable t = build_io_table(records, scheme, 2000);
    CHECK(t.sales(1, 0) == 3.0);
    CHECK(t.clamp_count == 0);

    // A lone negative cell does get zeroed and counted.
    std::vector<RawFlowRecord> negative = {
        {2000, "B", "c1", "A", BuyerKind::industry, "c1", -2.0},
        {2000, "A", "c1", "B", BuyerKind::final_use, "", -4.0},
    };
    IOTable t2 = build_io_table(negative, scheme, 2000);
    CHECK(t2.sales(1, 0) == 0.0);
    CHECK(t2.final_use[0] == 0.0);
    CHECK(t2.clamp_count == 2);
}

TEST_CASE("clamping is idempotent") {
    IOTable t = toy::table();
    t.sales(0, 1) = -7.0;
    long first = clamp_negative(t.sales, t.final_use);
    CHECK(first == 1);
    long second = clamp_negative(t.sales, t.final_use);
    CHECK(second == 0);
    CHECK(t.sales(0, 1) == 0.0);
}

TEST_CASE("value conservation: every non-clamped unit lands in the table") {
    RegionScheme scheme = toy::scheme();
    auto tables = ingest(toy::flows_csv(), scheme);
    const IOTable& t = tables.at(2000);
    double total = t.sales.sum();
    for (double f : t.final_use) total += f;
    CHECK(total == 50 + 30 + 10 + 100 + 30 + 50 + 90);
}

TEST_CASE("record order does not change the table") {
    RegionScheme scheme = toy::scheme();
    std::istringstream in(toy::flows_csv());
    auto records = parse_flows(in, scheme);
    IOTable reference = build_io_table(records, scheme, 2000);

    std::mt19937 rng(7);
    for (int round = 0; round < 20; ++round) {
        std::shuffle(records.begin(), records.end(), rng);
        CHECK(build_io_table(records, scheme, 2000) == reference);
    }
}

TEST_CASE("validation reports zero-revenue nodes and fill") {
    IOTable t = toy::table();
    ValidationReport r = validate_table(t);
    CHECK(r.year == 2000);
    CHECK(r.dimensions_ok);
    CHECK(r.zero_revenue_nodes.empty());
    CHECK(r.nonzero_fraction == 3.0 / 16.0);

    t.final_use[toy::X1] = 0.0;  // X.1 sells nothing at all now
    ValidationReport r2 = validate_table(t);
    REQUIRE(r2.zero_revenue_nodes.size() == 1);
    CHECK(r2.zero_revenue_nodes[0] == "X.1");

    CHECK(r2.summary().find("2000") != std::string::npos);
}

TEST_CASE("validation flags dimension mismatches") {
    IOTable t = toy::table();
    t.final_use.pop_back();
    CHECK_FALSE(validate_table(t).dimensions_ok);
}
