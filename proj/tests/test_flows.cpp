#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include <econet/flows.hpp>

#include "support/toy.hpp"

using namespace econet;

static std::vector<RawFlowRecord> parse(const std::string& text) {
    std::istringstream in(text);
    RegionScheme s = toy::scheme();
    return parse_flows(in, s);
}

TEST_CASE("flows reader parses the toy file") {
    auto records = parse(toy::flows_csv());
    REQUIRE(records.size() == 7);
    CHECK(records[0].year == 2000);
    CHECK(records[0].supplier_region == "Y");
    CHECK(records[0].supplier_industry == "1");
    CHECK(records[0].buyer_region == "X");
    CHECK(records[0].buyer_kind == BuyerKind::industry);
    CHECK(records[0].buyer_industry == "1");
    CHECK(records[0].value == 50.0);

    CHECK(records[3].buyer_kind == BuyerKind::final_use);
    CHECK(records[3].buyer_industry.empty());
}

TEST_CASE("flows reader skips blank lines and tolerates CRLF") {
    std::string text =
        "year,supplier_region,supplier_industry,buyer_region,buyer_kind,buyer_industry,value\r\n"
        "\r\n"
        "2000,X,1,Y,IND,2,5\r\n"
        "\n";
    CHECK(parse(text).size() == 1);
}

TEST_CASE("flows reader rejects a bad header") {
    std::string text = "year,supplier,value\n";
    std::istringstream in(text);
    RegionScheme s = toy::scheme();
    try {
        parse_flows(in, s);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line == 1);
    }
}

TEST_CASE("flows reader reports the offending line number") {
    std::string good = toy::flows_csv();

    SECTION("wrong column count") {
        try {
            parse(good + "2000,X,1,Y,IND,2\n");
            FAIL("expected parse_error");
        } catch (const parse_error& e) {
            CHECK(e.line == 9);
            CHECK(std::string(e.what()).find("line 9") != std::string::npos);
        }
    }
    SECTION("bad year") {
        CHECK_THROWS_AS(parse(good + "banana,X,1,Y,IND,2,5\n"), parse_error);
    }
    SECTION("bad value") {
        CHECK_THROWS_AS(parse(good + "2000,X,1,Y,IND,2,abc\n"), parse_error);
    }
    SECTION("bad kind") {
        CHECK_THROWS_AS(parse(good + "2000,X,1,Y,XXX,2,5\n"), parse_error);
    }
}

TEST_CASE("flows reader enforces the kind/industry pairing") {
    std::string good = toy::flows_csv();
    // IND row missing the buyer industry
    CHECK_THROWS_AS(parse(good + "2000,X,1,Y,IND,,5\n"), schema_error);
    // FIN row carrying one
    CHECK_THROWS_AS(parse(good + "2000,X,1,Y,FIN,2,5\n"), schema_error);
    // unknown industry code
    CHECK_THROWS_AS(parse(good + "2000,X,9,Y,IND,2,5\n"), schema_error);
    CHECK_THROWS_AS(parse(good + "2000,X,1,Y,IND,9,5\n"), schema_error);
}

TEST_CASE("schema errors carry the line number in their message") {
    try {
        parse(toy::flows_csv() + "2000,X,9,Y,IND,2,5\n");
        FAIL("expected schema_error");
    } catch (const schema_error& e) {
        CHECK(std::string(e.what()).find("line 9") != std::string::npos);
    }
}

TEST_CASE("negative values pass the reader untouched") {
    auto records = parse(toy::flows_csv() + "2000,X,1,Y,IND,2,-3.5\n");
    CHECK(records.back().value == -3.5);
}
