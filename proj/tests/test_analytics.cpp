#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include <econet/analytics.hpp>

#include "support/toy.hpp"

using namespace econet;

namespace {

// Hand-filled table: slot layout [year][region][industry].
PcTable make_table(std::vector<int> years, std::vector<std::string> regions,
                   std::vector<std::string> industries, std::vector<double> pc) {
    PcTable t;
    t.years = std::move(years);
    t.regions = std::move(regions);
    t.industries = std::move(industries);
    t.pc = std::move(pc);
    t.saturated.assign(t.pc.size(), 0);
    return t;
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

TEST_CASE("selection rules") {
    CHECK(SelectionRule::all().is_all());
    CHECK(SelectionRule::all().name() == "all");
    CHECK(SelectionRule::top(4).name() == "top4");
    CHECK_FALSE(SelectionRule::top(1).is_all());
    CHECK_THROWS_AS(SelectionRule::top(0), contract_error);
    CHECK_THROWS_AS(SelectionRule::top(-2), contract_error);
}

TEST_CASE("country importance means and top-k selection") {
    PcTable t = make_table({2000}, {"A", "B"}, {"i1", "i2", "i3"},
                           {0.3, 0.1, 0.2,    // A
                            0.6, 0.0, 0.0});  // B

    auto all = country_importance(t, 2000, SelectionRule::all());
    REQUIRE(all.size() == 2);
    // Equal means: stable sort keeps region order A before B.
    CHECK(all[0].region == "A");
    CHECK_THAT(all[0].importance, Catch::Matchers::WithinULP(0.2, 4));
    CHECK_THAT(all[1].importance, Catch::Matchers::WithinULP(0.2, 4));

    auto top1 = country_importance(t, 2000, SelectionRule::top(1));
    CHECK(top1[0].region == "B");
    CHECK(top1[0].importance == 0.6);
    CHECK(top1[1].importance == 0.3);

    auto top2 = country_importance(t, 2000, SelectionRule::top(2));
    CHECK(top2[0].region == "B");
    CHECK(top2[0].importance == 0.3);   // (0.6 + 0.0) / 2
    CHECK(top2[1].importance == 0.25);  // (0.3 + 0.2) / 2

    // k beyond the industry count degenerates to the plain mean.
    auto top9 = country_importance(t, 2000, SelectionRule::top(9));
    CHECK_THAT(top9[0].importance, Catch::Matchers::WithinULP(0.2, 4));
}

TEST_CASE("country importance is exact on rational inputs") {
    PcTable t = make_table({2000}, {"A"}, {"i1", "i2", "i3"}, {0.0, 0.5, 0.5});
    auto rows = country_importance(t, 2000, SelectionRule::all());
    CHECK(rows[0].importance == 1.0 / 3.0);
}

TEST_CASE("country importance skips missing entries") {
    PcTable t = make_table({2000}, {"A", "B"}, {"i1", "i2"}, {0.4, kNan, kNan, kNan});
    auto rows = country_importance(t, 2000, SelectionRule::all());
    REQUIRE(rows.size() == 1);  // B has no data at all
    CHECK(rows[0].region == "A");
    CHECK(rows[0].importance == 0.4);

    CHECK_THROWS_AS(country_importance(t, 1999, SelectionRule::all()), lookup_error);
}

TEST_CASE("industry importance averages over years") {
    PcTable t = make_table({2000, 2001}, {"A"}, {"i1", "i2"},
                           {0.2, 0.6,     // 2000
                            0.4, kNan});  // 2001
    auto rows = industry_importance(t, "A");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].industry == "i2");  // only 2000 observed
    CHECK(rows[0].importance == 0.6);
    CHECK(rows[0].years_present == 1);
    CHECK(rows[1].industry == "i1");
    CHECK_THAT(rows[1].importance, Catch::Matchers::WithinULP(0.3, 4));
    CHECK(rows[1].years_present == 2);

    CHECK_THROWS_AS(industry_importance(t, "Z"), lookup_error);
}

TEST_CASE("top industries rank by cross-country mean") {
    PcTable t = make_table({2000}, {"A", "B"}, {"i1", "i2", "i3"},
                           {0.1, 0.9, 0.2,
                            0.3, 0.7, 0.2});
    auto rows = top_industries(t, 2);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].industry == "i2");
    CHECK(rows[0].importance == 0.8);
    CHECK(rows[1].industry == "i1");
    CHECK_THAT(rows[1].importance, Catch::Matchers::WithinULP(0.2, 4));

    CHECK(top_industries(t, 0).size() == 3);
}

TEST_CASE("kendall tau on monotone relations") {
    std::vector<double> x = {3, 1, 4, 1.5, 5, 9, 2.6};
    std::vector<double> neg(x.size());
    std::transform(x.begin(), x.end(), neg.begin(), std::negate<>());
    CHECK(kendall_tau(x, x) == 1.0);
    CHECK(kendall_tau(x, neg) == -1.0);

    CHECK(kendall_tau({1, 2, 3}, {1, 3, 2}) == 1.0 / 3.0);
}

TEST_CASE("kendall tau counts ties in neither direction") {
    KendallStats s = kendall_stats({1, 1, 2}, {1, 2, 3});
    CHECK(s.concordant == 2);
    CHECK(s.discordant == 0);
    CHECK(s.tied_x == 1);
    CHECK(s.tied_y == 0);
    CHECK(s.tied_both == 0);
    CHECK(s.tau_a() == 2.0 / 3.0);
    CHECK_THAT(s.tau_b(), Catch::Matchers::WithinAbs(2.0 / std::sqrt(6.0), 1e-12));

    KendallStats both = kendall_stats({1, 1}, {2, 2});
    CHECK(both.tied_both == 1);
    CHECK(both.tau_a() == 0.0);
    CHECK(std::isnan(both.tau_b()));
}

TEST_CASE("kendall tau input contracts") {
    CHECK_THROWS_AS(kendall_tau({1, 2}, {1}), contract_error);
    CHECK_THROWS_AS(kendall_tau({1}, {1}), contract_error);
}

TEST_CASE("kendall matrix across years") {
    // Profiles: 2000 = (0.1, 0.2, 0.3); 2001 identical ordering scaled;
    // 2002 fully reversed.
    PcTable t = make_table({2000, 2001, 2002}, {"A"}, {"i1", "i2", "i3"},
                           {0.1, 0.2, 0.3,
                            0.2, 0.4, 0.6,
                            0.3, 0.2, 0.1});
    KendallMatrix m = kendall_matrix(t, "A");
    CHECK(m.region == "A");
    CHECK(m.years == std::vector<int>{2000, 2001, 2002});
    CHECK(m.at(0, 0) == 1.0);
    CHECK(m.at(0, 1) == 1.0);
    CHECK(m.at(1, 0) == 1.0);
    CHECK(m.at(0, 2) == -1.0);
    CHECK(m.at(1, 2) == -1.0);
}

TEST_CASE("kendall matrix restricts to industries present in every year") {
    PcTable t = make_table({2000, 2001}, {"A"}, {"i1", "i2", "i3"},
                           {0.1, 0.2, 0.3,
                            0.6, 0.4, kNan});
    // i3 is missing in 2001 -> compare (i1, i2) only: 0.1<0.2 but 0.6>0.4.
    KendallMatrix m = kendall_matrix(t, "A");
    CHECK(m.at(0, 1) == -1.0);
}

TEST_CASE("kendall matrix input contracts") {
    PcTable one_year = make_table({2000}, {"A"}, {"i1", "i2"}, {0.1, 0.2});
    CHECK_THROWS_AS(kendall_matrix(one_year, "A"), input_error);

    PcTable t = make_table({2000, 2001}, {"A"}, {"i1", "i2"}, {0.1, 0.2, 0.3, 0.4});
    CHECK_THROWS_AS(kendall_matrix(t, "Z"), lookup_error);

    PcTable sparse = make_table({2000, 2001}, {"A"}, {"i1", "i2"},
                                {0.1, kNan, 0.3, kNan});
    CHECK_THROWS_AS(kendall_matrix(sparse, "A"), input_error);
}

TEST_CASE("country output series sums cross-border sales") {
    std::map<int, IOTable> tables;
    tables.emplace(2000, toy::table());
    auto rows = country_output_series(tables);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].region == "X");
    CHECK(rows[0].output == 30.0);  // X.2 -> Y.1
    CHECK(rows[0].components == "cross_border_sales");
    CHECK(rows[1].region == "Y");
    CHECK(rows[1].output == 60.0);  // Y.1 -> X.1 plus Y.2 -> X.2

    std::map<int, IOTable> empty;
    CHECK_THROWS_AS(country_output_series(empty), input_error);
}

TEST_CASE("value added joins the output series when supplied") {
    std::map<int, IOTable> tables;
    tables.emplace(2000, toy::table());
    std::map<std::pair<std::string, int>, double> va{{{"X", 2000}, 5.0}};
    auto rows = country_output_series(tables, &va);
    CHECK(rows[0].output == 35.0);
    CHECK(rows[0].components == "cross_border_sales+value_added");
    CHECK(rows[1].output == 60.0);
    CHECK(rows[1].components == "cross_border_sales");
}

TEST_CASE("value added CSV parsing") {
    std::istringstream in("country,year,value_added\nX,2000,5\nY,2001,7.5\n");
    auto series = read_value_added_csv(in);
    CHECK(series.at({"X", 2000}) == 5.0);
    CHECK(series.at({"Y", 2001}) == 7.5);

    std::istringstream bad_header("nope\n");
    CHECK_THROWS_AS(read_value_added_csv(bad_header), parse_error);
    std::istringstream bad_row("country,year,value_added\nX,abc,5\n");
    CHECK_THROWS_AS(read_value_added_csv(bad_row), parse_error);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_value_added_csv(empty), parse_error);
}

TEST_CASE("CSV emitters are byte-stable") {
    PcTable t = make_table({2000}, {"A", "B"}, {"i1", "i2"}, {0.25, 0.75, 0.5, 0.125});

    std::ostringstream country;
    write_country_importance_csv(country, country_importance(t, 2000, SelectionRule::all()));
    CHECK(country.str() ==
          "country,year,rule,importance\n"
          "A,2000,all,0.5\n"
          "B,2000,all,0.3125\n");

    std::ostringstream industry;
    write_industry_importance_csv(industry, industry_importance(t, "A"));
    CHECK(industry.str() ==
          "country,industry,importance\n"
          "A,i2,0.75\n"
          "A,i1,0.25\n");

    PcTable years = make_table({2000, 2001}, {"A"}, {"i1", "i2"}, {0.1, 0.2, 0.2, 0.1});
    std::ostringstream kendall;
    write_kendall_csv(kendall, kendall_matrix(years, "A"));
    CHECK(kendall.str() ==
          "country,year_a,year_b,tau\n"
          "A,2000,2001,-1\n");

    std::map<int, IOTable> tables;
    tables.emplace(2000, toy::table());
    std::ostringstream outputs;
    write_outputs_csv(outputs, country_output_series(tables));
    CHECK(outputs.str() ==
          "country,year,output,components\n"
          "X,2000,30,cross_border_sales\n"
          "Y,2000,60,cross_border_sales\n");
}
