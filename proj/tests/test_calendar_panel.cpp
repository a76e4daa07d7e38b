#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dmem/calendar.hpp"
#include "dmem/csv.hpp"
#include "dmem/panel.hpp"
#include "support/oracles.hpp"

using namespace dmem;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  std::ofstream out(name);
  out << text;
  return name;
}

}  // namespace

TEST_CASE("date parse and format round trip") {
  const Date d = parse_date("2015-03-09");
  CHECK(format_date(d) == "2015-03-09");
  CHECK(static_cast<int>(d.year()) == 2015);
  CHECK(static_cast<unsigned>(d.month()) == 3u);
  CHECK(static_cast<unsigned>(d.day()) == 9u);

  CHECK_THROWS(parse_date("2015-13-01"));
  CHECK_THROWS(parse_date("2015-02-30"));
  CHECK_THROWS(parse_date("not a date"));
  CHECK_THROWS(parse_date("2015/03/09"));
}

TEST_CASE("monthly periods") {
  const PeriodId p = period_of(parse_date("2015-03-09"), PeriodFrequency::month);
  CHECK(p.year == 2015);
  CHECK(p.index == 3);
  CHECK(to_string(p, PeriodFrequency::month) == "2015-03");

  CHECK(next_period({2015, 12}, PeriodFrequency::month) == PeriodId{2016, 1});
  CHECK(prev_period({2016, 1}, PeriodFrequency::month) == PeriodId{2015, 12});
  CHECK(next_period({2015, 6}, PeriodFrequency::month) == PeriodId{2015, 7});

  CHECK(parse_period("2015-03", PeriodFrequency::month) == p);
  CHECK(parse_period("2015-03-09", PeriodFrequency::month) == p);
  CHECK_THROWS(parse_period("2015-13", PeriodFrequency::month));
}

TEST_CASE("iso weeks around year boundaries") {
  // 2016-01-01 is a Friday: its week's Thursday falls in 2015
  const PeriodId w1 = period_of(parse_date("2016-01-01"), PeriodFrequency::week);
  CHECK(w1.year == 2015);
  CHECK(w1.index == 53);
  // 2015-01-01 is a Thursday: week 1 of 2015
  const PeriodId w2 = period_of(parse_date("2015-01-01"), PeriodFrequency::week);
  CHECK(w2.year == 2015);
  CHECK(w2.index == 1);
  // 2021-01-01 is a Friday: still week 53 of 2020
  const PeriodId w3 = period_of(parse_date("2021-01-01"), PeriodFrequency::week);
  CHECK(w3.year == 2020);
  CHECK(w3.index == 53);
  // monday and sunday of one ISO week agree
  CHECK(period_of(parse_date("2015-03-09"), PeriodFrequency::week) ==
        period_of(parse_date("2015-03-15"), PeriodFrequency::week));

  CHECK(to_string(w1, PeriodFrequency::week) == "2015-W53");
  CHECK(parse_period("2015-W53", PeriodFrequency::week) == w1);
  CHECK_THROWS(parse_period("2016-W53", PeriodFrequency::week));  // 2016 has 52 weeks

  CHECK(next_period({2015, 53}, PeriodFrequency::week) == PeriodId{2016, 1});
  CHECK(prev_period({2016, 1}, PeriodFrequency::week) == PeriodId{2015, 53});
  CHECK(next_period({2016, 52}, PeriodFrequency::week) == PeriodId{2017, 1});
}

TEST_CASE("business day generator skips weekends") {
  const auto d = business_days(parse_date("2015-01-05"), 7);  // a Monday
  REQUIRE(d.size() == 7);
  CHECK(format_date(d[0]) == "2015-01-05");
  CHECK(format_date(d[4]) == "2015-01-09");
  CHECK(format_date(d[5]) == "2015-01-12");  // skips Sat/Sun
  CHECK(format_date(d[6]) == "2015-01-13");
  for (const auto& day : d) {
    const std::chrono::weekday wd{std::chrono::sys_days{day}};
    CHECK(wd.iso_encoding() <= 5);
  }
}

TEST_CASE("csv round trip keeps comments and exact doubles") {
  CsvTable t;
  t.comments = {"# alpha", "# beta"};
  t.columns = {"date", "v"};
  t.rows = {{"2015-01-05", format_double(0.1)}, {"2015-01-06", format_double(1.0 / 3.0)}};
  std::ostringstream out;
  write_csv(out, t);
  std::istringstream in(out.str());
  const CsvTable back = read_csv(in);
  CHECK(back.comments == t.comments);
  CHECK(back.columns == t.columns);
  REQUIRE(back.rows.size() == 2);
  CHECK(parse_double(back.rows[1][1]) == 1.0 / 3.0);

  CHECK(parse_double("") != parse_double(""));  // empty field reads as NaN
  CHECK_THROWS(parse_double("12abc"));
  CHECK(t.column_index("missing") == -1);
  CHECK_THROWS(t.require_column("missing"));
}

TEST_CASE("loader converts realized variance to annualized volatility") {
  const std::string path = write_temp(
      "tmp_load_var.csv",
      "date,ret,rv\n"
      "2015-01-05,0.004,164.3524\n"
      "2015-01-06,-0.002,100.0\n");
  CsvSchema schema;
  schema.return_column = "ret";
  schema.rvariance_column = "rv";
  schema.annualization = 1.0;
  const LoadedPanel lp = load_daily_csv(path, schema);
  REQUIRE(lp.series.size() == 2);
  CHECK(lp.series.day(0).rvol == doctest::Approx(12.82).epsilon(1e-12));
  CHECK(lp.series.day(1).rvol == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(lp.stats.rows_total == 2);

  // default annualization folds in sqrt(252)
  CsvSchema ann = schema;
  ann.annualization = 252.0;
  const LoadedPanel lp2 = load_daily_csv(path, ann);
  CHECK(lp2.series.day(1).rvol == doctest::Approx(std::sqrt(252.0 * 100.0)).epsilon(1e-12));
  std::remove(path.c_str());
}

TEST_CASE("loader takes a volatility column verbatim") {
  const std::string path = write_temp("tmp_load_vol.csv",
                                      "date,ret,vol\n"
                                      "2015-01-05,0.004,12.5\n");
  CsvSchema schema;
  schema.rvol_column = "vol";
  const LoadedPanel lp = load_daily_csv(path, schema);
  CHECK(lp.series.day(0).rvol == 12.5);
  std::remove(path.c_str());
}

TEST_CASE("loader drops missing rows, sorts, counts zeros, rejects negatives") {
  const std::string path = write_temp("tmp_load_mixed.csv",
                                      "date,ret,vol\n"
                                      "2015-01-07,0.01,11.0\n"
                                      "2015-01-05,0.02,10.0\n"
                                      "2015-01-06,,9.0\n"
                                      "2015-01-08,-0.01,0.0\n");
  CsvSchema schema;
  schema.rvol_column = "vol";
  const LoadedPanel lp = load_daily_csv(path, schema);
  CHECK(lp.stats.rows_total == 4);
  CHECK(lp.stats.rows_dropped_missing == 1);
  CHECK(lp.stats.zero_rvol_days == 1);
  CHECK(lp.stats.was_unsorted);
  REQUIRE(lp.series.size() == 3);
  CHECK(format_date(lp.series.day(0).date) == "2015-01-05");
  CHECK(format_date(lp.series.day(2).date) == "2015-01-08");
  std::remove(path.c_str());

  const std::string bad = write_temp("tmp_load_neg.csv",
                                     "date,ret,vol\n"
                                     "2015-01-05,0.01,-3.0\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(load_daily_csv(bad, schema)),
                       doctest::Contains("negative realized volatility"), std::runtime_error);
  std::remove(bad.c_str());
}

TEST_CASE("panel indexing within periods") {
  // 23 business days from 2015-01-05 span January and early February
  const std::vector<double> rvol(23, 10.0);
  std::vector<double> ret(23, 0.1);
  ret[3] = -0.2;
  const PanelSeries s = oracle::make_panel(rvol, ret);

  CHECK(s.frequency() == PeriodFrequency::month);
  CHECK(s.period(0) == PeriodId{2015, 1});
  CHECK(s.day_in_period(0) == 1);
  CHECK(s.day_in_period(1) == 2);
  // January 2015 has 20 business days from the 5th (through the 30th)
  CHECK(s.period(19) == PeriodId{2015, 1});
  CHECK(s.period(20) == PeriodId{2015, 2});
  CHECK(s.day_in_period(20) == 1);

  const auto neg = s.lagged_negative();
  REQUIRE(neg.size() == 23);
  CHECK(neg[0] == 0);
  CHECK(neg[3] == 0);
  CHECK(neg[4] == 1);  // ret[3] < 0
  CHECK(neg[5] == 0);

  const PanelSeries sl = s.slice(20, 23);
  CHECK(sl.size() == 3);
  CHECK(sl.day(0).date == s.day(20).date);
  CHECK(sl.period(0) == PeriodId{2015, 2});
  CHECK(sl.day_in_period(0) == 1);  // slice starts on the first business day of February
}

TEST_CASE("macro attach with level transform and lag lookup") {
  const PanelSeries s = oracle::make_panel(std::vector<double>(23, 10.0));
  std::vector<std::pair<PeriodId, double>> raw = {
      {{2014, 10}, 1.0}, {{2014, 11}, 2.0}, {{2014, 12}, 3.0}, {{2015, 1}, 4.0}, {{2015, 2}, 5.0}};
  const PanelSeries sm = attach_macro(s, raw, MacroTransform::level);
  REQUIRE(sm.has_macro());
  CHECK_FALSE(s.has_macro());

  const auto lags = sm.macro_lags({2015, 2}, 3);  // X_{t-1}, X_{t-2}, X_{t-3}
  REQUIRE(lags.size() == 3);
  CHECK(lags[0] == 4.0);
  CHECK(lags[1] == 3.0);
  CHECK(lags[2] == 2.0);

  CHECK_THROWS_WITH_AS(static_cast<void>(sm.macro_lags({2015, 2}, 6)),
                       doctest::Contains("2014-09"), std::runtime_error);

  // slices share the macro map
  CHECK(sm.slice(5, 23).has_macro());

  // a gap in the period sequence is rejected
  std::vector<std::pair<PeriodId, double>> gap = {{{2014, 10}, 1.0}, {{2014, 12}, 3.0}};
  CHECK_THROWS_WITH_AS(static_cast<void>(attach_macro(s, gap, MacroTransform::level)),
                       doctest::Contains("gap"), std::runtime_error);
}

TEST_CASE("month-over-month macro transform annualizes growth in percent") {
  const PanelSeries s = oracle::make_panel(std::vector<double>(23, 10.0));
  std::vector<std::pair<PeriodId, double>> raw = {{{2014, 12}, 100.0}, {{2015, 1}, 101.0}};
  const PanelSeries sm = attach_macro(s, raw, MacroTransform::mom_annualized_pct);
  // the first level is consumed by the ratio
  REQUIRE(sm.macro().size() == 1);
  CHECK(sm.macro().at({2015, 1}) ==
        doctest::Approx(std::sqrt(12.0) * 100.0 * 0.01).epsilon(1e-12));
  CHECK(sm.macro().at({2015, 1}) == doctest::Approx(3.4641016).epsilon(1e-6));

  std::vector<std::pair<PeriodId, double>> neg = {{{2014, 12}, -1.0}, {{2015, 1}, 101.0}};
  CHECK_THROWS_WITH_AS(static_cast<void>(attach_macro(s, neg, MacroTransform::mom_annualized_pct)),
                       doctest::Contains("positive levels"), std::runtime_error);
}

TEST_CASE("daily csv writer round trips through the loader") {
  const std::vector<double> rvol = {10.0, 11.5, 9.25};
  const std::vector<double> ret = {0.01, -0.02, 0.003};
  const PanelSeries s = oracle::make_panel(rvol, ret);
  const std::string path = "tmp_panel_roundtrip.csv";
  write_daily_csv(path, s, {"# fixture"});

  CsvSchema schema;
  schema.rvol_column = "rvol";
  const LoadedPanel lp = load_daily_csv(path, schema);
  REQUIRE(lp.series.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(lp.series.day(i).rvol == rvol[i]);
    CHECK(lp.series.day(i).ret == ret[i]);
    CHECK(lp.series.day(i).date == s.day(i).date);
  }
  std::remove(path.c_str());
}
