#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <vector>

namespace dmem {

using Date = std::chrono::year_month_day;

Date parse_date(const std::string& text);  // "YYYY-MM-DD"
std::string format_date(const Date& d);

enum class PeriodFrequency { month, week };

PeriodFrequency parse_frequency(const std::string& text);
std::string to_string(PeriodFrequency f);

// One low-frequency period: a calendar month or an ISO-8601 week.
// For weeks, `year` is the ISO week-based year, which can differ from the
// calendar year around January 1st.
struct PeriodId {
  int year = 0;
  int index = 0;  // month 1..12 or ISO week 1..53
  auto operator<=>(const PeriodId&) const = default;
};

PeriodId period_of(const Date& d, PeriodFrequency f);
PeriodId next_period(const PeriodId& p, PeriodFrequency f);
PeriodId prev_period(const PeriodId& p, PeriodFrequency f);

std::string to_string(const PeriodId& p, PeriodFrequency f);
// Accepts "YYYY-MM" / "YYYY-Www" and full dates (mapped to their period).
PeriodId parse_period(const std::string& text, PeriodFrequency f);

// n consecutive Mon-Fri days starting at `start` (used by the simulator).
std::vector<Date> business_days(Date start, std::size_t n);

}  // namespace dmem
