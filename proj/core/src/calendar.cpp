#include "dmem/calendar.hpp"

#include <cstdio>
#include <stdexcept>

namespace dmem {

namespace {

using days = std::chrono::days;
using std::chrono::sys_days;

int iso_weeks_in_year(int year);

// ISO week = week of the Thursday in the date's Mon..Sun week.
PeriodId iso_week_of(const Date& d) {
  const sys_days sd{d};
  const std::chrono::weekday wd{sd};
  const int mon1 = static_cast<int>(wd.iso_encoding());  // Mon=1 .. Sun=7
  const sys_days thursday = sd + days{4 - mon1};
  const Date th{thursday};
  const int iso_year = static_cast<int>(th.year());
  const sys_days jan1{th.year() / std::chrono::January / 1};
  const int doy = static_cast<int>((thursday - jan1).count());  // 0-based
  return {iso_year, doy / 7 + 1};
}

int iso_weeks_in_year(int year) {
  // December 28 is always in the last ISO week of its year.
  return iso_week_of(Date{std::chrono::year{year} / std::chrono::December / 28}).index;
}

}  // namespace

Date parse_date(const std::string& text) {
  int y = 0, m = 0, d = 0;
  char tail = '\0';
  if (std::sscanf(text.c_str(), "%d-%d-%d%c", &y, &m, &d, &tail) != 3)
    throw std::invalid_argument("bad date '" + text + "' (want YYYY-MM-DD)");
  const Date date{std::chrono::year{y} / m / d};
  if (!date.ok()) throw std::invalid_argument("invalid calendar date '" + text + "'");
  return date;
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

PeriodFrequency parse_frequency(const std::string& text) {
  if (text == "month" || text == "monthly") return PeriodFrequency::month;
  if (text == "week" || text == "weekly") return PeriodFrequency::week;
  throw std::invalid_argument("unknown period frequency '" + text + "'");
}

std::string to_string(PeriodFrequency f) {
  return f == PeriodFrequency::month ? "month" : "week";
}

PeriodId period_of(const Date& d, PeriodFrequency f) {
  if (f == PeriodFrequency::month)
    return {static_cast<int>(d.year()), static_cast<int>(static_cast<unsigned>(d.month()))};
  return iso_week_of(d);
}

PeriodId next_period(const PeriodId& p, PeriodFrequency f) {
  const int last = f == PeriodFrequency::month ? 12 : iso_weeks_in_year(p.year);
  if (p.index < last) return {p.year, p.index + 1};
  return {p.year + 1, 1};
}

PeriodId prev_period(const PeriodId& p, PeriodFrequency f) {
  if (p.index > 1) return {p.year, p.index - 1};
  const int y = p.year - 1;
  return {y, f == PeriodFrequency::month ? 12 : iso_weeks_in_year(y)};
}

std::string to_string(const PeriodId& p, PeriodFrequency f) {
  char buf[16];
  if (f == PeriodFrequency::month)
    std::snprintf(buf, sizeof buf, "%04d-%02d", p.year, p.index);
  else
    std::snprintf(buf, sizeof buf, "%04d-W%02d", p.year, p.index);
  return buf;
}

PeriodId parse_period(const std::string& text, PeriodFrequency f) {
  int y = 0, i = 0;
  char tail = '\0';
  if (f == PeriodFrequency::week && std::sscanf(text.c_str(), "%d-W%d%c", &y, &i, &tail) == 2) {
    if (i < 1 || i > iso_weeks_in_year(y))
      throw std::invalid_argument("invalid ISO week '" + text + "'");
    return {y, i};
  }
  if (f == PeriodFrequency::month && std::sscanf(text.c_str(), "%d-%d%c", &y, &i, &tail) == 2) {
    if (i < 1 || i > 12) throw std::invalid_argument("invalid month '" + text + "'");
    return {y, i};
  }
  return period_of(parse_date(text), f);
}

std::vector<Date> business_days(Date start, std::size_t n) {
  std::vector<Date> out;
  out.reserve(n);
  sys_days d{start};
  while (out.size() < n) {
    const std::chrono::weekday wd{d};
    if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) out.push_back(Date{d});
    d += days{1};
  }
  return out;
}

}  // namespace dmem
