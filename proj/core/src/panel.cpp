#include "dmem/panel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dmem/csv.hpp"

namespace dmem {

MacroTransform parse_macro_transform(const std::string& text) {
  if (text == "level") return MacroTransform::level;
  if (text == "mom_annualized_pct") return MacroTransform::mom_annualized_pct;
  throw std::invalid_argument("unknown macro transform '" + text + "'");
}

std::string to_string(MacroTransform t) {
  return t == MacroTransform::level ? "level" : "mom_annualized_pct";
}

PanelSeries PanelSeries::from_days(std::vector<DayObs> days, PeriodFrequency freq) {
  if (days.empty()) throw std::invalid_argument("no observations");
  for (std::size_t i = 1; i < days.size(); ++i)
    if (!(std::chrono::sys_days{days[i - 1].date} < std::chrono::sys_days{days[i].date}))
      throw std::invalid_argument("days not strictly increasing at row " + std::to_string(i));

  auto periods = std::make_shared<std::vector<PeriodId>>();
  auto day_index = std::make_shared<std::vector<int>>();
  periods->reserve(days.size());
  day_index->reserve(days.size());
  for (std::size_t i = 0; i < days.size(); ++i) {
    const PeriodId p = period_of(days[i].date, freq);
    int idx = 1;
    if (i > 0 && p == periods->back()) idx = day_index->back() + 1;
    periods->push_back(p);
    day_index->push_back(idx);
  }

  PanelSeries s;
  s.days_ = std::make_shared<const std::vector<DayObs>>(std::move(days));
  s.periods_ = std::move(periods);
  s.day_index_ = std::move(day_index);
  s.begin_ = 0;
  s.end_ = s.days_->size();
  s.freq_ = freq;
  return s;
}

std::vector<double> PanelSeries::rvol() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = day(i).rvol;
  return out;
}

std::vector<double> PanelSeries::ret() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = day(i).ret;
  return out;
}

std::vector<unsigned char> PanelSeries::lagged_negative() const {
  std::vector<unsigned char> out(size(), 0);
  for (std::size_t i = 1; i < size(); ++i) out[i] = day(i - 1).ret < 0.0 ? 1 : 0;
  return out;
}

PanelSeries PanelSeries::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > size())
    throw std::out_of_range("slice [" + std::to_string(begin) + ", " + std::to_string(end) +
                            ") out of range for panel of size " + std::to_string(size()));
  PanelSeries s = *this;
  s.begin_ = begin_ + begin;
  s.end_ = begin_ + end;
  return s;
}

PanelSeries PanelSeries::with_macro(std::map<PeriodId, double> macro) const {
  PanelSeries s = *this;
  s.macro_ = std::make_shared<const std::map<PeriodId, double>>(std::move(macro));
  return s;
}

const std::map<PeriodId, double>& PanelSeries::macro() const {
  if (!macro_) throw std::logic_error("panel has no macro series attached");
  return *macro_;
}

std::vector<double> PanelSeries::macro_lags(const PeriodId& t, int K) const {
  if (K < 1) throw std::invalid_argument("macro lag count must be >= 1");
  const auto& m = macro();
  std::vector<double> lags;
  lags.reserve(static_cast<std::size_t>(K));
  std::vector<std::string> missing;
  PeriodId p = t;
  for (int k = 1; k <= K; ++k) {
    p = prev_period(p, freq_);
    const auto it = m.find(p);
    if (it == m.end())
      missing.push_back(to_string(p, freq_));
    else
      lags.push_back(it->second);
  }
  if (!missing.empty()) {
    std::ostringstream os;
    os << "macro series missing " << missing.size() << " lag period(s) for " << to_string(t, freq_)
       << ":";
    for (const auto& s : missing) os << ' ' << s;
    throw std::runtime_error(os.str());
  }
  return lags;
}

LoadedPanel load_daily_csv(const std::string& path, const CsvSchema& schema, PeriodFrequency freq) {
  const bool use_variance = !schema.rvariance_column.empty();
  if (use_variance == !schema.rvol_column.empty())
    throw std::invalid_argument("schema must set exactly one of rvol_column / rvariance_column");

  const CsvTable t = read_csv_file(path);
  const int jd = t.require_column(schema.date_column);
  const int jr = t.require_column(schema.return_column);
  const int jv = t.require_column(use_variance ? schema.rvariance_column : schema.rvol_column);

  LoadStats stats;
  stats.rows_total = t.rows.size();
  std::vector<DayObs> days;
  days.reserve(t.rows.size());
  for (std::size_t row = 0; row < t.rows.size(); ++row) {
    DayObs d;
    try {
      d.date = parse_date(t.rows[row][jd]);
    } catch (const std::exception& e) {
      throw std::runtime_error("row " + std::to_string(row + 2) + ": " + e.what());
    }
    double ret, val;
    try {
      ret = parse_double(t.rows[row][jr]);
      val = parse_double(t.rows[row][jv]);
    } catch (const std::exception& e) {
      throw std::runtime_error("row " + std::to_string(row + 2) + ": " + e.what());
    }
    if (!std::isfinite(ret) || !std::isfinite(val)) {
      ++stats.rows_dropped_missing;
      continue;
    }
    if (use_variance) {
      if (val < 0.0)
        throw std::runtime_error("row " + std::to_string(row + 2) + ": negative realized variance " +
                                 format_double(val));
      d.rvol = std::sqrt(schema.annualization * val);
    } else {
      if (val < 0.0)
        throw std::runtime_error("row " + std::to_string(row + 2) + ": negative realized volatility " +
                                 format_double(val));
      d.rvol = val;
    }
    d.ret = ret;
    if (d.rvol == 0.0) ++stats.zero_rvol_days;
    days.push_back(d);
  }
  if (days.empty()) throw std::runtime_error("no observations in '" + path + "'");

  if (!std::is_sorted(days.begin(), days.end(), [](const DayObs& a, const DayObs& b) {
        return std::chrono::sys_days{a.date} < std::chrono::sys_days{b.date};
      })) {
    stats.was_unsorted = true;
    std::stable_sort(days.begin(), days.end(), [](const DayObs& a, const DayObs& b) {
      return std::chrono::sys_days{a.date} < std::chrono::sys_days{b.date};
    });
  }
  return {PanelSeries::from_days(std::move(days), freq), stats};
}

PanelSeries attach_macro(const PanelSeries& series,
                         const std::vector<std::pair<PeriodId, double>>& raw,
                         MacroTransform transform) {
  if (raw.empty()) throw std::invalid_argument("empty macro series");
  std::map<PeriodId, double> macro;
  if (transform == MacroTransform::level) {
    for (const auto& [p, v] : raw) macro[p] = v;
  } else {
    for (std::size_t k = 1; k < raw.size(); ++k) {
      const auto& [p_prev, v_prev] = raw[k - 1];
      const auto& [p, v] = raw[k];
      if (next_period(p_prev, series.frequency()) != p)
        throw std::runtime_error("macro series gap between " +
                                 to_string(p_prev, series.frequency()) + " and " +
                                 to_string(p, series.frequency()));
      if (v_prev <= 0.0)
        throw std::runtime_error("month-over-month transform needs positive levels, got " +
                                 format_double(v_prev) + " at " +
                                 to_string(p_prev, series.frequency()));
      macro[p] = std::sqrt(12.0) * 100.0 * (v / v_prev - 1.0);
    }
  }
  // contiguity check over the macro map itself
  for (auto it = macro.begin(); std::next(it) != macro.end(); ++it)
    if (next_period(it->first, series.frequency()) != std::next(it)->first)
      throw std::runtime_error("macro series gap after " +
                               to_string(it->first, series.frequency()));
  return series.with_macro(std::move(macro));
}

PanelSeries attach_macro(const PanelSeries& series, const std::string& path,
                         const MacroSchema& schema, MacroTransform transform) {
  const CsvTable t = read_csv_file(path);
  const int jp = t.require_column(schema.period_column);
  const int jv = t.require_column(schema.value_column);
  std::vector<std::pair<PeriodId, double>> raw;
  raw.reserve(t.rows.size());
  for (std::size_t row = 0; row < t.rows.size(); ++row) {
    try {
      raw.emplace_back(parse_period(t.rows[row][jp], series.frequency()),
                       parse_double(t.rows[row][jv]));
    } catch (const std::exception& e) {
      throw std::runtime_error("macro row " + std::to_string(row + 2) + ": " + e.what());
    }
  }
  return attach_macro(series, raw, transform);
}

void write_daily_csv(const std::string& path, const PanelSeries& series,
                     const std::vector<std::string>& header_comments) {
  CsvTable t;
  t.comments = header_comments;
  t.columns = {"date", "ret", "rvol"};
  t.rows.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const DayObs& d = series.day(i);
    t.rows.push_back({format_date(d.date), format_double(d.ret), format_double(d.rvol)});
  }
  write_csv_file(path, t);
}

}  // namespace dmem
