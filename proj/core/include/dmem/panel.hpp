#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dmem/calendar.hpp"

namespace dmem {

struct DayObs {
  Date date;
  double ret = 0.0;   // open-to-close return, sign drives the asymmetry terms
  double rvol = 0.0;  // realized volatility, annualized percent, >= 0
};

struct CsvSchema {
  std::string date_column = "date";
  std::string return_column = "ret";
  std::string rvol_column;       // exactly one of rvol_column /
  std::string rvariance_column;  // rvariance_column must be set
  double annualization = 252.0;  // rvol = sqrt(annualization * variance); 1.0 = already annualized
};

struct LoadStats {
  std::size_t rows_total = 0;
  std::size_t rows_dropped_missing = 0;
  std::size_t zero_rvol_days = 0;
  bool was_unsorted = false;
};

enum class MacroTransform { level, mom_annualized_pct };

MacroTransform parse_macro_transform(const std::string& text);
std::string to_string(MacroTransform t);

// Daily panel nested in low-frequency periods, with an optional aligned
// macro series keyed by period. Immutable after construction.
class PanelSeries {
 public:
  PanelSeries() = default;
  static PanelSeries from_days(std::vector<DayObs> days, PeriodFrequency freq);

  const std::vector<DayObs>& days() const { return *days_; }
  std::size_t size() const { return end_ - begin_; }
  bool empty() const { return size() == 0; }
  const DayObs& day(std::size_t i) const { return (*days_)[begin_ + i]; }
  PeriodFrequency frequency() const { return freq_; }

  PeriodId period(std::size_t i) const { return (*periods_)[begin_ + i]; }
  // 1-based day index within its period
  int day_in_period(std::size_t i) const { return (*day_index_)[begin_ + i]; }

  std::vector<double> rvol() const;
  std::vector<double> ret() const;
  // lagged-return sign gates: neg[i] = 1 iff ret[i-1] < 0 (neg[0] = 0)
  std::vector<unsigned char> lagged_negative() const;

  // view over days [begin, end); shares storage and macro map
  PanelSeries slice(std::size_t begin, std::size_t end) const;

  PanelSeries with_macro(std::map<PeriodId, double> macro) const;
  bool has_macro() const { return macro_ != nullptr; }
  const std::map<PeriodId, double>& macro() const;

  // X_{t-1} .. X_{t-K} for period t, most recent first; throws listing
  // missing periods when coverage is short
  std::vector<double> macro_lags(const PeriodId& t, int K) const;

 private:
  std::shared_ptr<const std::vector<DayObs>> days_;
  std::shared_ptr<const std::vector<PeriodId>> periods_;
  std::shared_ptr<const std::vector<int>> day_index_;
  std::shared_ptr<const std::map<PeriodId, double>> macro_;
  std::size_t begin_ = 0;
  std::size_t end_ = 0;
  PeriodFrequency freq_ = PeriodFrequency::month;
};

struct LoadedPanel {
  PanelSeries series;
  LoadStats stats;
};

LoadedPanel load_daily_csv(const std::string& path, const CsvSchema& schema,
                           PeriodFrequency freq = PeriodFrequency::month);

struct MacroSchema {
  std::string period_column = "period";  // period label or a date inside the period
  std::string value_column = "value";
};

// Reads a (period, value) table, applies the transform, and attaches the
// result to the panel. mom_annualized_pct maps levels L_t to
// sqrt(12)*100*(L_t/L_{t-1} - 1) and therefore consumes the first row.
PanelSeries attach_macro(const PanelSeries& series, const std::string& path,
                         const MacroSchema& schema, MacroTransform transform);
PanelSeries attach_macro(const PanelSeries& series,
                         const std::vector<std::pair<PeriodId, double>>& raw,
                         MacroTransform transform);

void write_daily_csv(const std::string& path, const PanelSeries& series,
                     const std::vector<std::string>& header_comments = {});

}  // namespace dmem
