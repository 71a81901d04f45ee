#pragma once

#include <functional>
#include <string>
#include <vector>

#include "anomcast/series.hpp"

namespace anomcast::csv {

/// Sink for non-fatal load warnings; defaults to stderr when null.
using WarnFn = std::function<void(const std::string&)>;

/// Splits one CSV line on commas. Fields in this project never contain
/// commas or quotes, so no quoting rules apply.
std::vector<std::string> split_line(const std::string& line);

/// Reads all lines of a text file; throws ParseError if it cannot be opened.
std::vector<std::string> read_lines(const std::string& path);

/// Writes a file atomically (temp file + rename).
void write_file(const std::string& path, const std::string& content);

/// Price CSV: header "Date,AdjClose", ISO-8601 dates, one row per trading
/// day. Ordinals are assigned 0..n-1 in file order. Validates ordering and
/// positivity.
PriceSeries load_price_csv(const std::string& path, const std::string& symbol,
                           const std::string& industry = "");
void save_price_csv(const std::string& path, const PriceSeries& series);

/// Sentiment CSV: header "Date,Score". Scores outside [-1,1] are rejected.
/// Duplicate dates keep the last row and emit a warning.
SentimentSeries load_sentiment_csv(const std::string& path, const std::string& symbol,
                                   const WarnFn& warn = nullptr);
void save_sentiment_csv(const std::string& path, const SentimentSeries& series);

/// Anomaly-window dataset, 7 rows per window:
///   Symbols,Date,Outliers,Actuals,Percentage,S_Scores
/// The outlier flag is 1 exactly once per block, on the 4th row.
void save_window_csv(const std::string& path, const std::vector<AnomalyWindow>& windows);
std::vector<AnomalyWindow> load_window_csv(const std::string& path);

std::string window_csv_string(const std::vector<AnomalyWindow>& windows);

}  // namespace anomcast::csv
