#pragma once

#include <vector>

#include "anomcast/series.hpp"

namespace anomcast::outlier {

struct OutlierFlag {
    TradingDay day;
    double studentized_residual = 0.0;
    bool flagged = false;
};

/// Counts kept for the per-symbol diagnostics summary.
struct ExtractionTally {
    int flagged_days = 0;
    int windows_emitted = 0;
    int dropped_insufficient_context = 0;
    int dropped_year_crossing = 0;  // filled by filter_year_crossing
};

/// flagged = |value| > threshold. Strictly greater: a value of exactly 2.0
/// is not an outlier. Order is preserved.
std::vector<OutlierFlag> flag_outliers(const std::vector<std::pair<TradingDay, double>>& studentized,
                                       double threshold = 2.0);

/// One 7-day window per flagged day. A window needs the 3 preceding and 3
/// following trading days AND a return for each of its 7 days (so the day
/// before the window must exist in the price series); flags without that
/// context are dropped and tallied, never padded. Windows from nearby flags
/// may overlap; each is kept as its own sample. Sentiment gaps are filled
/// with 0 via the aligned series.
std::vector<AnomalyWindow> extract_windows(const std::vector<OutlierFlag>& flags,
                                           const PriceSeries& prices,
                                           const ReturnSeries& returns,
                                           const SentimentSeries& sentiments,
                                           ExtractionTally* tally = nullptr);

/// Keeps only windows whose 7 days share one calendar year.
std::vector<AnomalyWindow> filter_year_crossing(const std::vector<AnomalyWindow>& windows,
                                                ExtractionTally* tally = nullptr);

}  // namespace anomcast::outlier
