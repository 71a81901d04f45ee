#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "anomcast/dates.hpp"

namespace anomcast {

inline constexpr int kWindowLength = 7;
inline constexpr int kOutlierPos = 3;  // the flagged day sits at index 3 of a window

/// One trading day: its calendar date plus its position in the trading
/// calendar. A day is a trading day iff a price row exists for it, so the
/// calendar is derived from the data, never from a holiday table. Ordinals
/// count trading days elapsed since the start of the series; consecutive
/// ordinals may span several calendar days (weekends, holidays).
struct TradingDay {
    Date date;
    int ordinal = 0;

    auto operator<=>(const TradingDay&) const = default;
};

struct PricePoint {
    TradingDay day;
    double adj_close = 0.0;
};

/// Dated adjusted-closing-price sequence for one symbol.
struct PriceSeries {
    std::string symbol;
    std::string industry;
    std::vector<PricePoint> points;
};

struct ReturnPoint {
    TradingDay day;
    double pct_change = 0.0;
};

/// Day-over-day fractional price changes; one point fewer than the source
/// price series, each stamped with the later day.
struct ReturnSeries {
    std::string symbol;
    std::vector<ReturnPoint> points;
};

struct SentimentPoint {
    TradingDay day;
    double score = 0.0;  // in [-1, 1]; exactly 0 when no comments exist
};

struct SentimentSeries {
    std::string symbol;
    std::vector<SentimentPoint> points;
};

/// A flagged outlier day plus its 3 preceding and 3 following trading days.
/// The parallel arrays run t-3 .. t+3; the outlier sits at kOutlierPos.
struct AnomalyWindow {
    std::string symbol;
    TradingDay outlier_day;
    std::array<TradingDay, kWindowLength> days{};
    std::array<double, kWindowLength> returns{};
    std::array<double, kWindowLength> sentiments{};
    std::array<double, kWindowLength> actual_prices{};
};

/// Throws ValidationError unless prices are positive and dates strictly
/// increase with strictly increasing ordinals.
void validate(const PriceSeries& series);

/// Throws ValidationError unless every score lies in [-1, 1] and dates
/// strictly increase.
void validate(const SentimentSeries& series);

/// Checks the parallel-array invariants: outlier at kOutlierPos, positive
/// prices, returns > -1, scores in [-1, 1], strictly increasing days.
/// Does NOT require a single calendar year; filter_year_crossing owns that.
void validate(const AnomalyWindow& window);

/// True iff all 7 days fall in one calendar year.
bool single_year(const AnomalyWindow& window);

/// Day-over-day percentage changes: out[i] = p[i+1]/p[i] - 1, stamped with
/// the later day. Throws InsufficientDataError for < 2 points and
/// ValidationError for non-positive prices.
ReturnSeries pct_change(const PriceSeries& prices);

/// Inverse of pct_change: out[0] = anchor*(1+r[0]), out[k] = out[k-1]*(1+r[k]).
/// Throws ValidationError for anchor <= 0 or any return <= -1.
std::vector<double> reconstruct_prices(double anchor_price, const std::vector<double>& returns);

/// Joins sentiment scores onto the price calendar: every price day appears
/// exactly once; price days with no sentiment get score 0; sentiment days
/// with no price are dropped. Throws ValidationError on symbol mismatch.
SentimentSeries align(const PriceSeries& prices, const SentimentSeries& sentiments);

/// Date <-> ordinal mapping anchored at the first trading day of a reference
/// year: that day maps to 0 and counting continues over all later series days.
class OrdinalIndex {
public:
    /// Throws ValidationError if the series has no trading day in reference_year.
    OrdinalIndex(const PriceSeries& series, int reference_year);

    /// Throws ValidationError when the date is not a covered trading day.
    int ordinal_of(const Date& date) const;

    /// Throws ValidationError when the ordinal is out of range.
    Date date_of(int ordinal) const;

    int size() const { return int(dates_.size()); }

private:
    std::map<Date, int> by_date_;
    std::vector<Date> dates_;
};

}  // namespace anomcast
