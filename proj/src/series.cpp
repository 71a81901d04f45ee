#include "anomcast/series.hpp"

#include <cmath>

#include "anomcast/errors.hpp"
#include "anomcast/util.hpp"

namespace anomcast {

void validate(const PriceSeries& series) {
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        const auto& p = series.points[i];
        if (!(p.adj_close > 0.0) || !std::isfinite(p.adj_close)) {
            throw ValidationError("non-positive price for " + series.symbol + " on " +
                                  to_iso_string(p.day.date));
        }
        if (i > 0) {
            if (!(series.points[i - 1].day.date < p.day.date)) {
                throw ValidationError("price dates not strictly increasing for " + series.symbol +
                                      " at " + to_iso_string(p.day.date));
            }
            if (!(series.points[i - 1].day.ordinal < p.day.ordinal)) {
                throw ValidationError("price ordinals not strictly increasing for " +
                                      series.symbol);
            }
        }
    }
}

void validate(const SentimentSeries& series) {
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        const auto& p = series.points[i];
        if (!(p.score >= -1.0 && p.score <= 1.0)) {
            throw ValidationError("sentiment score out of [-1,1] for " + series.symbol + " on " +
                                  to_iso_string(p.day.date));
        }
        if (i > 0 && !(series.points[i - 1].day.date < p.day.date)) {
            throw ValidationError("sentiment dates not strictly increasing for " + series.symbol);
        }
    }
}

void validate(const AnomalyWindow& window) {
    if (window.days[kOutlierPos] != window.outlier_day) {
        throw ValidationError("window outlier day must sit at index 3");
    }
    for (int i = 0; i < kWindowLength; ++i) {
        if (!(window.actual_prices[i] > 0.0)) {
            throw ValidationError("window price must be positive");
        }
        if (!(window.returns[i] > -1.0)) {
            throw ValidationError("window return must exceed -1");
        }
        if (!(window.sentiments[i] >= -1.0 && window.sentiments[i] <= 1.0)) {
            throw ValidationError("window sentiment out of [-1,1]");
        }
        if (i > 0 && !(window.days[i - 1].date < window.days[i].date)) {
            throw ValidationError("window days not strictly increasing");
        }
    }
}

bool single_year(const AnomalyWindow& window) {
    const int y = window.days.front().date.year;
    for (const auto& d : window.days) {
        if (d.date.year != y) return false;
    }
    return true;
}

ReturnSeries pct_change(const PriceSeries& prices) {
    if (prices.points.size() < 2) {
        throw InsufficientDataError("pct_change needs at least 2 price points");
    }
    ReturnSeries out;
    out.symbol = prices.symbol;
    out.points.reserve(prices.points.size() - 1);
    for (std::size_t i = 0; i + 1 < prices.points.size(); ++i) {
        const double prev = prices.points[i].adj_close;
        const double next = prices.points[i + 1].adj_close;
        if (!(prev > 0.0) || !(next > 0.0)) {
            throw ValidationError("pct_change requires strictly positive prices");
        }
        out.points.push_back({prices.points[i + 1].day, next / prev - 1.0});
    }
    return out;
}

std::vector<double> reconstruct_prices(double anchor_price, const std::vector<double>& returns) {
    if (!(anchor_price > 0.0)) {
        throw ValidationError("anchor price must be positive");
    }
    std::vector<double> out;
    out.reserve(returns.size());
    double level = anchor_price;
    for (double r : returns) {
        if (!(r > -1.0)) {
            throw ValidationError("return <= -1 cannot map to a positive price");
        }
        level *= (1.0 + r);
        out.push_back(level);
    }
    return out;
}

SentimentSeries align(const PriceSeries& prices, const SentimentSeries& sentiments) {
    if (!sentiments.symbol.empty() && sentiments.symbol != prices.symbol) {
        throw ValidationError("align: symbol mismatch (" + prices.symbol + " vs " +
                              sentiments.symbol + ")");
    }
    std::map<Date, double> by_date;
    for (const auto& p : sentiments.points) by_date[p.day.date] = p.score;

    SentimentSeries out;
    out.symbol = prices.symbol;
    out.points.reserve(prices.points.size());
    for (const auto& p : prices.points) {
        const auto it = by_date.find(p.day.date);
        const double score = it == by_date.end() ? 0.0 : it->second;
        out.points.push_back({p.day, score});
    }
    return out;
}

OrdinalIndex::OrdinalIndex(const PriceSeries& series, int reference_year) {
    if (series.points.empty()) {
        throw ValidationError("ordinal index of empty series");
    }
    std::size_t first = series.points.size();
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        if (series.points[i].day.date.year == reference_year) {
            first = i;
            break;
        }
    }
    if (first == series.points.size()) {
        throw ValidationError("series has no trading day in year " +
                              std::to_string(reference_year));
    }
    for (std::size_t i = first; i < series.points.size(); ++i) {
        by_date_[series.points[i].day.date] = int(i - first);
        dates_.push_back(series.points[i].day.date);
    }
}

int OrdinalIndex::ordinal_of(const Date& date) const {
    const auto it = by_date_.find(date);
    if (it == by_date_.end()) {
        throw ValidationError(to_iso_string(date) + " is not a covered trading day");
    }
    return it->second;
}

Date OrdinalIndex::date_of(int ordinal) const {
    if (ordinal < 0 || ordinal >= int(dates_.size())) {
        throw ValidationError("ordinal " + std::to_string(ordinal) + " out of range");
    }
    return dates_[std::size_t(ordinal)];
}

}  // namespace anomcast
