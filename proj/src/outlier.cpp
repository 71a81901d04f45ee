#include "anomcast/outlier.hpp"

#include <cmath>
#include <map>

#include "anomcast/errors.hpp"

namespace anomcast::outlier {

std::vector<OutlierFlag> flag_outliers(
    const std::vector<std::pair<TradingDay, double>>& studentized, double threshold) {
    if (!(threshold > 0.0)) {
        throw ValidationError("outlier threshold must be positive");
    }
    std::vector<OutlierFlag> out;
    out.reserve(studentized.size());
    for (const auto& [day, value] : studentized) {
        out.push_back({day, value, std::abs(value) > threshold});
    }
    return out;
}

std::vector<AnomalyWindow> extract_windows(const std::vector<OutlierFlag>& flags,
                                           const PriceSeries& prices,
                                           const ReturnSeries& returns,
                                           const SentimentSeries& sentiments,
                                           ExtractionTally* tally) {
    if (returns.points.size() + 1 != prices.points.size()) {
        throw ValidationError("return series must have exactly one point per price day but "
                              "the first");
    }
    // Position of each trading day within the price series.
    std::map<Date, int> pos;
    for (std::size_t i = 0; i < prices.points.size(); ++i) {
        pos[prices.points[i].day.date] = int(i);
    }
    std::map<Date, double> score;
    for (const auto& s : sentiments.points) score[s.day.date] = s.score;

    const int n = int(prices.points.size());
    std::vector<AnomalyWindow> out;
    for (const auto& flag : flags) {
        if (!flag.flagged) continue;
        if (tally) ++tally->flagged_days;
        const auto it = pos.find(flag.day.date);
        if (it == pos.end()) {
            throw ValidationError("flagged day " + to_iso_string(flag.day.date) +
                                  " is not in the price series");
        }
        const int center = it->second;
        // center-4 must exist so the first window day has a return.
        if (center - kOutlierPos < 1 || center + kOutlierPos >= n) {
            if (tally) ++tally->dropped_insufficient_context;
            continue;
        }
        AnomalyWindow w;
        w.symbol = prices.symbol;
        for (int k = 0; k < kWindowLength; ++k) {
            const int idx = center - kOutlierPos + k;
            const auto& pt = prices.points[std::size_t(idx)];
            w.days[std::size_t(k)] = pt.day;
            w.actual_prices[std::size_t(k)] = pt.adj_close;
            // ReturnSeries drops the first price day, so return i sits at idx-1.
            const auto& ret = returns.points[std::size_t(idx - 1)];
            if (ret.day.date != pt.day.date) {
                throw ValidationError("return series is not aligned with the price series");
            }
            w.returns[std::size_t(k)] = ret.pct_change;
            const auto sit = score.find(pt.day.date);
            w.sentiments[std::size_t(k)] = sit == score.end() ? 0.0 : sit->second;
        }
        w.outlier_day = w.days[kOutlierPos];
        validate(w);
        out.push_back(std::move(w));
        if (tally) ++tally->windows_emitted;
    }
    return out;
}

std::vector<AnomalyWindow> filter_year_crossing(const std::vector<AnomalyWindow>& windows,
                                                ExtractionTally* tally) {
    std::vector<AnomalyWindow> out;
    out.reserve(windows.size());
    for (const auto& w : windows) {
        if (single_year(w)) {
            out.push_back(w);
        } else if (tally) {
            ++tally->dropped_year_crossing;
        }
    }
    return out;
}

}  // namespace anomcast::outlier
