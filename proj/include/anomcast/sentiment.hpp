#pragma once

#include <map>
#include <string>
#include <vector>

#include "anomcast/csv.hpp"
#include "anomcast/series.hpp"

namespace anomcast::sentiment {

/// Word-valence table. Valences follow the usual [-4, 4] lexicon convention.
struct Lexicon {
    std::map<std::string, double> entries;
};

struct DailySentiment {
    std::string symbol;
    TradingDay day;
    double score = 0.0;  // in [-1, 1]
    int comment_count = 0;
};

/// Lexicon file: UTF-8 lines "token<TAB>valence". Tokens are lowercased;
/// duplicates and empty tokens are rejected.
Lexicon load_lexicon(const std::string& path);

/// Precomputed daily scores from a Sentiment CSV (Date,Score). Out-of-range
/// scores are rejected, not clamped; duplicate days keep the last row with a
/// warning.
SentimentSeries load_scores(const std::string& path, const std::string& symbol,
                            const csv::WarnFn& warn = nullptr);

void save_scores(const std::string& path, const SentimentSeries& series);

/// Compound score of a text: tokens are split on whitespace/punctuation and
/// lowercased, matched valences are summed to s, and the result is the
/// normalized s / sqrt(s^2 + 15), always inside (-1, 1). Empty or unmatched
/// text scores 0.
double lexicon_compound(const std::string& text, const Lexicon& lexicon);

/// Score of one day: all comments concatenated with single spaces and run
/// through lexicon_compound. No comments means score exactly 0.
DailySentiment daily_compound(const std::vector<std::string>& comments, const Lexicon& lexicon,
                              const std::string& symbol, const TradingDay& day);

/// Comments file: JSON lines {"date": "YYYY-MM-DD", "symbol": "...",
/// "body": "..."}. Groups bodies per (symbol, day), scores each day with
/// daily_compound, and returns one series per symbol.
std::map<std::string, SentimentSeries> score_comments_jsonl(const std::string& path,
                                                            const Lexicon& lexicon);

}  // namespace anomcast::sentiment
