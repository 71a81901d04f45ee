#include "anomcast/sentiment.hpp"

#include <cctype>
#include <cmath>

#include <nlohmann/json.hpp>

#include "anomcast/errors.hpp"
#include "anomcast/util.hpp"

namespace anomcast::sentiment {

namespace {

constexpr double kNormalization = 15.0;

std::string lowercase(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = char(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

Lexicon load_lexicon(const std::string& path) {
    const auto lines = csv::read_lines(path);
    Lexicon lex;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto tab = lines[i].find('\t');
        if (tab == std::string::npos) {
            throw ParseError(path + ":" + std::to_string(i + 1) + ": expected token<TAB>valence");
        }
        const std::string token = lowercase(lines[i].substr(0, tab));
        if (token.empty()) {
            throw ValidationError(path + ":" + std::to_string(i + 1) + ": empty token");
        }
        const double valence = parse_double(lines[i].substr(tab + 1));
        if (!(valence >= -4.0 && valence <= 4.0)) {
            throw ValidationError(path + ":" + std::to_string(i + 1) +
                                  ": valence outside [-4,4]");
        }
        if (!lex.entries.emplace(token, valence).second) {
            throw ValidationError(path + ":" + std::to_string(i + 1) + ": duplicate token '" +
                                  token + "'");
        }
    }
    return lex;
}

SentimentSeries load_scores(const std::string& path, const std::string& symbol,
                            const csv::WarnFn& warn) {
    return csv::load_sentiment_csv(path, symbol, warn);
}

void save_scores(const std::string& path, const SentimentSeries& series) {
    csv::save_sentiment_csv(path, series);
}

double lexicon_compound(const std::string& text, const Lexicon& lexicon) {
    double sum = 0.0;
    std::string token;
    const auto flush = [&] {
        if (token.empty()) return;
        const auto it = lexicon.entries.find(token);
        if (it != lexicon.entries.end()) sum += it->second;
        token.clear();
    };
    for (char raw : text) {
        const unsigned char c = static_cast<unsigned char>(raw);
        if (std::isalnum(c) || raw == '\'') {
            token.push_back(char(std::tolower(c)));
        } else {
            flush();
        }
    }
    flush();
    if (sum == 0.0) return 0.0;
    return sum / std::sqrt(sum * sum + kNormalization);
}

DailySentiment daily_compound(const std::vector<std::string>& comments, const Lexicon& lexicon,
                              const std::string& symbol, const TradingDay& day) {
    DailySentiment out;
    out.symbol = symbol;
    out.day = day;
    out.comment_count = int(comments.size());
    if (comments.empty()) {
        out.score = 0.0;
        return out;
    }
    std::string joined;
    for (std::size_t i = 0; i < comments.size(); ++i) {
        if (i > 0) joined += ' ';
        joined += comments[i];
    }
    out.score = lexicon_compound(joined, lexicon);
    return out;
}

std::map<std::string, SentimentSeries> score_comments_jsonl(const std::string& path,
                                                            const Lexicon& lexicon) {
    const auto lines = csv::read_lines(path);
    std::map<std::string, std::map<Date, std::vector<std::string>>> grouped;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(lines[i]);
            grouped[j.at("symbol").get<std::string>()]
                   [parse_iso_date(j.at("date").get<std::string>())]
                       .push_back(j.at("body").get<std::string>());
        } catch (const std::exception& e) {
            throw ParseError(path + ":" + std::to_string(i + 1) + ": " + e.what());
        }
    }
    std::map<std::string, SentimentSeries> out;
    for (const auto& [symbol, by_day] : grouped) {
        SentimentSeries series;
        series.symbol = symbol;
        int ordinal = 0;
        for (const auto& [date, comments] : by_day) {
            const auto daily =
                daily_compound(comments, lexicon, symbol, TradingDay{date, ordinal});
            series.points.push_back({TradingDay{date, ordinal}, daily.score});
            ++ordinal;
        }
        out.emplace(symbol, std::move(series));
    }
    return out;
}

}  // namespace anomcast::sentiment
