#include "anomcast/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <map>
#include <fstream>
#include <iostream>
#include <sstream>

#include "anomcast/errors.hpp"
#include "anomcast/util.hpp"

namespace anomcast::csv {

namespace {

void emit_warning(const WarnFn& warn, const std::string& message) {
    if (warn) {
        warn(message);
    } else {
        std::cerr << "warning: " << message << "\n";
    }
}

[[noreturn]] void line_error(const std::string& path, std::size_t line_no,
                             const std::string& what) {
    throw ParseError(path + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open file: " + path);
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

void write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        fs::create_directories(target.parent_path());
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write file: " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

PriceSeries load_price_csv(const std::string& path, const std::string& symbol,
                           const std::string& industry) {
    const auto lines = read_lines(path);
    if (lines.empty() || split_line(lines[0]).size() != 2) {
        throw ParseError(path + ":1: expected header 'Date,AdjClose'");
    }
    PriceSeries series;
    series.symbol = symbol;
    series.industry = industry;
    int ordinal = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = split_line(lines[i]);
        if (fields.size() != 2) line_error(path, i + 1, "expected 2 fields");
        Date date;
        double price;
        try {
            date = parse_iso_date(fields[0]);
            price = parse_double(fields[1]);
        } catch (const ParseError& e) {
            line_error(path, i + 1, e.what());
        }
        series.points.push_back({TradingDay{date, ordinal++}, price});
    }
    try {
        validate(series);
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
    return series;
}

void save_price_csv(const std::string& path, const PriceSeries& series) {
    std::string out = "Date,AdjClose\n";
    for (const auto& p : series.points) {
        out += to_iso_string(p.day.date) + "," + format_double(p.adj_close) + "\n";
    }
    write_file(path, out);
}

SentimentSeries load_sentiment_csv(const std::string& path, const std::string& symbol,
                                   const WarnFn& warn) {
    const auto lines = read_lines(path);
    if (lines.empty() || split_line(lines[0]).size() != 2) {
        throw ParseError(path + ":1: expected header 'Date,Score'");
    }
    // Last row wins for duplicate dates.
    std::map<Date, double> by_date;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = split_line(lines[i]);
        if (fields.size() != 2) line_error(path, i + 1, "expected 2 fields");
        Date date;
        double score;
        try {
            date = parse_iso_date(fields[0]);
            score = parse_double(fields[1]);
        } catch (const ParseError& e) {
            line_error(path, i + 1, e.what());
        }
        if (!(score >= -1.0 && score <= 1.0)) {
            throw ValidationError(path + ":" + std::to_string(i + 1) + ": score " +
                                  fields[1] + " outside [-1,1]");
        }
        if (by_date.count(date) > 0) {
            emit_warning(warn, path + ":" + std::to_string(i + 1) + ": duplicate date " +
                                   fields[0] + ", keeping the later row");
        }
        by_date[date] = score;
    }
    SentimentSeries series;
    series.symbol = symbol;
    int ordinal = 0;
    for (const auto& [date, score] : by_date) {
        series.points.push_back({TradingDay{date, ordinal++}, score});
    }
    return series;
}

void save_sentiment_csv(const std::string& path, const SentimentSeries& series) {
    std::string out = "Date,Score\n";
    for (const auto& p : series.points) {
        out += to_iso_string(p.day.date) + "," + format_double(p.score) + "\n";
    }
    write_file(path, out);
}

std::string window_csv_string(const std::vector<AnomalyWindow>& windows) {
    std::string out = "Symbols,Date,Outliers,Actuals,Percentage,S_Scores\n";
    for (const auto& w : windows) {
        for (int i = 0; i < kWindowLength; ++i) {
            out += w.symbol + "," + to_iso_string(w.days[i].date) + "," +
                   (i == kOutlierPos ? "1" : "0") + "," + format_double(w.actual_prices[i]) +
                   "," + format_double(w.returns[i]) + "," + format_double(w.sentiments[i]) +
                   "\n";
        }
    }
    return out;
}

void save_window_csv(const std::string& path, const std::vector<AnomalyWindow>& windows) {
    write_file(path, window_csv_string(windows));
}

std::vector<AnomalyWindow> load_window_csv(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || split_line(lines[0]).size() != 6) {
        throw ParseError(path + ":1: expected the 6-column window header");
    }
    std::vector<AnomalyWindow> windows;
    AnomalyWindow current;
    int row_in_block = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = split_line(lines[i]);
        if (fields.size() != 6) line_error(path, i + 1, "expected 6 fields");
        Date date;
        double price, pct, score;
        int flag;
        try {
            date = parse_iso_date(fields[1]);
            flag = int(parse_double(fields[2]));
            price = parse_double(fields[3]);
            pct = parse_double(fields[4]);
            score = parse_double(fields[5]);
        } catch (const ParseError& e) {
            line_error(path, i + 1, e.what());
        }
        if (row_in_block == 0) {
            current = AnomalyWindow{};
            current.symbol = fields[0];
        } else if (fields[0] != current.symbol) {
            line_error(path, i + 1, "symbol changes mid-window");
        }
        if ((flag == 1) != (row_in_block == kOutlierPos)) {
            line_error(path, i + 1, "outlier flag must be 1 exactly on the 4th row of a block");
        }
        // File order defines the window-local calendar; ordinals are not
        // part of the wire format and are re-derived as block indices.
        current.days[row_in_block] = TradingDay{date, row_in_block};
        current.actual_prices[row_in_block] = price;
        current.returns[row_in_block] = pct;
        current.sentiments[row_in_block] = score;
        if (row_in_block == kOutlierPos) current.outlier_day = current.days[row_in_block];
        ++row_in_block;
        if (row_in_block == kWindowLength) {
            try {
                validate(current);
            } catch (const ValidationError& e) {
                line_error(path, i + 1, e.what());
            }
            windows.push_back(current);
            row_in_block = 0;
        }
    }
    if (row_in_block != 0) {
        throw ParseError(path + ": trailing partial window block (" +
                         std::to_string(row_in_block) + " rows)");
    }
    return windows;
}

}  // namespace anomcast::csv
