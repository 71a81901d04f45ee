#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anomcast/series.hpp"

namespace anomcast::sample {

/// One synthetic symbol: AR(1) daily returns with one-day shocks injected on
/// interior trading days of the detect years.
struct SymbolSpec {
    std::string symbol;
    std::string industry;
    double start_price = 100.0;
    double drift = 0.0004;       // mean daily return
    double ar_coeff = 0.3;       // AR(1) coefficient of the daily returns
    double noise_std = 0.009;    // innovation std; off-shock |return| <= 5%
    int shocks_per_detect_year = 6;
};

struct SampleSpec {
    std::uint64_t seed = 90214;
    int history_year = 2017;   // clean year the detector trains on
    int train_year = 2018;     // shocked year providing training windows
    int test_year = 2019;      // shocked year providing test windows
    std::vector<SymbolSpec> symbols;
};

/// Five symbols across three industries, the dataset bundled with the repo.
SampleSpec default_spec();

struct GeneratedSymbol {
    PriceSeries prices;          // weekday calendar over all three years
    SentimentSeries sentiments;  // sparse; days without comments are absent
    std::vector<Date> shock_days;
};

std::vector<GeneratedSymbol> generate(const SampleSpec& spec);

/// Writes prices/<SYM>.csv, sentiments/<SYM>.csv, industries.csv, a ready
/// config.json, and shock_days.csv (the injection ground truth).
void write_sample_dataset(const std::string& dir, const SampleSpec& spec);

}  // namespace anomcast::sample
