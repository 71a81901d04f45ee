#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "anomcast/arima.hpp"
#include "anomcast/lstm.hpp"
#include "anomcast/outlier.hpp"
#include "anomcast/sarimax.hpp"
#include "anomcast/series.hpp"

#include <nlohmann/json_fwd.hpp>

namespace anomcast::pipeline {

enum class Scale { kUniversal, kIndustry, kSingle };
enum class ModelClass { kSarimax, kLstm };

std::string to_string(Scale scale);
std::string to_string(ModelClass model);
Scale scale_from_string(const std::string& name);
ModelClass model_class_from_string(const std::string& name);

struct SymbolConfig {
    std::string symbol;
    std::string industry;
};

struct ExperimentConfig {
    std::vector<SymbolConfig> symbols;
    int training_year = 2017;     // detector fits here ...
    int fallback_year = 2016;     // ... or here when the first year degenerates
    int train_window_year = 2018; // windows that feed model training
    int test_window_year = 2019;  // windows that are forecast and scored
    double outlier_threshold = 2.0;
    sarimax::ExogPolicy exog_policy = sarimax::ExogPolicy::kHoldLast;
    lstm::TrainConfig lstm_config;
    std::vector<Scale> scales{Scale::kUniversal, Scale::kIndustry, Scale::kSingle};
    std::vector<ModelClass> models{ModelClass::kSarimax, ModelClass::kLstm};
    std::string prices_dir;
    std::string sentiments_dir;
    std::string out_dir = "out";
    std::uint64_t seed = 42;

    void validate() const;
    std::map<std::string, std::string> industry_of() const;
};

/// JSON config document; relative paths resolve against the config file's
/// directory. Symbols come either from an inline "symbols" array of
/// {symbol, industry} or from an "industry_file" CSV (Symbol,Industry).
ExperimentConfig load_config(const std::string& path);

struct SymbolData {
    PriceSeries prices;
    SentimentSeries sentiments;  // aligned to the price calendar, gaps at 0
};

/// Loads and validates one (prices, sentiments) pair per configured symbol.
/// A missing sentiment file degrades to all-zero scores with a warning; a
/// missing price file is a hard error.
std::map<std::string, SymbolData> ingest(const ExperimentConfig& config);

struct SymbolDetection {
    std::string symbol;
    std::string industry;
    arima::ArimaOrder order;
    arima::ArimaModel model;
    bool used_fallback = false;
    int flags_train_year = 0;
    int flags_test_year = 0;
    outlier::ExtractionTally tally;
    std::vector<AnomalyWindow> train_windows;
    std::vector<AnomalyWindow> test_windows;
    std::string error;  // symbol was skipped when non-empty
};

struct DetectionResult {
    std::vector<SymbolDetection> symbols;
};

/// Per symbol: order selection + fit on the training year (fallback on
/// degenerate data), rolling one-step residuals over both detect years,
/// per-year studentization, flagging, window extraction, year filtering and
/// partitioning by the outlier day's year. Per-symbol failures are recorded,
/// not fatal.
DetectionResult detect(const ExperimentConfig& config,
                       const std::map<std::string, SymbolData>& data);

/// Windows grouped per symbol, ready for pooling; deterministic order.
struct WindowSets {
    std::map<std::string, std::vector<AnomalyWindow>> train;
    std::map<std::string, std::vector<AnomalyWindow>> test;
};

WindowSets window_sets(const DetectionResult& detection);

struct TrainingPool {
    Scale scale;
    std::string key;  // "universal", the industry name, or the symbol
    std::vector<AnomalyWindow> windows;
    std::set<std::string> target_symbols;  // symbols evaluated against this pool
};

/// Pools train-year windows at the requested scale and routes each target
/// symbol to the pool containing it. Pools with no windows are dropped here;
/// the affected targets surface as warnings during evaluation.
std::vector<TrainingPool> build_datasets(const WindowSets& sets, Scale scale,
                                         const std::map<std::string, std::string>& industry_of);

/// MAPE-style accuracy in percent: (1 - mean(|A-F|/A)) * 100.
double evaluate(std::span<const double> predicted_prices,
                std::span<const double> actual_prices);

struct WindowPrediction {
    ModelClass model;
    Scale scale;
    std::string symbol;
    AnomalyWindow window;
    std::array<double, 3> predicted_returns{};
    std::array<double, 3> predicted_prices{};
    std::array<double, 3> day_accuracy{};
    double window_accuracy = 0.0;
};

struct CellReport {
    ModelClass model;
    Scale scale;
    double avg_accuracy_pct = 0.0;  // mean over windows per symbol, then over symbols
    double time_sec = 0.0;          // training + prediction, monotonic clock
    int n_windows = 0;
    int n_symbols = 0;
    std::map<std::string, double> symbol_accuracy;
    std::vector<std::string> warnings;
};

struct EvaluationReport {
    std::vector<CellReport> cells;
    std::vector<WindowPrediction> predictions;

    const CellReport* find_cell(ModelClass model, Scale scale) const;
};

/// One trained pool model (exactly one of the two optionals is set).
struct TrainedPoolModel {
    ModelClass model;
    Scale scale;
    std::string key;
    int n_windows = 0;
    std::optional<sarimax::SarimaxModel> sarimax_model;
    std::optional<lstm::LstmModel> lstm_model;
    lstm::TrainConfig lstm_config;  // per-pool seeded config, kept for serialization
};

struct CellTiming {
    ModelClass model;
    Scale scale;
    double train_time_sec = 0.0;
    std::vector<std::string> warnings;
};

struct TrainedCells {
    std::vector<TrainedPoolModel> pools;
    std::vector<CellTiming> cells;
};

/// Trains every requested (model class, scale) cell on the train-year pools,
/// timing each cell with a monotonic clock. Pool-level failures become cell
/// warnings.
TrainedCells train_cells(const ExperimentConfig& config, const WindowSets& sets);

/// Forecasts each test-year window from its first 4 days with the pool model
/// that covers its symbol, reconstructs prices from the outlier-day anchor,
/// scores the MAPE-style accuracy, and folds prediction time into the cell
/// timings.
EvaluationReport predict_and_score(const ExperimentConfig& config, const WindowSets& sets,
                                   const TrainedCells& trained);

/// train_cells followed by predict_and_score. Partial failures are recorded
/// per cell; the report always comes back.
EvaluationReport run_experiment(const ExperimentConfig& config, const WindowSets& sets);

/// Writes results.csv (window rows with Predicted Price; conditioning rows
/// carry the literal N/A), plots/<symbol>_<outlier-date>.csv and report.json
/// under config.out_dir.
void emit_results(const ExperimentConfig& config, const WindowSets& sets,
                  const EvaluationReport& report,
                  const DetectionResult* detection = nullptr);

std::string results_csv_string(const EvaluationReport& report);
nlohmann::json report_to_json(const ExperimentConfig& config, const EvaluationReport& report,
                              const DetectionResult* detection);

}  // namespace anomcast::pipeline
