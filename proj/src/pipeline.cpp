#include "anomcast/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <tuple>

#include <nlohmann/json.hpp>

#include "anomcast/csv.hpp"
#include "anomcast/util.hpp"

namespace anomcast::pipeline {

namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<double> levels_in_years(const PriceSeries& series, int first_year, int last_year) {
    std::vector<double> out;
    for (const auto& p : series.points) {
        if (p.day.date.year >= first_year && p.day.date.year <= last_year) {
            out.push_back(p.adj_close);
        }
    }
    return out;
}

std::vector<ModelClass> canonical_models(const ExperimentConfig& config) {
    std::vector<ModelClass> out;
    for (ModelClass m : {ModelClass::kSarimax, ModelClass::kLstm}) {
        if (std::find(config.models.begin(), config.models.end(), m) != config.models.end()) {
            out.push_back(m);
        }
    }
    return out;
}

std::vector<Scale> canonical_scales(const ExperimentConfig& config) {
    std::vector<Scale> out;
    for (Scale s : {Scale::kUniversal, Scale::kIndustry, Scale::kSingle}) {
        if (std::find(config.scales.begin(), config.scales.end(), s) != config.scales.end()) {
            out.push_back(s);
        }
    }
    return out;
}

std::string pool_key_for_symbol(Scale scale, const std::string& symbol,
                                const std::map<std::string, std::string>& industry_of) {
    switch (scale) {
        case Scale::kUniversal: return "universal";
        case Scale::kIndustry: {
            const auto it = industry_of.find(symbol);
            return it == industry_of.end() ? std::string() : it->second;
        }
        case Scale::kSingle: return symbol;
    }
    return {};
}

}  // namespace

std::string to_string(Scale scale) {
    switch (scale) {
        case Scale::kUniversal: return "universal";
        case Scale::kIndustry: return "industry";
        case Scale::kSingle: return "single";
    }
    return "universal";
}

std::string to_string(ModelClass model) {
    return model == ModelClass::kSarimax ? "sarimax" : "lstm";
}

Scale scale_from_string(const std::string& name) {
    if (name == "universal") return Scale::kUniversal;
    if (name == "industry") return Scale::kIndustry;
    if (name == "single") return Scale::kSingle;
    throw ValidationError("unknown scale: '" + name + "'");
}

ModelClass model_class_from_string(const std::string& name) {
    if (name == "sarimax") return ModelClass::kSarimax;
    if (name == "lstm") return ModelClass::kLstm;
    throw ValidationError("unknown model class: '" + name + "'");
}

void ExperimentConfig::validate() const {
    if (symbols.empty()) throw ValidationError("config lists no symbols");
    std::set<std::string> seen;
    for (const auto& s : symbols) {
        if (s.symbol.empty()) throw ValidationError("config contains an empty symbol");
        if (s.industry.empty()) {
            throw ValidationError("symbol " + s.symbol + " has no industry");
        }
        if (!seen.insert(s.symbol).second) {
            throw ValidationError("symbol " + s.symbol + " is configured twice");
        }
    }
    if (train_window_year == test_window_year) {
        throw ValidationError("training-window year must differ from the test-window year");
    }
    if (!(outlier_threshold > 0.0)) {
        throw ValidationError("outlier threshold must be positive");
    }
    if (prices_dir.empty()) throw ValidationError("prices_dir is required");
    if (scales.empty()) throw ValidationError("at least one scale is required");
    if (models.empty()) throw ValidationError("at least one model class is required");
    lstm_config.validate();
}

std::map<std::string, std::string> ExperimentConfig::industry_of() const {
    std::map<std::string, std::string> out;
    for (const auto& s : symbols) out[s.symbol] = s.industry;
    return out;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    const fs::path base = fs::path(path).parent_path();
    const auto resolve = [&](const std::string& p) {
        if (p.empty()) return p;
        const fs::path fp(p);
        return fp.is_absolute() ? p : (base / fp).string();
    };

    ExperimentConfig cfg;
    try {
        if (j.contains("symbols")) {
            for (const auto& s : j.at("symbols")) {
                cfg.symbols.push_back(
                    {s.at("symbol").get<std::string>(), s.at("industry").get<std::string>()});
            }
        }
        if (j.contains("industry_file")) {
            const std::string ipath = resolve(j.at("industry_file").get<std::string>());
            const auto lines = csv::read_lines(ipath);
            for (std::size_t i = 1; i < lines.size(); ++i) {
                if (lines[i].empty()) continue;
                const auto fields = csv::split_line(lines[i]);
                if (fields.size() != 2) {
                    throw ParseError(ipath + ":" + std::to_string(i + 1) +
                                     ": expected Symbol,Industry");
                }
                cfg.symbols.push_back({fields[0], fields[1]});
            }
        }
        if (j.contains("training_year")) cfg.training_year = j.at("training_year").get<int>();
        if (j.contains("fallback_year")) cfg.fallback_year = j.at("fallback_year").get<int>();
        if (j.contains("train_window_year")) {
            cfg.train_window_year = j.at("train_window_year").get<int>();
        }
        if (j.contains("test_window_year")) {
            cfg.test_window_year = j.at("test_window_year").get<int>();
        }
        if (j.contains("outlier_threshold")) {
            cfg.outlier_threshold = j.at("outlier_threshold").get<double>();
        }
        if (j.contains("exog_policy")) {
            cfg.exog_policy =
                sarimax::exog_policy_from_string(j.at("exog_policy").get<std::string>());
        }
        if (j.contains("scales")) {
            cfg.scales.clear();
            for (const auto& s : j.at("scales")) {
                cfg.scales.push_back(scale_from_string(s.get<std::string>()));
            }
        }
        if (j.contains("models")) {
            cfg.models.clear();
            for (const auto& m : j.at("models")) {
                cfg.models.push_back(model_class_from_string(m.get<std::string>()));
            }
        }
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("prices_dir")) cfg.prices_dir = resolve(j.at("prices_dir"));
        if (j.contains("sentiments_dir")) cfg.sentiments_dir = resolve(j.at("sentiments_dir"));
        if (j.contains("out_dir")) cfg.out_dir = resolve(j.at("out_dir"));
        if (j.contains("lstm")) {
            const auto& l = j.at("lstm");
            if (l.contains("learning_rate")) {
                cfg.lstm_config.learning_rate = l.at("learning_rate").get<double>();
            }
            if (l.contains("beta1")) cfg.lstm_config.beta1 = l.at("beta1").get<double>();
            if (l.contains("beta2")) cfg.lstm_config.beta2 = l.at("beta2").get<double>();
            if (l.contains("epsilon")) cfg.lstm_config.epsilon = l.at("epsilon").get<double>();
            if (l.contains("epochs")) cfg.lstm_config.epochs = l.at("epochs").get<int>();
            if (l.contains("seed")) cfg.lstm_config.seed = l.at("seed").get<std::uint64_t>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    cfg.validate();
    return cfg;
}

std::map<std::string, SymbolData> ingest(const ExperimentConfig& config) {
    config.validate();
    std::map<std::string, SymbolData> out;
    for (const auto& sym : config.symbols) {
        SymbolData data;
        const std::string price_path = config.prices_dir + "/" + sym.symbol + ".csv";
        data.prices = csv::load_price_csv(price_path, sym.symbol, sym.industry);
        if (data.prices.points.size() < 2) {
            throw ValidationError(price_path + ": fewer than 2 price rows");
        }

        SentimentSeries raw;
        raw.symbol = sym.symbol;
        if (!config.sentiments_dir.empty()) {
            const std::string spath = config.sentiments_dir + "/" + sym.symbol + ".csv";
            if (fs::exists(spath)) {
                raw = csv::load_sentiment_csv(spath, sym.symbol);
            } else {
                std::cerr << "warning: no sentiment file for " << sym.symbol
                          << ", using all-zero scores\n";
            }
        }
        data.sentiments = align(data.prices, raw);
        out.emplace(sym.symbol, std::move(data));
    }
    return out;
}

DetectionResult detect(const ExperimentConfig& config,
                       const std::map<std::string, SymbolData>& data) {
    DetectionResult result;
    for (const auto& sym : config.symbols) {
        SymbolDetection det;
        det.symbol = sym.symbol;
        det.industry = sym.industry;
        try {
            const auto it = data.find(sym.symbol);
            if (it == data.end()) throw Error("symbol missing from ingested data");
            const SymbolData& sd = it->second;

            // Fit on the training year; fall back when it cannot be used.
            arima::OrderSelection selection;
            try {
                const auto train_levels =
                    levels_in_years(sd.prices, config.training_year, config.training_year);
                selection = arima::select_order_detailed(train_levels);
            } catch (const Error& primary) {
                try {
                    const auto fb_levels =
                        levels_in_years(sd.prices, config.fallback_year, config.fallback_year);
                    selection = arima::select_order_detailed(fb_levels);
                    det.used_fallback = true;
                } catch (const Error& secondary) {
                    throw Error("training year " + std::to_string(config.training_year) +
                                " failed (" + primary.what() + "); fallback year " +
                                std::to_string(config.fallback_year) + " failed (" +
                                secondary.what() + ")");
                }
            }
            det.order = selection.order;
            det.model = selection.model;

            // Rolling one-step residuals, fixed coefficients, through the
            // end of the test-window year.
            const int last_year = std::max(config.train_window_year, config.test_window_year);
            std::vector<double> levels;
            std::vector<TradingDay> level_days;
            for (const auto& p : sd.prices.points) {
                if (p.day.date.year <= last_year) {
                    levels.push_back(p.adj_close);
                    level_days.push_back(p.day);
                }
            }
            const auto residuals = arima::one_step_residuals(det.model, levels);
            const int offset = arima::residual_offset(det.order);

            std::vector<outlier::OutlierFlag> all_flags;
            for (const int year : {config.train_window_year, config.test_window_year}) {
                std::vector<TradingDay> days;
                std::vector<double> values;
                for (std::size_t k = 0; k < residuals.size(); ++k) {
                    const TradingDay& day = level_days[k + std::size_t(offset)];
                    if (day.date.year == year) {
                        days.push_back(day);
                        values.push_back(residuals[k]);
                    }
                }
                if (days.empty()) {
                    throw InsufficientDataError("no residuals in detect year " +
                                                std::to_string(year));
                }
                const auto studentized = arima::studentize(values);
                std::vector<std::pair<TradingDay, double>> pairs;
                for (std::size_t k = 0; k < days.size(); ++k) {
                    pairs.emplace_back(days[k], studentized[k]);
                }
                const auto flags = outlier::flag_outliers(pairs, config.outlier_threshold);
                int count = 0;
                for (const auto& f : flags) count += f.flagged ? 1 : 0;
                if (year == config.train_window_year) {
                    det.flags_train_year = count;
                } else {
                    det.flags_test_year = count;
                }
                all_flags.insert(all_flags.end(), flags.begin(), flags.end());
            }

            const ReturnSeries returns = pct_change(sd.prices);
            auto windows = outlier::extract_windows(all_flags, sd.prices, returns,
                                                    sd.sentiments, &det.tally);
            windows = outlier::filter_year_crossing(windows, &det.tally);
            for (auto& w : windows) {
                if (w.outlier_day.date.year == config.train_window_year) {
                    det.train_windows.push_back(std::move(w));
                } else if (w.outlier_day.date.year == config.test_window_year) {
                    det.test_windows.push_back(std::move(w));
                }
            }
        } catch (const Error& e) {
            det.error = e.what();
            std::cerr << "warning: detection skipped " << sym.symbol << ": " << e.what()
                      << "\n";
        }
        result.symbols.push_back(std::move(det));
    }
    return result;
}

WindowSets window_sets(const DetectionResult& detection) {
    WindowSets sets;
    for (const auto& det : detection.symbols) {
        if (!det.error.empty()) continue;
        if (!det.train_windows.empty()) sets.train[det.symbol] = det.train_windows;
        if (!det.test_windows.empty()) sets.test[det.symbol] = det.test_windows;
    }
    return sets;
}

std::vector<TrainingPool> build_datasets(const WindowSets& sets, Scale scale,
                                         const std::map<std::string, std::string>& industry_of) {
    std::map<std::string, TrainingPool> pools;
    for (const auto& [symbol, windows] : sets.train) {
        const std::string key = pool_key_for_symbol(scale, symbol, industry_of);
        if (key.empty()) continue;
        TrainingPool& pool = pools[key];
        pool.scale = scale;
        pool.key = key;
        pool.windows.insert(pool.windows.end(), windows.begin(), windows.end());
    }
    for (const auto& [symbol, windows] : sets.test) {
        (void)windows;
        const std::string key = pool_key_for_symbol(scale, symbol, industry_of);
        const auto it = pools.find(key);
        if (it != pools.end()) it->second.target_symbols.insert(symbol);
    }
    std::vector<TrainingPool> out;
    out.reserve(pools.size());
    for (auto& [key, pool] : pools) {
        (void)key;
        out.push_back(std::move(pool));
    }
    return out;
}

double evaluate(std::span<const double> predicted_prices,
                std::span<const double> actual_prices) {
    if (predicted_prices.size() != actual_prices.size() || predicted_prices.empty()) {
        throw ValidationError("evaluate needs equal, non-empty price vectors");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < actual_prices.size(); ++i) {
        if (!(actual_prices[i] > 0.0)) {
            throw ValidationError("actual prices must be positive");
        }
        acc += std::abs(actual_prices[i] - predicted_prices[i]) / actual_prices[i];
    }
    return (1.0 - acc / double(actual_prices.size())) * 100.0;
}

const CellReport* EvaluationReport::find_cell(ModelClass model, Scale scale) const {
    for (const auto& c : cells) {
        if (c.model == model && c.scale == scale) return &c;
    }
    return nullptr;
}

TrainedCells train_cells(const ExperimentConfig& config, const WindowSets& sets) {
    const auto industries = config.industry_of();
    TrainedCells trained;

    for (const ModelClass model : canonical_models(config)) {
        for (const Scale scale : canonical_scales(config)) {
            CellTiming timing;
            timing.model = model;
            timing.scale = scale;
            const auto pools = build_datasets(sets, scale, industries);
            const auto start = std::chrono::steady_clock::now();
            for (const auto& pool : pools) {
                TrainedPoolModel tpm;
                tpm.model = model;
                tpm.scale = scale;
                tpm.key = pool.key;
                tpm.n_windows = int(pool.windows.size());
                if (model == ModelClass::kSarimax) {
                    if (pool.windows.size() < 5) {
                        timing.warnings.push_back("pool '" + pool.key +
                                                  "' skipped: SARIMAX needs >= 5 windows, has " +
                                                  std::to_string(pool.windows.size()));
                        continue;
                    }
                    try {
                        tpm.sarimax_model =
                            sarimax::select_sarimax_order_detailed(pool.windows).model;
                    } catch (const Error& e) {
                        timing.warnings.push_back("pool '" + pool.key + "' failed: " + e.what());
                        continue;
                    }
                } else {
                    if (pool.windows.empty()) {
                        timing.warnings.push_back("pool '" + pool.key + "' skipped: no windows");
                        continue;
                    }
                    lstm::TrainConfig cfg = config.lstm_config;
                    cfg.seed = mix_seed(config.seed + config.lstm_config.seed,
                                        "lstm/" + to_string(scale) + "/" + pool.key);
                    lstm::LstmModel net = lstm::init_model(cfg.seed);
                    try {
                        lstm::train(net, pool.windows, cfg);
                    } catch (const Error& e) {
                        timing.warnings.push_back("pool '" + pool.key + "' failed: " + e.what());
                        continue;
                    }
                    tpm.lstm_model = std::move(net);
                    tpm.lstm_config = cfg;
                }
                trained.pools.push_back(std::move(tpm));
            }
            timing.train_time_sec = seconds_since(start);
            trained.cells.push_back(std::move(timing));
        }
    }
    return trained;
}

EvaluationReport predict_and_score(const ExperimentConfig& config, const WindowSets& sets,
                                   const TrainedCells& trained) {
    const auto industries = config.industry_of();
    EvaluationReport report;

    // Leakage audit: no test window may appear in any training pool.
    {
        std::set<std::pair<std::string, std::string>> train_keys;
        for (const auto& [symbol, windows] : sets.train) {
            for (const auto& w : windows) {
                train_keys.emplace(symbol, to_iso_string(w.outlier_day.date));
            }
        }
        for (const auto& [symbol, windows] : sets.test) {
            for (const auto& w : windows) {
                if (train_keys.count({symbol, to_iso_string(w.outlier_day.date)}) > 0) {
                    throw ValidationError("test window " + symbol + "/" +
                                          to_iso_string(w.outlier_day.date) +
                                          " leaked into the training pool");
                }
            }
        }
    }

    const auto find_pool = [&](ModelClass model, Scale scale,
                               const std::string& key) -> const TrainedPoolModel* {
        for (const auto& p : trained.pools) {
            if (p.model == model && p.scale == scale && p.key == key) return &p;
        }
        return nullptr;
    };

    for (const CellTiming& timing : trained.cells) {
        CellReport cell;
        cell.model = timing.model;
        cell.scale = timing.scale;
        cell.warnings = timing.warnings;

        std::map<std::string, std::vector<double>> per_symbol;
        const auto start = std::chrono::steady_clock::now();
        for (const auto& [symbol, windows] : sets.test) {
            const std::string key = pool_key_for_symbol(timing.scale, symbol, industries);
            const TrainedPoolModel* pool = find_pool(timing.model, timing.scale, key);
            if (pool == nullptr) {
                cell.warnings.push_back("symbol " + symbol + " has no trained '" + key +
                                        "' pool at this scale");
                continue;
            }
            for (const auto& w : windows) {
                WindowPrediction wp;
                wp.model = timing.model;
                wp.scale = timing.scale;
                wp.symbol = symbol;
                wp.window = w;
                std::vector<double> rhat;
                try {
                    if (timing.model == ModelClass::kSarimax) {
                        rhat = sarimax::forecast_window(*pool->sarimax_model, w,
                                                        config.exog_policy);
                    } else {
                        const auto outputs = lstm::forward(*pool->lstm_model, w);
                        rhat.assign(outputs.begin(), outputs.end());
                    }
                    const auto prices = reconstruct_prices(w.actual_prices[kOutlierPos], rhat);
                    for (int i = 0; i < 3; ++i) {
                        wp.predicted_returns[std::size_t(i)] = rhat[std::size_t(i)];
                        wp.predicted_prices[std::size_t(i)] = prices[std::size_t(i)];
                        const double actual = w.actual_prices[std::size_t(kOutlierPos + 1 + i)];
                        wp.day_accuracy[std::size_t(i)] =
                            evaluate(std::span(&prices[std::size_t(i)], 1),
                                     std::span(&actual, 1));
                    }
                    const std::span<const double> pred3(wp.predicted_prices.data(), 3);
                    const std::span<const double> actual3(w.actual_prices.data() + 4, 3);
                    wp.window_accuracy = evaluate(pred3, actual3);
                } catch (const Error& e) {
                    cell.warnings.push_back("window " + symbol + "/" +
                                            to_iso_string(w.outlier_day.date) +
                                            " failed: " + e.what());
                    continue;
                }
                per_symbol[symbol].push_back(wp.window_accuracy);
                report.predictions.push_back(std::move(wp));
            }
        }
        cell.time_sec = timing.train_time_sec + seconds_since(start);

        double sum_over_symbols = 0.0;
        for (const auto& [symbol, accs] : per_symbol) {
            const double symbol_mean = mean(accs);
            cell.symbol_accuracy[symbol] = symbol_mean;
            sum_over_symbols += symbol_mean;
            cell.n_windows += int(accs.size());
        }
        cell.n_symbols = int(per_symbol.size());
        cell.avg_accuracy_pct =
            cell.n_symbols > 0 ? sum_over_symbols / double(cell.n_symbols)
                               : std::numeric_limits<double>::quiet_NaN();
        report.cells.push_back(std::move(cell));
    }
    return report;
}

EvaluationReport run_experiment(const ExperimentConfig& config, const WindowSets& sets) {
    return predict_and_score(config, sets, train_cells(config, sets));
}

std::string results_csv_string(const EvaluationReport& report) {
    std::vector<const WindowPrediction*> rows;
    rows.reserve(report.predictions.size());
    for (const auto& p : report.predictions) rows.push_back(&p);
    std::stable_sort(rows.begin(), rows.end(),
                     [](const WindowPrediction* a, const WindowPrediction* b) {
                         const auto key = [](const WindowPrediction& p) {
                             return std::make_tuple(int(p.model), int(p.scale), p.symbol,
                                                    p.window.outlier_day.date.serial());
                         };
                         return key(*a) < key(*b);
                     });

    std::string out =
        "Symbols,Date,Outliers,Actuals,Percentage,S_Scores,Predicted Price,Model,Scale\n";
    for (const WindowPrediction* p : rows) {
        const AnomalyWindow& w = p->window;
        for (int i = 0; i < kWindowLength; ++i) {
            out += w.symbol + "," + to_iso_string(w.days[std::size_t(i)].date) + "," +
                   (i == kOutlierPos ? "1" : "0") + "," +
                   format_double(w.actual_prices[std::size_t(i)]) + "," +
                   format_double(w.returns[std::size_t(i)]) + "," +
                   format_double(w.sentiments[std::size_t(i)]) + ",";
            if (i <= kOutlierPos) {
                out += "N/A";
            } else {
                out += format_double(p->predicted_prices[std::size_t(i - kOutlierPos - 1)]);
            }
            out += "," + to_string(p->model) + "," + to_string(p->scale) + "\n";
        }
    }
    return out;
}

nlohmann::json report_to_json(const ExperimentConfig& config, const EvaluationReport& report,
                              const DetectionResult* detection) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : report.cells) {
        nlohmann::json per_symbol;
        for (const auto& [symbol, acc] : c.symbol_accuracy) per_symbol[symbol] = acc;
        cells.push_back({{"model", to_string(c.model)},
                         {"scale", to_string(c.scale)},
                         {"avg_accuracy_pct", c.avg_accuracy_pct},
                         {"time_sec", c.time_sec},
                         {"n_windows", c.n_windows},
                         {"n_symbols", c.n_symbols},
                         {"per_symbol", per_symbol},
                         {"warnings", c.warnings}});
    }
    nlohmann::json windows = nlohmann::json::array();
    for (const auto& p : report.predictions) {
        windows.push_back(
            {{"model", to_string(p.model)},
             {"scale", to_string(p.scale)},
             {"symbol", p.symbol},
             {"outlier_date", to_iso_string(p.window.outlier_day.date)},
             {"window_accuracy_pct", p.window_accuracy},
             {"day_accuracy_pct", p.day_accuracy},
             {"predicted_returns", p.predicted_returns},
             {"predicted_prices", p.predicted_prices},
             {"actual_prices",
              std::vector<double>(p.window.actual_prices.begin() + 4,
                                  p.window.actual_prices.end())}});
    }
    nlohmann::json j{{"train_window_year", config.train_window_year},
                     {"test_window_year", config.test_window_year},
                     {"exog_policy", sarimax::to_string(config.exog_policy)},
                     {"seed", config.seed},
                     {"cells", cells},
                     {"windows", windows}};
    if (detection != nullptr) {
        nlohmann::json diags = nlohmann::json::array();
        for (const auto& det : detection->symbols) {
            diags.push_back({{"symbol", det.symbol},
                             {"industry", det.industry},
                             {"order", det.order.str()},
                             {"used_fallback_year", det.used_fallback},
                             {"flags_train_year", det.flags_train_year},
                             {"flags_test_year", det.flags_test_year},
                             {"windows_train", det.train_windows.size()},
                             {"windows_test", det.test_windows.size()},
                             {"dropped_insufficient_context",
                              det.tally.dropped_insufficient_context},
                             {"dropped_year_crossing", det.tally.dropped_year_crossing},
                             {"error", det.error}});
        }
        j["diagnostics"] = diags;
    }
    return j;
}

void emit_results(const ExperimentConfig& config, const WindowSets& sets,
                  const EvaluationReport& report, const DetectionResult* detection) {
    (void)sets;
    csv::write_file(config.out_dir + "/results.csv", results_csv_string(report));
    csv::write_file(config.out_dir + "/report.json",
                    report_to_json(config, report, detection).dump(2) + "\n");

    // Per-window plot data: one file per (symbol, outlier day), one column
    // per model variant that predicted it.
    std::map<std::pair<std::string, std::string>, const AnomalyWindow*> windows;
    std::map<std::pair<std::string, std::string>,
             std::map<std::pair<int, int>, const WindowPrediction*>>
        by_variant;
    for (const auto& p : report.predictions) {
        const auto key = std::make_pair(p.symbol, to_iso_string(p.window.outlier_day.date));
        windows[key] = &p.window;
        by_variant[key][{int(p.model), int(p.scale)}] = &p;
    }
    for (const auto& [key, window] : windows) {
        const auto& variants = by_variant[key];
        std::string out = "Day,Actual";
        for (const auto& [variant, p] : variants) {
            (void)variant;
            out += "," + to_string(p->model) + "_" + to_string(p->scale);
        }
        out += "\n";
        for (int i = 0; i < kWindowLength; ++i) {
            out += std::to_string(i) + "," +
                   format_double(window->actual_prices[std::size_t(i)]);
            for (const auto& [variant, p] : variants) {
                (void)variant;
                if (i <= kOutlierPos) {
                    out += ",N/A";
                } else {
                    out += "," +
                           format_double(p->predicted_prices[std::size_t(i - kOutlierPos - 1)]);
                }
            }
            out += "\n";
        }
        csv::write_file(config.out_dir + "/plots/" + key.first + "_" + key.second + ".csv",
                        out);
    }
}

}  // namespace anomcast::pipeline
