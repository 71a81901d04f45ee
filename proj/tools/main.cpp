#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "anomcast/csv.hpp"
#include "anomcast/pipeline.hpp"
#include "anomcast/util.hpp"

namespace fs = std::filesystem;
using namespace anomcast;

namespace {

struct CliOverrides {
    std::string config_path;
    std::string scale = "all";
    std::string model = "both";
    std::string exog_policy;
    std::string out;
    int epochs = -1;
    long long seed = -1;
};

void add_common_flags(CLI::App* cmd, CliOverrides& opt) {
    cmd->add_option("--config", opt.config_path, "Experiment config file (JSON)")
        ->required();
    cmd->add_option("--seed", opt.seed, "Override the experiment seed");
    cmd->add_option("--scale", opt.scale, "universal|industry|single|all")
        ->check(CLI::IsMember({"universal", "industry", "single", "all"}));
    cmd->add_option("--model", opt.model, "sarimax|lstm|both")
        ->check(CLI::IsMember({"sarimax", "lstm", "both"}));
    cmd->add_option("--exog-policy", opt.exog_policy, "zero|hold-last|oracle")
        ->check(CLI::IsMember({"zero", "hold-last", "oracle"}));
    cmd->add_option("--epochs", opt.epochs, "Override LSTM training epochs");
    cmd->add_option("--out", opt.out, "Override the output directory");
}

pipeline::ExperimentConfig resolve_config(const CliOverrides& opt) {
    pipeline::ExperimentConfig cfg = pipeline::load_config(opt.config_path);
    if (opt.seed >= 0) cfg.seed = std::uint64_t(opt.seed);
    if (opt.epochs >= 0) cfg.lstm_config.epochs = opt.epochs;
    if (!opt.exog_policy.empty()) {
        cfg.exog_policy = sarimax::exog_policy_from_string(opt.exog_policy);
    }
    if (!opt.out.empty()) cfg.out_dir = opt.out;
    if (opt.scale != "all") cfg.scales = {pipeline::scale_from_string(opt.scale)};
    if (opt.model != "both") cfg.models = {pipeline::model_class_from_string(opt.model)};
    return cfg;
}

std::string sanitize(const std::string& name) {
    std::string out;
    for (char c : name) {
        out += std::isalnum(static_cast<unsigned char>(c)) ? c : '-';
    }
    return out;
}

void save_windows(const pipeline::ExperimentConfig& cfg, const pipeline::WindowSets& sets) {
    std::vector<AnomalyWindow> train, test;
    for (const auto& [symbol, ws] : sets.train) {
        (void)symbol;
        train.insert(train.end(), ws.begin(), ws.end());
    }
    for (const auto& [symbol, ws] : sets.test) {
        (void)symbol;
        test.insert(test.end(), ws.begin(), ws.end());
    }
    csv::save_window_csv(cfg.out_dir + "/windows_train.csv", train);
    csv::save_window_csv(cfg.out_dir + "/windows_test.csv", test);
}

pipeline::WindowSets load_windows(const pipeline::ExperimentConfig& cfg, bool need_train,
                                  bool need_test) {
    pipeline::WindowSets sets;
    if (need_train) {
        for (auto& w : csv::load_window_csv(cfg.out_dir + "/windows_train.csv")) {
            sets.train[w.symbol].push_back(std::move(w));
        }
    }
    if (need_test) {
        for (auto& w : csv::load_window_csv(cfg.out_dir + "/windows_test.csv")) {
            sets.test[w.symbol].push_back(std::move(w));
        }
    }
    return sets;
}

pipeline::WindowSets detect_to_files(const pipeline::ExperimentConfig& cfg,
                                     pipeline::DetectionResult& detection) {
    const auto data = pipeline::ingest(cfg);
    detection = pipeline::detect(cfg, data);
    const auto sets = pipeline::window_sets(detection);
    save_windows(cfg, sets);

    nlohmann::json diag = pipeline::report_to_json(cfg, pipeline::EvaluationReport{},
                                                   &detection)["diagnostics"];
    csv::write_file(cfg.out_dir + "/detect_diagnostics.json",
                    nlohmann::json{{"symbols", diag}}.dump(2) + "\n");
    return sets;
}

void save_models(const pipeline::ExperimentConfig& cfg, const pipeline::TrainedCells& trained) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : trained.cells) {
        cells.push_back({{"model", pipeline::to_string(c.model)},
                         {"scale", pipeline::to_string(c.scale)},
                         {"train_time_sec", c.train_time_sec},
                         {"warnings", c.warnings}});
    }
    nlohmann::json pools = nlohmann::json::array();
    for (const auto& p : trained.pools) {
        const std::string file = pipeline::to_string(p.model) + "_" +
                                 pipeline::to_string(p.scale) + "_" + sanitize(p.key) + ".json";
        nlohmann::json body;
        if (p.sarimax_model) {
            body = sarimax::to_json(*p.sarimax_model);
        } else {
            body = lstm::to_json(*p.lstm_model, p.lstm_config);
        }
        csv::write_file(cfg.out_dir + "/models/" + file, body.dump(2) + "\n");
        pools.push_back({{"model", pipeline::to_string(p.model)},
                         {"scale", pipeline::to_string(p.scale)},
                         {"key", p.key},
                         {"n_windows", p.n_windows},
                         {"file", file}});
    }
    csv::write_file(cfg.out_dir + "/models/index.json",
                    nlohmann::json{{"cells", cells}, {"pools", pools}}.dump(2) + "\n");
}

pipeline::TrainedCells load_models(const pipeline::ExperimentConfig& cfg) {
    const std::string index_path = cfg.out_dir + "/models/index.json";
    std::ifstream in(index_path);
    if (!in) throw ParseError("cannot open " + index_path + " (run `train` first)");
    nlohmann::json j;
    in >> j;

    pipeline::TrainedCells trained;
    for (const auto& c : j.at("cells")) {
        pipeline::CellTiming timing;
        timing.model = pipeline::model_class_from_string(c.at("model"));
        timing.scale = pipeline::scale_from_string(c.at("scale"));
        timing.train_time_sec = c.at("train_time_sec").get<double>();
        timing.warnings = c.at("warnings").get<std::vector<std::string>>();
        trained.cells.push_back(std::move(timing));
    }
    for (const auto& p : j.at("pools")) {
        pipeline::TrainedPoolModel tpm;
        tpm.model = pipeline::model_class_from_string(p.at("model"));
        tpm.scale = pipeline::scale_from_string(p.at("scale"));
        tpm.key = p.at("key").get<std::string>();
        tpm.n_windows = p.at("n_windows").get<int>();
        std::ifstream body(cfg.out_dir + "/models/" + p.at("file").get<std::string>());
        nlohmann::json jm;
        body >> jm;
        if (tpm.model == pipeline::ModelClass::kSarimax) {
            tpm.sarimax_model = sarimax::sarimax_from_json(jm);
        } else {
            auto [net, net_cfg] = lstm::lstm_from_json(jm);
            tpm.lstm_model = std::move(net);
            tpm.lstm_config = net_cfg;
        }
        trained.pools.push_back(std::move(tpm));
    }
    return trained;
}

void print_grid(const pipeline::EvaluationReport& report) {
    std::printf("%-9s %-10s %12s %10s %9s %9s\n", "model", "scale", "accuracy(%)", "time(s)",
                "windows", "symbols");
    for (const auto& c : report.cells) {
        std::printf("%-9s %-10s %12.3f %10.3f %9d %9d\n",
                    pipeline::to_string(c.model).c_str(), pipeline::to_string(c.scale).c_str(),
                    c.avg_accuracy_pct, c.time_sec, c.n_windows, c.n_symbols);
        for (const auto& w : c.warnings) std::printf("    warning: %s\n", w.c_str());
    }
}

int run_detect(const CliOverrides& opt) {
    const auto cfg = resolve_config(opt);
    pipeline::DetectionResult detection;
    const auto sets = detect_to_files(cfg, detection);
    std::size_t train = 0, test = 0;
    for (const auto& [s, w] : sets.train) {
        (void)s;
        train += w.size();
    }
    for (const auto& [s, w] : sets.test) {
        (void)s;
        test += w.size();
    }
    std::printf("detected %zu training windows and %zu test windows across %zu symbols\n",
                train, test, detection.symbols.size());
    std::printf("wrote %s/windows_train.csv, windows_test.csv, detect_diagnostics.json\n",
                cfg.out_dir.c_str());
    return 0;
}

int run_train(const CliOverrides& opt) {
    const auto cfg = resolve_config(opt);
    const auto sets = load_windows(cfg, true, false);
    const auto trained = pipeline::train_cells(cfg, sets);
    save_models(cfg, trained);
    std::printf("trained %zu pool models; index at %s/models/index.json\n",
                trained.pools.size(), cfg.out_dir.c_str());
    for (const auto& c : trained.cells) {
        std::printf("  %s/%s: %.3f s\n", pipeline::to_string(c.model).c_str(),
                    pipeline::to_string(c.scale).c_str(), c.train_time_sec);
        for (const auto& w : c.warnings) std::printf("    warning: %s\n", w.c_str());
    }
    return 0;
}

int run_evaluate(const CliOverrides& opt) {
    const auto cfg = resolve_config(opt);
    auto sets = load_windows(cfg, true, true);
    const auto trained = load_models(cfg);
    const auto report = pipeline::predict_and_score(cfg, sets, trained);
    pipeline::emit_results(cfg, sets, report);
    print_grid(report);
    std::printf("wrote %s/results.csv, report.json, plots/\n", cfg.out_dir.c_str());
    return 0;
}

int run_report(const CliOverrides& opt) {
    const auto cfg = resolve_config(opt);
    const std::string path = cfg.out_dir + "/report.json";
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path + " (run `evaluate` or `run-all` first)");
    nlohmann::json j;
    in >> j;
    std::printf("%-9s %-10s %12s %10s %9s %9s\n", "model", "scale", "accuracy(%)", "time(s)",
                "windows", "symbols");
    for (const auto& c : j.at("cells")) {
        std::printf("%-9s %-10s %12.3f %10.3f %9d %9d\n",
                    c.at("model").get<std::string>().c_str(),
                    c.at("scale").get<std::string>().c_str(),
                    c.at("avg_accuracy_pct").get<double>(), c.at("time_sec").get<double>(),
                    c.at("n_windows").get<int>(), c.at("n_symbols").get<int>());
    }
    return 0;
}

int run_all(const CliOverrides& opt) {
    const auto cfg = resolve_config(opt);
    pipeline::DetectionResult detection;
    const auto sets = detect_to_files(cfg, detection);
    const auto trained = pipeline::train_cells(cfg, sets);
    save_models(cfg, trained);
    const auto report = pipeline::predict_and_score(cfg, sets, trained);
    pipeline::emit_results(cfg, sets, report, &detection);
    print_grid(report);
    std::printf("outputs under %s\n", cfg.out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stock-price forecasting over anomalous periods"};
    app.require_subcommand(1);

    CliOverrides opt;
    auto* detect_cmd =
        app.add_subcommand("detect", "Detect outliers and write window datasets");
    add_common_flags(detect_cmd, opt);
    auto* train_cmd = app.add_subcommand("train", "Train models on detected windows");
    add_common_flags(train_cmd, opt);
    auto* eval_cmd =
        app.add_subcommand("evaluate", "Score saved models on the test windows");
    add_common_flags(eval_cmd, opt);
    auto* report_cmd = app.add_subcommand("report", "Print the saved report grid");
    add_common_flags(report_cmd, opt);
    auto* all_cmd = app.add_subcommand("run-all", "Detect, train, evaluate and emit results");
    add_common_flags(all_cmd, opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (detect_cmd->parsed()) return run_detect(opt);
        if (train_cmd->parsed()) return run_train(opt);
        if (eval_cmd->parsed()) return run_evaluate(opt);
        if (report_cmd->parsed()) return run_report(opt);
        if (all_cmd->parsed()) return run_all(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
