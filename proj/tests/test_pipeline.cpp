#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "anomcast/csv.hpp"
#include "anomcast/pipeline.hpp"
#include "anomcast/sample.hpp"
#include "anomcast/util.hpp"
#include "test_util.hpp"

using namespace anomcast;
using pipeline::ExperimentConfig;
using pipeline::ModelClass;
using pipeline::Scale;

namespace {

/// A small generated dataset on disk plus its config, shared per test case.
ExperimentConfig small_fixture(const std::string& dir) {
    sample::SampleSpec spec;
    spec.seed = 90214;
    spec.symbols = {
        {"AAA", "Airlines", 80.0, 0.0005, 0.3, 0.009, 6},
        {"BBB", "Airlines", 150.0, 0.0004, 0.25, 0.01, 6},
        {"CCC", "Banks", 60.0, 0.0006, 0.35, 0.008, 6},
    };
    sample::write_sample_dataset(dir, spec);
    return pipeline::load_config(dir + "/config.json");
}

}  // namespace

TEST_CASE("evaluate implements the accuracy formula") {
    SUBCASE("perfect prediction scores 100") {
        const std::vector<double> a{100.0, 50.0, 75.0};
        CHECK(pipeline::evaluate(a, a) == doctest::Approx(100.0).epsilon(1e-12));
    }
    SUBCASE("reference single-day value") {
        const std::vector<double> pred{308.9663321};
        const std::vector<double> actual{298.920013};
        CHECK(std::abs(pipeline::evaluate(pred, actual) - 96.639) < 0.01);
    }
    SUBCASE("hand arithmetic") {
        const std::vector<double> pred{110.0, 100.0, 90.0};
        const std::vector<double> actual{100.0, 100.0, 100.0};
        CHECK(pipeline::evaluate(pred, actual) ==
              doctest::Approx((1.0 - 0.2 / 3.0) * 100.0).epsilon(1e-12));
    }
    SUBCASE("scale invariance under joint rescaling") {
        Rng rng(4);
        std::vector<double> pred, actual;
        for (int i = 0; i < 3; ++i) {
            actual.push_back(rng.uniform(10.0, 400.0));
            pred.push_back(actual.back() * (1.0 + rng.uniform(-0.08, 0.08)));
        }
        const double base = pipeline::evaluate(pred, actual);
        std::vector<double> pred2 = pred, actual2 = actual;
        for (double& v : pred2) v *= 7.5;
        for (double& v : actual2) v *= 7.5;
        CHECK(pipeline::evaluate(pred2, actual2) == doctest::Approx(base).epsilon(1e-12));
    }
    SUBCASE("non-positive actual errors") {
        CHECK_THROWS_AS(pipeline::evaluate(std::vector<double>{1.0},
                                           std::vector<double>{0.0}),
                        ValidationError);
    }
}

TEST_CASE("config validation catches contract violations") {
    ExperimentConfig cfg;
    cfg.symbols = {{"AAA", "Airlines"}};
    cfg.prices_dir = "prices";
    CHECK_NOTHROW(cfg.validate());

    SUBCASE("duplicate symbol") {
        cfg.symbols.push_back({"AAA", "Banks"});
        CHECK_THROWS_AS(cfg.validate(), ValidationError);
    }
    SUBCASE("missing industry") {
        cfg.symbols[0].industry.clear();
        CHECK_THROWS_AS(cfg.validate(), ValidationError);
    }
    SUBCASE("train and test window years must differ") {
        cfg.train_window_year = cfg.test_window_year = 2019;
        CHECK_THROWS_AS(cfg.validate(), ValidationError);
    }
    SUBCASE("threshold must be positive") {
        cfg.outlier_threshold = 0.0;
        CHECK_THROWS_AS(cfg.validate(), ValidationError);
    }
}

TEST_CASE("ingest validates inputs and zero-fills missing sentiment") {
    const std::string dir = "test_pipeline_tmp/ingest";
    std::filesystem::remove_all(dir);
    csv::write_file(dir + "/prices/AAA.csv",
                    "Date,AdjClose\n2018-01-02,100\n2018-01-03,101\n2018-01-04,99.5\n");
    ExperimentConfig cfg;
    cfg.symbols = {{"AAA", "Airlines"}};
    cfg.prices_dir = dir + "/prices";
    cfg.sentiments_dir = dir + "/sentiments";  // no files there

    const auto data = pipeline::ingest(cfg);
    REQUIRE(data.count("AAA") == 1);
    const auto& aligned = data.at("AAA").sentiments;
    REQUIRE(aligned.points.size() == 3);
    for (const auto& p : aligned.points) CHECK(p.score == 0.0);

    SUBCASE("negative price is a validation error") {
        csv::write_file(dir + "/prices/BBB.csv", "Date,AdjClose\n2018-01-02,-5\n");
        cfg.symbols.push_back({"BBB", "Banks"});
        CHECK_THROWS_AS(pipeline::ingest(cfg), ValidationError);
    }
    SUBCASE("missing price file is a hard error") {
        cfg.symbols.push_back({"ZZZ", "Banks"});
        CHECK_THROWS_AS(pipeline::ingest(cfg), ParseError);
    }
}

TEST_CASE("detect falls back to the earlier training year on degenerate data") {
    const std::string dir = "test_pipeline_tmp/fallback";
    std::filesystem::remove_all(dir);

    // 2016 carries usable variation; 2017 is constant (the degenerate year);
    // 2018/2019 have one shock each.
    Rng rng(8);
    std::string csv_text = "Date,AdjClose\n";
    double level = 100.0;
    Date d{2016, 1, 4};
    int day_index = 0;
    while (d.year <= 2019) {
        if (!d.is_weekend()) {
            double r = 0.0;
            if (d.year == 2016) {
                r = 0.004 * rng.normal();
            } else if (d.year >= 2018) {
                r = 0.0035 * rng.normal();
                if (d.year == 2018 && day_index == 560) r = 0.08;
                if (d.year == 2019 && day_index == 820) r = -0.08;
            }
            level *= (1.0 + r);
            csv_text += to_iso_string(d) + "," + format_double(level) + "\n";
            ++day_index;
        }
        d = add_days(d, 1);
    }
    csv::write_file(dir + "/prices/FBK.csv", csv_text);

    ExperimentConfig cfg;
    cfg.symbols = {{"FBK", "Banks"}};
    cfg.prices_dir = dir + "/prices";
    const auto detection = pipeline::detect(cfg, pipeline::ingest(cfg));
    REQUIRE(detection.symbols.size() == 1);
    const auto& det = detection.symbols[0];
    CHECK(det.error.empty());
    CHECK(det.used_fallback);  // 2017 degenerates, 2016 works
    CHECK(det.flags_train_year >= 1);
    CHECK(det.flags_test_year >= 1);
}

TEST_CASE("build_datasets pools windows by scale") {
    pipeline::WindowSets sets;
    const auto win = [](const std::string& sym, int month) {
        return testutil::make_window(sym, Date{2018, month, 5},
                                     {0.01, 0.0, -0.01, 0.05, 0.0, 0.01, 0.0},
                                     {0, 0, 0, 0, 0, 0, 0});
    };
    sets.train["AAA"] = {win("AAA", 2), win("AAA", 5)};
    sets.train["BBB"] = {win("BBB", 3)};
    sets.train["CCC"] = {win("CCC", 4)};
    sets.test["AAA"] = {win("AAA", 8)};
    sets.test["BBB"] = {win("BBB", 9)};
    sets.test["DDD"] = {win("DDD", 10)};  // has test windows, no training data
    const std::map<std::string, std::string> industries{
        {"AAA", "Airlines"}, {"BBB", "Airlines"}, {"CCC", "Banks"}, {"DDD", "Gold"}};

    SUBCASE("universal pools everything and covers every test symbol") {
        const auto pools = pipeline::build_datasets(sets, Scale::kUniversal, industries);
        REQUIRE(pools.size() == 1);
        CHECK(pools[0].key == "universal");
        CHECK(pools[0].windows.size() == 4);  // disjoint union of the per-symbol counts
        CHECK(pools[0].target_symbols ==
              std::set<std::string>{"AAA", "BBB", "DDD"});
    }
    SUBCASE("industry pools union within the industry") {
        const auto pools = pipeline::build_datasets(sets, Scale::kIndustry, industries);
        REQUIRE(pools.size() == 2);  // Airlines and Banks have training windows
        const auto& airlines = pools[0].key == "Airlines" ? pools[0] : pools[1];
        CHECK(airlines.windows.size() == 3);
        CHECK(airlines.target_symbols == std::set<std::string>{"AAA", "BBB"});
    }
    SUBCASE("single pools are per symbol") {
        const auto pools = pipeline::build_datasets(sets, Scale::kSingle, industries);
        REQUIRE(pools.size() == 3);
        for (const auto& pool : pools) {
            for (const auto& w : pool.windows) CHECK(w.symbol == pool.key);
        }
    }
}

TEST_CASE("run_experiment end to end on a generated fixture") {
    const std::string dir = "test_pipeline_tmp/e2e";
    std::filesystem::remove_all(dir);
    ExperimentConfig cfg = small_fixture(dir);
    cfg.lstm_config.epochs = 30;  // keep the test quick

    const auto data = pipeline::ingest(cfg);
    const auto detection = pipeline::detect(cfg, data);
    const auto sets = pipeline::window_sets(detection);
    REQUIRE(!sets.train.empty());
    REQUIRE(!sets.test.empty());

    SUBCASE("5 injected test-year shocks per symbol yield at least 4 test windows") {
        for (const auto& det : detection.symbols) {
            REQUIRE(det.error.empty());
            CHECK(det.test_windows.size() >= 4);
        }
    }

    const auto report = pipeline::run_experiment(cfg, sets);

    SUBCASE("a 2x3 grid of cells comes back") {
        CHECK(report.cells.size() == 6);
        for (const ModelClass m : {ModelClass::kSarimax, ModelClass::kLstm}) {
            for (const Scale s : {Scale::kUniversal, Scale::kIndustry, Scale::kSingle}) {
                const auto* cell = report.find_cell(m, s);
                REQUIRE(cell != nullptr);
                CHECK(cell->n_windows > 0);
                CHECK(cell->time_sec >= 0.0);
            }
        }
    }
    SUBCASE("every prediction carries 3 days and consistent accuracy") {
        for (const auto& p : report.predictions) {
            for (int i = 0; i < 3; ++i) {
                CHECK(std::isfinite(p.predicted_prices[std::size_t(i)]));
                CHECK(p.predicted_prices[std::size_t(i)] > 0.0);
            }
            const std::span<const double> pred(p.predicted_prices.data(), 3);
            const std::span<const double> actual(p.window.actual_prices.data() + 4, 3);
            CHECK(p.window_accuracy ==
                  doctest::Approx(pipeline::evaluate(pred, actual)).epsilon(1e-12));
            // The window mean is the arithmetic mean of the 3 day accuracies.
            const double day_mean = (p.day_accuracy[0] + p.day_accuracy[1] +
                                     p.day_accuracy[2]) / 3.0;
            CHECK(p.window_accuracy == doctest::Approx(day_mean).epsilon(1e-9));
        }
    }
    SUBCASE("cell averages recompute from the per-window records") {
        for (const auto& cell : report.cells) {
            std::map<std::string, std::vector<double>> per_symbol;
            for (const auto& p : report.predictions) {
                if (p.model == cell.model && p.scale == cell.scale) {
                    per_symbol[p.symbol].push_back(p.window_accuracy);
                }
            }
            REQUIRE(int(per_symbol.size()) == cell.n_symbols);
            double acc = 0.0;
            for (const auto& [symbol, values] : per_symbol) {
                acc += mean(values);
                CHECK(cell.symbol_accuracy.at(symbol) ==
                      doctest::Approx(mean(values)).epsilon(1e-12));
            }
            CHECK(cell.avg_accuracy_pct ==
                  doctest::Approx(acc / double(cell.n_symbols)).epsilon(1e-12));
        }
    }
    SUBCASE("no test window appears in any training pool") {
        std::set<std::pair<std::string, std::string>> train_keys;
        for (const auto& [symbol, ws] : sets.train) {
            for (const auto& w : ws) {
                train_keys.emplace(symbol, to_iso_string(w.outlier_day.date));
            }
        }
        for (const auto& [symbol, ws] : sets.test) {
            for (const auto& w : ws) {
                CHECK(train_keys.count({symbol, to_iso_string(w.outlier_day.date)}) == 0);
            }
        }
    }
    SUBCASE("rerunning with the same config reproduces the results byte for byte") {
        const auto report2 = pipeline::run_experiment(cfg, sets);
        CHECK(pipeline::results_csv_string(report) == pipeline::results_csv_string(report2));
    }
}

TEST_CASE("emit_results writes the documented artifacts") {
    const std::string dir = "test_pipeline_tmp/emit";
    std::filesystem::remove_all(dir);
    ExperimentConfig cfg = small_fixture(dir);
    cfg.lstm_config.epochs = 20;
    cfg.out_dir = dir + "/out";
    cfg.scales = {Scale::kUniversal};

    const auto data = pipeline::ingest(cfg);
    const auto detection = pipeline::detect(cfg, data);
    const auto sets = pipeline::window_sets(detection);
    const auto report = pipeline::run_experiment(cfg, sets);
    pipeline::emit_results(cfg, sets, report, &detection);

    SUBCASE("results.csv blocks carry N/A on the conditioning rows") {
        const auto lines = csv::read_lines(cfg.out_dir + "/results.csv");
        REQUIRE(lines.size() > 1);
        CHECK(lines[0] ==
              "Symbols,Date,Outliers,Actuals,Percentage,S_Scores,Predicted Price,Model,Scale");
        // (lines.size()-1) data rows in blocks of 7.
        CHECK((lines.size() - 1) % 7 == 0);
        for (std::size_t block = 1; block < lines.size(); block += 7) {
            for (int row = 0; row < 7; ++row) {
                const auto fields = csv::split_line(lines[block + std::size_t(row)]);
                REQUIRE(fields.size() == 9);
                CHECK(fields[2] == (row == 3 ? "1" : "0"));
                if (row  <= 3) {
                    CHECK(fields[6] == "N/A");
                } else {
                    CHECK(fields[6] != "N/A");
                    CHECK(parse_double(fields[6]) > 0.0);
                }
            }
        }
    }
    SUBCASE("one plot file per evaluated window, actual plus one column per variant") {
        std::set<std::pair<std::string, std::string>> expected;
        for (const auto& p : report.predictions) {
            expected.emplace(p.symbol, to_iso_string(p.window.outlier_day.date));
        }
        for (const auto& [symbol, date] : expected) {
            const std::string path = cfg.out_dir + "/plots/" + symbol + "_" + date + ".csv";
            REQUIRE_MESSAGE(std::filesystem::exists(path), path);
            const auto lines = csv::read_lines(path);
            REQUIRE(lines.size() == 8);  // header + 7 days
            CHECK(lines[0] == "Day,Actual,sarimax_universal,lstm_universal");
        }
    }
    SUBCASE("report.json matches the in-memory report") {
        std::ifstream in(cfg.out_dir + "/report.json");
        REQUIRE(in.good());
        nlohmann::json j;
        in >> j;
        REQUIRE(j.at("cells").size() == report.cells.size());
        for (std::size_t i = 0; i < report.cells.size(); ++i) {
            CHECK(j.at("cells")[i].at("avg_accuracy_pct").get<double>() ==
                  report.cells[i].avg_accuracy_pct);
            CHECK(j.at("cells")[i].at("n_windows").get<int>() == report.cells[i].n_windows);
        }
        CHECK(j.contains("diagnostics"));
    }
}

TEST_CASE("emit with an empty prediction set writes header-only results") {
    ExperimentConfig cfg;
    cfg.symbols = {{"AAA", "Airlines"}};
    cfg.prices_dir = "unused";
    cfg.out_dir = "test_pipeline_tmp/empty_out";
    std::filesystem::remove_all(cfg.out_dir);
    pipeline::emit_results(cfg, pipeline::WindowSets{}, pipeline::EvaluationReport{});
    const auto lines = csv::read_lines(cfg.out_dir + "/results.csv");
    REQUIRE(lines.size() == 1);
    CHECK(lines[0] ==
          "Symbols,Date,Outliers,Actuals,Percentage,S_Scores,Predicted Price,Model,Scale");
    CHECK_FALSE(std::filesystem::exists(cfg.out_dir + "/plots"));
}

TEST_CASE("industry file config loading resolves relative paths") {
    const std::string dir = "test_pipeline_tmp/config";
    std::filesystem::remove_all(dir);
    csv::write_file(dir + "/industries.csv", "Symbol,Industry\nAAA,Airlines\nBBB,Banks\n");
    csv::write_file(dir + "/config.json",
                    "{\n"
                    "  \"industry_file\": \"industries.csv\",\n"
                    "  \"prices_dir\": \"prices\",\n"
                    "  \"out_dir\": \"out\",\n"
                    "  \"exog_policy\": \"oracle\",\n"
                    "  \"scales\": [\"single\"],\n"
                    "  \"models\": [\"lstm\"]\n"
                    "}\n");
    const auto cfg = pipeline::load_config(dir + "/config.json");
    REQUIRE(cfg.symbols.size() == 2);
    CHECK(cfg.symbols[0].symbol == "AAA");
    CHECK(cfg.symbols[1].industry == "Banks");
    CHECK(cfg.exog_policy == sarimax::ExogPolicy::kOracle);
    CHECK(cfg.scales == std::vector<Scale>{Scale::kSingle});
    CHECK(cfg.models == std::vector<ModelClass>{ModelClass::kLstm});
    CHECK(cfg.prices_dir.find(dir) != std::string::npos);  // resolved against the config dir
}
