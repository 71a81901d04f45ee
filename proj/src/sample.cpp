#include "anomcast/sample.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "anomcast/csv.hpp"
#include "anomcast/errors.hpp"
#include "anomcast/util.hpp"

namespace anomcast::sample {

namespace {

std::vector<Date> weekday_calendar(int first_year, int last_year) {
    std::vector<Date> days;
    Date d{first_year, 1, 1};
    const Date end{last_year, 12, 31};
    while (!(end < d)) {
        if (!d.is_weekend()) days.push_back(d);
        d = add_days(d, 1);
    }
    return days;
}

// Interior positions of one year's day range, pairwise at least min_gap
// apart and clear of the year edges so every window fits inside the year.
std::vector<int> pick_shock_positions(Rng& rng, int year_begin, int year_end, int count,
                                      int min_gap) {
    const int margin = 8;
    std::vector<int> picks;
    int attempts = 0;
    while (int(picks.size()) < count && attempts < 10000) {
        ++attempts;
        const int lo = year_begin + margin;
        const int hi = year_end - margin;
        const int pos = lo + int(rng.uniform_int(std::uint64_t(hi - lo)));
        bool ok = true;
        for (int other : picks) {
            if (std::abs(other - pos) < min_gap) {
                ok = false;
                break;
            }
        }
        if (ok) picks.push_back(pos);
    }
    if (int(picks.size()) < count) {
        throw Error("could not place the requested shocks");
    }
    std::sort(picks.begin(), picks.end());
    return picks;
}

}  // namespace

SampleSpec default_spec() {
    SampleSpec spec;
    spec.symbols = {
        {"AVIA", "Airlines", 84.0, 0.0005, 0.35, 0.009, 6},
        {"AERO", "Airlines", 142.0, 0.0003, 0.25, 0.011, 6},
        {"BNKA", "Banks", 53.0, 0.0007, 0.4, 0.008, 6},
        {"BNKB", "Banks", 310.0, 0.0004, 0.3, 0.01, 6},
        {"GLDX", "Gold", 27.0, 0.0006, 0.2, 0.012, 6},
    };
    return spec;
}

std::vector<GeneratedSymbol> generate(const SampleSpec& spec) {
    if (spec.symbols.empty()) throw ValidationError("sample spec has no symbols");
    const auto calendar = weekday_calendar(spec.history_year, spec.test_year);

    // Year boundaries within the calendar.
    int train_begin = -1, train_end = -1, test_begin = -1, test_end = -1;
    for (int i = 0; i < int(calendar.size()); ++i) {
        const int y = calendar[std::size_t(i)].year;
        if (y == spec.train_year) {
            if (train_begin < 0) train_begin = i;
            train_end = i;
        } else if (y == spec.test_year) {
            if (test_begin < 0) test_begin = i;
            test_end = i;
        }
    }
    if (train_begin < 0 || test_begin < 0) {
        throw ValidationError("sample years are not ordered history < train < test");
    }

    std::vector<GeneratedSymbol> out;
    for (const auto& sym : spec.symbols) {
        Rng rng(mix_seed(spec.seed, sym.symbol));

        std::set<int> shock_at;
        std::vector<int> picks =
            pick_shock_positions(rng, train_begin, train_end, sym.shocks_per_detect_year, 9);
        const auto test_picks =
            pick_shock_positions(rng, test_begin, test_end, sym.shocks_per_detect_year - 1, 9);
        picks.insert(picks.end(), test_picks.begin(), test_picks.end());
        shock_at.insert(picks.begin(), picks.end());

        GeneratedSymbol gen;
        gen.prices.symbol = sym.symbol;
        gen.prices.industry = sym.industry;
        gen.sentiments.symbol = sym.symbol;

        double level = sym.start_price;
        double prev_return = 0.0;
        double drift = sym.drift;  // wanders slowly, so levels are firmly I(1)
        int ordinal = 0;
        int sentiment_ordinal = 0;
        for (int i = 0; i < int(calendar.size()); ++i) {
            const Date date = calendar[std::size_t(i)];
            drift = std::clamp(drift + 0.0001 * rng.normal(), -0.002, 0.003);
            double r;
            if (i == 0) {
                r = 0.0;
            } else if (shock_at.count(i) > 0) {
                const double magnitude = 0.06 + 0.03 * rng.uniform();
                r = rng.uniform() < 0.5 ? -magnitude : magnitude;
                gen.shock_days.push_back(date);
            } else {
                r = drift + sym.ar_coeff * (prev_return - drift) + sym.noise_std * rng.normal();
                r = std::clamp(r, -0.05, 0.05);
            }
            prev_return = r;
            level *= (1.0 + r);
            gen.prices.points.push_back({TradingDay{date, ordinal++}, level});

            // Roughly one day in six has no comments at all.
            const bool has_comments = rng.uniform() >= 0.16;
            const double noise = 0.25 * rng.normal();
            if (has_comments) {
                const double score = std::clamp(0.7 * std::tanh(22.0 * r) + noise, -1.0, 1.0);
                gen.sentiments.points.push_back(
                    {TradingDay{date, sentiment_ordinal++}, score});
            }
        }
        validate(gen.prices);
        validate(gen.sentiments);
        out.push_back(std::move(gen));
    }
    return out;
}

void write_sample_dataset(const std::string& dir, const SampleSpec& spec) {
    const auto generated = generate(spec);

    std::string industries = "Symbol,Industry\n";
    std::string shocks = "Symbol,Date\n";
    for (std::size_t i = 0; i < generated.size(); ++i) {
        const auto& gen = generated[i];
        csv::save_price_csv(dir + "/prices/" + gen.prices.symbol + ".csv", gen.prices);
        csv::save_sentiment_csv(dir + "/sentiments/" + gen.prices.symbol + ".csv",
                                gen.sentiments);
        industries += gen.prices.symbol + "," + gen.prices.industry + "\n";
        for (const auto& d : gen.shock_days) {
            shocks += gen.prices.symbol + "," + to_iso_string(d) + "\n";
        }
    }
    csv::write_file(dir + "/industries.csv", industries);
    csv::write_file(dir + "/shock_days.csv", shocks);

    const std::string config = std::string("{\n") +
        "  \"prices_dir\": \"prices\",\n"
        "  \"sentiments_dir\": \"sentiments\",\n"
        "  \"industry_file\": \"industries.csv\",\n"
        "  \"out_dir\": \"out\",\n"
        "  \"training_year\": " + std::to_string(spec.history_year) + ",\n"
        "  \"fallback_year\": " + std::to_string(spec.history_year - 1) + ",\n"
        "  \"train_window_year\": " + std::to_string(spec.train_year) + ",\n"
        "  \"test_window_year\": " + std::to_string(spec.test_year) + ",\n"
        "  \"outlier_threshold\": 2.0,\n"
        "  \"exog_policy\": \"hold-last\",\n"
        "  \"scales\": [\"universal\", \"industry\", \"single\"],\n"
        "  \"models\": [\"sarimax\", \"lstm\"],\n"
        "  \"seed\": 42,\n"
        "  \"lstm\": {\n"
        "    \"learning_rate\": 0.001,\n"
        "    \"beta1\": 0.9,\n"
        "    \"beta2\": 0.999,\n"
        "    \"epsilon\": 1e-08,\n"
        "    \"epochs\": 100\n"
        "  }\n"
        "}\n";
    csv::write_file(dir + "/config.json", config);
}

}  // namespace anomcast::sample
