#include <doctest.h>

#include <cmath>

#include "anomcast/csv.hpp"
#include "anomcast/errors.hpp"
#include "anomcast/sentiment.hpp"
#include "anomcast/util.hpp"

using namespace anomcast;
using sentiment::Lexicon;

namespace {

Lexicon small_lexicon() {
    Lexicon lex;
    lex.entries = {{"good", 1.9},   {"great", 3.1},  {"bad", -2.5},
                   {"crash", -3.4}, {"bull", 2.0},   {"bear", -2.0},
                   {"profit", 2.2}, {"loss", -2.1}};
    return lex;
}

}  // namespace

TEST_CASE("lexicon_compound normalizes the valence sum") {
    const auto lex = small_lexicon();

    SUBCASE("empty text scores 0") { CHECK(sentiment::lexicon_compound("", lex) == 0.0); }
    SUBCASE("unmatched text scores 0") {
        CHECK(sentiment::lexicon_compound("the quick brown fox", lex) == 0.0);
    }
    SUBCASE("one token with valence 2.0") {
        const double got = sentiment::lexicon_compound("bull", lex);
        CHECK(std::abs(got - 2.0 / std::sqrt(4.0 + 15.0)) < 1e-12);
        CHECK(std::abs(got - 0.4588) < 1e-4);
    }
    SUBCASE("opposite valences cancel") {
        CHECK(sentiment::lexicon_compound("bull bear", lex) == 0.0);
    }
    SUBCASE("tokenization is case-insensitive and splits punctuation") {
        const double plain = sentiment::lexicon_compound("good profit", lex);
        const double noisy = sentiment::lexicon_compound("GOOD!!!,profit...", lex);
        CHECK(plain == noisy);
    }
}

TEST_CASE("lexicon_compound is bounded and monotone in the valence sum") {
    const auto lex = small_lexicon();
    std::string text;
    double prev = 0.0;
    for (int i = 0; i < 60; ++i) {
        text += i == 0 ? "great" : " great";
        const double v = sentiment::lexicon_compound(text, lex);
        CHECK(v > -1.0);
        CHECK(v < 1.0);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("lexicon_compound has odd symmetry under a sign-flipped lexicon") {
    const auto lex = small_lexicon();
    Lexicon flipped = lex;
    for (auto& [token, valence] : flipped.entries) valence = -valence;
    for (const std::string text :
         {"good great profit", "bad crash", "bull loss good", "bear bear bull"}) {
        CHECK(sentiment::lexicon_compound(text, lex) ==
              doctest::Approx(-sentiment::lexicon_compound(text, flipped)).epsilon(1e-15));
    }
}

TEST_CASE("daily_compound concatenates a day's comments") {
    const auto lex = small_lexicon();
    const TradingDay day{Date{2018, 3, 13}, 0};

    SUBCASE("no comments gives score exactly 0") {
        const auto d = sentiment::daily_compound({}, lex, "TSLA", day);
        CHECK(d.score == 0.0);
        CHECK(d.comment_count == 0);
    }
    SUBCASE("single word with valence 1.9") {
        const auto d = sentiment::daily_compound({"good"}, lex, "TSLA", day);
        CHECK(std::abs(d.score - 1.9 / std::sqrt(1.9 * 1.9 + 15.0)) < 1e-12);
        CHECK(std::abs(d.score - 0.4404) < 1e-4);
        CHECK(d.comment_count == 1);
    }
    SUBCASE("duplicate comments double the valence sum rather than averaging") {
        const auto once = sentiment::daily_compound({"good"}, lex, "TSLA", day);
        const auto twice = sentiment::daily_compound({"good", "good"}, lex, "TSLA", day);
        const double expected = 3.8 / std::sqrt(3.8 * 3.8 + 15.0);
        CHECK(std::abs(twice.score - expected) < 1e-12);
        CHECK(twice.score > once.score);
    }
}

TEST_CASE("lexicon file parsing") {
    const std::string dir = "test_sentiment_tmp";
    SUBCASE("valid file loads, tokens lowercased") {
        csv::write_file(dir + "/lex.tsv", "Good\t1.9\ncrash\t-3.4\n");
        const auto lex = sentiment::load_lexicon(dir + "/lex.tsv");
        CHECK(lex.entries.at("good") == 1.9);
        CHECK(lex.entries.at("crash") == -3.4);
    }
    SUBCASE("duplicate token is rejected") {
        csv::write_file(dir + "/dup.tsv", "good\t1.9\nGOOD\t2.0\n");
        CHECK_THROWS_AS(sentiment::load_lexicon(dir + "/dup.tsv"), ValidationError);
    }
    SUBCASE("valence outside [-4,4] is rejected") {
        csv::write_file(dir + "/range.tsv", "good\t4.5\n");
        CHECK_THROWS_AS(sentiment::load_lexicon(dir + "/range.tsv"), ValidationError);
    }
    SUBCASE("missing tab is a parse error") {
        csv::write_file(dir + "/bad.tsv", "good 1.9\n");
        CHECK_THROWS_AS(sentiment::load_lexicon(dir + "/bad.tsv"), ParseError);
    }
}

TEST_CASE("load_scores parses a reference daily score") {
    const std::string dir = "test_sentiment_tmp";
    csv::write_file(dir + "/tsla.csv", "Date,Score\n2018-03-13,0.889\n");
    const auto series = sentiment::load_scores(dir + "/tsla.csv", "TSLA");
    REQUIRE(series.points.size() == 1);
    CHECK(series.points[0].score == 0.889);
    CHECK(series.points[0].day.date == Date{2018, 3, 13});
}

TEST_CASE("score_comments_jsonl groups bodies per symbol and day") {
    const std::string dir = "test_sentiment_tmp";
    csv::write_file(dir + "/comments.jsonl",
                    R"({"date": "2018-03-13", "symbol": "TSLA", "body": "good profit"})"
                    "\n"
                    R"({"date": "2018-03-13", "symbol": "TSLA", "body": "crash"})"
                    "\n"
                    R"({"date": "2018-03-14", "symbol": "AAPL", "body": "great"})"
                    "\n");
    const auto lex = small_lexicon();
    const auto scored = sentiment::score_comments_jsonl(dir + "/comments.jsonl", lex);
    REQUIRE(scored.size() == 2);
    // good(1.9) + profit(2.2) + crash(-3.4) = 0.7 over one concatenated day.
    const double tsla = scored.at("TSLA").points.at(0).score;
    CHECK(std::abs(tsla - 0.7 / std::sqrt(0.7 * 0.7 + 15.0)) < 1e-12);
    const double aapl = scored.at("AAPL").points.at(0).score;
    CHECK(std::abs(aapl - 3.1 / std::sqrt(3.1 * 3.1 + 15.0)) < 1e-12);

    SUBCASE("malformed line reports its number") {
        csv::write_file(dir + "/bad.jsonl", "{\"date\": \"2018-01-05\"}\n");
        CHECK_THROWS_AS(sentiment::score_comments_jsonl(dir + "/bad.jsonl", lex), ParseError);
    }
}

TEST_CASE("save then load_scores is the identity") {
    const std::string dir = "test_sentiment_tmp";
    SentimentSeries series;
    series.symbol = "AAA";
    Rng rng(31);
    Date d{2019, 1, 2};
    for (int i = 0; i < 40; ++i) {
        while (d.is_weekend()) d = add_days(d, 1);
        series.points.push_back({TradingDay{d, i}, rng.uniform(-1.0, 1.0)});
        d = add_days(d, 1);
    }
    sentiment::save_scores(dir + "/round.csv", series);
    const auto loaded = sentiment::load_scores(dir + "/round.csv", "AAA");
    REQUIRE(loaded.points.size() == series.points.size());
    for (std::size_t i = 0; i < loaded.points.size(); ++i) {
        CHECK(loaded.points[i].day.date == series.points[i].day.date);
        CHECK(loaded.points[i].score == series.points[i].score);  // exact
    }
}
