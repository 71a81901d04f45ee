#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "anomcast/sentiment.hpp"

// Turns a JSON-lines comments dump into per-symbol sentiment CSVs using the
// lexicon scorer, for running the pipeline without precomputed scores.
int main(int argc, char** argv) {
    CLI::App app{"Score a comments file into per-symbol sentiment CSVs"};
    std::string comments_path, lexicon_path, out_dir = "sentiments";
    app.add_option("--comments", comments_path, "JSON-lines comments file")->required();
    app.add_option("--lexicon", lexicon_path, "token<TAB>valence lexicon file")->required();
    app.add_option("--out", out_dir, "Output directory for <SYMBOL>.csv files");
    CLI11_PARSE(app, argc, argv);

    try {
        const auto lexicon = anomcast::sentiment::load_lexicon(lexicon_path);
        const auto scored = anomcast::sentiment::score_comments_jsonl(comments_path, lexicon);
        for (const auto& [symbol, series] : scored) {
            anomcast::sentiment::save_scores(out_dir + "/" + symbol + ".csv", series);
        }
        std::printf("wrote %zu sentiment series to %s\n", scored.size(), out_dir.c_str());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
