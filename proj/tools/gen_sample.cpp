#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "anomcast/sample.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generate the bundled synthetic sample dataset"};
    std::string out_dir = "data/sample";
    std::uint64_t seed = anomcast::sample::default_spec().seed;
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--seed", seed, "Generator seed");
    CLI11_PARSE(app, argc, argv);

    try {
        auto spec = anomcast::sample::default_spec();
        spec.seed = seed;
        anomcast::sample::write_sample_dataset(out_dir, spec);
        std::printf("sample dataset written to %s\n", out_dir.c_str());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
