#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace anomcast {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// Strict double parse of the whole string. Throws ParseError otherwise.
double parse_double(const std::string& text);

double mean(const std::vector<double>& xs);

/// Unbiased sample variance (n-1 denominator). Requires xs.size() >= 2.
double sample_variance(const std::vector<double>& xs);

double sample_std(const std::vector<double>& xs);

/// Deterministic random source. The transforms from raw 64-bit outputs to
/// uniform/normal deviates are pinned here so seeded runs reproduce exactly
/// regardless of standard-library distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, 1).
    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Requires n > 0.
    std::uint64_t uniform_int(std::uint64_t n);

    /// Standard normal via Box-Muller.
    double normal();

    template <typename T>
    void shuffle(std::vector<T>& xs) {
        for (std::size_t i = xs.size(); i > 1; --i) {
            const std::size_t j = std::size_t(uniform_int(i));
            std::swap(xs[i - 1], xs[j]);
        }
    }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Mixes a string into a seed; used to derive per-pool training seeds.
std::uint64_t mix_seed(std::uint64_t seed, const std::string& tag);

}  // namespace anomcast
