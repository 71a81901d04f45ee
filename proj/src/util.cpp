#include "anomcast/util.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

#include "anomcast/errors.hpp"

namespace anomcast {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw ParseError("invalid number: '" + text + "'");
    }
    return v;
}

double mean(const std::vector<double>& xs) {
    if (xs.empty()) throw InsufficientDataError("mean of empty vector");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / double(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) throw InsufficientDataError("sample variance needs >= 2 values");
    const double m = mean(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return acc / double(xs.size() - 1);
}

double sample_std(const std::vector<double>& xs) { return std::sqrt(sample_variance(xs)); }

std::uint64_t Rng::uniform_int(std::uint64_t n) {
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
    std::uint64_t x;
    do {
        x = eng_();
    } while (x >= limit);
    return x % n;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

std::uint64_t mix_seed(std::uint64_t seed, const std::string& tag) {
    // FNV-1a over the tag, then splitmix64 finalization.
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull + h;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace anomcast
