#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace padbench {

// FNV-1a, used for config hashes and seed derivation.
constexpr std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) {
    std::uint64_t h = seed;
    for (char c : data) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    return splitmix64(seed ^ splitmix64(salt));
}

// mt19937_64 with explicit output mappings. std::shuffle and the standard
// distributions are implementation-defined, so every draw we rely on for
// reproducible artifacts goes through this wrapper instead.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t u64() { return engine_(); }

    // Uniform in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

    int range(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Uniform double in [0, 1) with 53 bits.
    double real01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * real01(); }

    // Box-Muller; kept explicit so streams are identical on every platform.
    double normal(double mean = 0.0, double stddev = 1.0) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + stddev * spare_;
        }
        double u1 = 0.0;
        do {
            u1 = real01();
        } while (u1 <= 0.0);
        double u2 = real01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return mean + stddev * r * std::cos(theta);
    }

    // Fisher-Yates with explicit index draws.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace padbench
