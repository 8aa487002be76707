#pragma once

#include <cstdint>
#include <random>

namespace ebmc {

// SplitMix64 step; used only to derive independent stream seeds from a run seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic RNG wrapper. All distributions are implemented here rather
// than with std:: distribution objects, whose output is implementation-defined;
// identical seeds must reproduce identical byte-level results everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    // uniform in [0, 1) with 53 random bits
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // uniform in [0, n)
    int uniform_int(int n) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }

    // Knuth multiplication method; adequate for the modest rates used here.
    // lambda <= 0 yields 0 without consuming a draw.
    int poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        const double limit = std::exp(-lambda);
        int k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01();
        } while (p > limit);
        return k - 1;
    }

private:
    std::mt19937_64 gen_;
};

// Per-run stream bundle. Streams are derived by SplitMix64 so that adding or
// removing consumers of one stream never perturbs the draws of another.
struct RunStreams {
    Rng q_init;
    Rng env;
    Rng agent;
    Rng test_env;

    static RunStreams derive(std::uint64_t run_seed) {
        std::uint64_t s = run_seed;
        const std::uint64_t a = splitmix64(s);
        const std::uint64_t b = splitmix64(s);
        const std::uint64_t c = splitmix64(s);
        const std::uint64_t d = splitmix64(s);
        return RunStreams{Rng(a), Rng(b), Rng(c), Rng(d)};
    }
};

}  // namespace ebmc
