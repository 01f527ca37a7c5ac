#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace gapstat {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stable stream-id mixing: derive_seed(s, a, b, ...) is a pure function of its
// arguments, so logically independent work units get reproducible generators
// regardless of scheduling.
inline std::uint64_t derive_seed(std::uint64_t master) {
    std::uint64_t s = master ^ 0xd1b54a32d192ed03ULL;
    return splitmix64(s);
}

template <typename... Ids>
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t id, Ids... rest) {
    std::uint64_t s = master + 0x9e3779b97f4a7c15ULL * (id + 1);
    std::uint64_t mixed = splitmix64(s);
    if constexpr (sizeof...(rest) == 0) {
        return derive_seed(mixed);
    } else {
        return derive_seed(mixed, static_cast<std::uint64_t>(rest)...);
    }
}

// mt19937_64 is bit-exact across platforms; the double conversion below is ours
// because uniform_real_distribution is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    // Uniform in [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), n >= 1. Bias is < 2^-53 for the n used here.
    int uniform_index(int n) {
        return static_cast<int>(uniform() * static_cast<double>(n));
    }

    // Inverse-CDF sample; cdf is nondecreasing with cdf.back() == 1 (within fp).
    int sample_cdf(const std::vector<double>& cdf) {
        double u = uniform();
        int n = static_cast<int>(cdf.size());
        for (int i = 0; i < n - 1; ++i) {
            if (u < cdf[static_cast<std::size_t>(i)]) return i;
        }
        return n - 1;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace gapstat
