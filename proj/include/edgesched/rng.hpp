#ifndef EDGESCHED_RNG_HPP
#define EDGESCHED_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace edgesched {

// Deterministic draws on top of mt19937_64. std::uniform_int_distribution is
// implementation-defined, so reports would not be byte-stable across
// standard libraries; these helpers are fixed arithmetic on the raw stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Integer in [0, n).
    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(next() % n); }

    /// Double in [0, 1).
    double uniform() {
        return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0);
    }

    /// Fisher-Yates shuffle, stable across platforms for a given seed.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = pick(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace edgesched

#endif
