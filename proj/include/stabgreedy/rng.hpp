#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace stabgreedy {

/// Seedable generator with a portable output sequence.
///
/// The engine is std::mt19937_64, whose output is fixed by the standard. The
/// standard distributions are not portable across library implementations, so
/// doubles and bounded integers are derived from raw engine output here.
///
/// Independent streams are obtained with Rng(seed, stream): the pair is mixed
/// through splitmix64 to form the engine seed.
class Rng {
public:
    static constexpr std::string_view kGeneratorName = "mt19937_64+splitmix64";

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n), unbiased (rejection on the top range).
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace stabgreedy
