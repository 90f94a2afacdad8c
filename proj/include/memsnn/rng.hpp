#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace memsnn {

/// Stream ids split off one run seed. Each consumer owns its stream so that
/// adding draws in one place never shifts another.
enum class RngStream : std::uint64_t {
    WeightInit = 1,
    Shuffle = 2,
    NeuronValidation = 3,
    StdpValidation = 4,
    TransferError = 5,
    Holdout = 6,
};

/// SplitMix64. Fully specified arithmetic, so draws are identical across
/// platforms and standard libraries (unlike std:: distributions).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    Rng(std::uint64_t seed, RngStream stream);

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n), rejection-sampled (no modulo bias).
    std::uint64_t below(std::uint64_t n);

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace memsnn
