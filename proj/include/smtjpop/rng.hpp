#pragma once

#include <cmath>
#include <cstdint>

namespace smtjpop {

/// Counter-based pseudorandom stream. Each stream is identified by a 64-bit
/// key; draws are a SplitMix64-style finalizer applied to key + counter, so
/// two streams with distinct keys are independent and a stream's output is a
/// pure function of (key, draw index). Substreams derived via at()/split()
/// make results independent of scheduling: give every junction, trial, or
/// sweep point its own indexed substream and the numbers never depend on
/// evaluation order.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : key_(mix(seed ^ kSeedSalt)) {}

    /// Derived substream at a fixed index; pure, does not advance this stream.
    RngStream at(std::uint64_t index) const {
        return RngStream(FromKey{}, mix(key_ ^ mix(index + kChildSalt)));
    }

    RngStream at(std::uint64_t a, std::uint64_t b) const { return at(a).at(b); }
    RngStream at(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
        return at(a).at(b).at(c);
    }

    /// Sequentially derived substream; advances an internal split counter.
    RngStream split() { return at(kSplitSalt + split_count_++); }

    std::uint64_t next_u64() { return mix(key_ + kGolden * ++counter_); }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (explicit, for cross-platform
    /// reproducibility; std::normal_distribution is implementation-defined).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double gaussian(double mean, double sd) { return mean + sd * gaussian(); }

private:
    struct FromKey {};
    RngStream(FromKey, std::uint64_t key) : key_(key) {}

    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
    static constexpr std::uint64_t kSeedSalt = 0x5AF7081BD3286E21ull;
    static constexpr std::uint64_t kChildSalt = 0x632BE59BD9B4E019ull;
    static constexpr std::uint64_t kSplitSalt = 0xC2B2AE3D27D4EB4Full;

    static std::uint64_t mix(std::uint64_t z) {
        z += kGolden;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    std::uint64_t split_count_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Fixed substream tags so call sites don't collide by accident.
namespace rng_tag {
inline constexpr std::uint64_t kPopulationBuild = 1;
inline constexpr std::uint64_t kWeightInit = 2;
inline constexpr std::uint64_t kStimulus = 3;
inline constexpr std::uint64_t kTrialWindow = 4;
inline constexpr std::uint64_t kEval = 5;
inline constexpr std::uint64_t kFault = 6;
inline constexpr std::uint64_t kSweep = 7;
}  // namespace rng_tag

}  // namespace smtjpop
