#pragma once

#include <cmath>
#include <cstdint>

namespace widthlab {

// SplitMix64 counter-based generator. Chosen over std::mt19937 because the
// exact output sequence is pinned by the artifact's determinism contract:
// the same (seed, stream) must yield bit-identical draws on every platform.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in (0, 1]: never 0, so log() below is safe
    double next_open_unit() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // uniform in [0, 1)
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller; pairs are generated together and the
    // second value cached so consumption order stays deterministic
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_open_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double next_rademacher() { return (next_u64() & 1u) ? 1.0 : -1.0; }

    // index in [0, bound)
    std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Derives an independent stream seed from (master, stream index). Streams are
// decorrelated by pushing the index through one SplitMix64 round.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream) {
    SplitMix64 mix(master ^ (0x632BE59BD9B4E019ULL * (stream + 1)));
    return mix.next_u64();
}

}  // namespace widthlab
