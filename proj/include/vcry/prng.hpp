#pragma once

#include <cstdint>
#include <Eigen/Core>

namespace vcry {

// Deterministic 64-bit mixing generator (splitmix64 constants). The whole
// pipeline depends on this stream being bit-identical across platforms and
// languages, so the mixer is fixed here rather than delegated to <random>.
class PrnStream {
public:
    explicit PrnStream(std::uint64_t key) : state_(key) {}

    std::uint64_t next_raw() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        ++draws_;
        return z ^ (z >> 31);
    }

    // Symmetric map onto [-1, 1): raw 0 -> -1.0, raw 2^63 -> 0.0.
    double next_symmetric() {
        return 2.0 * (static_cast<double>(next_raw()) * 0x1.0p-64) - 1.0;
    }

    // Unit uniform on [0, 1) built from the top 53 bits, so every value is
    // exactly representable and 1.0 can never be produced.
    double next_unit() {
        return static_cast<double>(next_raw() >> 11) * 0x1.0p-53;
    }

    std::uint64_t draws() const { return draws_; }

private:
    std::uint64_t state_ = 0;
    std::uint64_t draws_ = 0;
};

inline PrnStream seed(std::uint64_t key) { return PrnStream(key); }

// n symmetric draws scaled by amplitude; consumes exactly n raw words.
inline Eigen::ArrayXd noise_vector(PrnStream& s, Eigen::Index n, double amplitude) {
    Eigen::ArrayXd out(n);
    for (Eigen::Index i = 0; i < n; ++i)
        out[i] = amplitude * s.next_symmetric();
    return out;
}

} // namespace vcry
