#pragma once

#include <cstdint>
#include <filesystem>

#include <Eigen/Core>

#include "vcry/errors.hpp"
#include "vcry/keys.hpp"
#include "vcry/signal.hpp"

namespace vcry {

inline constexpr std::uint32_t kVcrFormatVersion = 1;

// Amplitude of the pseudo-random masking sequences added at levels 1 and 3.
// Unit amplitude covers the full [-1, 1] range of a normalized signal.
inline constexpr double kScrambleAmplitude = 1.0;

// Encrypted voice template: scrambled DCT coefficients plus the bookkeeping
// needed to invert the transmission gain and validate the payload length.
struct CipherText {
    Eigen::ArrayXd coefficients;
    double gain = 1.0;
    std::uint64_t source_length = 0;
    std::uint32_t format_version = kVcrFormatVersion;
};

// Three-level encryption: add the Key1 sequence in the time domain, take the
// orthonormal DCT, add the Key2 sequence in the transform domain, amplify.
CipherText encrypt(const Signal& s, const KeyPair& keys, double gain = 1.0);

// Exact inverse of encrypt in reverse order: divide out the gain, subtract
// the Key2 sequence, inverse DCT, subtract the Key1 sequence.  The container
// does not record a sample rate, so the caller supplies one for the output.
Signal decrypt(const CipherText& c, const KeyPair& keys, int sample_rate = 10000);

// Mean of squared element-wise differences.
double mse(const Eigen::Ref<const Eigen::ArrayXd>& a,
           const Eigen::Ref<const Eigen::ArrayXd>& b);

// Binary container: 24-byte header (magic "VCRY", format_version u32 LE,
// source_length u64 LE, gain f64 LE) followed by the coefficients as
// consecutive f64 LE values.
void write_vcr(const std::filesystem::path& path, const CipherText& c);
CipherText read_vcr(const std::filesystem::path& path);

} // namespace vcry
