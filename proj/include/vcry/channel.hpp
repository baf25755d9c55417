#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "vcry/keys.hpp"
#include "vcry/prng.hpp"
#include "vcry/signal.hpp"

namespace vcry {

// Transmission settings.  An infinite snr_db means a noiseless channel; the
// noiseless flag forces the same bypass regardless of snr_db.
struct ChannelConfig {
    double snr_db = 20.0;
    std::uint64_t seed = 1;
    double gain = 1.0;
    bool noiseless = false;
};

// Zero-mean Gaussian samples of standard deviation sigma, generated with the
// Box-Muller transform on consecutive unit-uniform pairs (both outputs used).
Eigen::ArrayXd gaussian_vector(PrnStream& stream, Eigen::Index n, double sigma);

// Add white Gaussian noise scaled so that mean(x^2) / noise variance hits the
// requested SNR.  +infinity bypasses the channel entirely.
Eigen::ArrayXd awgn(const Eigen::Ref<const Eigen::ArrayXd>& x, double snr_db,
                    std::uint64_t seed);

// Mix a recorded noise signal into x at the requested SNR: the noise is
// resampled to x's rate, truncated to x's length, and scaled before adding.
Signal mix_noise_file(const Signal& x, const Signal& noise, double snr_db);

struct MseRow {
    double snr_db;
    double mean_mse;
    int trials;
};

// For each SNR, average the reconstruction MSE of encrypt -> awgn -> decrypt
// over independently seeded trials (seed0 + trial index).  Rows are sorted by
// SNR ascending and the whole sweep is a pure function of its arguments.
std::vector<MseRow> run_mse_sweep(const Signal& s, const KeyPair& keys,
                                  std::vector<double> snr_list, int trials,
                                  std::uint64_t seed0, double gain = 1.0);

} // namespace vcry
