#include "vcry/channel.hpp"

#include <algorithm>
#include <cmath>

#include "vcry/audio.hpp"
#include "vcry/cipher.hpp"
#include "vcry/errors.hpp"

namespace vcry {

Eigen::ArrayXd gaussian_vector(PrnStream& stream, Eigen::Index n, double sigma) {
    Eigen::ArrayXd g(n);
    for (Eigen::Index i = 0; i < n; i += 2) {
        double u1 = stream.next_unit();
        const double u2 = stream.next_unit();
        if (u1 == 0.0)
            u1 = 0x1.0p-53; // log(0) guard: smallest positive draw
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * EIGEN_PI * u2;
        g[i] = sigma * r * std::cos(phi);
        if (i + 1 < n)
            g[i + 1] = sigma * r * std::sin(phi);
    }
    return g;
}

Eigen::ArrayXd awgn(const Eigen::Ref<const Eigen::ArrayXd>& x, double snr_db,
                    std::uint64_t seed_value) {
    if (x.size() == 0)
        fail(Err::EmptyInput, "awgn of empty array");
    if (std::isinf(snr_db) && snr_db > 0.0)
        return x; // noiseless channel
    if (!std::isfinite(snr_db))
        fail(Err::BadFormat, "snr must be finite or +infinity");

    const double power = x.square().mean();
    if (power == 0.0)
        fail(Err::ZeroPower, "SNR undefined for an all-zero signal");

    const double sigma2 = power * std::pow(10.0, -snr_db / 10.0);
    PrnStream stream = seed(seed_value);
    return x + gaussian_vector(stream, x.size(), std::sqrt(sigma2));
}

Signal mix_noise_file(const Signal& x, const Signal& noise, double snr_db) {
    if (x.samples.size() == 0 || noise.samples.size() == 0)
        fail(Err::EmptyInput, "mix of empty signal");
    if (std::isinf(snr_db) && snr_db > 0.0)
        return x; // noiseless channel
    if (!std::isfinite(snr_db))
        fail(Err::BadFormat, "snr must be finite or +infinity");

    const Signal at_rate = resample(noise, x.sample_rate);
    const Eigen::Index n = x.samples.size();
    if (at_rate.samples.size() < n)
        fail(Err::NoiseTooShort, "noise shorter than signal after resampling");

    const Eigen::ArrayXd segment = at_rate.samples.head(n);
    const double p_x = x.samples.square().mean();
    const double p_n = segment.square().mean();
    if (p_x == 0.0 || p_n == 0.0)
        fail(Err::ZeroPower, "SNR undefined for zero-power signal or noise");

    const double alpha = std::sqrt(p_x / (p_n * std::pow(10.0, snr_db / 10.0)));
    Signal out;
    out.sample_rate = x.sample_rate;
    out.samples = x.samples + alpha * segment;
    return out;
}

std::vector<MseRow> run_mse_sweep(const Signal& s, const KeyPair& keys,
                                  std::vector<double> snr_list, int trials,
                                  std::uint64_t seed0, double gain) {
    if (snr_list.empty())
        fail(Err::EmptyInput, "empty SNR list");
    if (trials < 1)
        fail(Err::BadFormat, "trials must be at least 1");

    std::sort(snr_list.begin(), snr_list.end());
    const CipherText clean = encrypt(s, keys, gain);

    std::vector<MseRow> table;
    table.reserve(snr_list.size());
    for (const double snr_db : snr_list) {
        double acc = 0.0;
        for (int t = 0; t < trials; ++t) {
            CipherText received = clean;
            received.coefficients =
                awgn(clean.coefficients, snr_db, seed0 + static_cast<std::uint64_t>(t));
            const Signal recovered = decrypt(received, keys, s.sample_rate);
            acc += mse(recovered.samples, s.samples);
        }
        table.push_back({snr_db, acc / trials, trials});
    }
    return table;
}

} // namespace vcry
