#include "vcry/dct.hpp"

#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace vcry {
namespace {

constexpr Eigen::Index kDirectCutoff = 32;

// DCT-II of length N via one complex FFT of length N: even samples are laid
// out forward, odd samples reversed, and each spectrum bin is rotated by a
// quarter-sample phase before taking the real part.
Eigen::ArrayXd dct_fast(const Eigen::Ref<const Eigen::ArrayXd>& x) {
    const Eigen::Index n = x.size();
    std::vector<std::complex<double>> v(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < (n + 1) / 2; ++i)
        v[static_cast<std::size_t>(i)] = x[2 * i];
    for (Eigen::Index i = 0; i < n / 2; ++i)
        v[static_cast<std::size_t>(n - 1 - i)] = x[2 * i + 1];

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spec;
    fft.fwd(spec, v);

    const double c0 = std::sqrt(1.0 / static_cast<double>(n));
    const double ck = std::sqrt(2.0 / static_cast<double>(n));
    Eigen::ArrayXd out(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double theta = -EIGEN_PI * static_cast<double>(k) / (2.0 * static_cast<double>(n));
        const std::complex<double> rot(std::cos(theta), std::sin(theta));
        out[k] = (k == 0 ? c0 : ck) * (spec[static_cast<std::size_t>(k)] * rot).real();
    }
    return out;
}

// Inverse of dct_fast: undo the scaling, rebuild the complex spectrum from
// the coefficient array's even/odd symmetry, inverse FFT, de-interleave.
Eigen::ArrayXd idct_fast(const Eigen::Ref<const Eigen::ArrayXd>& X) {
    const Eigen::Index n = X.size();
    const double s0 = std::sqrt(static_cast<double>(n));
    const double sk = std::sqrt(static_cast<double>(n) / 2.0);

    std::vector<std::complex<double>> spec(static_cast<std::size_t>(n));
    spec[0] = s0 * X[0];
    for (Eigen::Index k = 1; k < n; ++k) {
        const double theta = EIGEN_PI * static_cast<double>(k) / (2.0 * static_cast<double>(n));
        const std::complex<double> rot(std::cos(theta), std::sin(theta));
        spec[static_cast<std::size_t>(k)] =
            rot * std::complex<double>(sk * X[k], -sk * X[n - k]);
    }

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> v;
    fft.inv(v, spec);

    Eigen::ArrayXd out(n);
    for (Eigen::Index i = 0; i < (n + 1) / 2; ++i)
        out[2 * i] = v[static_cast<std::size_t>(i)].real();
    for (Eigen::Index i = 0; i < n / 2; ++i)
        out[2 * i + 1] = v[static_cast<std::size_t>(n - 1 - i)].real();
    return out;
}

} // namespace

Eigen::ArrayXd dct_forward(const Eigen::Ref<const Eigen::ArrayXd>& x) {
    if (x.size() == 0)
        fail(Err::EmptyInput, "dct of empty array");
    if (x.size() < kDirectCutoff)
        return dct_forward_direct<double>(x);
    return dct_fast(x);
}

Eigen::ArrayXd dct_inverse(const Eigen::Ref<const Eigen::ArrayXd>& X) {
    if (X.size() == 0)
        fail(Err::EmptyInput, "inverse dct of empty array");
    if (X.size() < kDirectCutoff)
        return dct_inverse_direct<double>(X);
    return idct_fast(X);
}

} // namespace vcry
