#pragma once

#include <cmath>
#include <Eigen/Core>

#include "vcry/errors.hpp"

namespace vcry {

// Orthonormal DCT-II / DCT-III pair. The direct summations below are the
// normative definition; dct_forward / dct_inverse use an FFT construction
// for long inputs and must agree with the direct forms to 1e-9.

template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1>
dct_forward_direct(const Eigen::Ref<const Eigen::Array<Scalar, Eigen::Dynamic, 1>>& x) {
    const Eigen::Index n = x.size();
    if (n == 0)
        fail(Err::EmptyInput, "dct of empty array");
    const Scalar pi = static_cast<Scalar>(EIGEN_PI);
    const Scalar c0 = std::sqrt(Scalar(1) / Scalar(n));
    const Scalar ck = std::sqrt(Scalar(2) / Scalar(n));
    Eigen::Array<Scalar, Eigen::Dynamic, 1> out(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        Scalar acc = 0;
        for (Eigen::Index i = 0; i < n; ++i)
            acc += x[i] * std::cos(pi * Scalar(2 * i + 1) * Scalar(k) / Scalar(2 * n));
        out[k] = (k == 0 ? c0 : ck) * acc;
    }
    return out;
}

template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1>
dct_inverse_direct(const Eigen::Ref<const Eigen::Array<Scalar, Eigen::Dynamic, 1>>& X) {
    const Eigen::Index n = X.size();
    if (n == 0)
        fail(Err::EmptyInput, "inverse dct of empty array");
    const Scalar pi = static_cast<Scalar>(EIGEN_PI);
    const Scalar c0 = std::sqrt(Scalar(1) / Scalar(n));
    const Scalar ck = std::sqrt(Scalar(2) / Scalar(n));
    Eigen::Array<Scalar, Eigen::Dynamic, 1> out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Scalar acc = c0 * X[0];
        for (Eigen::Index k = 1; k < n; ++k)
            acc += ck * X[k] * std::cos(pi * Scalar(2 * i + 1) * Scalar(k) / Scalar(2 * n));
        out[i] = acc;
    }
    return out;
}

// Fast paths (FFT-based for long inputs, direct summation for short ones).
Eigen::ArrayXd dct_forward(const Eigen::Ref<const Eigen::ArrayXd>& x);
Eigen::ArrayXd dct_inverse(const Eigen::Ref<const Eigen::ArrayXd>& X);

} // namespace vcry
