#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include <vcry/dct.hpp>
#include <vcry/prng.hpp>

namespace {

Eigen::ArrayXd random_array(Eigen::Index n, std::uint64_t seed) {
    vcry::PrnStream g = vcry::seed(seed);
    return vcry::noise_vector(g, n, 1.0);
}

} // namespace

TEST_CASE("constant block maps to a lone DC coefficient") {
    Eigen::ArrayXd x(4);
    x << 1, 1, 1, 1;
    const Eigen::ArrayXd X = vcry::dct_forward(x);
    REQUIRE(X.size() == 4);
    CHECK(X[0] == Catch::Approx(2.0).margin(1e-12));
    CHECK(std::abs(X[1]) < 1e-12);
    CHECK(std::abs(X[2]) < 1e-12);
    CHECK(std::abs(X[3]) < 1e-12);

    const Eigen::ArrayXd back = vcry::dct_inverse(X);
    CHECK(((back - x).abs() < 1e-12).all());
}

TEST_CASE("length-1 transform is the identity") {
    Eigen::ArrayXd x(1);
    x << 3.25;
    CHECK(vcry::dct_forward(x)[0] == Catch::Approx(3.25).margin(1e-15));
    CHECK(vcry::dct_inverse(x)[0] == Catch::Approx(3.25).margin(1e-15));
}

TEST_CASE("zero input stays zero both ways") {
    const Eigen::ArrayXd z = Eigen::ArrayXd::Zero(64);
    CHECK((vcry::dct_forward(z) == 0.0).all());
    CHECK((vcry::dct_inverse(z) == 0.0).all());
}

TEST_CASE("forward and inverse round-trip to high precision") {
    for (Eigen::Index n : {1, 2, 7, 64, 300, 1000}) {
        const Eigen::ArrayXd x = random_array(n, 100 + n);
        const Eigen::ArrayXd back = vcry::dct_inverse(vcry::dct_forward(x));
        REQUIRE(back.size() == n);
        CHECK((back - x).abs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("transform is linear") {
    const Eigen::ArrayXd a = random_array(128, 1);
    const Eigen::ArrayXd b = random_array(128, 2);
    const Eigen::ArrayXd lhs = vcry::dct_forward(2.5 * a - 0.75 * b);
    const Eigen::ArrayXd rhs =
        2.5 * vcry::dct_forward(a) - 0.75 * vcry::dct_forward(b);
    CHECK((lhs - rhs).abs().maxCoeff() < 1e-9);
}

TEST_CASE("transform preserves energy at any length") {
    for (Eigen::Index n : {1, 2, 7, 64, 1000}) {
        const Eigen::ArrayXd x = random_array(n, 5000 + n);
        const Eigen::ArrayXd X = vcry::dct_forward(x);
        CHECK(std::abs(X.square().sum() - x.square().sum()) <
              1e-9 * std::max(1.0, x.square().sum()));
    }
}

TEST_CASE("direct-summation transforms invert each other too") {
    const Eigen::ArrayXd x = random_array(33, 77);
    const Eigen::ArrayXd X = vcry::dct_forward_direct<double>(x);
    const Eigen::ArrayXd back = vcry::dct_inverse_direct<double>(X);
    CHECK((back - x).abs().maxCoeff() < 1e-12);
}

TEST_CASE("fast paths agree with the direct summation") {
    // spans the direct/fast cutoff and odd, even, prime, power-of-two sizes
    for (Eigen::Index n : {2, 7, 31, 32, 33, 100, 257, 1000}) {
        const Eigen::ArrayXd x = random_array(n, 9000 + n);
        const Eigen::ArrayXd fast_f = vcry::dct_forward(x);
        const Eigen::ArrayXd direct_f = vcry::dct_forward_direct<double>(x);
        CHECK((fast_f - direct_f).abs().maxCoeff() < 1e-9);

        const Eigen::ArrayXd fast_i = vcry::dct_inverse(x);
        const Eigen::ArrayXd direct_i = vcry::dct_inverse_direct<double>(x);
        CHECK((fast_i - direct_i).abs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("single-precision direct transform round-trips") {
    Eigen::ArrayXf x(16);
    vcry::PrnStream g = vcry::seed(17);
    for (Eigen::Index i = 0; i < x.size(); ++i)
        x[i] = static_cast<float>(g.next_symmetric());
    const Eigen::ArrayXf back =
        vcry::dct_inverse_direct<float>(vcry::dct_forward_direct<float>(x));
    CHECK((back - x).abs().maxCoeff() < 1e-5f);
}
