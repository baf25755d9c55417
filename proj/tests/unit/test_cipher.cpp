#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>

#include <catch2/catch_amalgamated.hpp>

#include <vcry/cipher.hpp>
#include <vcry/dct.hpp>
#include <vcry/errors.hpp>
#include <vcry/keys.hpp>
#include <vcry/prng.hpp>

#include "../support/synth.hpp"
#include "../support/tempdir.hpp"

using synth::TempDir;
using vcry::Err;
using vcry::Error;

namespace {

Err code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Err::BadFormat;
}

double corr(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) {
    const double ma = a.mean(), mb = b.mean();
    const double cov = ((a - ma) * (b - mb)).mean();
    return cov /
           std::sqrt((a - ma).square().mean() * (b - mb).square().mean());
}

} // namespace

TEST_CASE("mse matches hand computations") {
    Eigen::ArrayXd a(2), b(2);
    a << 1, 0;
    b << 0, 0;
    CHECK(vcry::mse(a, a) == 0.0);
    CHECK(vcry::mse(a, b) == Catch::Approx(0.5));

    Eigen::ArrayXd c(4), d(4);
    c << 1, 1, 1, 1;
    d << 0, 2, 0, 2;
    CHECK(vcry::mse(c, d) == Catch::Approx(1.0));

    Eigen::ArrayXd e(3);
    e << 1, 2, 3;
    CHECK(code_of([&] { (void)vcry::mse(a, e); }) == Err::LengthMismatch);
    const Eigen::ArrayXd empty;
    CHECK(code_of([&] { (void)vcry::mse(empty, empty); }) == Err::EmptyInput);
}

TEST_CASE("encrypt/decrypt round-trips random signals exactly") {
    vcry::PrnStream g = vcry::seed(31);
    for (int trial = 0; trial < 5; ++trial) {
        const vcry::Signal s = synth::random_signal(4096, 600 + trial);
        const vcry::KeyPair keys =
            vcry::derive_keys(synth::random_password(g));
        const vcry::CipherText c = vcry::encrypt(s, keys);
        REQUIRE(c.coefficients.size() == s.samples.size());
        REQUIRE(c.source_length == static_cast<std::uint64_t>(s.samples.size()));
        const vcry::Signal back = vcry::decrypt(c, keys, s.sample_rate);
        const double err = vcry::mse(back.samples, s.samples);
        CHECK(err < 1e-12 * s.samples.square().mean() + 1e-24);
    }
}

TEST_CASE("zero plaintext exposes the pure key masks") {
    const vcry::KeyPair keys = vcry::derive_keys("Djyot!24");
    const Eigen::Index n = 1024;
    const vcry::Signal zero{Eigen::ArrayXd::Zero(n), 10000};
    const double gain = 3.0;
    const vcry::CipherText c = vcry::encrypt(zero, keys, gain);

    vcry::PrnStream s1 = vcry::seed(keys.key1);
    vcry::PrnStream s2 = vcry::seed(keys.key2);
    const Eigen::ArrayXd n1 = vcry::noise_vector(s1, n, 1.0);
    const Eigen::ArrayXd n2 = vcry::noise_vector(s2, n, 1.0);
    const Eigen::ArrayXd expect = gain * (vcry::dct_forward(n1) + n2);
    CHECK((c.coefficients - expect).abs().maxCoeff() < 1e-12);
}

TEST_CASE("all-zero ciphertext decrypts to the negated masks") {
    const vcry::KeyPair keys = vcry::derive_keys("Ab#12xy!");
    const Eigen::Index n = 512;
    vcry::CipherText c;
    c.coefficients = Eigen::ArrayXd::Zero(n);
    c.gain = 1.0;
    c.source_length = static_cast<std::uint64_t>(n);
    const vcry::Signal out = vcry::decrypt(c, keys);

    vcry::PrnStream s1 = vcry::seed(keys.key1);
    vcry::PrnStream s2 = vcry::seed(keys.key2);
    const Eigen::ArrayXd n1 = vcry::noise_vector(s1, n, 1.0);
    const Eigen::ArrayXd n2 = vcry::noise_vector(s2, n, 1.0);
    const Eigen::ArrayXd expect = -(vcry::dct_inverse(n2) + n1);
    CHECK((out.samples - expect).abs().maxCoeff() < 1e-12);
}

TEST_CASE("results are gain-independent") {
    const vcry::Signal s = synth::random_signal(2000, 71);
    const vcry::KeyPair keys = vcry::derive_keys("Djyot!24");
    const vcry::Signal a =
        vcry::decrypt(vcry::encrypt(s, keys, 1.0), keys);
    const vcry::Signal b =
        vcry::decrypt(vcry::encrypt(s, keys, 1000.0), keys);
    const vcry::Signal c =
        vcry::decrypt(vcry::encrypt(s, keys, 0.001), keys);
    CHECK((a.samples - b.samples).abs().maxCoeff() < 1e-12);
    CHECK((a.samples - c.samples).abs().maxCoeff() < 1e-12);
}

TEST_CASE("wrong password fails loudly, one character is enough") {
    vcry::PrnStream g = vcry::seed(47);
    for (int trial = 0; trial < 20; ++trial) {
        const vcry::Signal s = synth::random_signal(10000, 900 + trial);
        const std::string pw = synth::random_password(g);
        const std::string other = synth::mutate_password(pw, g);
        const vcry::CipherText c = vcry::encrypt(s, vcry::derive_keys(pw));
        const vcry::Signal wrong =
            vcry::decrypt(c, vcry::derive_keys(other), s.sample_rate);
        const double err = vcry::mse(wrong.samples, s.samples);
        CHECK(err >= 0.1 * s.samples.square().mean());
    }
}

TEST_CASE("key masks from different passwords are uncorrelated") {
    // The plaintext term is common to both encryptions, so the raw
    // ciphertext correlation has an irreducible floor of
    // P_s / (P_s + 2/3) (~0.33 for unit-power signals).  The security
    // content lives in the masks: encrypting the zero signal isolates
    // them, and linearity makes the ciphertext difference
    // plaintext-independent.
    vcry::PrnStream g = vcry::seed(53);
    const Eigen::Index n = 10000;
    const vcry::Signal zero{Eigen::ArrayXd::Zero(n), 10000};
    for (int trial = 0; trial < 10; ++trial) {
        const std::string pa = synth::random_password(g);
        std::string pb = synth::random_password(g);
        while (pb == pa)
            pb = synth::random_password(g);
        const vcry::KeyPair ka = vcry::derive_keys(pa);
        const vcry::KeyPair kb = vcry::derive_keys(pb);
        const vcry::CipherText ma = vcry::encrypt(zero, ka);
        const vcry::CipherText mb = vcry::encrypt(zero, kb);
        CHECK(std::abs(corr(ma.coefficients, mb.coefficients)) < 0.05);

        // difference of two encryptions of the same signal carries no
        // trace of that signal
        const vcry::Signal s = synth::random_signal(n, 1300 + trial);
        const Eigen::ArrayXd diff = vcry::encrypt(s, ka).coefficients -
                                    vcry::encrypt(s, kb).coefficients;
        const Eigen::ArrayXd mask_diff =
            ma.coefficients - mb.coefficients;
        CHECK((diff - mask_diff).abs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("encrypt validates its input") {
    const vcry::KeyPair keys = vcry::derive_keys("Djyot!24");
    const vcry::Signal empty{Eigen::ArrayXd(), 10000};
    CHECK(code_of([&] { (void)vcry::encrypt(empty, keys); }) ==
          Err::EmptyInput);

    vcry::Signal bad = synth::random_signal(16, 1);
    bad.samples[3] = std::nan("");
    CHECK(code_of([&] { (void)vcry::encrypt(bad, keys); }) == Err::NonFinite);

    const vcry::Signal ok = synth::random_signal(16, 2);
    CHECK(code_of([&] { (void)vcry::encrypt(ok, keys, 0.0); }) ==
          Err::BadFormat);
    CHECK(code_of([&] { (void)vcry::encrypt(ok, keys, -2.0); }) ==
          Err::BadFormat);
}

TEST_CASE("decrypt validates length bookkeeping") {
    const vcry::KeyPair keys = vcry::derive_keys("Djyot!24");
    vcry::CipherText c = vcry::encrypt(synth::random_signal(64, 3), keys);
    c.source_length = 63;
    CHECK(code_of([&] { (void)vcry::decrypt(c, keys); }) ==
          Err::LengthMismatch);

    vcry::CipherText empty;
    empty.source_length = 0;
    CHECK(code_of([&] { (void)vcry::decrypt(empty, keys); }) ==
          Err::EmptyInput);
}

TEST_CASE("container round-trips through disk") {
    TempDir tmp;
    const auto path = tmp.path / "t.vcr";
    const vcry::KeyPair keys = vcry::derive_keys("Djyot!24");
    const vcry::Signal s = synth::random_signal(777, 4);
    const vcry::CipherText c = vcry::encrypt(s, keys, 2.5);
    vcry::write_vcr(path, c);

    const vcry::CipherText back = vcry::read_vcr(path);
    CHECK(back.format_version == c.format_version);
    CHECK(back.source_length == c.source_length);
    CHECK(back.gain == c.gain);
    REQUIRE(back.coefficients.size() == c.coefficients.size());
    CHECK((back.coefficients == c.coefficients).all());

    const vcry::Signal out = vcry::decrypt(back, keys, s.sample_rate);
    CHECK(vcry::mse(out.samples, s.samples) < 1e-12 * s.samples.square().mean());
}

TEST_CASE("container rejects malformed files") {
    TempDir tmp;
    const vcry::KeyPair keys = vcry::derive_keys("Djyot!24");
    const vcry::CipherText c = vcry::encrypt(synth::random_signal(32, 5), keys);
    const auto good = tmp.path / "good.vcr";
    vcry::write_vcr(good, c);

    auto mangle = [&](const std::string& name,
                      const std::function<void(std::string&)>& fn) {
        std::ifstream is(good, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(is)),
                          std::istreambuf_iterator<char>());
        fn(bytes);
        const auto path = tmp.path / name;
        std::ofstream os(path, std::ios::binary);
        os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        return path;
    };

    const auto magic =
        mangle("magic.vcr", [](std::string& b) { b[0] = 'X'; });
    CHECK(code_of([&] { (void)vcry::read_vcr(magic); }) == Err::BadMagic);

    const auto version =
        mangle("version.vcr", [](std::string& b) { b[4] = 99; });
    CHECK(code_of([&] { (void)vcry::read_vcr(version); }) == Err::BadFormat);

    const auto short_header =
        mangle("short.vcr", [](std::string& b) { b.resize(10); });
    CHECK(code_of([&] { (void)vcry::read_vcr(short_header); }) ==
          Err::TruncatedData);

    const auto short_payload =
        mangle("payload.vcr", [](std::string& b) { b.resize(b.size() - 8); });
    CHECK(code_of([&] { (void)vcry::read_vcr(short_payload); }) ==
          Err::TruncatedData);

    const auto trailing =
        mangle("trailing.vcr", [](std::string& b) { b += "junk"; });
    CHECK(code_of([&] { (void)vcry::read_vcr(trailing); }) == Err::BadFormat);

    CHECK(code_of([&] { (void)vcry::read_vcr(tmp.path / "missing.vcr"); }) ==
          Err::IoFailure);
}

TEST_CASE("container header is exactly the documented 24 bytes") {
    TempDir tmp;
    const auto path = tmp.path / "h.vcr";
    vcry::CipherText c;
    c.coefficients = Eigen::ArrayXd::Zero(2);
    c.gain = 1.0;
    c.source_length = 2;
    vcry::write_vcr(path, c);
    CHECK(std::filesystem::file_size(path) == 24 + 2 * 8);

    std::ifstream is(path, std::ios::binary);
    char magic[4];
    is.read(magic, 4);
    CHECK(std::string(magic, 4) == "VCRY");
}
