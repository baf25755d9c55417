#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include <vcry/channel.hpp>
#include <vcry/errors.hpp>
#include <vcry/features.hpp>
#include <vcry/identify.hpp>
#include <vcry/pitch.hpp>

#include "../support/synth.hpp"

using vcry::Err;
using vcry::Error;
using vcry::Method;

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

vcry::Signal at_10k(const Eigen::ArrayXd& samples) {
    return vcry::Signal{samples, 10000};
}

vcry::PitchTrack constant_track(int frames, double f0, double conf) {
    vcry::PitchTrack track;
    for (int i = 0; i < frames; ++i) {
        vcry::FramePitch fp;
        fp.start_sample = i * 100;
        fp.voiced = true;
        fp.f0 = f0;
        fp.confidence = conf;
        fp.lag = 10000.0 / f0;
        track.frames.push_back(fp);
    }
    return track;
}

} // namespace

TEST_CASE("method names, parsing, and dimensions are consistent") {
    for (const Method m : vcry::kAllMethods) {
        CHECK(vcry::parse_method(vcry::method_name(m)) == m);
        CHECK(vcry::method_dim(m) > 0);
    }
    CHECK(vcry::method_dim(Method::pitch) == 5);
    CHECK(vcry::method_dim(Method::stats) == 6);
    CHECK(vcry::method_dim(Method::lpc) == 12);
    CHECK(vcry::method_dim(Method::zcr) == 2);
    CHECK(vcry::method_dim(Method::fft) == 64);
    CHECK(code_of([] { (void)vcry::parse_method("mfcc"); }) ==
          Err::BadFormat);
}

TEST_CASE("pitch features of a constant track") {
    const vcry::FeatureVector fv =
        vcry::pitch_features(constant_track(10, 100.0, 0.8));
    REQUIRE(fv.values.size() == 5);
    CHECK(fv.method == Method::pitch);
    CHECK(fv.values[0] == Catch::Approx(100.0));
    CHECK(fv.values[1] == Catch::Approx(0.0).margin(1e-12));
    CHECK(fv.values[2] == Catch::Approx(100.0));
    CHECK(fv.values[3] == Catch::Approx(1.0));
    CHECK(fv.values[4] == Catch::Approx(0.8));
}

TEST_CASE("pitch features degrade to zeros without voiced frames") {
    vcry::PitchTrack track;
    for (int i = 0; i < 4; ++i) {
        vcry::FramePitch fp;
        fp.start_sample = i * 100;
        track.frames.push_back(fp);
    }
    const vcry::FeatureVector fv = vcry::pitch_features(track);
    CHECK((fv.values == 0.0).all());

    CHECK(code_of([] {
              (void)vcry::pitch_features(vcry::PitchTrack{});
          }) == Err::EmptyTrack);
}

TEST_CASE("pitch features include median and voiced fraction") {
    vcry::PitchTrack track = constant_track(3, 100.0, 0.5);
    track.frames[2].f0 = 130.0;           // mean 110, median 100
    vcry::FramePitch unvoiced;
    unvoiced.start_sample = 300;
    unvoiced.confidence = 0.1;
    track.frames.push_back(unvoiced);

    const vcry::FeatureVector fv = vcry::pitch_features(track);
    CHECK(fv.values[0] == Catch::Approx(110.0));
    CHECK(fv.values[2] == Catch::Approx(100.0));
    CHECK(fv.values[3] == Catch::Approx(0.75));
    CHECK(fv.values[4] == Catch::Approx((0.5 * 3 + 0.1) / 4.0));
}

TEST_CASE("pitch vectors separate disjoint f0 ranges completely") {
    std::vector<vcry::FeatureVector> low, high;
    for (std::uint64_t u = 0; u < 3; ++u) {
        low.push_back(vcry::extract_features(
            synth::speaker_utterance(110.0, 7000 + u), Method::pitch));
        high.push_back(vcry::extract_features(
            synth::speaker_utterance(220.0, 7100 + u), Method::pitch));
    }
    double max_within = 0.0, min_between = 1e300;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            max_within = std::max(max_within, vcry::euclidean(low[i], low[j]));
            max_within =
                std::max(max_within, vcry::euclidean(high[i], high[j]));
        }
        for (int j = 0; j < 3; ++j)
            min_between =
                std::min(min_between, vcry::euclidean(low[i], high[j]));
    }
    CHECK(min_between > max_within);
}

TEST_CASE("moment statistics match hand computations") {
    const vcry::FeatureVector zero =
        vcry::stat_features(at_10k(Eigen::ArrayXd::Zero(400)));
    REQUIRE(zero.values.size() == 6);
    CHECK((zero.values == 0.0).all());

    Eigen::ArrayXd alt(1000);
    for (Eigen::Index i = 0; i < alt.size(); ++i)
        alt[i] = (i % 2 == 0) ? 1.0 : -1.0;
    const vcry::FeatureVector fv = vcry::stat_features(at_10k(alt));
    CHECK(fv.values[0] == Catch::Approx(0.0).margin(1e-15)); // mean
    CHECK(fv.values[1] == Catch::Approx(1.0));               // variance
    CHECK(fv.values[2] == Catch::Approx(1.0));               // std
    CHECK(fv.values[3] == Catch::Approx(0.0).margin(1e-12)); // skewness
    CHECK(fv.values[4] == Catch::Approx(1.0));               // kurtosis
    CHECK(fv.values[5] == Catch::Approx(1.0));               // mean |x|
}

TEST_CASE("statistics transform predictably under scale and shift") {
    const vcry::Signal s = synth::random_signal(5000, 33);
    const vcry::FeatureVector base = vcry::stat_features(s);

    vcry::Signal doubled = s;
    doubled.samples *= 2.0;
    const vcry::FeatureVector scaled = vcry::stat_features(doubled);
    CHECK(scaled.values[1] == Catch::Approx(4.0 * base.values[1]));
    CHECK(scaled.values[2] == Catch::Approx(2.0 * base.values[2]));

    vcry::Signal shifted = s;
    shifted.samples += 0.25;
    const vcry::FeatureVector moved = vcry::stat_features(shifted);
    CHECK(moved.values[0] == Catch::Approx(base.values[0] + 0.25));
    CHECK(moved.values[1] == Catch::Approx(base.values[1]));
}

TEST_CASE("levinson-durbin solves a known system") {
    Eigen::ArrayXd r(3);
    r << 1.0, 0.5, 0.25;
    const vcry::LpcFit fit = vcry::levinson_durbin(r, 2);
    REQUIRE(fit.prediction.size() == 2);
    CHECK(fit.prediction[0] == Catch::Approx(0.5));
    CHECK(fit.prediction[1] == Catch::Approx(0.0).margin(1e-12));
    CHECK(fit.reflection[0] == Catch::Approx(-0.5));
    CHECK(fit.error == Catch::Approx(0.75));

    CHECK(code_of([&] { (void)vcry::levinson_durbin(r, 3); }) ==
          Err::LengthMismatch);
    Eigen::ArrayXd dead(3);
    dead << 0.0, 0.0, 0.0;
    CHECK(code_of([&] { (void)vcry::levinson_durbin(dead, 2); }) ==
          Err::DegenerateFrame);
}

TEST_CASE("reflection coefficients stay inside the unit interval") {
    vcry::PrnStream g = vcry::seed(71);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::ArrayXd frame = vcry::noise_vector(g, 300, 1.0);
        const Eigen::ArrayXd r = vcry::autocorr(frame, 12);
        const vcry::LpcFit fit = vcry::levinson_durbin(r, 12);
        CHECK((fit.reflection.abs() <= 1.0).all());
        CHECK(fit.error >= 0.0);
    }
}

TEST_CASE("lpc recovers a synthetic AR(2) process") {
    vcry::PrnStream g = vcry::seed(2718);
    const Eigen::Index n = 100000;
    const Eigen::ArrayXd e = vcry::gaussian_vector(g, n, 0.1);
    Eigen::ArrayXd x = Eigen::ArrayXd::Zero(n);
    for (Eigen::Index i = 2; i < n; ++i)
        x[i] = 0.5 * x[i - 1] - 0.25 * x[i - 2] + e[i];

    const vcry::FeatureVector fv = vcry::lpc_features(at_10k(x), 2);
    REQUIRE(fv.values.size() == 2);
    CHECK(std::abs(fv.values[0] - 0.5) < 0.05);
    CHECK(std::abs(fv.values[1] + 0.25) < 0.05);
}

TEST_CASE("white noise predicts as silence") {
    const vcry::Signal s = synth::random_signal(100000, 555);
    const vcry::FeatureVector fv = vcry::lpc_features(s);
    REQUIRE(fv.values.size() == 12);
    CHECK((fv.values.abs() < 0.1).all());
}

TEST_CASE("lpc rejects signals with no usable frame") {
    CHECK(code_of([] {
              (void)vcry::lpc_features(at_10k(Eigen::ArrayXd::Zero(2000)));
          }) == Err::DegenerateFrame);
    CHECK(code_of([] {
              (void)vcry::lpc_features(vcry::Signal{Eigen::ArrayXd(), 10000});
          }) == Err::EmptyInput);
}

TEST_CASE("zero-crossing rates match the crossing counts") {
    Eigen::ArrayXd alt(1000);
    for (Eigen::Index i = 0; i < alt.size(); ++i)
        alt[i] = (i % 2 == 0) ? 1.0 : -1.0;
    const vcry::FeatureVector full = vcry::zcr_features(at_10k(alt));
    REQUIRE(full.values.size() == 2);
    CHECK(full.values[0] == Catch::Approx(1.0));
    CHECK(full.values[1] == Catch::Approx(0.0).margin(1e-12));

    const vcry::FeatureVector flat =
        vcry::zcr_features(at_10k(Eigen::ArrayXd::Constant(1000, 0.5)));
    CHECK(flat.values[0] == 0.0);

    Eigen::ArrayXd sine(10000);
    for (Eigen::Index i = 0; i < sine.size(); ++i)
        sine[i] = std::sin(2.0 * std::numbers::pi * 100.0 * i / 10000.0);
    const vcry::FeatureVector tone = vcry::zcr_features(at_10k(sine));
    CHECK(tone.values[0] == Catch::Approx(0.02).margin(0.002));
}

TEST_CASE("spectral bins land where the arithmetic says") {
    // constant signal: all energy in the DC bin
    const vcry::FeatureVector dc =
        vcry::fft_features(at_10k(Eigen::ArrayXd::Constant(2000, 0.5)));
    REQUIRE(dc.values.size() == 64);
    Eigen::Index dc_peak = 0;
    dc.values.maxCoeff(&dc_peak);
    CHECK(dc_peak == 0);

    // 1 kHz tone: 1000 / (5000/256) = 51.2 -> fft bin 51 -> pooled bin 12
    Eigen::ArrayXd tone(10000);
    for (Eigen::Index i = 0; i < tone.size(); ++i)
        tone[i] = std::sin(2.0 * std::numbers::pi * 1000.0 * i / 10000.0);
    const vcry::FeatureVector fv = vcry::fft_features(at_10k(tone));
    Eigen::Index peak = 0;
    fv.values.maxCoeff(&peak);
    CHECK(peak == 12);
}

TEST_CASE("the transform convention preserves energy") {
    // direct DFT oracle: sum|X_k|^2 / N equals sum x^2 for any real frame
    vcry::PrnStream g = vcry::seed(404);
    const Eigen::Index n = 512;
    const Eigen::ArrayXd x = vcry::noise_vector(g, n, 1.0);
    double spec_energy = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        std::complex<double> X(0.0, 0.0);
        for (Eigen::Index t = 0; t < n; ++t) {
            const double phi = -2.0 * std::numbers::pi * k * t / n;
            X += x[t] * std::complex<double>(std::cos(phi), std::sin(phi));
        }
        spec_energy += std::norm(X);
    }
    const double time_energy = x.square().sum();
    CHECK(std::abs(spec_energy / n - time_energy) < 1e-6 * time_energy);
}

TEST_CASE("extract_features dispatches and repeats bit-for-bit") {
    const vcry::Signal s{synth::saw_bl(130.0, 1.0, 10000), 10000};
    for (const Method m : vcry::kAllMethods) {
        const vcry::FeatureVector a = vcry::extract_features(s, m);
        const vcry::FeatureVector b = vcry::extract_features(s, m);
        CHECK(a.method == m);
        CHECK(a.values.size() == vcry::method_dim(m));
        CHECK(a.source_rate > 0);
        REQUIRE(b.values.size() == a.values.size());
        CHECK((a.values == b.values).all());
    }
}
