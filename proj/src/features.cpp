#include "vcry/features.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "vcry/audio.hpp"
#include "vcry/errors.hpp"

namespace vcry {
namespace {

Signal at_working_rate(const Signal& s) {
    return s.sample_rate == kWorkingRate ? s : resample(s, kWorkingRate);
}

double population_std(const Eigen::Ref<const Eigen::ArrayXd>& v) {
    const double mean = v.mean();
    return std::sqrt((v - mean).square().mean());
}

double median(Eigen::ArrayXd v) {
    std::sort(v.begin(), v.end());
    const Eigen::Index n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

FeatureVector tagged(Method m, Eigen::ArrayXd values, const Signal& source) {
    FeatureVector fv;
    fv.method = m;
    fv.values = std::move(values);
    fv.source_samples = source.samples.size();
    fv.source_rate = source.sample_rate;
    return fv;
}

} // namespace

const char* method_name(Method m) noexcept {
    switch (m) {
    case Method::pitch: return "pitch";
    case Method::stats: return "stats";
    case Method::lpc: return "lpc";
    case Method::zcr: return "zcr";
    case Method::fft: return "fft";
    }
    return "unknown";
}

Method parse_method(const std::string& name) {
    for (const Method m : kAllMethods)
        if (name == method_name(m))
            return m;
    fail(Err::BadFormat, "unknown method: " + name);
}

Eigen::Index method_dim(Method m) noexcept {
    switch (m) {
    case Method::pitch: return 5;
    case Method::stats: return 6;
    case Method::lpc: return 12;
    case Method::zcr: return 2;
    case Method::fft: return 64;
    }
    return 0;
}

FeatureVector pitch_features(const PitchTrack& track) {
    if (track.frames.empty())
        fail(Err::EmptyTrack, "pitch features of an empty track");

    std::vector<double> voiced_f0;
    double conf_sum = 0.0;
    for (const FramePitch& fp : track.frames) {
        conf_sum += fp.confidence;
        if (fp.voiced)
            voiced_f0.push_back(*fp.f0);
    }

    FeatureVector fv;
    fv.method = Method::pitch;
    fv.source_samples = static_cast<Eigen::Index>(track.frames.size());
    fv.source_rate = track.sample_rate;
    fv.values = Eigen::ArrayXd::Zero(5);
    if (voiced_f0.empty())
        return fv;

    Eigen::ArrayXd f0 = Eigen::Map<Eigen::ArrayXd>(
        voiced_f0.data(), static_cast<Eigen::Index>(voiced_f0.size()));
    fv.values[0] = f0.mean();
    fv.values[1] = population_std(f0);
    fv.values[2] = median(f0);
    fv.values[3] = static_cast<double>(voiced_f0.size()) / track.frames.size();
    fv.values[4] = conf_sum / track.frames.size();
    return fv;
}

FeatureVector stat_features(const Signal& s) {
    if (s.samples.size() == 0)
        fail(Err::EmptyInput, "stat features of empty signal");

    const double mean = s.samples.mean();
    const Eigen::ArrayXd centered = s.samples - mean;
    const double variance = centered.square().mean();
    const double sd = std::sqrt(variance);

    Eigen::ArrayXd v(6);
    v[0] = mean;
    v[1] = variance;
    v[2] = sd;
    v[3] = variance > 0.0 ? centered.cube().mean() / (sd * sd * sd) : 0.0;
    v[4] = variance > 0.0 ? centered.square().square().mean() / (variance * variance) : 0.0;
    v[5] = s.samples.abs().mean();
    return tagged(Method::stats, std::move(v), s);
}

LpcFit levinson_durbin(const Eigen::Ref<const Eigen::ArrayXd>& r, int order) {
    if (r.size() < order + 1)
        fail(Err::LengthMismatch, "need order+1 autocorrelation values");
    if (r[0] <= 0.0)
        fail(Err::DegenerateFrame, "zero-energy autocorrelation");

    // Error-filter coefficients: x[n] + sum_{j>=1} a[j] x[n-j] = e[n].
    Eigen::ArrayXd a = Eigen::ArrayXd::Zero(order + 1);
    a[0] = 1.0;
    Eigen::ArrayXd reflection = Eigen::ArrayXd::Zero(order);
    double error = r[0];

    for (int i = 1; i <= order; ++i) {
        // A nearly perfectly predictable frame exhausts the error early;
        // stop rather than divide by the residual round-off.
        if (error <= r[0] * 1e-12)
            break;
        double acc = r[i];
        for (int j = 1; j < i; ++j)
            acc += a[j] * r[i - j];
        const double k = std::clamp(-acc / error, -1.0, 1.0);
        Eigen::ArrayXd next = a;
        for (int j = 1; j < i; ++j)
            next[j] = a[j] + k * a[i - j];
        next[i] = k;
        a = next;
        reflection[i - 1] = k;
        error *= 1.0 - k * k;
    }

    LpcFit fit;
    fit.prediction = -a.tail(order);
    fit.reflection = reflection;
    fit.error = error;
    return fit;
}

FeatureVector lpc_features(const Signal& s, int order, const FrameConfig& cfg) {
    if (s.samples.size() == 0)
        fail(Err::EmptyInput, "lpc features of empty signal");
    const Signal input = at_working_rate(s);

    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(order);
    int used = 0;
    for (const Eigen::Index start : frame_signal(input, cfg)) {
        const auto frame = input.samples.segment(start, cfg.frame_len);
        if (frame.square().mean() <= cfg.energy_floor)
            continue;
        const Eigen::ArrayXd r = autocorr(frame, order);
        if (r[0] <= 0.0)
            continue;
        acc += levinson_durbin(r, order).prediction;
        ++used;
    }
    if (used == 0)
        fail(Err::DegenerateFrame, "no frame with usable energy");
    return tagged(Method::lpc, acc / used, s);
}

FeatureVector zcr_features(const Signal& s, const FrameConfig& cfg) {
    if (s.samples.size() == 0)
        fail(Err::EmptyInput, "zcr features of empty signal");
    const Signal input = at_working_rate(s);

    const std::vector<Eigen::Index> starts = frame_signal(input, cfg);
    Eigen::ArrayXd rates(static_cast<Eigen::Index>(starts.size()));
    for (std::size_t i = 0; i < starts.size(); ++i) {
        const auto frame = input.samples.segment(starts[i], cfg.frame_len);
        Eigen::Index crossings = 0;
        for (Eigen::Index n = 1; n < cfg.frame_len; ++n)
            if (frame[n - 1] * frame[n] < 0.0)
                ++crossings;
        rates[static_cast<Eigen::Index>(i)] =
            static_cast<double>(crossings) / static_cast<double>(cfg.frame_len - 1);
    }

    Eigen::ArrayXd v(2);
    v[0] = rates.mean();
    v[1] = population_std(rates);
    return tagged(Method::zcr, std::move(v), s);
}

FeatureVector fft_features(const Signal& s, Eigen::Index bins, const FrameConfig& cfg) {
    if (s.samples.size() == 0)
        fail(Err::EmptyInput, "fft features of empty signal");
    if (bins < 1)
        fail(Err::BadFormat, "bins must be positive");
    const Signal input = at_working_rate(s);

    Eigen::Index nfft = 1;
    while (nfft < cfg.frame_len)
        nfft *= 2;
    const Eigen::Index half = nfft / 2; // bins 0..half cover [0, fs/2]

    const Eigen::ArrayXd window = make_window(cfg.window, cfg.frame_len);
    const std::vector<Eigen::Index> starts = frame_signal(input, cfg);

    Eigen::FFT<double> fft;
    Eigen::ArrayXd mean_mag = Eigen::ArrayXd::Zero(half + 1);
    std::vector<double> padded(static_cast<std::size_t>(nfft), 0.0);
    std::vector<std::complex<double>> spec;
    for (const Eigen::Index start : starts) {
        const Eigen::ArrayXd shaped = input.samples.segment(start, cfg.frame_len) * window;
        std::fill(padded.begin(), padded.end(), 0.0);
        for (Eigen::Index n = 0; n < cfg.frame_len; ++n)
            padded[static_cast<std::size_t>(n)] = shaped[n];
        fft.fwd(spec, padded);
        for (Eigen::Index k = 0; k <= half; ++k)
            mean_mag[k] += std::abs(spec[static_cast<std::size_t>(k)]);
    }
    mean_mag /= static_cast<double>(starts.size());

    const Eigen::ArrayXd compressed = (1.0 + mean_mag).log();

    Eigen::ArrayXd pooled = Eigen::ArrayXd::Zero(bins);
    Eigen::ArrayXd counts = Eigen::ArrayXd::Zero(bins);
    for (Eigen::Index k = 0; k <= half; ++k) {
        const Eigen::Index j = std::min(bins - 1, k * bins / half);
        pooled[j] += compressed[k];
        counts[j] += 1.0;
    }
    return tagged(Method::fft, pooled / counts, s);
}

FeatureVector extract_features(const Signal& s, Method m, const FrameConfig& cfg) {
    switch (m) {
    case Method::pitch: return pitch_features(extract_pitch(s, cfg));
    case Method::stats: return stat_features(s);
    case Method::lpc: return lpc_features(s, 12, cfg);
    case Method::zcr: return zcr_features(s, cfg);
    case Method::fft: return fft_features(s, 64, cfg);
    }
    fail(Err::BadFormat, "unknown method");
}

} // namespace vcry
