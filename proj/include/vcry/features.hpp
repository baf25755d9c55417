#pragma once

#include <array>
#include <string>

#include <Eigen/Core>

#include "vcry/pitch.hpp"
#include "vcry/signal.hpp"

namespace vcry {

enum class Method { pitch, stats, lpc, zcr, fft };

inline constexpr std::array<Method, 5> kAllMethods = {
    Method::pitch, Method::stats, Method::lpc, Method::zcr, Method::fft};

const char* method_name(Method m) noexcept;
Method parse_method(const std::string& name); // BadFormat on unknown names
Eigen::Index method_dim(Method m) noexcept;   // pitch=5 stats=6 lpc=12 zcr=2 fft=64

// Fixed-length descriptor of one utterance under one method, with the source
// extent recorded for bookkeeping.
struct FeatureVector {
    Method method = Method::pitch;
    Eigen::ArrayXd values;
    Eigen::Index source_samples = 0;
    int source_rate = 0;
};

// [mean f0 over voiced frames, std f0, median f0, voiced fraction, mean
// confidence over all frames]; a track with no voiced frame yields zeros.
FeatureVector pitch_features(const PitchTrack& track);

// [mean, variance, std, skewness, kurtosis, mean absolute amplitude] of the
// whole signal; skewness and kurtosis are defined as 0 when variance is 0.
FeatureVector stat_features(const Signal& s);

// Order-12 prediction coefficients (positive prediction convention) from the
// Levinson-Durbin recursion on each energetic frame's autocorrelation,
// averaged across frames.  Framing follows cfg at the working rate.
FeatureVector lpc_features(const Signal& s, int order = 12,
                           const FrameConfig& cfg = {});

// [mean, std] of the per-frame zero-crossing rate, crossings / (N-1).
FeatureVector zcr_features(const Signal& s, const FrameConfig& cfg = {});

// Frame-averaged log magnitude spectrum mean-pooled into equal-width bins
// over [0, fs/2] at the working rate.
FeatureVector fft_features(const Signal& s, Eigen::Index bins = 64,
                           const FrameConfig& cfg = {});

FeatureVector extract_features(const Signal& s, Method m,
                               const FrameConfig& cfg = {});

// Levinson-Durbin solve of the normal equations R a = r.  `prediction` holds
// the positive-convention predictor (x[n] ~ sum a_k x[n-k]); `reflection`
// holds the k_i, each in [-1, 1] for a valid autocorrelation sequence.
struct LpcFit {
    Eigen::ArrayXd prediction;
    Eigen::ArrayXd reflection;
    double error = 0.0;
};

LpcFit levinson_durbin(const Eigen::Ref<const Eigen::ArrayXd>& r, int order);

} // namespace vcry
