#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "vcry/signal.hpp"

namespace vcry {

// All frame constants assume this rate; extract_pitch resamples its input.
inline constexpr int kWorkingRate = 10000;

enum class Window { rectangular, hamming };

// Analysis parameters.  Defaults are tuned for 10 kHz input: 30 ms frames,
// 10 ms hop, lags up to 20 ms, and a 50-400 Hz search band.
struct FrameConfig {
    Eigen::Index frame_len = 300;
    Eigen::Index max_lag = 200;
    Eigen::Index hop = 100;
    Window window = Window::hamming;
    double clip_ratio = 0.3;
    double f_min = 50.0;
    double f_max = 400.0;
    double epsilon = 0.1;
    double voicing_ratio_threshold = 0.3;
    double energy_floor = 1e-6;
};

struct FramePitch {
    Eigen::Index start_sample = 0;
    bool voiced = false;
    std::optional<double> f0; // Hz, present iff voiced
    double confidence = 0.0;  // [0, 1]
    double lag = 0.0;         // refined period in samples
};

struct PitchTrack {
    std::vector<FramePitch> frames;
    int sample_rate = kWorkingRate;
};

// Full-frame start offsets at 0, hop, 2*hop, ...; the last partial frame is
// dropped.  Fails with TooShort when not even one frame fits.
std::vector<Eigen::Index> frame_signal(const Signal& s, const FrameConfig& cfg);

// Subtract the clip level C = clip_ratio * max|frame| from the magnitude of
// every sample; values inside (-C, C) become zero.
Eigen::ArrayXd center_clip(const Eigen::Ref<const Eigen::ArrayXd>& frame,
                           double clip_ratio);

// Short-time autocorrelation over the samples actually present:
// R[tau] = (1/N) * sum_{n=0}^{N-1-tau} x[n] * x[n+tau].
Eigen::ArrayXd autocorr(const Eigen::Ref<const Eigen::ArrayXd>& frame,
                        Eigen::Index max_lag);

// Average magnitude difference, normalized by the number of valid terms:
// D[tau] = (1/(N-tau)) * sum_{n=tau}^{N-1} |x[n] - x[n-tau]|.
Eigen::ArrayXd amdf(const Eigen::Ref<const Eigen::ArrayXd>& frame,
                    Eigen::Index max_lag);

// Combine the two detectors: W[tau] = R[tau] / (D[tau] + epsilon), so an
// AMDF null at the period amplifies the autocorrelation peak there.
Eigen::ArrayXd weighted_score(const Eigen::Ref<const Eigen::ArrayXd>& R,
                              const Eigen::Ref<const Eigen::ArrayXd>& D,
                              double epsilon);

// Quadratic interpolation through (tau-1, tau, tau+1); the correction is
// clamped to half a sample and a flat triple refines to the integer peak.
double refine_peak(const Eigen::Ref<const Eigen::ArrayXd>& W,
                   Eigen::Index tau_star);

Eigen::ArrayXd make_window(Window kind, Eigen::Index n);

// Lag-domain gain of a window: C_w[tau] = sum w[n]*w[n+tau] / sum w[n]^2.
// Used to undo the window's taper when judging peak strength, so that low
// pitches (long lags) are not penalized for the taper's autocorrelation
// falloff.  Rectangular windows give the familiar (N-tau)/N.
Eigen::ArrayXd window_lag_gain(const Eigen::Ref<const Eigen::ArrayXd>& w,
                               Eigen::Index max_lag);

// Per-frame pitch: energy gate on the raw frame, center clip at a threshold
// taken from the raw frame, window, autocorrelation + AMDF, weighted score,
// band-limited peak search (ties toward smaller lag), quadratic refinement
// away from the band edges.  Confidence is the window-compensated peak ratio
// clamped to [0, 1]; a frame is voiced when both gates pass.
PitchTrack extract_pitch(const Signal& s, const FrameConfig& cfg = {});

} // namespace vcry
