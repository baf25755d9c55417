#include "vcry/pitch.hpp"

#include <algorithm>
#include <cmath>

#include "vcry/audio.hpp"
#include "vcry/errors.hpp"

namespace vcry {
namespace {

void validate_config(const FrameConfig& cfg, int fs) {
    if (cfg.frame_len < 2 || cfg.hop < 1)
        fail(Err::BadFormat, "frame_len must be >= 2 and hop >= 1");
    if (cfg.max_lag < 1 || cfg.max_lag > cfg.frame_len - 1)
        fail(Err::BadFormat, "max_lag must lie in [1, frame_len - 1]");
    if (!(cfg.f_min > 0.0) || !(cfg.f_min < cfg.f_max))
        fail(Err::BadFormat, "need 0 < f_min < f_max");
    if (static_cast<Eigen::Index>(std::floor(fs / cfg.f_min)) > cfg.max_lag)
        fail(Err::BadFormat, "f_min needs lags beyond max_lag");
    if (static_cast<Eigen::Index>(std::ceil(fs / cfg.f_max)) < 1)
        fail(Err::BadFormat, "f_max above the sample rate");
    if (cfg.clip_ratio < 0.0 || cfg.clip_ratio >= 1.0)
        fail(Err::BadFormat, "clip_ratio must lie in [0, 1)");
    if (!(cfg.epsilon > 0.0))
        fail(Err::BadFormat, "epsilon must be positive");
    if (!(cfg.voicing_ratio_threshold > 0.0) || !(cfg.voicing_ratio_threshold < 1.0))
        fail(Err::BadFormat, "voicing_ratio_threshold must lie in (0, 1)");
    if (cfg.energy_floor < 0.0)
        fail(Err::BadFormat, "energy_floor must be nonnegative");
}

} // namespace

std::vector<Eigen::Index> frame_signal(const Signal& s, const FrameConfig& cfg) {
    if (s.samples.size() < cfg.frame_len)
        fail(Err::TooShort, "signal shorter than one frame");
    std::vector<Eigen::Index> starts;
    for (Eigen::Index l = 0; l + cfg.frame_len <= s.samples.size(); l += cfg.hop)
        starts.push_back(l);
    return starts;
}

Eigen::ArrayXd center_clip(const Eigen::Ref<const Eigen::ArrayXd>& frame,
                           double clip_ratio) {
    const double level = clip_ratio * frame.abs().maxCoeff();
    return (frame > level).select(frame - level,
                                  (frame < -level).select(frame + level, 0.0));
}

Eigen::ArrayXd autocorr(const Eigen::Ref<const Eigen::ArrayXd>& frame,
                        Eigen::Index max_lag) {
    const Eigen::Index n = frame.size();
    if (max_lag > n - 1)
        fail(Err::LagTooLarge, "max_lag exceeds frame length - 1");
    Eigen::ArrayXd r(max_lag + 1);
    for (Eigen::Index tau = 0; tau <= max_lag; ++tau)
        r[tau] = frame.head(n - tau).matrix().dot(frame.tail(n - tau).matrix()) / n;
    return r;
}

Eigen::ArrayXd amdf(const Eigen::Ref<const Eigen::ArrayXd>& frame,
                    Eigen::Index max_lag) {
    const Eigen::Index n = frame.size();
    if (max_lag > n - 1)
        fail(Err::LagTooLarge, "max_lag exceeds frame length - 1");
    Eigen::ArrayXd d(max_lag + 1);
    d[0] = 0.0;
    for (Eigen::Index tau = 1; tau <= max_lag; ++tau)
        d[tau] = (frame.tail(n - tau) - frame.head(n - tau)).abs().sum() /
                 static_cast<double>(n - tau);
    return d;
}

Eigen::ArrayXd weighted_score(const Eigen::Ref<const Eigen::ArrayXd>& R,
                              const Eigen::Ref<const Eigen::ArrayXd>& D,
                              double epsilon) {
    if (R.size() != D.size())
        fail(Err::LengthMismatch, "score arrays differ in length");
    return R / (D + epsilon);
}

double refine_peak(const Eigen::Ref<const Eigen::ArrayXd>& W,
                   Eigen::Index tau_star) {
    if (tau_star < 1 || tau_star > W.size() - 2)
        fail(Err::PeakAtBoundary, "peak has no neighbor on one side");
    const double a = W[tau_star - 1];
    const double b = W[tau_star];
    const double c = W[tau_star + 1];
    const double denom = a - 2.0 * b + c;
    if (denom == 0.0)
        return static_cast<double>(tau_star);
    const double delta = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
    return static_cast<double>(tau_star) + delta;
}

Eigen::ArrayXd make_window(Window kind, Eigen::Index n) {
    if (kind == Window::rectangular || n == 1)
        return Eigen::ArrayXd::Ones(n);
    Eigen::ArrayXd w(n);
    for (Eigen::Index i = 0; i < n; ++i)
        w[i] = 0.54 - 0.46 * std::cos(2.0 * EIGEN_PI * i / (n - 1));
    return w;
}

Eigen::ArrayXd window_lag_gain(const Eigen::Ref<const Eigen::ArrayXd>& w,
                               Eigen::Index max_lag) {
    const Eigen::Index n = w.size();
    if (max_lag > n - 1)
        fail(Err::LagTooLarge, "max_lag exceeds window length - 1");
    const double total = w.square().sum();
    Eigen::ArrayXd gain(max_lag + 1);
    for (Eigen::Index tau = 0; tau <= max_lag; ++tau)
        gain[tau] = w.head(n - tau).matrix().dot(w.tail(n - tau).matrix()) / total;
    return gain;
}

PitchTrack extract_pitch(const Signal& s, const FrameConfig& cfg) {
    const Signal& input = s.sample_rate == kWorkingRate ? s : resample(s, kWorkingRate);
    const int fs = kWorkingRate;
    validate_config(cfg, fs);

    const auto band_lo =
        std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::ceil(fs / cfg.f_max)));
    const auto band_hi =
        std::min(cfg.max_lag, static_cast<Eigen::Index>(std::floor(fs / cfg.f_min)));

    const Eigen::ArrayXd window = make_window(cfg.window, cfg.frame_len);
    const Eigen::ArrayXd lag_gain = window_lag_gain(window, cfg.max_lag);

    PitchTrack track;
    track.sample_rate = fs;
    for (const Eigen::Index start : frame_signal(input, cfg)) {
        const auto raw = input.samples.segment(start, cfg.frame_len);
        const double energy = raw.square().mean();

        // Clip against the raw frame's own peak, then taper.  Clipping first
        // keeps the clip level meaningful across the whole frame instead of
        // letting the taper push edge samples under the threshold.
        const Eigen::ArrayXd shaped = center_clip(raw, cfg.clip_ratio) * window;

        const Eigen::ArrayXd r = autocorr(shaped, cfg.max_lag);
        const Eigen::ArrayXd d = amdf(shaped, cfg.max_lag);
        const Eigen::ArrayXd w = weighted_score(r, d, cfg.epsilon);

        Eigen::Index tau_star = band_lo;
        for (Eigen::Index tau = band_lo + 1; tau <= band_hi; ++tau)
            if (w[tau] > w[tau_star])
                tau_star = tau;

        const double lag = (tau_star > band_lo && tau_star < band_hi)
                               ? refine_peak(w, tau_star)
                               : static_cast<double>(tau_star);

        // Peak strength relative to the zero-lag energy, with the window's
        // own lag falloff divided out so long lags are judged fairly.
        double confidence = 0.0;
        if (r[0] > 0.0)
            confidence = std::clamp(r[tau_star] / r[0] / lag_gain[tau_star], 0.0, 1.0);

        FramePitch fp;
        fp.start_sample = start;
        fp.lag = lag;
        fp.confidence = confidence;
        fp.voiced = energy > cfg.energy_floor &&
                    confidence > cfg.voicing_ratio_threshold;
        if (fp.voiced)
            fp.f0 = fs / lag;
        track.frames.push_back(fp);
    }
    return track;
}

} // namespace vcry
