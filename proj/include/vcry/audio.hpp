#pragma once

#include <filesystem>

#include "vcry/signal.hpp"

namespace vcry {

// Read a mono or multichannel PCM WAV file (8- or 16-bit).  Multichannel
// input is averaged to mono; chunks other than fmt/data are skipped.
Signal read_wav(const std::filesystem::path& path);

// Write 16-bit PCM mono.  Samples are clamped to [-1, 1) before scaling.
void write_wav(const Signal& s, const std::filesystem::path& path);

// Linear-interpolation resampler; identity when rates already match.
Signal resample(const Signal& s, int target_rate);

// Scale so the absolute peak is 1; all-zero input is returned unchanged.
Signal normalize_peak(const Signal& s);

} // namespace vcry
