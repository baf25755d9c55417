#include "vcry/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "byteio.hpp"
#include "vcry/errors.hpp"

namespace vcry {

using detail::decode_i16;
using detail::decode_u16;
using detail::decode_u32;
using detail::put_i16;
using detail::put_u16;
using detail::put_u32;

Signal read_wav(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        fail(Err::IoFailure, "cannot open: " + path.string());
    std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(is),
                                     std::istreambuf_iterator<char>()};

    if (bytes.size() < 12)
        fail(Err::TruncatedData, "file shorter than RIFF header: " + path.string());
    if (std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        fail(Err::BadMagic, "not a RIFF/WAVE file: " + path.string());

    bool have_fmt = false;
    bool have_data = false;
    std::uint16_t format_code = 0;
    std::uint16_t channels = 0;
    std::uint32_t rate = 0;
    std::uint16_t bits = 0;
    const unsigned char* data = nullptr;
    std::size_t data_size = 0;

    // Chunks are (id, u32 size, payload) with payloads padded to even length.
    std::size_t off = 12;
    while (off + 8 <= bytes.size()) {
        const unsigned char* id = bytes.data() + off;
        const std::size_t size = decode_u32(bytes.data() + off + 4);
        off += 8;
        if (off + size > bytes.size())
            fail(Err::TruncatedData, "chunk runs past end of file: " + path.string());
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (size < 16)
                fail(Err::TruncatedData, "fmt chunk too small: " + path.string());
            format_code = decode_u16(bytes.data() + off);
            channels = decode_u16(bytes.data() + off + 2);
            rate = decode_u32(bytes.data() + off + 4);
            bits = decode_u16(bytes.data() + off + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = bytes.data() + off;
            data_size = size;
            have_data = true;
        }
        off += size + (size & 1);
    }

    if (!have_fmt)
        fail(Err::TruncatedData, "missing fmt chunk: " + path.string());
    if (!have_data)
        fail(Err::TruncatedData, "missing data chunk: " + path.string());
    if (format_code != 1)
        fail(Err::UnsupportedCodec,
             "PCM only, got format code " + std::to_string(format_code));
    if (bits != 8 && bits != 16)
        fail(Err::UnsupportedDepth, std::to_string(bits) + " bits per sample");
    if (channels == 0 || rate == 0)
        fail(Err::BadFormat, "fmt chunk declares zero channels or zero rate");

    const std::size_t bytes_per_sample = bits / 8;
    const std::size_t frame_bytes = bytes_per_sample * channels;
    const std::size_t frames = data_size / frame_bytes;

    Signal out;
    out.sample_rate = static_cast<int>(rate);
    out.samples.resize(static_cast<Eigen::Index>(frames));
    for (std::size_t i = 0; i < frames; ++i) {
        double acc = 0.0;
        for (std::size_t ch = 0; ch < channels; ++ch) {
            const unsigned char* p = data + i * frame_bytes + ch * bytes_per_sample;
            if (bits == 16)
                acc += decode_i16(p) / 32768.0;
            else
                acc += (static_cast<int>(p[0]) - 128) / 128.0;
        }
        out.samples[static_cast<Eigen::Index>(i)] = acc / channels;
    }
    return out;
}

void write_wav(const Signal& s, const std::filesystem::path& path) {
    if (!s.samples.isFinite().all())
        fail(Err::NonFinite, "signal contains NaN or infinity");
    if (s.sample_rate <= 0)
        fail(Err::BadFormat, "sample rate must be positive");

    std::ofstream os(path, std::ios::binary);
    if (!os)
        fail(Err::IoFailure, "cannot open for writing: " + path.string());

    const auto data_size = static_cast<std::uint32_t>(s.samples.size() * 2);
    const auto rate = static_cast<std::uint32_t>(s.sample_rate);
    os.write("RIFF", 4);
    put_u32(os, 36 + data_size);
    os.write("WAVE", 4);
    os.write("fmt ", 4);
    put_u32(os, 16);
    put_u16(os, 1);        // PCM
    put_u16(os, 1);        // mono
    put_u32(os, rate);
    put_u32(os, rate * 2); // byte rate
    put_u16(os, 2);        // block align
    put_u16(os, 16);       // bits per sample
    os.write("data", 4);
    put_u32(os, data_size);

    for (Eigen::Index i = 0; i < s.samples.size(); ++i) {
        const double v = std::clamp(s.samples[i], -1.0, 1.0);
        const long q = std::lround(v * 32768.0);
        put_i16(os, static_cast<std::int16_t>(std::clamp(q, -32768L, 32767L)));
    }
    os.flush();
    if (!os)
        fail(Err::IoFailure, "write failed: " + path.string());
}

Signal resample(const Signal& s, int target_rate) {
    if (target_rate <= 0)
        fail(Err::BadFormat, "target rate must be positive");
    if (s.sample_rate == target_rate)
        return s;

    Signal out;
    out.sample_rate = target_rate;
    const Eigen::Index n = s.samples.size();
    if (n == 0) {
        out.samples.resize(0);
        return out;
    }

    const double step = static_cast<double>(s.sample_rate) / target_rate;
    const auto m = std::max<Eigen::Index>(
        1, static_cast<Eigen::Index>(
               std::llround(static_cast<double>(n) * target_rate / s.sample_rate)));
    out.samples.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double pos = static_cast<double>(i) * step;
        const auto j = std::min(static_cast<Eigen::Index>(pos), n - 1);
        const auto j2 = std::min(j + 1, n - 1);
        const double frac = pos - static_cast<double>(j);
        out.samples[i] = (1.0 - frac) * s.samples[j] + frac * s.samples[j2];
    }
    return out;
}

Signal normalize_peak(const Signal& s) {
    if (s.samples.size() == 0)
        fail(Err::EmptyInput, "normalize of empty signal");
    const double peak = s.samples.abs().maxCoeff();
    Signal out = s;
    if (peak > 0.0)
        out.samples /= peak;
    return out;
}

} // namespace vcry
