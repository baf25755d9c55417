#include "vcry/cipher.hpp"

#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "byteio.hpp"
#include "vcry/dct.hpp"
#include "vcry/prng.hpp"

namespace vcry {

using detail::decode_f64;
using detail::decode_u32;
using detail::decode_u64;
using detail::put_f64;
using detail::put_u32;
using detail::put_u64;

CipherText encrypt(const Signal& s, const KeyPair& keys, double gain) {
    if (s.samples.size() == 0)
        fail(Err::EmptyInput, "encrypt of empty signal");
    if (!s.samples.isFinite().all())
        fail(Err::NonFinite, "signal contains NaN or infinity");
    if (!(gain > 0.0))
        fail(Err::BadFormat, "gain must be positive");

    const Eigen::Index n = s.samples.size();
    PrnStream level1 = seed(keys.key1);
    Eigen::ArrayXd x = s.samples + noise_vector(level1, n, kScrambleAmplitude);
    Eigen::ArrayXd y = dct_forward(x);
    PrnStream level3 = seed(keys.key2);
    Eigen::ArrayXd z = y + noise_vector(level3, n, kScrambleAmplitude);

    CipherText c;
    c.coefficients = gain * z;
    c.gain = gain;
    c.source_length = static_cast<std::uint64_t>(n);
    return c;
}

Signal decrypt(const CipherText& c, const KeyPair& keys, int sample_rate) {
    if (c.coefficients.size() == 0)
        fail(Err::EmptyInput, "decrypt of empty ciphertext");
    if (static_cast<std::uint64_t>(c.coefficients.size()) != c.source_length)
        fail(Err::LengthMismatch, "coefficient count disagrees with recorded source length");

    const Eigen::Index n = c.coefficients.size();
    Eigen::ArrayXd z = c.coefficients / c.gain;
    PrnStream level3 = seed(keys.key2);
    Eigen::ArrayXd y = z - noise_vector(level3, n, kScrambleAmplitude);
    Eigen::ArrayXd x = dct_inverse(y);
    PrnStream level1 = seed(keys.key1);

    Signal out;
    out.samples = x - noise_vector(level1, n, kScrambleAmplitude);
    out.sample_rate = sample_rate;
    return out;
}

double mse(const Eigen::Ref<const Eigen::ArrayXd>& a,
           const Eigen::Ref<const Eigen::ArrayXd>& b) {
    if (a.size() == 0 || b.size() == 0)
        fail(Err::EmptyInput, "mse of empty array");
    if (a.size() != b.size())
        fail(Err::LengthMismatch, "mse of arrays with different lengths");
    return (a - b).square().mean();
}

void write_vcr(const std::filesystem::path& path, const CipherText& c) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        fail(Err::IoFailure, "cannot open for writing: " + path.string());

    os.write("VCRY", 4);
    put_u32(os, c.format_version);
    put_u64(os, c.source_length);
    put_f64(os, c.gain);
    for (Eigen::Index i = 0; i < c.coefficients.size(); ++i)
        put_f64(os, c.coefficients[i]);
    os.flush();
    if (!os)
        fail(Err::IoFailure, "write failed: " + path.string());
}

CipherText read_vcr(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        fail(Err::IoFailure, "cannot open: " + path.string());

    unsigned char header[24];
    is.read(reinterpret_cast<char*>(header), sizeof(header));
    if (is.gcount() != static_cast<std::streamsize>(sizeof(header)))
        fail(Err::TruncatedData, "container shorter than header: " + path.string());
    if (std::memcmp(header, "VCRY", 4) != 0)
        fail(Err::BadMagic, "not a voice-template container: " + path.string());

    CipherText c;
    c.format_version = decode_u32(header + 4);
    c.source_length = decode_u64(header + 8);
    c.gain = decode_f64(header + 16);
    if (c.format_version != kVcrFormatVersion)
        fail(Err::BadFormat,
             "unsupported container version " + std::to_string(c.format_version));
    if (!(c.gain > 0.0) || !std::isfinite(c.gain))
        fail(Err::BadFormat, "container gain must be positive and finite");

    const std::uint64_t n = c.source_length;
    std::vector<unsigned char> body(static_cast<std::size_t>(n) * 8);
    is.read(reinterpret_cast<char*>(body.data()),
            static_cast<std::streamsize>(body.size()));
    if (is.gcount() != static_cast<std::streamsize>(body.size()))
        fail(Err::TruncatedData, "container ends mid-payload: " + path.string());
    if (is.peek() != std::char_traits<char>::eof())
        fail(Err::BadFormat, "trailing bytes after payload: " + path.string());

    c.coefficients.resize(static_cast<Eigen::Index>(n));
    for (std::uint64_t i = 0; i < n; ++i)
        c.coefficients[static_cast<Eigen::Index>(i)] = decode_f64(body.data() + i * 8);
    return c;
}

} // namespace vcry
