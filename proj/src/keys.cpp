#include "vcry/keys.hpp"

#include <cctype>

#include "vcry/errors.hpp"

namespace vcry {

void validate_password(const std::string& text) {
    if (text.size() != 8)
        fail(Err::WrongLength, "password must be exactly 8 characters");
    bool upper = false, digit = false, special = false;
    for (unsigned char c : text) {
        if (c < 33 || c > 126)
            fail(Err::NonPrintable, "password characters must be printable ASCII (33..126)");
        if (std::isupper(c)) upper = true;
        else if (std::isdigit(c)) digit = true;
        else if (!std::isalpha(c)) special = true;
    }
    if (!upper) fail(Err::MissingClass, "password needs an uppercase letter");
    if (!digit) fail(Err::MissingClass, "password needs a decimal digit");
    if (!special) fail(Err::MissingClass, "password needs a special character");
}

std::vector<int> ascii_encode(const std::string& text) {
    std::vector<int> codes;
    codes.reserve(text.size());
    for (unsigned char c : text)
        codes.push_back(static_cast<int>(c));
    return codes;
}

std::vector<int> caesar_shift(const std::vector<int>& x, int shift) {
    std::vector<int> y;
    y.reserve(x.size());
    for (int v : x)
        y.push_back(v + shift);
    return y;
}

std::uint64_t digits_to_u64(const std::string& digits) {
    std::uint64_t value = 0;
    for (char c : digits)
        value = value * 10u + static_cast<std::uint64_t>(c - '0');  // wraps mod 2^64
    return value;
}

KeyPair concat_and_split(const std::vector<int>& y) {
    if (y.empty())
        fail(Err::EmptyInput, "no values to concatenate");
    std::string z;
    for (int v : y)
        z += std::to_string(v);
    const std::size_t cut = (z.size() + 1) / 2;  // key1 is the longer half
    KeyPair keys;
    keys.key1_digits = z.substr(0, cut);
    keys.key2_digits = z.substr(cut);
    keys.key1 = digits_to_u64(keys.key1_digits);
    keys.key2 = digits_to_u64(keys.key2_digits);
    return keys;
}

KeyPair derive_keys(const std::string& text) {
    validate_password(text);
    return concat_and_split(caesar_shift(ascii_encode(text), 4));
}

} // namespace vcry
