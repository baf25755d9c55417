#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vcry {

// Two PRNG seeds derived from one password, kept alongside their decimal
// digit strings (the digits are the canonical form; the integers are the
// digit strings reduced modulo 2^64).
struct KeyPair {
    std::string key1_digits;
    std::string key2_digits;
    std::uint64_t key1 = 0;
    std::uint64_t key2 = 0;
};

// Passwords are exactly 8 printable-ASCII characters (codes 33..126) and
// must contain at least one uppercase letter, one decimal digit, and one
// special character (printable, neither letter nor digit).
// Throws WrongLength / NonPrintable / MissingClass.
void validate_password(const std::string& text);

std::vector<int> ascii_encode(const std::string& text);

// Plain integer addition, no alphabet wraparound.
std::vector<int> caesar_shift(const std::vector<int>& x, int shift = 4);

// Concatenate decimal representations, split at ceil(len/2); the first
// (never shorter) half is key1.
KeyPair concat_and_split(const std::vector<int>& y);

// Digit string -> integer, reduced modulo 2^64.
std::uint64_t digits_to_u64(const std::string& digits);

// validate -> ascii -> shift(+4) -> concat/split. Deterministic.
KeyPair derive_keys(const std::string& text);

} // namespace vcry
