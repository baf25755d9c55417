#pragma once

#include <stdexcept>
#include <string>

namespace vcry {

// Error categories surfaced by the library. Each maps to a stable name so
// callers (and the CLI) can report failures without string matching.
enum class Err {
    WrongLength,
    MissingClass,
    NonPrintable,
    EmptyInput,
    NonFinite,
    LengthMismatch,
    ZeroPower,
    NoiseTooShort,
    TooShort,
    LagTooLarge,
    PeakAtBoundary,
    EmptyTrack,
    DegenerateFrame,
    MethodMismatch,
    EmptyDatabase,
    DuplicateTemplate,
    EmptyDataset,
    EmptyTable,
    LabelMissing,
    BadMagic,
    UnsupportedCodec,
    UnsupportedDepth,
    TruncatedData,
    IoFailure,
    BadFormat,
};

const char* err_name(Err code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Err code, const std::string& what)
        : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}

    Err code() const noexcept { return code_; }

private:
    Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) {
    throw Error(code, what);
}

} // namespace vcry
