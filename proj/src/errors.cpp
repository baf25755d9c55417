#include "vcry/errors.hpp"

namespace vcry {

const char* err_name(Err code) noexcept {
    switch (code) {
    case Err::WrongLength: return "WrongLength";
    case Err::MissingClass: return "MissingClass";
    case Err::NonPrintable: return "NonPrintable";
    case Err::EmptyInput: return "EmptyInput";
    case Err::NonFinite: return "NonFinite";
    case Err::LengthMismatch: return "LengthMismatch";
    case Err::ZeroPower: return "ZeroPower";
    case Err::NoiseTooShort: return "NoiseTooShort";
    case Err::TooShort: return "TooShort";
    case Err::LagTooLarge: return "LagTooLarge";
    case Err::PeakAtBoundary: return "PeakAtBoundary";
    case Err::EmptyTrack: return "EmptyTrack";
    case Err::DegenerateFrame: return "DegenerateFrame";
    case Err::MethodMismatch: return "MethodMismatch";
    case Err::EmptyDatabase: return "EmptyDatabase";
    case Err::DuplicateTemplate: return "DuplicateTemplate";
    case Err::EmptyDataset: return "EmptyDataset";
    case Err::EmptyTable: return "EmptyTable";
    case Err::LabelMissing: return "LabelMissing";
    case Err::BadMagic: return "BadMagic";
    case Err::UnsupportedCodec: return "UnsupportedCodec";
    case Err::UnsupportedDepth: return "UnsupportedDepth";
    case Err::TruncatedData: return "TruncatedData";
    case Err::IoFailure: return "IoFailure";
    case Err::BadFormat: return "BadFormat";
    }
    return "Unknown";
}

} // namespace vcry
