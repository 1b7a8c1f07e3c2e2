#ifndef MEMEKIT_ERRORS_HPP
#define MEMEKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace memekit {

enum class ErrorCode {
  UnsupportedGlyph,
  ImageTooSmall,
  RegionOutOfBounds,
  InvalidDensity,
  InvalidCell,
  ParseError,
  DuplicateId,
  InvalidBox,
  InvalidFraction,
  OcrProcessFailed,
  ZeroVector,
  DimMismatch,
  InvalidTau,
  InvalidMagnitude,
  EmptyEval,
  InvalidLabel,
  InvalidScore,
  DecodeError,
  ShapeError,
  IoError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnsupportedGlyph: return "UnsupportedGlyph";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::RegionOutOfBounds: return "RegionOutOfBounds";
    case ErrorCode::InvalidDensity: return "InvalidDensity";
    case ErrorCode::InvalidCell: return "InvalidCell";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::InvalidBox: return "InvalidBox";
    case ErrorCode::InvalidFraction: return "InvalidFraction";
    case ErrorCode::OcrProcessFailed: return "OcrProcessFailed";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::InvalidTau: return "InvalidTau";
    case ErrorCode::InvalidMagnitude: return "InvalidMagnitude";
    case ErrorCode::EmptyEval: return "EmptyEval";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::InvalidScore: return "InvalidScore";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable error code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace memekit

#endif  // MEMEKIT_ERRORS_HPP
