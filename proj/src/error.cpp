#include "newsframe/error.hpp"

namespace newsframe {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::EmptyVocabulary: return "EmptyVocabulary";
    case Errc::MissingField: return "MissingField";
    case Errc::BadDate: return "BadDate";
    case Errc::ParseError: return "ParseError";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::SingleClass: return "SingleClass";
    case Errc::OutOfVocabulary: return "OutOfVocabulary";
    case Errc::NegativeDistance: return "NegativeDistance";
    case Errc::EmptyReport: return "EmptyReport";
    case Errc::DegenerateScores: return "DegenerateScores";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::TooFewArticles: return "TooFewArticles";
    case Errc::TooFewYears: return "TooFewYears";
    case Errc::YearNotInSeries: return "YearNotInSeries";
    case Errc::NoQuiescentYears: return "NoQuiescentYears";
    case Errc::NoTrainingPairs: return "NoTrainingPairs";
    case Errc::EmptyRow: return "EmptyRow";
    case Errc::EmptyCounts: return "EmptyCounts";
    case Errc::AuthError: return "AuthError";
    case Errc::RateLimited: return "RateLimited";
    case Errc::NetworkError: return "NetworkError";
    case Errc::ConvergenceFailure: return "ConvergenceFailure";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_input_error(Errc code) noexcept {
  switch (code) {
    case Errc::RateLimited:
    case Errc::NetworkError:
    case Errc::ConvergenceFailure:
    case Errc::NoConvergence:
    case Errc::IoError:
      return false;
    default:
      return true;
  }
}

}  // namespace newsframe
