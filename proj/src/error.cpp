#include "grouprep/error.hpp"

namespace grouprep {

std::string_view errc_name(Errc code) {
    switch (code) {
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::IoError: return "IoError";
    case Errc::MissingColumn: return "MissingColumn";
    case Errc::RowSkipped: return "RowSkipped";
    case Errc::EndpointUnreachable: return "EndpointUnreachable";
    case Errc::QueryRejected: return "QueryRejected";
    case Errc::KeyMismatch: return "KeyMismatch";
    case Errc::EmptyTable: return "EmptyTable";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::EmptyFile: return "EmptyFile";
    case Errc::ZeroNorm: return "ZeroNorm";
    case Errc::TooFewWords: return "TooFewWords";
    case Errc::DegenerateDistribution: return "DegenerateDistribution";
    case Errc::NonFiniteLoss: return "NonFiniteLoss";
    case Errc::DuplicateAxis: return "DuplicateAxis";
    case Errc::EmptyPole: return "EmptyPole";
    case Errc::OverlappingPoles: return "OverlappingPoles";
    case Errc::AxisExcluded: return "AxisExcluded";
    case Errc::ZeroAxis: return "ZeroAxis";
    case Errc::EmptyLexicon: return "EmptyLexicon";
    case Errc::NoUsableAxes: return "NoUsableAxes";
    case Errc::ConstantInput: return "ConstantInput";
    case Errc::TooFewDecades: return "TooFewDecades";
    case Errc::IntervalMissing: return "IntervalMissing";
    case Errc::TooFewTransitions: return "TooFewTransitions";
    case Errc::EmptySample: return "EmptySample";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace grouprep
