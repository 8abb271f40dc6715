#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace grouprep {

enum class Errc {
    MalformedLine,
    IoError,
    MissingColumn,
    RowSkipped,
    EndpointUnreachable,
    QueryRejected,
    KeyMismatch,
    EmptyTable,
    DimensionMismatch,
    EmptyFile,
    ZeroNorm,
    TooFewWords,
    DegenerateDistribution,
    NonFiniteLoss,
    DuplicateAxis,
    EmptyPole,
    OverlappingPoles,
    AxisExcluded,
    ZeroAxis,
    EmptyLexicon,
    NoUsableAxes,
    ConstantInput,
    TooFewDecades,
    IntervalMissing,
    TooFewTransitions,
    EmptySample,
    InvalidConfig,
    InvalidArgument,
};

std::string_view errc_name(Errc code);

// Every failure the library reports carries one of the codes above so that
// callers (tests, the CLI exit-code mapping) can branch on the kind.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace grouprep
