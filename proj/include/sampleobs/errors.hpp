// errors.hpp — exception types thrown by scheme preconditions and analysis ops
#pragma once

#include <stdexcept>
#include <string>

namespace sampleobs {

struct DegeneratePair : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct WrongDimension : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotRealSpectrum : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InsufficientCandidates : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct PathologicalSpacing : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct PathologicalDelta : std::invalid_argument {
    PathologicalDelta(const std::string& what, std::int64_t delta)
        : std::invalid_argument(what), offending_delta(delta) {}
    std::int64_t offending_delta;
};

struct ConditionCCAViolated : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InconsistentSamples : std::runtime_error {
    InconsistentSamples(const std::string& what, double residual)
        : std::runtime_error(what), residual(residual) {}
    double residual;
};

struct NotWorstCaseSystem : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotApplicable : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace sampleobs
