#ifndef SNRCTL_ERRORS_HPP
#define SNRCTL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace snrctl {

struct PoleOnCircle : std::runtime_error {
    explicit PoleOnCircle(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroOnCircle : std::runtime_error {
    explicit ZeroOnCircle(const std::string& what) : std::runtime_error(what) {}
};

struct Unstable : std::runtime_error {
    explicit Unstable(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct NonzeroD22 : std::runtime_error {
    explicit NonzeroD22(const std::string& what) : std::runtime_error(what) {}
};

struct NotStabilizable : std::runtime_error {
    explicit NotStabilizable(const std::string& what) : std::runtime_error(what) {}
};

struct NotDetectable : std::runtime_error {
    explicit NotDetectable(const std::string& what) : std::runtime_error(what) {}
};

struct NotPositive : std::runtime_error {
    explicit NotPositive(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroDenominator : std::runtime_error {
    explicit ZeroDenominator(const std::string& what) : std::runtime_error(what) {}
};

struct NonNormalizedChannel : std::runtime_error {
    explicit NonNormalizedChannel(const std::string& what) : std::runtime_error(what) {}
};

struct OutsideDomain : std::runtime_error {
    explicit OutsideDomain(const std::string& what) : std::runtime_error(what) {}
};

struct GridTooCoarse : std::runtime_error {
    explicit GridTooCoarse(const std::string& what) : std::runtime_error(what) {}
};

struct PerturbationFailed : std::runtime_error {
    explicit PerturbationFailed(const std::string& what) : std::runtime_error(what) {}
};

struct Infeasible : std::runtime_error {
    explicit Infeasible(const std::string& what) : std::runtime_error(what) {}
};

struct AlphaNonpositive : std::runtime_error {
    explicit AlphaNonpositive(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateLoop : std::runtime_error {
    explicit DegenerateLoop(const std::string& what) : std::runtime_error(what) {}
};

struct UnstableLoop : std::runtime_error {
    explicit UnstableLoop(const std::string& what) : std::runtime_error(what) {}
};

struct InternalStabilityFailed : std::runtime_error {
    explicit InternalStabilityFailed(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace snrctl

#endif
