#pragma once

#include <stdexcept>
#include <string>

namespace linexp3 {

struct NotPositiveDefinite : std::runtime_error {
    explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

struct SingularCovariance : std::runtime_error {
    explicit SingularCovariance(const std::string& what) : std::runtime_error(what) {}
};

struct LossOutOfRange : std::runtime_error {
    explicit LossOutOfRange(const std::string& what) : std::runtime_error(what) {}
};

struct NonFiniteEstimate : std::runtime_error {
    explicit NonFiniteEstimate(const std::string& what) : std::runtime_error(what) {}
};

struct MismatchedConfigs : std::runtime_error {
    explicit MismatchedConfigs(const std::string& what) : std::runtime_error(what) {}
};

struct NonPositiveValue : std::runtime_error {
    explicit NonPositiveValue(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownSuite : std::runtime_error {
    explicit UnknownSuite(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace linexp3
