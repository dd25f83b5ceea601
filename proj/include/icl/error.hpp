#pragma once

#include <stdexcept>
#include <string>

namespace icl {

struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct UnsupportedScenario : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularMatrix : std::runtime_error {
    explicit SingularMatrix(const std::string& what, double cond_estimate = 0.0)
        : std::runtime_error(what), cond(cond_estimate) {}
    double cond;
};

struct TrainingFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw InvalidArgument(msg);
}

}  // namespace icl
