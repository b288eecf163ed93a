#pragma once

#include <stdexcept>
#include <string>

namespace wbq {

// Numerical or model-level failure (non-convergence, saturation, overflow).
struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid configuration input; message carries file/line context when known.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace wbq
