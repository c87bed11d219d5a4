#pragma once

#include <stdexcept>

namespace wvrecon {

// Error families map onto the CLI exit-code contract:
// configuration 2, numerical support 3, reconstruction failure 4.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SupportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyBinError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ReconstructionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace wvrecon
