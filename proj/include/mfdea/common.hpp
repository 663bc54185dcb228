#ifndef MFDEA_COMMON_HPP
#define MFDEA_COMMON_HPP

#include <stdexcept>

namespace mfdea {

// Invalid run configuration (CLI exit code 2).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Defective or insufficient input data (CLI exit code 3).
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numerical procedure failed to converge or is ill-posed (CLI exit code 4).
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Reproducibility conventions. `paper` keeps all N-s+1 mobile windows and
// ceil-based bin counts; `compat_r` reproduces the legacy R implementation
// of the estimator (N-s windows, floor(range/h)+1 bins).
enum class Convention { paper, compat_r };

}  // namespace mfdea

#endif
