#pragma once

#include <stdexcept>
#include <string>

namespace arh {

/// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invalid_interval_error : error { using error::error; };    ///< bad (a, b, step)
struct aliasing_error : error { using error::error; };            ///< gram defect above tolerance
struct grid_mismatch_error : error { using error::error; };       ///< curves on different grids
struct dimension_mismatch_error : error { using error::error; };  ///< incompatible shapes
struct invalid_argument_error : error { using error::error; };    ///< violated precondition
struct instability_error : error { using error::error; };         ///< operator norm of rho >= 1
struct not_psd_error : error { using error::error; };             ///< covariance not PSD
struct monotonicity_error : error { using error::error; };        ///< eigenvalues not decreasing
struct invalid_n_error : error { using error::error; };           ///< sample size too small
struct zero_energy_error : error { using error::error; };         ///< vanishing component energy
struct truncation_too_deep_error : error { using error::error; }; ///< empirical eigenvalue <= 0
struct decomposition_error : error { using error::error; };       ///< eigensolver failure
struct non_dyadic_length_error : error { using error::error; };   ///< wavelet input not 2^J
struct rank_deficiency_error : error { using error::error; };     ///< singular reduced covariance
struct io_error : error { using error::error; };                  ///< file read/write failure

}  // namespace arh
