#pragma once

#include <stdexcept>

namespace calabi {

// (n, k, a0, b0) violate the cone conditions n >= 2, k >= 1, 0 < a0 < b0.
struct invalid_params : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Time outside [0, T) passed to class evaluation.
struct out_of_range_time : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Profile coefficients violate 0 < a < b.
struct invalid_coefficients : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Profile violates u' > 0 or u'' > 0 where the log terms need them.
struct non_admissible_profile : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct linear_solve_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct line_search_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct insufficient_samples : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Run directory missing or corrupt (CLI exit code 5).
struct run_dir_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Output location cannot be created or written (CLI exit code 4).
struct output_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace calabi
