#ifndef LGMIX_ERRORS_HPP
#define LGMIX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lgmix {

/// Bad distribution parameters, non-finite inputs, out-of-range hyperparameters.
class invalid_parameter : public std::invalid_argument {
public:
  explicit invalid_parameter(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Cholesky or eigendecomposition failure on a matrix that should be PD.
class decomposition_error : public std::runtime_error {
public:
  explicit decomposition_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// MCMC transition failure (NaN log-likelihood, exhausted slice bracket, underflow).
class sampler_error : public std::runtime_error {
public:
  explicit sampler_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Inconsistent configuration: schema/data mismatch, bad file contents, bad CLI options.
class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem-level failure, annotated with the offending path.
class io_error : public std::runtime_error {
public:
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace lgmix

#endif
