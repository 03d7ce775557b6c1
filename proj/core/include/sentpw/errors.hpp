#ifndef SENTPW_ERRORS_HPP
#define SENTPW_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sentpw {

// Invalid configuration: bad hyper-parameter, unknown key, dimension mismatch.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input data. `row` is 1-based; 0 means the error is not tied to a row.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what, std::size_t row = 0)
        : std::runtime_error(row == 0 ? what : "row " + std::to_string(row) + ": " + what),
          row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

// Checkpoint file is truncated, corrupted or of an unsupported version.
class CheckpointError : public DataError {
public:
    using DataError::DataError;
};

// Non-finite loss or gradient during optimization.
class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sentpw

#endif  // SENTPW_ERRORS_HPP
