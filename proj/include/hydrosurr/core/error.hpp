#pragma once

#include <stdexcept>
#include <string>

namespace hydrosurr {

/// Failure categories; the CLI maps each to a distinct exit code.
enum class ErrorKind { config, data, numeric, io };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};
struct DataError : Error {
    explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};
struct NumericError : Error {
    explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};
struct IoError : Error {
    explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

}  // namespace hydrosurr
