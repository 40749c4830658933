#pragma once

#include <stdexcept>
#include <string>

namespace hoaxnet {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter lies outside its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// The requested edge count cannot be realized as a simple graph.
class CapacityError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& what)
        : Error(path + ": " + what), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& what)
        : Error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Data read from disk violates a structural invariant (duplicate edge, bad id, ...).
class InvariantError : public Error {
public:
    using Error::Error;
};

}  // namespace hoaxnet
