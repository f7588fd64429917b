#ifndef SFCM_ERROR_HPP
#define SFCM_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sfcm {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid algorithm or phantom parameters.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Caller broke a documented precondition (shape mismatch, empty input).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Malformed image header or payload; carries the byte offset of the fault.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class UnsupportedFormatError : public Error {
public:
    using Error::Error;
};

/// A centroid update saw a column whose weights sum to zero.
class DegenerateClusterError : public Error {
public:
    explicit DegenerateClusterError(std::size_t cluster)
        : Error("degenerate cluster " + std::to_string(cluster) + ": membership weights sum to zero"),
          cluster_(cluster) {}

    std::size_t cluster() const noexcept { return cluster_; }

private:
    std::size_t cluster_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace sfcm

#endif  // SFCM_ERROR_HPP
