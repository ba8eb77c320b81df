#pragma once

#include <stdexcept>
#include <string>

namespace oamspec {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The spectral query sits on a zero of the resolvent determinant Z.
class SpectralPole : public Error {
public:
    explicit SpectralPole(double z_magnitude)
        : Error("spectral pole: |Z| = " + std::to_string(z_magnitude) + " below pole epsilon"),
          z_magnitude_(z_magnitude) {}

    double z_magnitude() const noexcept { return z_magnitude_; }

private:
    double z_magnitude_;
};

/// A fast-path closed form was called outside the parameter domain it is valid on.
class InvalidScenario : public Error {
public:
    using Error::Error;
};

/// A domain invariant does not hold (|p| > 1, non-unit norm, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed scenario document or CSV.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    explicit ParseError(const std::string& what) : ParseError(what, 0) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Invalid integrator configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The time-domain oracle has not decayed enough for the Fourier integral to be trusted.
class NotConverged : public Error {
public:
    using Error::Error;
};

/// Profile has no structure to measure (all zero, or constant).
class DegenerateProfile : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace oamspec
