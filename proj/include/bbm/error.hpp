#pragma once

#include <stdexcept>
#include <string>

namespace bbm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A configuration or argument violates a documented invariant.
class ConfigError : public Error
{
  public:
    using Error::Error;
};

/// A numeric argument is outside the domain of a function.
class DomainError : public Error
{
  public:
    using Error::Error;
};

/// Requested data was not recorded (e.g. bridge minima were not tracked).
class MissingDataError : public Error
{
  public:
    using Error::Error;
};

/// Too few samples for a statistical procedure.
class InsufficientDataError : public Error
{
  public:
    InsufficientDataError(const std::string& what, std::size_t minimum)
        : Error(what + " (minimum " + std::to_string(minimum) + ")"), minimum_(minimum)
    {
    }

    std::size_t minimum() const noexcept { return minimum_; }

  private:
    std::size_t minimum_;
};

/// Filesystem or stream failure.
class IoError : public Error
{
  public:
    using Error::Error;
};

/// The live particle population exceeded the configured ceiling.
class ResourceLimitError : public Error
{
  public:
    ResourceLimitError(std::size_t ceiling, double t_reached)
        : Error("particle ceiling " + std::to_string(ceiling) + " exceeded at t=" +
                std::to_string(t_reached)),
          ceiling_(ceiling), t_reached_(t_reached)
    {
    }

    std::size_t ceiling() const noexcept { return ceiling_; }
    double t_reached() const noexcept { return t_reached_; }

  private:
    std::size_t ceiling_;
    double t_reached_;
};

} // namespace bbm
