#pragma once

#include <stdexcept>
#include <string>

namespace coldcloud {

/// Base class for numerical failures (quadrature, series).
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericalError
{
public:
    QuadratureError(const std::string& what, double achieved_error, double requested_error)
        : NumericalError(what), achieved_(achieved_error), requested_(requested_error)
    {
    }

    [[nodiscard]] double achieved_error() const noexcept { return achieved_; }
    [[nodiscard]] double requested_error() const noexcept { return requested_; }

private:
    double achieved_;
    double requested_;
};

class SeriesError : public NumericalError
{
public:
    SeriesError(const std::string& what, int terms) : NumericalError(what), terms_(terms) {}
    [[nodiscard]] int terms() const noexcept { return terms_; }

private:
    int terms_;
};

namespace detail {

// Guards shared by every time-dependent entry point; t = 0 is the release instant.
inline void require_nonnegative_time(double t, const char* where)
{
    if (!(t >= 0.0))
        throw std::domain_error(std::string(where) + ": time must be >= 0, got " + std::to_string(t));
}

} // namespace detail
} // namespace coldcloud
