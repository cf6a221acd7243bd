#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstdint>
#include <random>

namespace testing {

inline double rel(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Adaptive Gauss-Kronrod straight from Boost, independent of the library's wrapper.
// Its error estimate bottoms out near 1e-11 relative, so tighter tolerances only
// burn time; the achieved accuracy is typically far better.
template <class F>
double gk(F f, double a, double b, double tol = 1e-10)
{
    // Integrate on [-1, 1]; Boost's adaptive error test is only consistent there.
    if (std::isinf(a) || std::isinf(b))
        return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    auto mapped = [&](double u) { return half * f(mid + half * u); };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(mapped, -1.0, 1.0, 15, tol);
}

template <class F>
double gk2(F f, double ya, double yb, double za, double zb, double tol = 1e-10)
{
    return gk([&](double y) { return gk([&](double z) { return f(y, z); }, za, zb, tol); }, ya, yb, tol);
}

// Seeded generator for property tests: each test draws its cases from a fixed seed.
class Gen
{
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
    bool coin() { return integer(0, 1) == 1; }

private:
    std::mt19937_64 rng_;
};

} // namespace testing
