#pragma once

// Adaptive Gauss-Kronrod integration on finite intervals. Every routine raises
// QuadratureError when the requested relative tolerance is not met.

#include "coldcloud/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <sstream>
#include <vector>

namespace coldcloud::quad {

struct Result
{
    double value = 0.0;
    double error = 0.0;
};

struct Options
{
    double rel_tol = 1e-9;
    double abs_tol = 0.0;
    unsigned max_depth = 25;
};

template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {})
{
    if (a == b)
        return {};
    double error = 0.0;
    double l1 = 0.0;
    // Boost's adaptive driver compares an unscaled error against a scaled
    // estimate, so the rule only behaves on [-1, 1]. Map there first.
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto mapped = [&](double u) { return half * f(mid + half * u); };
    const double inner_tol = std::max(opt.rel_tol * 0.1, 1e-14);
    const double value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
        mapped, -1.0, 1.0, opt.max_depth, inner_tol, &error, &l1);
    l1 = std::abs(l1);
    const double allowed = std::max(opt.abs_tol, opt.rel_tol * l1);
    if (!std::isfinite(value) || error > allowed) {
        std::ostringstream msg;
        msg << "quadrature on [" << a << ", " << b << "] did not converge: error estimate "
            << error << " exceeds " << allowed;
        throw QuadratureError(msg.str(), l1 > 0.0 ? error / l1 : error, opt.rel_tol);
    }
    return {value, error};
}

/// Integrates piecewise over sorted breakpoints. Breakpoints outside [a, b] are
/// clamped; peaks of the integrand should be passed here so that no subinterval
/// hides a narrow feature in its interior.
template <class F>
Result integrate_with_breaks(F&& f, double a, double b, std::vector<double> breaks,
                             const Options& opt = {})
{
    breaks.push_back(a);
    breaks.push_back(b);
    for (auto& p : breaks)
        p = std::clamp(p, a, b);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    Result total;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const Result part = integrate(f, breaks[i], breaks[i + 1], opt);
        total.value += part.value;
        total.error += part.error;
    }
    return total;
}

} // namespace coldcloud::quad
