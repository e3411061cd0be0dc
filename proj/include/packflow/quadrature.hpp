#pragma once

// Adaptive composite Gauss-Legendre quadrature on an interval.

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include "packflow/error.hpp"

namespace packflow {

struct QuadratureOptions {
    double tolerance = 1e-10;
    int max_depth = 40;
};

namespace detail {

template <typename F>
double gl16(F& f, double a, double b) {
    return boost::math::quadrature::gauss<double, 16>::integrate(f, a, b);
}

template <typename F>
double adaptive_panel(F& f, double a, double b, double whole, int depth,
                      const QuadratureOptions& opt) {
    const double m = 0.5 * (a + b);
    const double left = gl16(f, a, m);
    const double right = gl16(f, m, b);
    const double refined = left + right;
    if (!std::isfinite(refined))
        throw QuadratureFailure("non-finite integrand value on [" + std::to_string(a) + ", " +
                                std::to_string(b) + "]");
    if (std::abs(refined - whole) < opt.tolerance * std::max(1.0, std::abs(refined)))
        return refined;
    if (depth >= opt.max_depth)
        throw QuadratureFailure("panel halving did not reach tolerance " +
                                std::to_string(opt.tolerance));
    return adaptive_panel(f, a, m, left, depth + 1, opt) +
           adaptive_panel(f, m, b, right, depth + 1, opt);
}

}  // namespace detail

/// Integral of f over [a, b]. Panels are halved until two consecutive 16-point
/// estimates differ by less than tolerance * max(1, |value|).
template <typename F>
double integrate(F f, double a, double b, const QuadratureOptions& opt = {}) {
    if (a == b) return 0.0;
    return detail::adaptive_panel(f, a, b, detail::gl16(f, a, b), 0, opt);
}

}  // namespace packflow
