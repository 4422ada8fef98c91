#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "ubands/is_optimizer.hpp"

namespace oracle {

inline double rate(double x0, double t_dur, double nu, double t) {
    return x0 * nu / t_dur * std::pow(std::max(0.0, 1.0 - t / t_dur), nu - 1.0);
}

inline double impact(const ubands::ImpactParams& p, double r) {
    return p.i0 * p.sigma_d * p.p0 * std::pow(r / p.v_d, p.beta);
}

// int_0^T Ydot(t) J(Ydot(t)) dt: the double integral with a delta kernel.
inline double delta_kernel_cost(double t_dur, double nu, const ubands::ImpactParams& p, double x0) {
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [&](double t) {
        const double r = rate(x0, t_dur, nu, t);
        return r * impact(p, r);
    };
    return ts.integrate(f, 0.0, t_dur, 1e-13);
}

// int_0^T Ydot(t) int_0^t J(Ydot(s)) g0 (t - s)^-gamma ds dt. The inner
// integral substitutes t - s = u^(1 / (1 - gamma)) to remove the singularity.
inline double powerlaw_cost(double t_dur, double nu, const ubands::ImpactParams& p, double x0) {
    using boost::math::quadrature::gauss_kronrod;
    const double g = p.gamma;
    const double k = 1.0 / (1.0 - g);
    auto inner = [&](double t) {
        auto f = [&](double u) { return impact(p, rate(x0, t_dur, nu, t - std::pow(u, k))) * p.g0 * k; };
        return gauss_kronrod<double, 31>::integrate(f, 0.0, std::pow(t, 1.0 - g), 12, 1e-10);
    };
    auto outer = [&](double t) { return rate(x0, t_dur, nu, t) * inner(t); };
    return gauss_kronrod<double, 31>::integrate(outer, 0.0, t_dur, 12, 1e-9);
}

inline double timing_risk_sq(double t_dur, double nu, const ubands::ImpactParams& p, double x0) {
    using boost::math::quadrature::gauss_kronrod;
    auto y2 = [&](double t) {
        const double y = x0 * std::pow(1.0 - t / t_dur, nu);
        return y * y;
    };
    return p.sigma_d * p.sigma_d * p.p0 * p.p0 * gauss_kronrod<double, 61>::integrate(y2, 0.0, t_dur, 15, 1e-14);
}

// Standard normal upper quantile by bisection on the tail probability.
inline double normal_upper_quantile(double q) {
    double lo = 0.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (0.5 * std::erfc(mid / std::sqrt(2.0)) > q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Type-7 sample quantile.
inline double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// Random impact parameters around realistic magnitudes.
inline ubands::ImpactParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ubands::ImpactParams p;
    p.i0 = 0.05 + 0.5 * u(rng);
    p.beta = 0.3 + 0.6 * u(rng);
    p.sigma_d = 0.005 + 0.04 * u(rng);
    p.p0 = 5.0 + 200.0 * u(rng);
    p.v_d = std::pow(10.0, 6.0 + 2.0 * u(rng));
    p.g0 = 0.5 + u(rng);
    p.gamma = 0.2 + 0.6 * u(rng);
    return p;
}

}  // namespace oracle
