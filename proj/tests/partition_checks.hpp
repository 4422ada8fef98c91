#pragma once

#include <algorithm>
#include <random>
#include <string>

#include "ubands/schedule_core.hpp"

namespace checks {

struct Case {
    ubands::BandSet bands;
    double filled = 0.0;
};

inline Case random_case(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double x0 = std::round(std::pow(10.0, 2.0 + 5.0 * u(rng)));
    double v[3] = {u(rng) * x0, u(rng) * x0, u(rng) * x0};
    std::sort(v, v + 3);
    // Some degenerate bands and some positions exactly on a boundary.
    if (u(rng) < 0.1) v[1] = v[0];
    if (u(rng) < 0.1) v[2] = v[1];
    Case c{ubands::BandSet{0.0, v[0], v[1], v[2], x0}, std::floor(u(rng) * x0)};
    const double r = u(rng);
    if (r < 0.05) c.filled = v[0];
    else if (r < 0.1) c.filled = v[2];
    else if (r < 0.15) c.filled = 0.0;
    return c;
}

// Returns an empty string when every partition invariant holds.
inline std::string partition_violation(const Case& c) {
    using namespace ubands;
    const auto& b = c.bands;
    const auto p = compute_partition(b, c.filled);
    const double tol = 1e-9 * std::max(1.0, b.x0);
    if (p.x_a < 0 || p.x_p1 < 0 || p.x_p2 < 0 || p.x_d < 0) return "negative component";
    if ((p.x_a > 0) != (c.filled < b.x_min)) return "x_a > 0 iff filled < x_min";
    if (std::abs(p.passive() - std::max(0.0, b.x_max - std::max(c.filled, b.x_min))) > tol) return "passive identity";
    if (std::abs(p.x_d + b.x_max - b.x0) > tol) return "dark complement";
    if (std::abs(p.x_a - std::max(0.0, b.x_min - c.filled)) > tol) return "aggressive amount";
    const double step = std::max(1.0, std::floor(0.01 * b.x0));
    if (c.filled + step <= b.x0) {
        const auto q = compute_partition(b, c.filled + step);
        if (q.x_a > p.x_a + tol || q.x_p1 > p.x_p1 + tol || q.x_p2 > p.x_p2 + tol) return "monotonicity";
    }
    return {};
}

}  // namespace checks
