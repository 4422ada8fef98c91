#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ubands/schedule_core.hpp"

namespace ubands {

/// Moments (and optionally quantiles) of the normalized cumulative volume
/// curve u(t) on a uniform intraday grid. Grid values are clock seconds.
struct VolumeProfile {
    std::vector<double> grid;
    std::vector<double> u_mean;
    std::vector<double> u_std;
    // Present only when the profile was built from enough history.
    double q = 0.0;
    std::vector<double> u_quantile_lo;
    std::vector<double> u_quantile_hi;

    bool has_quantiles() const { return !u_quantile_lo.empty(); }
    double t0() const { return grid.front(); }
    double t1() const { return grid.back(); }

    void validate() const;
};

enum class BandMode { Symmetric, Quantile };

struct VwapConfig {
    double eta = 1.0;
    double q = 0.05;
    BandMode mode = BandMode::Symmetric;
    bool strict = false;

    void validate() const;
};

/// Minimum ensemble size for empirical quantile bands.
inline constexpr std::size_t kMinQuantileHistory = 20;

/// Rescales a raw cumulative curve so it runs from 0 at the first sample
/// to 1 at the last. Throws on flat or decreasing input.
std::vector<double> normalize_curve(std::span<const double> u_raw);

/// Uniform grid of n_bins + 1 points on [t0, t1].
std::vector<double> uniform_grid(double t0, double t1, std::size_t n_bins);

/// Pointwise mean / sample std (divisor H-1) of an ensemble of normalized
/// daily curves. Quantiles at q and 1-q are attached when H >= 20.
VolumeProfile build_profile(const std::vector<std::vector<double>>& history,
                            std::vector<double> grid, double q = 0.05);

/// Linear interpolation of a gridded series at t (t clamped to the grid).
double interpolate(std::span<const double> grid, std::span<const double> values, double t);

/// Band trajectories at clock time t. In Quantile mode without quantiles
/// on the profile, falls back to Gaussian bands with eta = z(1 - q).
BandSet vwap_bands_at(const VolumeProfile& profile, const VwapConfig& cfg, double x0, double t);

/// Convex blend of the historical mean curve with an intraday estimate.
VolumeProfile blend_profile(const VolumeProfile& profile, std::span<const double> u_today, double weight);

/// One row per day: date followed by cumulative fractions.
std::vector<std::vector<double>> load_history_csv(const std::string& path);
void save_history_csv(const std::string& path, const std::vector<std::vector<double>>& history);

void save_profile_json(const std::string& path, const VolumeProfile& profile);
VolumeProfile load_profile_json(const std::string& path);

}  // namespace ubands
