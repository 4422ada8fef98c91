#pragma once

#include <functional>
#include <optional>

#include "ubands/schedule_core.hpp"

namespace ubands {

/// Instantaneous power-law impact J(r) = i0 * sigma_d * p0 * (r / v_d)^beta
/// and the optional power-law decay kernel g0 / |t - s|^gamma.
struct ImpactParams {
    double i0 = 0.1;
    double beta = 0.5;
    double sigma_d = 0.0113;
    double p0 = 24.7;
    double v_d = 7e7;
    double g0 = 1.0;
    double gamma = 0.5;

    void validate() const;
};

struct RiskParams {
    double aversion = 1.0;
    double rho = 1.0;  // sigma_d * x0 * p0 / aversion, currency units

    static RiskParams from_aversion(double aversion, const ImpactParams& p, double x0);
};

/// Residual shares Y(t) = x0 (1 - t/T)^nu in volume time.
struct PowerLawSchedule {
    double x0 = 0.0;
    double t_dur = 1.0;
    double nu = 1.0;

    void validate() const;
};

double residual(const PowerLawSchedule& sched, double t);

/// Trading rate -dY/dt, shares per unit volume time.
double trading_rate(const PowerLawSchedule& sched, double t);

/// Instantaneous impact per share for a rate in shares per volume day.
double instantaneous_impact(const ImpactParams& p, double rate);

/// Expected impact cost of the power-law schedule under a delta decay kernel.
double impact_cost(double t_dur, double nu, const ImpactParams& p, double x0);

/// Squared timing risk sigma_d^2 p0^2 int_0^T Y^2 dt.
double timing_risk_sq(double t_dur, double nu, const ImpactParams& p, double x0);

double total_cost(double t_dur, double nu, const ImpactParams& p, const RiskParams& r, double x0);

/// Stationary point of total_cost in T for nu = 1.
double optimal_duration(const ImpactParams& p, double aversion, double x0);

/// Average participation x0 / (T_opt v_d).
double optimal_participation(const ImpactParams& p, double aversion, double x0);

/// Same rate via the direct closed form; used to cross-check the identity.
double optimal_participation_direct(const ImpactParams& p, double aversion, double x0);

/// Bounded golden-section minimization on [lo, hi]; returns the abscissa.
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double tol);

struct ShapeSearch {
    double nu_lo = 1.0;
    double nu_hi = 10.0;
    double tol = 1e-4;
};

struct ShapeResult {
    double nu = 1.0;
    double cost = 0.0;
    bool at_upper_bound = false;
};

ShapeResult optimal_shape(double t_dur, const ImpactParams& p, const RiskParams& r, double x0,
                          const ShapeSearch& search = {});

/// Closed-form impact cost of the optimal-duration schedule with shape nu.
double optimal_shortfall(const ImpactParams& p, double aversion, double x0, double nu);

/// Impact cost under the power-law decay kernel g0 |t - s|^-gamma.
double powerlaw_kernel_cost(double t_dur, double nu, const ImpactParams& p, double x0);

/// Lognormal daily volume, log V_D ~ N(mu_z, sigma_z^2).
struct VolumeDistribution {
    double mu_z = 18.0;
    double sigma_z = 0.4;
};

struct Moments {
    double mean = 0.0;
    double std = 0.0;
};

/// Mean and standard deviation of V_D^-omega.
Moments lognormal_moments(const VolumeDistribution& dist, double omega);

struct IsBandDurations {
    double t_min = 0.0;
    double t_tgt = 0.0;
    double t_max = 0.0;
    double nu = 1.0;
    double eta = 0.0;

    void validate() const;
};

/// Durations from volume uncertainty with omega = beta / (beta + 1) and
/// c = x0^omega (6 beta i0 / A)^(1 / (beta + 1)).
IsBandDurations band_durations(const ImpactParams& p, double aversion, double x0, const VolumeDistribution& dist,
                               double eta, double nu = 1.0);

/// Durations anchored at a known target duration, with c chosen so that
/// c * mean equals t_tgt. Used with externally quoted moments.
IsBandDurations band_durations_from_moments(double t_tgt, const Moments& m, double eta, double nu = 1.0);

/// Executed-share bands in volume time. The fastest schedule bounds from above.
BandSet is_bands_at(const IsBandDurations& dur, double x0, double t);

struct IsProblem {
    ImpactParams impact;
    double aversion = 5.0;
    double x0 = 1e6;
    VolumeDistribution volume;
    double eta = 1.0;
    // Overrides the lognormal moments of V_D^-omega when set.
    std::optional<Moments> quoted_moments;
    std::optional<double> omega;
    ShapeSearch search;
};

struct IsReport {
    double t_opt = 0.0;
    double p_opt = 0.0;
    ShapeResult shape;
    double omega = 0.0;
    Moments moments;
    IsBandDurations durations;
    double impact_cost_linear = 0.0;
    double impact_cost_shaped = 0.0;
    double timing_risk = 0.0;
    double total_cost_shaped = 0.0;
    double optimal_shortfall = 0.0;
    double powerlaw_kernel_cost = 0.0;
};

IsReport optimize_is(const IsProblem& problem);

}  // namespace ubands
