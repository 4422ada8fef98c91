#include "ubands/is_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ubands {

void ImpactParams::validate() const {
    if (!(i0 > 0.0)) throw std::invalid_argument("i0 must be > 0");
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must be in (0, 1]");
    if (!(sigma_d > 0.0)) throw std::invalid_argument("sigma_d must be > 0");
    if (!(p0 > 0.0)) throw std::invalid_argument("p0 must be > 0");
    if (!(v_d > 0.0)) throw std::invalid_argument("v_d must be > 0");
    if (!(g0 > 0.0)) throw std::invalid_argument("g0 must be > 0");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in (0, 1)");
}

RiskParams RiskParams::from_aversion(double aversion, const ImpactParams& p, double x0) {
    if (!(aversion > 0.0)) throw std::invalid_argument("risk aversion must be > 0");
    return RiskParams{aversion, p.sigma_d * x0 * p.p0 / aversion};
}

void PowerLawSchedule::validate() const {
    if (!(t_dur > 0.0)) throw std::invalid_argument("schedule duration must be > 0");
    if (!(nu >= 0.0)) throw std::invalid_argument("schedule shape must be >= 0");
}

double residual(const PowerLawSchedule& sched, double t) {
    if (t < 0.0) throw std::invalid_argument("volume time must be >= 0");
    if (t >= sched.t_dur) return 0.0;
    return sched.x0 * std::pow(1.0 - t / sched.t_dur, sched.nu);
}

double trading_rate(const PowerLawSchedule& sched, double t) {
    if (t < 0.0 || t >= sched.t_dur) return 0.0;
    return sched.x0 * sched.nu / sched.t_dur * std::pow(1.0 - t / sched.t_dur, sched.nu - 1.0);
}

double instantaneous_impact(const ImpactParams& p, double rate) {
    return p.i0 * p.sigma_d * p.p0 * std::pow(rate / p.v_d, p.beta);
}

namespace {

double shape_factor(double nu, double beta) {
    const double denom = 1.0 + (nu - 1.0) * (beta + 1.0);
    if (!(denom > 0.0)) throw std::invalid_argument("shape outside the convergent range");
    return std::pow(nu, beta + 1.0) / denom;
}

}  // namespace

double impact_cost(double t_dur, double nu, const ImpactParams& p, double x0) {
    if (!(t_dur > 0.0)) throw std::invalid_argument("duration must be > 0");
    return shape_factor(nu, p.beta) * p.i0 * p.sigma_d * x0 * p.p0 * std::pow(x0 / (t_dur * p.v_d), p.beta);
}

double timing_risk_sq(double t_dur, double nu, const ImpactParams& p, double x0) {
    if (!(t_dur > 0.0)) throw std::invalid_argument("duration must be > 0");
    if (!(nu >= 0.0)) throw std::invalid_argument("shape must be >= 0");
    const double s = p.sigma_d * x0 * p.p0;
    return s * s * t_dur / (2.0 * nu + 1.0);
}

double total_cost(double t_dur, double nu, const ImpactParams& p, const RiskParams& r, double x0) {
    return impact_cost(t_dur, nu, p, x0) + timing_risk_sq(t_dur, nu, p, x0) / (2.0 * r.rho);
}

double optimal_duration(const ImpactParams& p, double aversion, double x0) {
    if (!(aversion > 0.0) || !(x0 > 0.0)) throw std::invalid_argument("aversion and x0 must be > 0");
    const double e = 1.0 / (p.beta + 1.0);
    return std::pow(6.0 * p.beta * p.i0 / aversion, e) * std::pow(x0 / p.v_d, p.beta * e);
}

double optimal_participation(const ImpactParams& p, double aversion, double x0) {
    return x0 / (optimal_duration(p, aversion, x0) * p.v_d);
}

double optimal_participation_direct(const ImpactParams& p, double aversion, double x0) {
    const double e = 1.0 / (p.beta + 1.0);
    return std::pow(aversion / (6.0 * p.beta * p.i0), e) * std::pow(x0 / p.v_d, e);
}

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double tol) {
    if (!(hi > lo)) throw std::invalid_argument("golden section needs hi > lo");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double mid = 0.5 * (a + b);
    // Endpoint minima are not bracketed by interior probes.
    double best = mid, fbest = f(mid);
    for (double e : {lo, hi}) {
        const double fe = f(e);
        if (fe < fbest) {
            best = e;
            fbest = fe;
        }
    }
    return best;
}

ShapeResult optimal_shape(double t_dur, const ImpactParams& p, const RiskParams& r, double x0,
                          const ShapeSearch& search) {
    if (!(t_dur > 0.0)) throw std::invalid_argument("duration must be > 0");
    auto cost = [&](double nu) { return total_cost(t_dur, nu, p, r, x0); };
    ShapeResult res;
    res.nu = golden_section_minimize(cost, search.nu_lo, search.nu_hi, search.tol);
    res.cost = cost(res.nu);
    res.at_upper_bound = search.nu_hi - res.nu <= search.tol;
    return res;
}

double optimal_shortfall(const ImpactParams& p, double aversion, double x0, double nu) {
    const double w = p.beta / (p.beta + 1.0);
    return std::pow(aversion / (6.0 * p.i0 * p.beta), w) * shape_factor(nu, p.beta) * p.i0 * p.sigma_d * p.p0 * x0 *
           std::pow(x0 / p.v_d, w);
}

double powerlaw_kernel_cost(double t_dur, double nu, const ImpactParams& p, double x0) {
    if (!(p.gamma < 1.0)) throw std::invalid_argument("decay exponent gamma must be < 1");
    if (!(t_dur > 0.0)) throw std::invalid_argument("duration must be > 0");
    const double denom = 2.0 - p.gamma + (p.beta + 1.0) * (nu - 1.0);
    if (!(denom > 0.0)) throw std::invalid_argument("shape outside the convergent range");
    const double gammas = std::tgamma(1.0 - p.gamma) * std::tgamma(nu) / std::tgamma(1.0 - p.gamma + nu);
    return std::pow(t_dur, 1.0 - p.gamma - p.beta) * p.i0 * p.sigma_d * p.g0 * x0 * p.p0 *
           std::pow(x0 / p.v_d, p.beta) * std::pow(nu, p.beta + 1.0) * gammas / denom;
}

Moments lognormal_moments(const VolumeDistribution& dist, double omega) {
    if (!(omega > 0.0)) throw std::invalid_argument("omega must be > 0");
    if (!(dist.sigma_z >= 0.0)) throw std::invalid_argument("sigma_z must be >= 0");
    const double ws = omega * dist.sigma_z;
    const double mean = std::exp(-omega * dist.mu_z + 0.5 * ws * ws);
    return Moments{mean, std::sqrt(std::expm1(ws * ws)) * mean};
}

void IsBandDurations::validate() const {
    if (!(t_min > 0.0 && t_min <= t_tgt && t_tgt <= t_max))
        throw std::invalid_argument("band durations must satisfy 0 < t_min <= t_tgt <= t_max");
}

namespace {

IsBandDurations durations_from(double c, const Moments& m, double eta, double nu) {
    if (!(eta >= 0.0)) throw std::invalid_argument("eta must be >= 0");
    if (!(m.mean - eta * m.std > 0.0))
        throw std::invalid_argument("discretion too large: minimum duration collapses to <= 0");
    IsBandDurations d;
    d.t_tgt = c * m.mean;
    d.t_min = c * (m.mean - eta * m.std);
    d.t_max = c * (m.mean + eta * m.std);
    d.nu = nu;
    d.eta = eta;
    return d;
}

}  // namespace

IsBandDurations band_durations(const ImpactParams& p, double aversion, double x0, const VolumeDistribution& dist,
                               double eta, double nu) {
    const double omega = p.beta / (p.beta + 1.0);
    const double c = std::pow(x0, omega) * std::pow(6.0 * p.beta * p.i0 / aversion, 1.0 / (p.beta + 1.0));
    return durations_from(c, lognormal_moments(dist, omega), eta, nu);
}

IsBandDurations band_durations_from_moments(double t_tgt, const Moments& m, double eta, double nu) {
    if (!(t_tgt > 0.0) || !(m.mean > 0.0)) throw std::invalid_argument("target duration and mean must be > 0");
    return durations_from(t_tgt / m.mean, m, eta, nu);
}

BandSet is_bands_at(const IsBandDurations& dur, double x0, double t) {
    if (t < 0.0) throw std::invalid_argument("volume time must be >= 0");
    auto executed = [&](double t_dur) { return x0 - residual(PowerLawSchedule{x0, t_dur, dur.nu}, t); };
    BandSet b;
    b.t = t;
    b.x0 = x0;
    b.x_max = executed(dur.t_min);
    b.x_tgt = executed(dur.t_tgt);
    b.x_min = executed(dur.t_max);
    return b;
}

IsReport optimize_is(const IsProblem& pr) {
    pr.impact.validate();
    if (!(pr.x0 > 0.0)) throw std::invalid_argument("x0 must be > 0");
    IsReport rep;
    rep.t_opt = optimal_duration(pr.impact, pr.aversion, pr.x0);
    rep.p_opt = optimal_participation(pr.impact, pr.aversion, pr.x0);
    const RiskParams risk = RiskParams::from_aversion(pr.aversion, pr.impact, pr.x0);
    rep.shape = optimal_shape(rep.t_opt, pr.impact, risk, pr.x0, pr.search);
    rep.omega = pr.omega.value_or(pr.impact.beta / (pr.impact.beta + 1.0));
    rep.moments = lognormal_moments(pr.volume, rep.omega);
    if (pr.quoted_moments) {
        rep.durations = band_durations_from_moments(rep.t_opt, *pr.quoted_moments, pr.eta, rep.shape.nu);
    } else if (pr.omega) {
        rep.durations = band_durations_from_moments(rep.t_opt, rep.moments, pr.eta, rep.shape.nu);
    } else {
        rep.durations = band_durations(pr.impact, pr.aversion, pr.x0, pr.volume, pr.eta, rep.shape.nu);
    }
    rep.impact_cost_linear = impact_cost(rep.t_opt, 1.0, pr.impact, pr.x0);
    rep.impact_cost_shaped = impact_cost(rep.t_opt, rep.shape.nu, pr.impact, pr.x0);
    rep.timing_risk = std::sqrt(timing_risk_sq(rep.t_opt, rep.shape.nu, pr.impact, pr.x0));
    rep.total_cost_shaped = rep.shape.cost;
    rep.optimal_shortfall = optimal_shortfall(pr.impact, pr.aversion, pr.x0, rep.shape.nu);
    rep.powerlaw_kernel_cost = powerlaw_kernel_cost(rep.t_opt, rep.shape.nu, pr.impact, pr.x0);
    return rep;
}

}  // namespace ubands
