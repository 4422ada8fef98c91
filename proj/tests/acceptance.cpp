// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "partition_checks.hpp"
#include "ubands/reporting.hpp"

using namespace ubands;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void run(int id, const std::string& title, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s [%d] %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double elapsed_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

ImpactParams example_impact() { return ImpactParams{0.1, 0.5, 0.0113, 24.7, 7e7, 1.0, 0.5}; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome is_numeric_example() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto p = example_impact();
    const double t = optimal_duration(p, 5.0, 1e6);
    const double rate = optimal_participation(p, 5.0, 1e6);
    const auto risk = RiskParams::from_aversion(5.0, p, 1e6);
    const auto shape = optimal_shape(t, p, risk, 1e6);
    const double secs = elapsed_since(t0);

    double grid_nu = 1.001, best = 1e300;
    for (int i = 0; i <= 8999; ++i) {
        const double nu = 1.001 + 1e-3 * i;
        const double c = total_cost(t, nu, p, risk, 1e6);
        if (c < best) {
            best = c;
            grid_nu = nu;
        }
    }
    const bool ok = std::abs(t - 0.037) <= 0.0005 && std::abs(rate - 0.38) <= 0.005 &&
                    std::abs(shape.nu - 1.65) <= 0.05 && std::abs(grid_nu - shape.nu) <= 2e-3 && secs < 1.0;
    return {ok, fmt("T_opt=%.5f p_opt=%.4f nu_opt=%.4f grid_nu=%.3f", t, rate, shape.nu, grid_nu)};
}

Outcome band_durations_quoted() {
    const double t = optimal_duration(example_impact(), 5.0, 1e6);
    const Moments quoted{1.3e-4, 0.4e-4};
    const auto d = band_durations_from_moments(t, quoted, 1.0);
    const auto recomputed = lognormal_moments({18.0, 0.4}, 0.5);
    // The quoted std cannot be reproduced from the stated volume distribution.
    const bool discrepancy = std::abs(recomputed.std - 0.25e-4) < 0.01e-4 && std::abs(quoted.std - recomputed.std) > 1e-5;
    const bool ok = std::abs(d.t_min - 0.025) <= 0.001 && std::abs(d.t_max - 0.049) <= 0.001 && discrepancy;
    return {ok, fmt("T_min=%.4f T_tgt=%.4f T_max=%.4f; quoted std=%.2e vs recomputed std=%.3e (mean %.3e)", d.t_min,
                    d.t_tgt, d.t_max, quoted.std, recomputed.std, recomputed.mean)};
}

Outcome quadrature_oracles() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_delta = 0.0, worst_pl = 0.0;
    for (int i = 0; i < 50; ++i) {
        auto p = oracle::random_params(rng);
        p.beta = 0.2 + 0.8 * u(rng);
        const double t = 0.01 + 0.99 * u(rng);
        const double nu = 1.0 + 3.0 * u(rng);
        const double x0 = std::pow(10.0, 4.0 + 3.0 * u(rng));
        const double cf = impact_cost(t, nu, p, x0);
        worst_delta = std::max(worst_delta, std::abs(cf - oracle::delta_kernel_cost(t, nu, p, x0)) / cf);
    }
    for (int i = 0; i < 20; ++i) {
        auto p = oracle::random_params(rng);
        p.beta = 0.2 + 0.8 * u(rng);
        const double t = 0.01 + 0.99 * u(rng);
        const double nu = 1.0 + 3.0 * u(rng);
        const double x0 = std::pow(10.0, 4.0 + 3.0 * u(rng));
        const double cf = powerlaw_kernel_cost(t, nu, p, x0);
        worst_pl = std::max(worst_pl, std::abs(cf - oracle::powerlaw_cost(t, nu, p, x0)) / cf);
    }
    const double secs = elapsed_since(t0);
    return {worst_delta < 1e-6 && worst_pl < 1e-3 && secs < 30.0,
            fmt("max rel err delta-kernel=%.2e (50 sets), power-law kernel=%.2e (20 sets)", worst_delta, worst_pl)};
}

Outcome lognormal_monte_carlo() {
    const VolumeDistribution dist{18.0, 0.4};
    const auto m = lognormal_moments(dist, 0.5);
    std::mt19937_64 rng(99);
    std::normal_distribution<double> z(dist.mu_z, dist.sigma_z);
    const int n = 1000000;
    double s = 0.0, ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = std::exp(-0.5 * z(rng));
        s += v;
        ss += v * v;
    }
    const double mean = s / n;
    const double sd = std::sqrt((ss - n * mean * mean) / (n - 1));
    const double em = std::abs(mean / m.mean - 1.0), es = std::abs(sd / m.std - 1.0);
    return {em < 0.01 && es < 0.03, fmt("mean rel err=%.2e, std rel err=%.2e", em, es)};
}

Outcome stationarity() {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int bad = 0;
    for (int i = 0; i < 20; ++i) {
        const auto p = oracle::random_params(rng);
        const double a = 0.5 + 20.0 * u(rng);
        const double x0 = std::pow(10.0, 4.0 + 3.0 * u(rng));
        const auto r = RiskParams::from_aversion(a, p, x0);
        const double t = optimal_duration(p, a, x0);
        const double c = total_cost(t, 1.0, p, r, x0);
        if (!(total_cost(t * (1 + 1e-4), 1.0, p, r, x0) > c && total_cost(t * (1 - 1e-4), 1.0, p, r, x0) > c)) ++bad;
    }
    return {bad == 0, fmt("%d of 20 parameter sets not a strict local minimum", bad)};
}

Outcome partition_suite() {
    std::mt19937_64 rng(77);
    int bad = 0;
    std::string first;
    for (int i = 0; i < 10000; ++i) {
        const auto v = checks::partition_violation(checks::random_case(rng));
        if (!v.empty()) {
            if (first.empty()) first = v;
            ++bad;
        }
    }
    return {bad == 0, fmt("%d failures in 10000 cases%s%s", bad, first.empty() ? "" : ", first: ", first.c_str())};
}

Outcome vwap_sessions() {
    const auto t0 = std::chrono::steady_clock::now();
    const SimConfig base;
    const auto profile = make_profile(ProfileSpec{}, base.session_length, 0.0, base.session_length);
    const Order order{Side::Buy, 1e6, 0.0, std::nullopt, std::nullopt};
    VwapConfig v;
    v.eta = 1.0;
    int incomplete = 0;
    double worst = 1.0;
    std::size_t counted_all = 0, within_all = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        SimConfig sim = base;
        sim.seed = seed;
        const auto tape = generate_market(sim);
        VwapBandSource src(profile, v, order.total_shares);
        const auto res = run_order(src, order, tape, sim, DriverConfig{});
        if (!res.state.complete() || res.end_time > sim.session_length) ++incomplete;
        std::size_t counted = 0, within = 0;
        for (std::size_t k = 0; k < res.reports.size(); ++k) {
            const bool near_shift = res.reports[k].block_shift || (k > 0 && res.reports[k - 1].block_shift);
            if (near_shift) continue;
            ++counted;
            within += res.reports[k].compliance_after == Compliance::Within;
        }
        counted_all += counted;
        within_all += within;
        worst = std::min(worst, static_cast<double>(within) / static_cast<double>(counted));
    }
    const double secs = elapsed_since(t0);
    return {incomplete == 0 && worst >= 0.99 && secs < 60.0,
            fmt("incomplete sessions=%d, worst in-band fraction=%.4f, pooled=%.5f", incomplete, worst,
                static_cast<double>(within_all) / static_cast<double>(counted_all))};
}

Outcome discrete_sessions() {
    const SimConfig base;
    const auto profile = make_profile(ProfileSpec{}, base.session_length, 0.0, base.session_length);
    const Order order{Side::Buy, 1e6, 0.0, std::nullopt, std::nullopt};
    VwapConfig v;
    TauBandSource bands = [&](double t) { return vwap_bands_at(profile, v, order.total_shares, t); };
    int violations = 0, incomplete = 0, runs = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        SimConfig sim = base;
        sim.seed = seed;
        const auto tape = generate_market(sim);
        for (std::size_t n : {4u, 13u, 26u}) {
            SimulatedTactic tactic(tape, sim, order.side);
            const auto res = run_schedule(order, clock_grid(0.0, sim.session_length, n), bands, tactic);
            ++runs;
            for (const auto& r : res.ledger) {
                const double f = static_cast<double>(r.filled);
                violations += f < r.x_min || f > r.x_max;
            }
            incomplete += res.state.filled() != static_cast<std::int64_t>(order.total_shares);
        }
    }
    return {violations == 0 && incomplete == 0,
            fmt("%d runs, boundary violations=%d, incomplete=%d", runs, violations, incomplete)};
}

Outcome pov_sessions() {
    const auto rates = PovRates::constant(0.05, 0.10, 0.15);
    // Large enough that the order never completes within a session.
    const Order order{Side::Buy, 1e8, 0.0, std::nullopt, std::nullopt};
    double lo = 1.0, hi = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        SimConfig sim;
        sim.seed = seed;
        sim.dark_arrival_rate = 0.0;
        const auto tape = generate_market(sim);
        PovBandSource src(rates, order, false);
        const auto res = run_order(src, order, tape, sim, DriverConfig{});
        const double ratio = static_cast<double>(res.state.filled()) / src.accumulator().v_e;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }

    PovBandSource src(rates, order, false);
    src.on_market_trade(200000.0, 24.7, 10.0);
    const auto before = src.bands_at(11.0);
    src.on_block(25000.0);
    const auto after = src.bands_at(11.0);
    const bool shift = after.x_min - before.x_min == 25000.0 && after.x_tgt - before.x_tgt == 25000.0 &&
                       after.x_max - before.x_max == 25000.0;
    return {lo >= 0.05 && hi <= 0.15 && shift,
            fmt("filled/V_e range over 100 sessions [%.4f, %.4f]; block shift exact=%s", lo, hi, shift ? "yes" : "no")};
}

Outcome determinism() {
    const auto root = fs::temp_directory_path() / "ubands_acceptance";
    fs::remove_all(root);
    int mismatched = 0;
    for (auto s : {StrategyName::Vwap, StrategyName::Pov, StrategyName::Is, StrategyName::Discrete}) {
        nlohmann::json j{{"sim", {{"seed", 2026}}}};
        if (s == StrategyName::Is) j["is"] = preset("paper-example");
        auto cfg = parse_run_config(j, s);
        const auto a = root / (to_string(s) + "_a");
        const auto b = root / (to_string(s) + "_b");
        cfg.output.dir = a.string();
        cmd_run(cfg);
        cfg.output.dir = b.string();
        cmd_run(cfg);
        for (const char* f : {"trajectory.csv", "fills.csv", "metrics.json"})
            mismatched += slurp(a / f) != slurp(b / f) || slurp(a / f).empty();
    }
    return {mismatched == 0, fmt("%d mismatched files across 4 strategies", mismatched)};
}

}  // namespace

int main() {
    run(1, "IS numeric example", is_numeric_example);
    run(2, "band durations from quoted moments", band_durations_quoted);
    run(3, "closed forms vs quadrature", quadrature_oracles);
    run(4, "lognormal moments vs Monte Carlo", lognormal_monte_carlo);
    run(5, "stationarity of T_opt", stationarity);
    run(6, "partition property suite", partition_suite);
    run(7, "continuous VWAP driver over 100 sessions", vwap_sessions);
    run(8, "discrete scheduler boundaries", discrete_sessions);
    run(9, "POV tracking and block shift", pov_sessions);
    run(10, "determinism", determinism);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
