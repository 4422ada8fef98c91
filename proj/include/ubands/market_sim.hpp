#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ubands/schedule_core.hpp"

namespace ubands {

struct SimConfig {
    std::uint64_t seed = 42;
    double session_length = 23400.0;  // seconds, 6.5 h
    double tick_interval = 1.0;
    double spread = 0.02;
    double daily_vol = 0.0113;
    double price0 = 24.7;
    double daily_volume = 7e7;
    double volume_dispersion = 0.4;  // sigma of log daily volume
    double tick_volume_noise = 0.5;  // sigma of log per-tick volume
    double dark_arrival_rate = 4.0;  // crossing opportunities per session
    double dark_block_mean = 20000.0;
    double passive_fill_coeff = 0.1;
    double impact_i0 = 0.1;
    double impact_beta = 0.5;
    double mean_reversion = 0.0;  // > 0 mean-reverting signal, < 0 trend-following
    double alpha_horizon = 300.0;
    double alpha_r_scale = 0.002;

    std::size_t n_ticks() const;
    void validate() const;
};

struct Quote {
    double bid = 0.0;
    double ask = 0.0;
    double mid() const { return 0.5 * (bid + ask); }
};

struct Trade {
    double price = 0.0;
    double qty = 0.0;
};

struct DarkCross {
    double max_qty = 0.0;
    double price = 0.0;
};

struct MarketEvent {
    double time = 0.0;
    std::variant<Quote, Trade, DarkCross> kind;
};

/// Time-ordered event stream for one session.
struct MarketTape {
    std::vector<MarketEvent> events;

    /// Events with time in (t_begin, t_end].
    std::span<const MarketEvent> window(double t_begin, double t_end) const;
    /// Latest quote at or before t.
    Quote quote_at(double t) const;
    double total_volume() const;
    std::size_t trade_count() const;
};

/// U-shaped intraday cumulative volume fraction on [0, 1].
double intraday_cumulative(double x);

/// Geometric random walk mid, lognormal per-tick volume on the intraday
/// curve, Poisson dark crossing opportunities. Pure function of cfg.
MarketTape generate_market(const SimConfig& cfg);

/// Normalized cumulative curves for h synthetic historical days on an
/// n_bins grid, drawn around the same intraday shape as the generator.
std::vector<std::vector<double>> synthetic_history(std::uint64_t seed, std::size_t h, std::size_t n_bins,
                                                   double bin_noise = 0.3);

void save_tape_csv(const std::string& path, const MarketTape& tape);
MarketTape load_tape_csv(const std::string& path);

/// Temporary impact per share for qty executed over one tick.
double aggressive_impact(const SimConfig& cfg, double qty);

/// Immediate aggressive fill at the far quote plus temporary impact.
FillRecord aggressive_fill(const SimConfig& cfg, Side side, const Quote& quote, std::int64_t qty, double t);

/// Short-duration tactic slice: up to qty shares, at least min_fill.
struct TacticOrder {
    double qty = 0.0;
    double duration = 0.0;
    double min_fill = 0.0;
};

struct TacticOutcome {
    std::vector<FillRecord> fills;
    std::int64_t cleanup_shares = 0;  // min-fill shortfall forced at window end
};

/// Passive fills at the near quote at passive_fill_coeff times market
/// volume, dark fills at crossing prices, aggressive clean-up of any
/// min-fill shortfall at t_end.
TacticOutcome simulate_tactic(const TacticOrder& order, Side side, const MarketTape& tape, double t_begin,
                              double t_end, const SimConfig& cfg, bool use_dark = true);

/// Exposure resting in the market between two driver ticks.
struct SliceExposure {
    double passive = 0.0;
    double dark = 0.0;          // x_d allocation; fills here are blocks
    double dark_passive = 0.0;  // passive shares also shown to dark venues
};

/// Fills of resting exposure against one batch of events.
struct SliceFills {
    std::vector<FillRecord> passive;
    std::vector<FillRecord> dark;
    std::vector<FillRecord> dark_passive;
};

SliceFills simulate_slice(const SliceExposure& exposure, Side side, std::span<const MarketEvent> events,
                          const Quote& quote, const SimConfig& cfg);

struct AlphaSignal {
    double value = 0.0;  // > 0 favours immediate execution of the order's side
};

/// Trailing-return signal over a (time, mid) history window.
AlphaSignal alpha_signal(const std::deque<std::pair<double, double>>& history, Side side, const SimConfig& cfg);

/// Moves or withholds passive shares according to the signal.
SharePartition apply_alpha_overlay(const SharePartition& part, AlphaSignal s, double lambda);

}  // namespace ubands
