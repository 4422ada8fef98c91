#pragma once

#include <deque>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ubands/is_optimizer.hpp"
#include "ubands/market_sim.hpp"
#include "ubands/pov_bands.hpp"
#include "ubands/schedule_core.hpp"
#include "ubands/vwap_bands.hpp"

namespace ubands {

/// Where the bands come from. The driver only ever talks to this interface.
class BandSource {
public:
    virtual ~BandSource() = default;
    virtual BandSet bands_at(double t) const = 0;
    /// Displayed-market trade seen by the driver.
    virtual void on_market_trade(double /*qty*/, double /*price*/, double /*t*/) {}
    /// Dark block executed out of the x_d allocation.
    virtual void on_block(double qty) = 0;
    /// Strict variants withhold x_d from dark crossing.
    virtual bool strict() const = 0;
    virtual std::string name() const = 0;
};

class VwapBandSource : public BandSource {
public:
    VwapBandSource(VolumeProfile profile, VwapConfig cfg, double x0);
    BandSet bands_at(double t) const override;
    void on_block(double qty) override { block_ += qty; }
    bool strict() const override { return cfg_.strict; }
    std::string name() const override { return "alpha_vwap"; }

private:
    VolumeProfile profile_;
    VwapConfig cfg_;
    double x0_;
    double block_ = 0.0;
};

class PovBandSource : public BandSource {
public:
    PovBandSource(PovRates rates, Order order, bool strict);
    BandSet bands_at(double t) const override;
    void on_market_trade(double qty, double price, double t) override;
    void on_block(double qty) override { acc_ = apply_block(acc_, qty); }
    bool strict() const override { return strict_; }
    std::string name() const override { return "alpha_pov"; }
    const EligibleVolumeAccumulator& accumulator() const { return acc_; }

private:
    PovRates rates_;
    Order order_;
    bool strict_;
    EligibleVolumeAccumulator acc_;
};

/// IS bands in volume time; clock time is mapped through the mean volume curve.
class IsBandSource : public BandSource {
public:
    IsBandSource(IsBandDurations durations, VolumeProfile profile, double x0, double t_start);
    BandSet bands_at(double t) const override;
    void on_block(double qty) override { block_ += qty; }
    bool strict() const override { return false; }
    std::string name() const override { return "alpha_is"; }
    double volume_time(double t) const;

private:
    IsBandDurations dur_;
    VolumeProfile profile_;
    double x0_;
    double u_start_;
    double block_ = 0.0;
};

struct PovStrategy {
    PovRates rates;
    bool strict = false;
};

using StrategyKind = std::variant<VwapConfig, PovStrategy, IsBandDurations>;

std::unique_ptr<BandSource> make_band_source(const StrategyKind& kind, const Order& order,
                                             const VolumeProfile& profile);

struct DriverConfig {
    double alpha_lambda = 0.25;
    double escalation_threshold = 0.5;
    bool alpha_enabled = true;
    bool pause_all_venues = false;
    // Share of posted passive quantity also exposed to dark venues.
    double passive_dark_fraction = 0.0;
};

enum class ActionKind { AggressiveCover, Opportunistic, PassivePost, DarkPost, PauseDisplayed };

std::string to_string(ActionKind a);

struct DriverAction {
    ActionKind kind = ActionKind::PassivePost;
    double qty = 0.0;
};

struct DriverTickReport {
    double time = 0.0;
    BandSet bands;
    std::int64_t filled = 0;        // position the partition was computed from
    std::int64_t filled_after = 0;  // after this tick's immediate executions
    SharePartition partition;
    Compliance compliance = Compliance::Within;
    Compliance compliance_after = Compliance::Within;
    double signal = 0.0;
    bool block_shift = false;  // a dark block moved the bands since the last tick
    std::vector<DriverAction> actions;
};

/// Resting exposure left in the market until the next tick.
struct ChildOrders {
    std::vector<FillRecord> immediate;  // aggressive executions
    SliceExposure resting;
};

struct TickDecision {
    ChildOrders children;
    DriverTickReport report;
};

/// One driver decision: bands, partition, overlay, dispatch. Aggressive
/// children are priced against the quote but not applied to the state.
TickDecision drive_tick(const BandSource& source, const ExecutionState& state, const Order& order, const Quote& quote,
                        AlphaSignal signal, double t, const SimConfig& sim, const DriverConfig& cfg);

struct RunResult {
    ExecutionState state;
    std::vector<DriverTickReport> reports;
    double end_time = 0.0;
};

/// Runs drive_tick over the session tape until completion or the order end.
RunResult run_order(BandSource& source, const Order& order, const MarketTape& tape, const SimConfig& sim,
                    const DriverConfig& cfg);

}  // namespace ubands
