#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ubands/market_sim.hpp"
#include "ubands/schedule_core.hpp"

namespace ubands {

enum class BinCoordinate { Clock, Volume, Trade };

std::string to_string(BinCoordinate c);
BinCoordinate bin_coordinate_from_string(const std::string& s);

/// N uniform bins in the chosen coordinate, with their realized clock
/// boundaries (clock_bounds has N + 1 entries).
struct BinGrid {
    BinCoordinate coordinate = BinCoordinate::Clock;
    std::size_t n_bins = 1;
    double tau0 = 0.0;
    double tau1 = 1.0;
    std::vector<double> clock_bounds;

    double width() const { return (tau1 - tau0) / static_cast<double>(n_bins); }
    double tau_at(std::size_t k) const;
    double clock_width(std::size_t k) const { return clock_bounds[k] - clock_bounds[k - 1]; }
    void validate() const;
};

/// Clock grid on [t0, t1].
BinGrid clock_grid(double t0, double t1, std::size_t n_bins);

/// Volume- or trade-time grid on tau in [0, 1]: boundary k is the first
/// clock time at which cumulative volume (or trade count) reaches
/// k / N of the expected total. Unreached boundaries fall at t1.
BinGrid realized_grid(BinCoordinate coordinate, std::size_t n_bins, const MarketTape& tape, double t0, double t1,
                      double expected_total);

/// Tactic order for bin k given the filled position and the bands at the bin end.
TacticOrder plan_bin(std::size_t k, double filled, const BandSet& bands_at_bin_end, double clock_width);

class SchedulingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Short-duration execution tactic honouring an order duration and a minimum fill.
class Tactic {
public:
    virtual ~Tactic() = default;
    virtual std::vector<FillRecord> execute(const TacticOrder& order, double t_begin, double t_end) = 0;
    /// Immediate aggressive order, used when execute() under-fills.
    virtual std::vector<FillRecord> cover(std::int64_t qty, double t) = 0;
};

/// Tactic backed by the market simulator.
class SimulatedTactic : public Tactic {
public:
    SimulatedTactic(const MarketTape& tape, const SimConfig& cfg, Side side, bool use_dark = true)
        : tape_(tape), cfg_(cfg), side_(side), use_dark_(use_dark) {}

    std::vector<FillRecord> execute(const TacticOrder& order, double t_begin, double t_end) override;
    std::vector<FillRecord> cover(std::int64_t qty, double t) override;

private:
    const MarketTape& tape_;
    SimConfig cfg_;
    Side side_;
    bool use_dark_;
};

using TauBandSource = std::function<BandSet(double tau)>;

/// Linear volume-time VWAP bands: x_max(tau) = tau x0 and x_min lagging
/// one bin, pinned to x0 at tau1.
TauBandSource linear_vwap_bands(double x0, std::size_t n_bins);

struct BinLedgerRow {
    std::size_t bin = 0;
    double t_begin = 0.0;
    double t_end = 0.0;
    double qty = 0.0;
    double min_fill = 0.0;
    double x_min = 0.0;
    double x_tgt = 0.0;
    double x_max = 0.0;
    std::int64_t filled_in_bin = 0;
    std::int64_t filled = 0;
    std::int64_t cleanup_shares = 0;
};

struct ScheduleResult {
    ExecutionState state;
    std::vector<BinLedgerRow> ledger;
};

ScheduleResult run_schedule(const Order& order, const BinGrid& grid, const TauBandSource& bands, Tactic& tactic);

void save_bin_ledger_csv(const std::string& path, const std::vector<BinLedgerRow>& ledger);

}  // namespace ubands
