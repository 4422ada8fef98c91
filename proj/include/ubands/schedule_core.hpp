#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ubands {

enum class Side { Buy, Sell };

/// +1 for buys, -1 for sells.
inline int side_sign(Side s) { return s == Side::Buy ? 1 : -1; }

std::string to_string(Side s);
Side side_from_string(const std::string& s);

/// Parent order worked by a schedule-based strategy.
struct Order {
    Side side = Side::Buy;
    double total_shares = 0.0;            // X0
    double start_time = 0.0;              // t0, seconds from session open
    std::optional<double> end_time;       // t1
    std::optional<double> limit_price;

    void validate() const;
};

/// The three schedule trajectories evaluated at one time point.
struct BandSet {
    double t = 0.0;
    double x_min = 0.0;
    double x_tgt = 0.0;
    double x_max = 0.0;
    double x0 = 0.0;

    bool valid(double tol = 1e-9) const;
    void validate() const;
};

enum class Venue { Displayed, Dark };

std::string to_string(Venue v);
Venue venue_from_string(const std::string& s);

struct FillRecord {
    double time = 0.0;
    std::int64_t qty = 0;
    double price = 0.0;
    Venue venue = Venue::Displayed;
    bool aggressive = false;
};

/// Filled position X_f(t) and the fills that produced it.
class ExecutionState {
public:
    explicit ExecutionState(double total_shares = 0.0) : total_(total_shares) {}

    /// Throws if the fill is malformed or would overfill the order.
    void add_fill(const FillRecord& f);

    std::int64_t filled() const { return filled_; }
    double total_shares() const { return total_; }
    const std::vector<FillRecord>& fills() const { return fills_; }
    bool complete() const { return static_cast<double>(filled_) >= total_; }

private:
    double total_ = 0.0;
    std::int64_t filled_ = 0;
    std::vector<FillRecord> fills_;
};

/// Aggressive / priority passive / discretionary passive / dark allocation.
struct SharePartition {
    double x_a = 0.0;
    double x_p1 = 0.0;
    double x_p2 = 0.0;
    double x_d = 0.0;

    double passive() const { return x_p1 + x_p2; }
};

/// Splits residual shares by where the filled position sits relative to
/// the bands. Throws std::invalid_argument if filled is outside [0, x0].
SharePartition compute_partition(const BandSet& bands, double filled);

enum class Compliance { BelowMin, Within, AboveMax };

std::string to_string(Compliance c);

// Boundaries are inclusive.
Compliance band_compliance(const BandSet& bands, double filled);

/// Shifts all three trajectories by a dark block execution, clamped to [0, x0].
BandSet apply_block_fill(const BandSet& bands, double block, double x0);

/// Round half to even; used when band values turn into share counts.
double round_half_even(double v);

/// Rounds each trajectory to whole shares. Monotone, so ordering survives.
BandSet round_bands(const BandSet& bands);

}  // namespace ubands
