#pragma once

#include <vector>

#include "ubands/schedule_core.hpp"

namespace ubands {

struct RateTriple {
    double p_min = 0.0;
    double p_tgt = 0.0;
    double p_max = 0.0;
};

/// Participation rates as right-continuous step functions of time.
class PovRates {
public:
    struct Step {
        double start = 0.0;
        RateTriple rates;
    };

    PovRates() = default;
    explicit PovRates(std::vector<Step> steps);

    static PovRates constant(double p_min, double p_tgt, double p_max);
    /// Target with symmetric tolerance.
    static PovRates from_target(double p_tgt, double tolerance);
    /// Range only; target is the midpoint.
    static PovRates from_range(double p_min, double p_max);

    RateTriple at(double t) const;
    const std::vector<Step>& steps() const { return steps_; }

private:
    std::vector<Step> steps_;
};

/// Running Stieltjes sums of the participation rates against eligible
/// displayed volume, plus dark block shares added to every trajectory.
struct EligibleVolumeAccumulator {
    double v_e = 0.0;
    double last_update = 0.0;
    double int_min = 0.0;
    double int_tgt = 0.0;
    double int_max = 0.0;
    double block_offset = 0.0;
};

/// Displayed-market trade inside the order window and the limit price.
bool is_eligible(const Order& order, double trade_price, double t);

EligibleVolumeAccumulator on_market_trade(const EligibleVolumeAccumulator& acc, double trade_qty,
                                          double trade_price, const Order& order, const PovRates& rates,
                                          double t);

BandSet pov_bands_at(const EligibleVolumeAccumulator& acc, double x0);

/// Adds a dark block to all trajectories without counting it as eligible volume.
EligibleVolumeAccumulator apply_block(const EligibleVolumeAccumulator& acc, double block);

}  // namespace ubands
