#include "ubands/pov_bands.hpp"

#include <algorithm>
#include <stdexcept>

namespace ubands {

namespace {

void check_rates(const RateTriple& r) {
    auto in_unit = [](double p) { return p >= 0.0 && p < 1.0; };
    if (!in_unit(r.p_min) || !in_unit(r.p_tgt) || !in_unit(r.p_max))
        throw std::invalid_argument("participation rates must lie in [0, 1)");
    if (!(r.p_min <= r.p_tgt && r.p_tgt <= r.p_max))
        throw std::invalid_argument("participation rates must satisfy p_min <= p_tgt <= p_max");
}

}  // namespace

PovRates::PovRates(std::vector<Step> steps) : steps_(std::move(steps)) {
    if (steps_.empty()) throw std::invalid_argument("participation schedule needs at least one step");
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        check_rates(steps_[i].rates);
        if (i > 0 && !(steps_[i].start > steps_[i - 1].start))
            throw std::invalid_argument("participation steps must have increasing start times");
    }
}

PovRates PovRates::constant(double p_min, double p_tgt, double p_max) {
    return PovRates({Step{0.0, RateTriple{p_min, p_tgt, p_max}}});
}

PovRates PovRates::from_target(double p_tgt, double tolerance) {
    return constant(std::max(0.0, p_tgt - tolerance), p_tgt, p_tgt + tolerance);
}

PovRates PovRates::from_range(double p_min, double p_max) {
    return constant(p_min, 0.5 * (p_min + p_max), p_max);
}

RateTriple PovRates::at(double t) const {
    if (steps_.empty()) return {};
    auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                               [](double v, const Step& s) { return v < s.start; });
    if (it == steps_.begin()) return steps_.front().rates;
    return std::prev(it)->rates;
}

bool is_eligible(const Order& order, double trade_price, double t) {
    if (t < order.start_time) return false;
    if (order.end_time && t > *order.end_time) return false;
    if (!order.limit_price) return true;
    return order.side == Side::Buy ? trade_price <= *order.limit_price : trade_price >= *order.limit_price;
}

EligibleVolumeAccumulator on_market_trade(const EligibleVolumeAccumulator& acc, double trade_qty,
                                          double trade_price, const Order& order, const PovRates& rates,
                                          double t) {
    if (!(trade_qty > 0.0)) throw std::invalid_argument("trade qty must be > 0");
    EligibleVolumeAccumulator out = acc;
    if (!is_eligible(order, trade_price, t)) return out;
    const RateTriple r = rates.at(t);
    out.v_e += trade_qty;
    out.int_min += r.p_min * trade_qty;
    out.int_tgt += r.p_tgt * trade_qty;
    out.int_max += r.p_max * trade_qty;
    out.last_update = t;
    return out;
}

BandSet pov_bands_at(const EligibleVolumeAccumulator& acc, double x0) {
    BandSet b;
    b.t = acc.last_update;
    b.x0 = x0;
    b.x_min = std::min(x0, acc.int_min + acc.block_offset);
    b.x_tgt = std::min(x0, acc.int_tgt + acc.block_offset);
    b.x_max = std::min(x0, acc.int_max + acc.block_offset);
    return b;
}

EligibleVolumeAccumulator apply_block(const EligibleVolumeAccumulator& acc, double block) {
    if (!(block > 0.0)) throw std::invalid_argument("block size must be > 0");
    EligibleVolumeAccumulator out = acc;
    out.block_offset += block;
    return out;
}

}  // namespace ubands
