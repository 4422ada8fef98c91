#include "ubands/schedule_core.hpp"

#include <algorithm>
#include <cmath>

namespace ubands {

std::string to_string(Side s) { return s == Side::Buy ? "buy" : "sell"; }

Side side_from_string(const std::string& s) {
    if (s == "buy" || s == "Buy" || s == "BUY") return Side::Buy;
    if (s == "sell" || s == "Sell" || s == "SELL") return Side::Sell;
    throw std::invalid_argument("unknown side '" + s + "'");
}

std::string to_string(Venue v) { return v == Venue::Dark ? "dark" : "displayed"; }

Venue venue_from_string(const std::string& s) {
    if (s == "dark") return Venue::Dark;
    if (s == "displayed") return Venue::Displayed;
    throw std::invalid_argument("unknown venue '" + s + "'");
}

std::string to_string(Compliance c) {
    switch (c) {
        case Compliance::BelowMin: return "below_min";
        case Compliance::AboveMax: return "above_max";
        case Compliance::Within: break;
    }
    return "within";
}

void Order::validate() const {
    if (!(total_shares > 0.0)) throw std::invalid_argument("order total_shares must be > 0");
    if (end_time && !(*end_time > start_time))
        throw std::invalid_argument("order end_time must be after start_time");
    if (limit_price && !(*limit_price > 0.0))
        throw std::invalid_argument("order limit_price must be > 0");
}

bool BandSet::valid(double tol) const {
    return x_min >= -tol && x_min <= x_tgt + tol && x_tgt <= x_max + tol && x_max <= x0 + tol;
}

void BandSet::validate() const {
    if (!valid()) throw std::invalid_argument("band ordering 0 <= x_min <= x_tgt <= x_max <= x0 violated");
}

void ExecutionState::add_fill(const FillRecord& f) {
    if (f.qty <= 0) throw std::invalid_argument("fill qty must be > 0");
    if (!(f.price > 0.0)) throw std::invalid_argument("fill price must be > 0");
    if (static_cast<double>(filled_ + f.qty) > total_ + 1e-9)
        throw std::logic_error("fill would exceed order total");
    filled_ += f.qty;
    fills_.push_back(f);
}

SharePartition compute_partition(const BandSet& bands, double filled) {
    if (filled < 0.0 || filled > bands.x0)
        throw std::invalid_argument("filled shares outside [0, x0]");
    const double floor_pos = std::max(filled, bands.x_min);
    SharePartition p;
    p.x_a = std::max(0.0, bands.x_min - filled);
    const double passive = std::max(0.0, bands.x_max - floor_pos);
    p.x_p1 = std::max(0.0, bands.x_tgt - floor_pos);
    p.x_p2 = passive - p.x_p1;
    p.x_d = bands.x0 - bands.x_max;
    return p;
}

Compliance band_compliance(const BandSet& bands, double filled) {
    if (filled < bands.x_min) return Compliance::BelowMin;
    if (filled > bands.x_max) return Compliance::AboveMax;
    return Compliance::Within;
}

BandSet apply_block_fill(const BandSet& bands, double block, double x0) {
    if (!(block > 0.0)) throw std::invalid_argument("block size must be > 0");
    auto shift = [&](double v) { return std::clamp(v + block, 0.0, x0); };
    BandSet out = bands;
    out.x_min = shift(bands.x_min);
    out.x_tgt = shift(bands.x_tgt);
    out.x_max = shift(bands.x_max);
    out.x0 = x0;
    return out;
}

double round_half_even(double v) {
    // nearbyint honours the default FE_TONEAREST mode, which is ties-to-even.
    return std::nearbyint(v);
}

BandSet round_bands(const BandSet& bands) {
    BandSet out = bands;
    out.x_min = round_half_even(bands.x_min);
    out.x_tgt = round_half_even(bands.x_tgt);
    out.x_max = round_half_even(bands.x_max);
    out.x0 = round_half_even(bands.x0);
    return out;
}

}  // namespace ubands
