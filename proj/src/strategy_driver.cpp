#include "ubands/strategy_driver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ubands {

std::string to_string(ActionKind a) {
    switch (a) {
        case ActionKind::AggressiveCover: return "aggressive_cover";
        case ActionKind::Opportunistic: return "opportunistic";
        case ActionKind::PassivePost: return "passive_post";
        case ActionKind::DarkPost: return "dark_post";
        case ActionKind::PauseDisplayed: break;
    }
    return "pause_displayed";
}

VwapBandSource::VwapBandSource(VolumeProfile profile, VwapConfig cfg, double x0)
    : profile_(std::move(profile)), cfg_(cfg), x0_(x0) {
    profile_.validate();
    cfg_.validate();
}

BandSet VwapBandSource::bands_at(double t) const {
    const BandSet b = vwap_bands_at(profile_, cfg_, x0_, std::clamp(t, profile_.t0(), profile_.t1()));
    return block_ > 0.0 ? apply_block_fill(b, block_, x0_) : b;
}

PovBandSource::PovBandSource(PovRates rates, Order order, bool strict)
    : rates_(std::move(rates)), order_(std::move(order)), strict_(strict) {}

BandSet PovBandSource::bands_at(double t) const {
    BandSet b = pov_bands_at(acc_, order_.total_shares);
    b.t = t;
    return b;
}

void PovBandSource::on_market_trade(double qty, double price, double t) {
    acc_ = ubands::on_market_trade(acc_, qty, price, order_, rates_, t);
}

IsBandSource::IsBandSource(IsBandDurations durations, VolumeProfile profile, double x0, double t_start)
    : dur_(durations), profile_(std::move(profile)), x0_(x0) {
    dur_.validate();
    profile_.validate();
    u_start_ = interpolate(profile_.grid, profile_.u_mean, t_start);
}

double IsBandSource::volume_time(double t) const {
    return std::max(0.0, interpolate(profile_.grid, profile_.u_mean, t) - u_start_);
}

BandSet IsBandSource::bands_at(double t) const {
    BandSet b = is_bands_at(dur_, x0_, volume_time(t));
    b.t = t;
    return block_ > 0.0 ? apply_block_fill(b, block_, x0_) : b;
}

std::unique_ptr<BandSource> make_band_source(const StrategyKind& kind, const Order& order,
                                             const VolumeProfile& profile) {
    return std::visit(
        [&](const auto& k) -> std::unique_ptr<BandSource> {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, VwapConfig>)
                return std::make_unique<VwapBandSource>(profile, k, order.total_shares);
            else if constexpr (std::is_same_v<K, PovStrategy>)
                return std::make_unique<PovBandSource>(k.rates, order, k.strict);
            else
                return std::make_unique<IsBandSource>(k, profile, order.total_shares, order.start_time);
        },
        kind);
}

TickDecision drive_tick(const BandSource& source, const ExecutionState& state, const Order& order, const Quote& quote,
                        AlphaSignal signal, double t, const SimConfig& sim, const DriverConfig& cfg) {
    if (t < order.start_time || (order.end_time && t > *order.end_time))
        throw std::invalid_argument("driver tick outside the trading window");
    TickDecision out;
    DriverTickReport& rep = out.report;
    rep.time = t;
    rep.bands = round_bands(source.bands_at(t));
    rep.bands.validate();
    rep.filled = state.filled();
    const double filled = static_cast<double>(rep.filled);
    rep.partition = compute_partition(rep.bands, filled);
    rep.compliance = band_compliance(rep.bands, filled);
    rep.signal = signal.value;

    const double remaining = order.total_shares - filled;
    std::int64_t immediate = 0;
    auto fire = [&](ActionKind kind, double qty) {
        const auto n = static_cast<std::int64_t>(std::min(std::floor(qty + 1e-9), remaining - static_cast<double>(immediate)));
        if (n <= 0) return;
        rep.actions.push_back({kind, static_cast<double>(n)});
        out.children.immediate.push_back(aggressive_fill(sim, order.side, quote, n, t));
        immediate += n;
    };

    const bool dark_allowed = !source.strict() && !(cfg.pause_all_venues && rep.compliance == Compliance::AboveMax);
    if (dark_allowed && rep.partition.x_d > 0.0) {
        out.children.resting.dark = rep.partition.x_d;
        rep.actions.push_back({ActionKind::DarkPost, rep.partition.x_d});
    }

    if (rep.compliance == Compliance::AboveMax) {
        rep.actions.push_back({ActionKind::PauseDisplayed, 0.0});
    } else {
        SharePartition p = rep.partition;
        if (cfg.alpha_enabled) {
            p = apply_alpha_overlay(p, signal, cfg.alpha_lambda);
            if (signal.value > cfg.escalation_threshold) {
                p.x_a += p.x_p1;
                p.x_p1 = 0.0;
            }
        }
        fire(ActionKind::AggressiveCover, rep.partition.x_a);
        fire(ActionKind::Opportunistic, p.x_a - rep.partition.x_a);
        const double passive = std::floor(p.passive() + 1e-9);
        if (passive > 0.0) {
            out.children.resting.passive = passive;
            out.children.resting.dark_passive = std::floor(cfg.passive_dark_fraction * passive);
            rep.actions.push_back({ActionKind::PassivePost, passive});
        }
    }

    rep.filled_after = rep.filled + immediate;
    rep.compliance_after = band_compliance(rep.bands, static_cast<double>(rep.filled_after));
    return out;
}

RunResult run_order(BandSource& source, const Order& order, const MarketTape& tape, const SimConfig& sim,
                    const DriverConfig& cfg) {
    order.validate();
    sim.validate();
    RunResult res{ExecutionState(order.total_shares), {}, order.start_time};
    const double t_end = order.end_time.value_or(sim.session_length);
    const double dt = sim.tick_interval;
    const auto n_ticks = static_cast<std::size_t>(std::ceil((t_end - order.start_time) / dt - 1e-9));

    Quote quote = tape.quote_at(order.start_time);
    std::deque<std::pair<double, double>> history{{order.start_time, quote.mid()}};
    SliceExposure resting;
    double prev_t = order.start_time;
    bool block_shift = false;

    auto apply = [&](const FillRecord& f) {
        const auto room = static_cast<std::int64_t>(order.total_shares) - res.state.filled();
        if (room <= 0) return std::int64_t{0};
        FillRecord g = f;
        g.qty = std::min(g.qty, room);
        res.state.add_fill(g);
        return g.qty;
    };

    for (std::size_t k = 0; k <= n_ticks; ++k) {
        const double t = k == n_ticks ? t_end : order.start_time + dt * static_cast<double>(k);
        if (k > 0) {
            const auto events = tape.window(prev_t, t);
            for (const auto& e : events)
                if (const auto* tr = std::get_if<Trade>(&e.kind)) source.on_market_trade(tr->qty, tr->price, e.time);
            const SliceFills fills = simulate_slice(resting, order.side, events, quote, sim);
            for (const auto& f : fills.passive) apply(f);
            for (const auto& f : fills.dark_passive) apply(f);
            for (const auto& f : fills.dark) {
                const auto q = apply(f);
                if (q > 0) {
                    source.on_block(static_cast<double>(q));
                    block_shift = true;
                }
            }
            for (const auto& e : events)
                if (const auto* q = std::get_if<Quote>(&e.kind)) quote = *q;
            history.emplace_back(t, quote.mid());
            while (history.size() > 1 && history.front().first < t - sim.alpha_horizon - dt) history.pop_front();
        }
        prev_t = t;
        res.end_time = t;

        const AlphaSignal signal = cfg.alpha_enabled ? alpha_signal(history, order.side, sim) : AlphaSignal{};
        TickDecision d = drive_tick(source, res.state, order, quote, signal, t, sim, cfg);
        for (const auto& f : d.children.immediate) apply(f);
        resting = d.children.resting;
        d.report.block_shift = block_shift;
        block_shift = false;
        res.reports.push_back(std::move(d.report));
        if (res.state.complete()) break;
    }
    return res;
}

}  // namespace ubands
