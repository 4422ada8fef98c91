#include "ubands/discrete_scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ubands {

std::string to_string(BinCoordinate c) {
    switch (c) {
        case BinCoordinate::Volume: return "volume";
        case BinCoordinate::Trade: return "trade";
        case BinCoordinate::Clock: break;
    }
    return "clock";
}

BinCoordinate bin_coordinate_from_string(const std::string& s) {
    if (s == "clock") return BinCoordinate::Clock;
    if (s == "volume") return BinCoordinate::Volume;
    if (s == "trade") return BinCoordinate::Trade;
    throw std::invalid_argument("unknown bin coordinate '" + s + "'");
}

double BinGrid::tau_at(std::size_t k) const {
    if (k >= n_bins) return tau1;
    return tau0 + width() * static_cast<double>(k);
}

void BinGrid::validate() const {
    if (n_bins == 0) throw std::invalid_argument("bin grid needs at least one bin");
    if (!(tau1 > tau0)) throw std::invalid_argument("bin grid needs tau1 > tau0");
    if (clock_bounds.size() != n_bins + 1) throw std::invalid_argument("bin grid clock bounds size mismatch");
    for (std::size_t k = 1; k <= n_bins; ++k)
        if (!(clock_bounds[k] >= clock_bounds[k - 1])) throw std::invalid_argument("bin clock bounds must be ordered");
}

BinGrid clock_grid(double t0, double t1, std::size_t n_bins) {
    BinGrid g;
    g.coordinate = BinCoordinate::Clock;
    g.n_bins = n_bins;
    g.tau0 = t0;
    g.tau1 = t1;
    g.clock_bounds.resize(n_bins + 1);
    for (std::size_t k = 0; k <= n_bins; ++k) g.clock_bounds[k] = g.tau_at(k);
    g.clock_bounds.front() = t0;
    g.validate();
    return g;
}

BinGrid realized_grid(BinCoordinate coordinate, std::size_t n_bins, const MarketTape& tape, double t0, double t1,
                      double expected_total) {
    if (coordinate == BinCoordinate::Clock) return clock_grid(t0, t1, n_bins);
    if (!(expected_total > 0.0)) throw std::invalid_argument("expected volume/trade total must be > 0");
    BinGrid g;
    g.coordinate = coordinate;
    g.n_bins = n_bins;
    g.tau0 = 0.0;
    g.tau1 = 1.0;
    g.clock_bounds.assign(n_bins + 1, t1);
    g.clock_bounds.front() = t0;

    std::size_t next = 1;
    double cum = 0.0;
    for (const auto& e : tape.window(t0, t1)) {
        if (next >= n_bins) break;
        const auto* tr = std::get_if<Trade>(&e.kind);
        if (!tr) continue;
        cum += coordinate == BinCoordinate::Volume ? tr->qty : 1.0;
        while (next < n_bins && cum / expected_total >= g.tau_at(next)) g.clock_bounds[next++] = e.time;
    }
    g.validate();
    return g;
}

TacticOrder plan_bin(std::size_t k, double filled, const BandSet& bands_at_bin_end, double clock_width) {
    if (k == 0) throw std::invalid_argument("bin index starts at 1");
    TacticOrder o;
    o.qty = std::max(0.0, bands_at_bin_end.x_max - filled);
    o.min_fill = std::min(o.qty, std::max(0.0, bands_at_bin_end.x_min - filled));
    o.duration = clock_width;
    return o;
}

std::vector<FillRecord> SimulatedTactic::execute(const TacticOrder& order, double t_begin, double t_end) {
    return simulate_tactic(order, side_, tape_, t_begin, t_end, cfg_, use_dark_).fills;
}

std::vector<FillRecord> SimulatedTactic::cover(std::int64_t qty, double t) {
    if (qty <= 0) return {};
    return {aggressive_fill(cfg_, side_, tape_.quote_at(t), qty, t)};
}

TauBandSource linear_vwap_bands(double x0, std::size_t n_bins) {
    const double lag = 1.0 / static_cast<double>(n_bins);
    return [x0, lag](double tau) {
        BandSet b;
        b.t = tau;
        b.x0 = x0;
        b.x_max = std::clamp(tau, 0.0, 1.0) * x0;
        b.x_min = tau >= 1.0 - 1e-12 ? x0 : std::clamp(tau - lag, 0.0, 1.0) * x0;
        b.x_tgt = std::clamp(tau - 0.5 * lag, 0.0, 1.0) * x0;
        b.x_tgt = std::clamp(b.x_tgt, b.x_min, b.x_max);
        return b;
    };
}

namespace {

std::int64_t total_qty(const std::vector<FillRecord>& fills) {
    std::int64_t s = 0;
    for (const auto& f : fills) s += f.qty;
    return s;
}

}  // namespace

ScheduleResult run_schedule(const Order& order, const BinGrid& grid, const TauBandSource& bands, Tactic& tactic) {
    order.validate();
    grid.validate();
    ScheduleResult res{ExecutionState(order.total_shares), {}};

    for (std::size_t k = 1; k <= grid.n_bins; ++k) {
        if (res.state.complete()) break;
        const double t_begin = grid.clock_bounds[k - 1];
        const double t_end = grid.clock_bounds[k];
        const BandSet b = round_bands(bands(grid.tau_at(k)));
        const auto filled_before = res.state.filled();
        const TacticOrder to = plan_bin(k, static_cast<double>(filled_before), b, t_end - t_begin);

        BinLedgerRow row{k, t_begin, t_end, to.qty, to.min_fill, b.x_min, b.x_tgt, b.x_max, 0, 0, 0};
        if (to.qty > 0.0) {
            const auto fills = tactic.execute(to, t_begin, t_end);
            if (static_cast<double>(total_qty(fills)) > to.qty)
                throw SchedulingError("tactic overfilled bin " + std::to_string(k));
            for (const auto& f : fills) {
                res.state.add_fill(f);
                if (f.aggressive) row.cleanup_shares += f.qty;
            }
        }
        const auto mandatory = static_cast<std::int64_t>(std::ceil(to.min_fill - 1e-9));
        auto got = res.state.filled() - filled_before;
        if (got < mandatory) {
            for (const auto& f : tactic.cover(mandatory - got, t_end)) {
                res.state.add_fill(f);
                row.cleanup_shares += f.qty;
            }
            got = res.state.filled() - filled_before;
            if (got < mandatory) {
                std::ostringstream msg;
                msg << "min-fill breach in bin " << k << ": required " << mandatory << ", filled " << got
                    << " (x_min=" << b.x_min << ", x_max=" << b.x_max << ")";
                throw SchedulingError(msg.str());
            }
        }
        row.filled_in_bin = got;
        row.filled = res.state.filled();
        res.ledger.push_back(row);
    }
    return res;
}

void save_bin_ledger_csv(const std::string& path, const std::vector<BinLedgerRow>& ledger) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write bin ledger " + path);
    out << "# schema_version: 1\n";
    out << "bin,t_begin,t_end,qty,min_fill,x_min,x_tgt,x_max,filled_in_bin,filled,cleanup_shares\n";
    char buf[512];
    for (const auto& r : ledger) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%lld,%lld,%lld\n", r.bin,
                      r.t_begin, r.t_end, r.qty, r.min_fill, r.x_min, r.x_tgt, r.x_max, static_cast<long long>(r.filled_in_bin),
                      static_cast<long long>(r.filled), static_cast<long long>(r.cleanup_shares));
        out << buf;
    }
}

}  // namespace ubands
