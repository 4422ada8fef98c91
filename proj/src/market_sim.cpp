#include "ubands/market_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ubands {

std::size_t SimConfig::n_ticks() const {
    return static_cast<std::size_t>(std::llround(session_length / tick_interval));
}

void SimConfig::validate() const {
    if (!(session_length > 0.0)) throw std::invalid_argument("session_length must be > 0");
    if (!(tick_interval > 0.0 && tick_interval <= session_length))
        throw std::invalid_argument("tick_interval must be in (0, session_length]");
    if (!(spread > 0.0)) throw std::invalid_argument("spread must be > 0");
    if (!(daily_vol >= 0.0)) throw std::invalid_argument("daily_vol must be >= 0");
    if (!(price0 > spread)) throw std::invalid_argument("price0 must exceed the spread");
    if (!(daily_volume > 0.0)) throw std::invalid_argument("daily_volume must be > 0");
    if (!(volume_dispersion >= 0.0 && tick_volume_noise >= 0.0))
        throw std::invalid_argument("volume noise parameters must be >= 0");
    if (!(dark_arrival_rate >= 0.0 && dark_block_mean > 0.0))
        throw std::invalid_argument("dark arrival rate must be >= 0 and block mean > 0");
    if (!(passive_fill_coeff > 0.0 && passive_fill_coeff <= 1.0))
        throw std::invalid_argument("passive_fill_coeff must be in (0, 1]");
    if (!(impact_i0 >= 0.0 && impact_beta > 0.0 && impact_beta <= 1.0))
        throw std::invalid_argument("impact parameters out of range");
    if (!(mean_reversion >= -1.0 && mean_reversion <= 1.0))
        throw std::invalid_argument("mean_reversion must be in [-1, 1]");
    if (!(alpha_horizon > 0.0 && alpha_r_scale > 0.0))
        throw std::invalid_argument("alpha horizon and scale must be > 0");
}

std::span<const MarketEvent> MarketTape::window(double t_begin, double t_end) const {
    auto by_time = [](const MarketEvent& e, double t) { return e.time <= t; };
    auto lo = std::lower_bound(events.begin(), events.end(), t_begin, by_time);
    auto hi = std::lower_bound(lo, events.end(), t_end, by_time);
    return {lo, hi};
}

Quote MarketTape::quote_at(double t) const {
    auto it = std::upper_bound(events.begin(), events.end(), t,
                               [](double v, const MarketEvent& e) { return v < e.time; });
    while (it != events.begin()) {
        --it;
        if (const auto* q = std::get_if<Quote>(&it->kind)) return *q;
    }
    throw std::runtime_error("no quote at or before requested time");
}

double MarketTape::total_volume() const {
    double v = 0.0;
    for (const auto& e : events)
        if (const auto* tr = std::get_if<Trade>(&e.kind)) v += tr->qty;
    return v;
}

std::size_t MarketTape::trade_count() const {
    return static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [](const MarketEvent& e) { return std::holds_alternative<Trade>(e.kind); }));
}

double intraday_cumulative(double x) {
    x = std::clamp(x, 0.0, 1.0);
    // Intensity (1 + 3 (2x - 1)^2) / 2 integrates to 1 on [0, 1].
    const double y = 2.0 * x - 1.0;
    return 0.5 * (x + 0.5 * (y * y * y + 1.0));
}

MarketTape generate_market(const SimConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::exponential_distribution<double> block_size(1.0 / cfg.dark_block_mean);

    const std::size_t n = cfg.n_ticks();
    const double dt = cfg.session_length / static_cast<double>(n);
    const double tick_sigma = cfg.daily_vol * std::sqrt(dt / cfg.session_length);
    const double sz = cfg.volume_dispersion;
    const double daily_factor = std::exp(sz * gauss(rng) - 0.5 * sz * sz);
    const double sv = cfg.tick_volume_noise;
    const double dark_p = 1.0 - std::exp(-cfg.dark_arrival_rate * dt / cfg.session_length);
    const double half = 0.5 * cfg.spread;

    MarketTape tape;
    tape.events.reserve(2 * n + 8);
    double mid = cfg.price0;
    tape.events.push_back({0.0, Quote{mid - half, mid + half}});

    for (std::size_t k = 1; k <= n; ++k) {
        const double t = k == n ? cfg.session_length : dt * static_cast<double>(k);
        const double z = gauss(rng);
        mid *= std::exp(tick_sigma * z - 0.5 * tick_sigma * tick_sigma);
        const Quote q{mid - half, mid + half};
        tape.events.push_back({t, q});

        const double x0 = static_cast<double>(k - 1) / static_cast<double>(n);
        const double x1 = static_cast<double>(k) / static_cast<double>(n);
        const double expected = cfg.daily_volume * daily_factor * (intraday_cumulative(x1) - intraday_cumulative(x0));
        const double noise = std::exp(sv * gauss(rng) - 0.5 * sv * sv);
        const double qty = std::round(expected * noise);
        const bool at_ask = unif(rng) < 0.5;
        if (qty > 0.0) tape.events.push_back({t, Trade{at_ask ? q.ask : q.bid, qty}});

        if (cfg.dark_arrival_rate > 0.0 && unif(rng) < dark_p) {
            const double size = std::max(1.0, std::ceil(block_size(rng)));
            tape.events.push_back({t, DarkCross{size, q.mid()}});
        }
    }
    return tape;
}

std::vector<std::vector<double>> synthetic_history(std::uint64_t seed, std::size_t h, std::size_t n_bins,
                                                   double bin_noise) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<double>> out(h, std::vector<double>(n_bins + 1, 0.0));
    for (auto& curve : out) {
        double cum = 0.0;
        for (std::size_t k = 1; k <= n_bins; ++k) {
            const double w = intraday_cumulative(static_cast<double>(k) / static_cast<double>(n_bins)) -
                             intraday_cumulative(static_cast<double>(k - 1) / static_cast<double>(n_bins));
            cum += w * std::exp(bin_noise * gauss(rng) - 0.5 * bin_noise * bin_noise);
            curve[k] = cum;
        }
        for (auto& v : curve) v /= cum;
        curve.back() = 1.0;
    }
    return out;
}

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void save_tape_csv(const std::string& path, const MarketTape& tape) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write tape " + path);
    out << "# schema_version: 1\n";
    out << "time,kind,a,b\n";
    for (const auto& e : tape.events) {
        out << fmt17(e.time) << ',';
        std::visit(
            [&](const auto& k) {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Quote>)
                    out << "quote," << fmt17(k.bid) << ',' << fmt17(k.ask);
                else if constexpr (std::is_same_v<K, Trade>)
                    out << "trade," << fmt17(k.price) << ',' << fmt17(k.qty);
                else
                    out << "dark," << fmt17(k.max_qty) << ',' << fmt17(k.price);
            },
            e.kind);
        out << '\n';
    }
}

MarketTape load_tape_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tape " + path);
    MarketTape tape;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("time,", 0) == 0) continue;
        std::stringstream ss(line);
        std::string t, kind, a, b;
        std::getline(ss, t, ',');
        std::getline(ss, kind, ',');
        std::getline(ss, a, ',');
        std::getline(ss, b, ',');
        MarketEvent e;
        e.time = std::stod(t);
        if (kind == "quote")
            e.kind = Quote{std::stod(a), std::stod(b)};
        else if (kind == "trade")
            e.kind = Trade{std::stod(a), std::stod(b)};
        else if (kind == "dark")
            e.kind = DarkCross{std::stod(a), std::stod(b)};
        else
            throw std::runtime_error("unknown tape event kind '" + kind + "' in " + path);
        if (!tape.events.empty() && e.time < tape.events.back().time)
            throw std::runtime_error("tape events out of time order in " + path);
        tape.events.push_back(std::move(e));
    }
    return tape;
}

double aggressive_impact(const SimConfig& cfg, double qty) {
    if (qty <= 0.0) return 0.0;
    // Rate in shares per day of volume.
    const double rate = qty * cfg.session_length / cfg.tick_interval;
    return cfg.impact_i0 * cfg.daily_vol * cfg.price0 * std::pow(rate / cfg.daily_volume, cfg.impact_beta);
}

FillRecord aggressive_fill(const SimConfig& cfg, Side side, const Quote& quote, std::int64_t qty, double t) {
    const double j = aggressive_impact(cfg, static_cast<double>(qty));
    const double price = side == Side::Buy ? quote.ask + j : quote.bid - j;
    return FillRecord{t, qty, price, Venue::Displayed, true};
}

TacticOutcome simulate_tactic(const TacticOrder& order, Side side, const MarketTape& tape, double t_begin,
                              double t_end, const SimConfig& cfg, bool use_dark) {
    if (order.qty < 0.0 || order.min_fill < 0.0) throw std::invalid_argument("tactic quantities must be >= 0");
    TacticOutcome out;
    auto remaining = static_cast<std::int64_t>(std::floor(order.qty + 1e-9));
    const auto mandatory = static_cast<std::int64_t>(std::ceil(std::min(order.min_fill, order.qty) - 1e-9));
    if (remaining <= 0) return out;

    std::int64_t done = 0;
    Quote quote = tape.quote_at(t_begin);
    for (const auto& e : tape.window(t_begin, t_end)) {
        if (remaining == 0) break;
        if (const auto* q = std::get_if<Quote>(&e.kind)) {
            quote = *q;
        } else if (const auto* tr = std::get_if<Trade>(&e.kind)) {
            const auto n = std::min(remaining, static_cast<std::int64_t>(std::floor(cfg.passive_fill_coeff * tr->qty)));
            if (n > 0) {
                out.fills.push_back({e.time, n, side == Side::Buy ? quote.bid : quote.ask, Venue::Displayed, false});
                remaining -= n;
                done += n;
            }
        } else if (const auto* dc = std::get_if<DarkCross>(&e.kind); dc && use_dark) {
            const auto n = std::min(remaining, static_cast<std::int64_t>(dc->max_qty));
            if (n > 0) {
                out.fills.push_back({e.time, n, dc->price, Venue::Dark, false});
                remaining -= n;
                done += n;
            }
        }
    }
    if (done < mandatory) {
        out.cleanup_shares = mandatory - done;
        out.fills.push_back(aggressive_fill(cfg, side, quote, out.cleanup_shares, t_end));
    }
    return out;
}

SliceFills simulate_slice(const SliceExposure& exposure, Side side, std::span<const MarketEvent> events,
                          const Quote& quote, const SimConfig& cfg) {
    SliceFills out;
    auto passive = static_cast<std::int64_t>(std::floor(exposure.passive + 1e-9));
    auto dark = static_cast<std::int64_t>(std::floor(exposure.dark + 1e-9));
    auto dark_passive = static_cast<std::int64_t>(std::floor(exposure.dark_passive + 1e-9));
    Quote q = quote;
    for (const auto& e : events) {
        if (const auto* nq = std::get_if<Quote>(&e.kind)) {
            q = *nq;
        } else if (const auto* tr = std::get_if<Trade>(&e.kind)) {
            const auto n = std::min(passive, static_cast<std::int64_t>(std::floor(cfg.passive_fill_coeff * tr->qty)));
            if (n > 0) {
                out.passive.push_back({e.time, n, side == Side::Buy ? q.bid : q.ask, Venue::Displayed, false});
                passive -= n;
            }
        } else if (const auto* dc = std::get_if<DarkCross>(&e.kind)) {
            const auto avail = static_cast<std::int64_t>(dc->max_qty);
            const auto n = std::min(dark, avail);
            if (n > 0) {
                out.dark.push_back({e.time, n, dc->price, Venue::Dark, false});
                dark -= n;
            }
            // Dark-exposed passive shares come out of the displayed posting.
            const auto m = std::min({dark_passive, passive, avail - n});
            if (m > 0) {
                out.dark_passive.push_back({e.time, m, dc->price, Venue::Dark, false});
                dark_passive -= m;
                passive -= m;
            }
        }
    }
    return out;
}

AlphaSignal alpha_signal(const std::deque<std::pair<double, double>>& history, Side side, const SimConfig& cfg) {
    if (history.empty()) throw std::invalid_argument("alpha signal needs a nonempty price window");
    if (cfg.mean_reversion == 0.0) return {};
    const double t_now = history.back().first;
    auto it = std::lower_bound(history.begin(), history.end(), t_now - cfg.alpha_horizon,
                               [](const std::pair<double, double>& p, double t) { return p.first < t; });
    const double push = history.back().second / it->second - 1.0;
    const double s = -side_sign(side) * cfg.mean_reversion * push / cfg.alpha_r_scale;
    return {std::clamp(s, -1.0, 1.0)};
}

SharePartition apply_alpha_overlay(const SharePartition& part, AlphaSignal s, double lambda) {
    SharePartition out = part;
    const double amount = std::abs(s.value) * std::clamp(lambda, 0.0, 1.0) * part.passive();
    if (amount <= 0.0) return out;
    if (s.value > 0.0) {
        const double from_p1 = std::min(amount, out.x_p1);
        out.x_p1 -= from_p1;
        out.x_p2 -= amount - from_p1;
        out.x_a += amount;
    } else {
        const double from_p2 = std::min(amount, out.x_p2);
        out.x_p2 -= from_p2;
        out.x_p1 -= amount - from_p2;
    }
    out.x_p1 = std::max(0.0, out.x_p1);
    out.x_p2 = std::max(0.0, out.x_p2);
    return out;
}

}  // namespace ubands
