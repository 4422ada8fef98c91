#include <doctest.h>

#include "ubands/reporting.hpp"
#include "ubands/strategy_driver.hpp"

using namespace ubands;

namespace {

class FixedBands : public BandSource {
public:
    explicit FixedBands(BandSet b) : b_(b) {}
    BandSet bands_at(double t) const override {
        BandSet b = b_;
        b.t = t;
        return block_ > 0.0 ? apply_block_fill(b, block_, b.x0) : b;
    }
    void on_block(double qty) override { block_ += qty; }
    bool strict() const override { return strict_; }
    std::string name() const override { return "fixed"; }
    bool strict_ = false;

private:
    BandSet b_;
    double block_ = 0.0;
};

Order buy(double x0) { return Order{Side::Buy, x0, 0.0, std::nullopt, std::nullopt}; }

ExecutionState with_filled(double x0, std::int64_t filled) {
    ExecutionState s(x0);
    if (filled > 0) s.add_fill({0.0, filled, 10.0, Venue::Displayed, false});
    return s;
}

std::size_t count(const DriverTickReport& r, ActionKind k) {
    std::size_t n = 0;
    for (const auto& a : r.actions) n += a.kind == k;
    return n;
}

VolumeProfile profile(double t1 = 23400.0) {
    ProfileSpec spec;
    return make_profile(spec, 23400.0, 0.0, t1);
}

const Quote kQuote{9.99, 10.01};

}  // namespace

TEST_CASE("above the maximum pauses displayed trading") {
    const FixedBands src(BandSet{0, 100, 150, 200, 1000});
    const auto d = drive_tick(src, with_filled(1000, 250), buy(1000), kQuote, {}, 10.0, SimConfig{}, DriverConfig{});
    CHECK(d.children.immediate.empty());
    CHECK(d.children.resting.passive == 0.0);
    CHECK(count(d.report, ActionKind::PauseDisplayed) == 1);
    CHECK(d.children.resting.dark == doctest::Approx(800));
}

TEST_CASE("pause-all also withdraws dark exposure") {
    const FixedBands src(BandSet{0, 100, 150, 200, 1000});
    DriverConfig cfg;
    cfg.pause_all_venues = true;
    const auto d = drive_tick(src, with_filled(1000, 250), buy(1000), kQuote, {}, 10.0, SimConfig{}, cfg);
    CHECK(d.children.resting.dark == 0.0);
}

TEST_CASE("below the minimum covers the shortfall aggressively") {
    const FixedBands src(BandSet{0, 100, 150, 200, 1000});
    const auto d = drive_tick(src, with_filled(1000, 40), buy(1000), kQuote, {}, 10.0, SimConfig{}, DriverConfig{});
    REQUIRE(d.children.immediate.size() == 1);
    CHECK(d.children.immediate[0].qty == 60);
    CHECK(d.children.immediate[0].aggressive);
    CHECK(d.report.filled_after == 100);
    CHECK(d.report.compliance == Compliance::BelowMin);
    CHECK(d.report.compliance_after == Compliance::Within);
    CHECK(d.children.resting.passive == doctest::Approx(100));
}

TEST_CASE("favourable signal adds opportunistic and escalated shares") {
    const FixedBands src(BandSet{0, 100, 150, 200, 1000});
    DriverConfig cfg;
    cfg.alpha_lambda = 1.0;
    const auto mild = drive_tick(src, with_filled(1000, 100), buy(1000), kQuote, AlphaSignal{0.2}, 1.0, SimConfig{}, cfg);
    CHECK(count(mild.report, ActionKind::Opportunistic) == 1);
    CHECK(mild.report.filled_after == 100 + 20);

    const auto strong = drive_tick(src, with_filled(1000, 100), buy(1000), kQuote, AlphaSignal{0.6}, 1.0, SimConfig{}, cfg);
    // 60 moved by the overlay, the remaining p1 escalated
    CHECK(strong.report.filled_after == 100 + 60);
    CHECK(strong.children.resting.passive == doctest::Approx(40));
}

TEST_CASE("strict sources never post dark exposure") {
    Order o = buy(1e8);
    PovBandSource src(PovRates::constant(0.05, 0.10, 0.15), o, true);
    SimConfig sim;
    sim.tick_interval = 10.0;
    const auto tape = generate_market(sim);
    const auto res = run_order(src, o, tape, sim, DriverConfig{});
    for (const auto& r : res.reports) CHECK(count(r, ActionKind::DarkPost) == 0);
    for (const auto& f : res.state.fills()) CHECK(f.venue == Venue::Displayed);
}

TEST_CASE("dark block shifts the bands before the next partition") {
    FixedBands src(BandSet{0, 100, 150, 200, 1000});
    src.on_block(300);
    const auto d = drive_tick(src, with_filled(1000, 400), buy(1000), kQuote, {}, 1.0, SimConfig{}, DriverConfig{});
    CHECK(d.report.bands.x_min == 400);
    CHECK(d.report.bands.x_max == 500);
    CHECK(d.report.partition.x_a == 0);
    CHECK(d.report.partition.x_p1 == 50);
}

TEST_CASE("ticks outside the order window are rejected") {
    const FixedBands src(BandSet{0, 100, 150, 200, 1000});
    Order o = buy(1000);
    o.start_time = 5.0;
    CHECK_THROWS(drive_tick(src, with_filled(1000, 0), o, kQuote, {}, 1.0, SimConfig{}, DriverConfig{}));
}

TEST_CASE("zero-width VWAP bands chase the target") {
    SimConfig sim;
    sim.seed = 12;
    sim.tick_interval = 5.0;
    const auto tape = generate_market(sim);
    VwapConfig v;
    v.eta = 0.0;
    const Order o = buy(1e6);
    auto src = make_band_source(v, o, profile());
    DriverConfig cfg;
    cfg.alpha_enabled = false;
    const auto res = run_order(*src, o, tape, sim, cfg);
    for (const auto& r : res.reports) {
        CHECK(r.partition.passive() == 0.0);
        CHECK(count(r, ActionKind::PassivePost) == 0);
    }
    CHECK(res.state.complete());
}

TEST_CASE("the same driver runs every strategy") {
    SimConfig sim;
    sim.seed = 21;
    sim.tick_interval = 5.0;
    const auto tape = generate_market(sim);
    const Order o = buy(1e6);
    IsProblem is;
    is.quoted_moments = Moments{1.3e-4, 0.4e-4};
    const std::vector<StrategyKind> kinds{VwapConfig{}, PovStrategy{PovRates::constant(0.05, 0.10, 0.15), false},
                                          optimize_is(is).durations};
    for (const auto& k : kinds) {
        auto src = make_band_source(k, o, profile());
        const auto res = run_order(*src, o, tape, sim, DriverConfig{});
        CHECK(res.state.complete());
        for (const auto& r : res.reports) {
            const auto p = compute_partition(r.bands, static_cast<double>(r.filled));
            CHECK(p.x_a == r.partition.x_a);
            CHECK(p.x_p1 == r.partition.x_p1);
            CHECK(p.x_p2 == r.partition.x_p2);
            CHECK(p.x_d == r.partition.x_d);
            for (const auto& a : r.actions)
                if (a.kind == ActionKind::AggressiveCover) CHECK(a.qty == p.x_a);
        }
    }
}

TEST_CASE("IS source maps clock time through the mean volume curve") {
    const auto prof = profile();
    const IsBandDurations d{0.025, 0.037, 0.049, 1.65, 1.0};
    IsBandSource src(d, prof, 1e6, 0.0);
    const double t = 600.0;
    const double tau = interpolate(prof.grid, prof.u_mean, t);
    CHECK(src.volume_time(t) == doctest::Approx(tau));
    const auto b = src.bands_at(t);
    const auto ref = is_bands_at(d, 1e6, tau);
    CHECK(b.x_min == ref.x_min);
    CHECK(b.x_max == ref.x_max);
}

TEST_CASE("POV source follows market trades and blocks") {
    const Order o = buy(1e6);
    PovBandSource src(PovRates::constant(0.05, 0.10, 0.15), o, false);
    src.on_market_trade(10000, 10.0, 1.0);
    src.on_block(25000);
    const auto b = src.bands_at(2.0);
    CHECK(b.x_min == doctest::Approx(25500));
    CHECK(b.x_max == doctest::Approx(26500));
    CHECK(src.accumulator().v_e == 10000);
}

TEST_CASE("action names") {
    CHECK(to_string(ActionKind::AggressiveCover) == "aggressive_cover");
    CHECK(to_string(ActionKind::PauseDisplayed) == "pause_displayed");
}
