#include <doctest.h>

#include "ubands/pov_bands.hpp"

using namespace ubands;

namespace {

Order buy(double x0 = 100000.0) { return Order{Side::Buy, x0, 0.0, std::nullopt, std::nullopt}; }

}  // namespace

TEST_CASE("constant rates integrate to p times eligible volume") {
    const auto rates = PovRates::constant(0.05, 0.10, 0.15);
    const auto o = buy();
    EligibleVolumeAccumulator acc;
    for (int i = 0; i < 10; ++i) acc = on_market_trade(acc, 1000.0, 10.0, o, rates, i);
    CHECK(acc.v_e == 10000.0);
    CHECK(acc.int_min == doctest::Approx(500));
    CHECK(acc.int_tgt == doctest::Approx(1000));
    CHECK(acc.int_max == doctest::Approx(1500));

    const auto b = pov_bands_at(acc, o.total_shares);
    CHECK(b.x_min == doctest::Approx(500));
    CHECK(b.x_tgt == doctest::Approx(1000));
    CHECK(b.x_max == doctest::Approx(1500));

    const auto shifted = pov_bands_at(apply_block(acc, 25000), o.total_shares);
    CHECK(shifted.x_min == doctest::Approx(25500));
    CHECK(shifted.x_tgt == doctest::Approx(26000));
    CHECK(shifted.x_max == doctest::Approx(26500));
}

TEST_CASE("trades through the limit are not eligible") {
    auto o = buy();
    o.limit_price = 10.00;
    const auto rates = PovRates::constant(0.05, 0.10, 0.15);
    EligibleVolumeAccumulator acc;
    const auto after = on_market_trade(acc, 500.0, 10.01, o, rates, 1.0);
    CHECK(after.v_e == 0.0);
    CHECK(after.int_max == 0.0);
    CHECK(on_market_trade(acc, 500.0, 10.00, o, rates, 1.0).v_e == 500.0);

    o.side = Side::Sell;
    CHECK(on_market_trade(acc, 500.0, 9.99, o, rates, 1.0).v_e == 0.0);
    CHECK(on_market_trade(acc, 500.0, 10.01, o, rates, 1.0).v_e == 500.0);
}

TEST_CASE("trades outside the order window are not eligible") {
    Order o{Side::Buy, 1000.0, 100.0, 200.0, std::nullopt};
    CHECK_FALSE(is_eligible(o, 10.0, 99.0));
    CHECK(is_eligible(o, 10.0, 100.0));
    CHECK(is_eligible(o, 10.0, 200.0));
    CHECK_FALSE(is_eligible(o, 10.0, 201.0));
}

TEST_CASE("no trades leaves only the block offset") {
    EligibleVolumeAccumulator acc;
    auto b = pov_bands_at(acc, 1e5);
    CHECK(b.x_min == 0.0);
    CHECK(b.x_max == 0.0);
    acc = apply_block(acc, 7000);
    b = pov_bands_at(acc, 1e5);
    CHECK(b.x_min == 7000.0);
    CHECK(b.x_tgt == 7000.0);
    CHECK(b.x_max == 7000.0);
}

TEST_CASE("bands clamp at the order size") {
    const auto rates = PovRates::constant(0.05, 0.10, 0.15);
    const auto o = buy(1000.0);
    EligibleVolumeAccumulator acc = on_market_trade({}, 20000.0, 10.0, o, rates, 1.0);
    const auto b = pov_bands_at(acc, 1000.0);
    CHECK(b.x_min == 1000.0);
    CHECK(b.x_max == 1000.0);
}

TEST_CASE("blocks add to the offset without touching eligible volume") {
    EligibleVolumeAccumulator acc;
    acc.v_e = 1234.0;
    const auto a = apply_block(acc, 25000);
    CHECK(a.block_offset == 25000);
    CHECK(a.v_e == 1234.0);
    CHECK(apply_block(apply_block(acc, 10000), 5000).block_offset == 15000);
    CHECK_THROWS(apply_block(acc, 0));
}

TEST_CASE("step rates are right-continuous and integrate piecewise") {
    const PovRates rates({{0.0, {0.05, 0.10, 0.15}}, {100.0, {0.10, 0.20, 0.30}}});
    CHECK(rates.at(99.9).p_tgt == 0.10);
    CHECK(rates.at(100.0).p_tgt == 0.20);
    const auto o = buy();
    EligibleVolumeAccumulator acc;
    acc = on_market_trade(acc, 1000.0, 10.0, o, rates, 50.0);
    acc = on_market_trade(acc, 1000.0, 10.0, o, rates, 150.0);
    CHECK(acc.int_min == doctest::Approx(50.0 + 100.0));
    CHECK(acc.int_tgt == doctest::Approx(100.0 + 200.0));
    CHECK(acc.int_max == doctest::Approx(150.0 + 300.0));
}

TEST_CASE("rate constructors and validation") {
    const auto t = PovRates::from_target(0.10, 0.03).at(0);
    CHECK(t.p_min == doctest::Approx(0.07));
    CHECK(t.p_max == doctest::Approx(0.13));
    CHECK(PovRates::from_range(0.04, 0.12).at(0).p_tgt == doctest::Approx(0.08));
    CHECK_THROWS(PovRates::constant(0.2, 0.1, 0.3));
    CHECK_THROWS(PovRates::constant(0.1, 0.2, 1.5));
    CHECK_THROWS(PovRates({{10.0, {0.1, 0.1, 0.1}}, {5.0, {0.1, 0.1, 0.1}}}));
    CHECK_THROWS(on_market_trade({}, 0.0, 10.0, buy(), PovRates::constant(0.1, 0.1, 0.1), 1.0));
}
