#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ubands/discrete_scheduler.hpp"
#include "ubands/is_optimizer.hpp"
#include "ubands/market_sim.hpp"
#include "ubands/strategy_driver.hpp"

namespace ubands {

inline constexpr int kSchemaVersion = 1;

/// Configuration error tied to a dotted field path, e.g. "impact.sigma_d".
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string field, const std::string& what)
        : std::runtime_error("invalid config field '" + field + "': " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct ProfileSpec {
    std::uint64_t seed = 7;
    std::size_t history_days = 250;
    std::size_t n_bins = 78;
    double bin_noise = 0.3;
    double q = 0.05;
    std::optional<std::string> history_csv;
};

struct DiscreteSpec {
    BinCoordinate coordinate = BinCoordinate::Clock;
    std::size_t n_bins = 13;
    std::string bands = "vwap_profile";  // or "linear_vwap"
    VwapConfig vwap;
};

struct OutputSpec {
    std::string dir = "out";
    std::size_t trajectory_stride = 1;
    std::size_t tick_stride = 1;
};

enum class StrategyName { Vwap, Pov, Is, Discrete };

std::string to_string(StrategyName s);

struct RunConfig {
    StrategyName strategy = StrategyName::Vwap;
    VwapConfig vwap;
    PovStrategy pov{PovRates::constant(0.05, 0.10, 0.15), false};
    IsProblem is;
    DiscreteSpec discrete;
    Order order{Side::Buy, 1e6, 0.0, std::nullopt, std::nullopt};
    SimConfig sim;
    ProfileSpec profile;
    DriverConfig driver;
    OutputSpec output;
};

/// Parses and validates; unknown keys are rejected with their path.
RunConfig parse_run_config(const nlohmann::json& j, StrategyName strategy);
IsProblem parse_is_problem(const nlohmann::json& j);

/// Built-in named configurations ("paper-example", "default").
nlohmann::json preset(const std::string& name);

/// Historical profile re-normalized onto [t0, t1] of a session of the
/// given length (synthetic history unless a CSV is given).
VolumeProfile make_profile(const ProfileSpec& spec, double session_length, double t0, double t1);

struct Metrics {
    double x0 = 0.0;
    std::int64_t filled = 0;
    bool completed = false;
    double end_time = 0.0;
    double avg_price = 0.0;
    double arrival_mid = 0.0;
    double market_vwap = 0.0;
    double vwap_slippage_bps = 0.0;
    double shortfall_bps = 0.0;
    double band_compliance = 1.0;
    double dark_fill_fraction = 0.0;
    std::size_t n_fills = 0;
    std::size_t n_ticks = 0;
};

Metrics compute_metrics(const Order& order, std::span<const FillRecord> fills, const MarketTape& tape, double end_time,
                        std::span<const DriverTickReport> reports = {});

/// Signed basis-point cost of avg_price against a benchmark.
double cost_bps(Side side, double avg_price, double benchmark);

nlohmann::json to_json(const Metrics& m);
nlohmann::json to_json(const IsReport& r);
nlohmann::json to_json(const DriverTickReport& r);

void write_fills_csv(const std::string& path, std::span<const FillRecord> fills);
std::vector<FillRecord> read_fills_csv(const std::string& path);

struct TrajectoryRow {
    double t = 0.0;
    double x_min = 0.0;
    double x_tgt = 0.0;
    double x_max = 0.0;
    double x_f = 0.0;
};

void write_trajectory_csv(const std::string& path, std::span<const TrajectoryRow> rows);
std::vector<TrajectoryRow> read_trajectory_csv(const std::string& path);

void write_json(const std::string& path, const nlohmann::json& j);

/// Subcommands. Each returns the JSON summary it wrote (or printed).
nlohmann::json cmd_optimize_is(const IsProblem& problem, const std::optional<std::string>& out_dir);
nlohmann::json cmd_run(const RunConfig& cfg);
nlohmann::json cmd_gen_market(const SimConfig& sim, const std::string& out_dir);

}  // namespace ubands
