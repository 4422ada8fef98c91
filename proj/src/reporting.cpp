#include "ubands/reporting.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace ubands {

using nlohmann::json;

std::string to_string(StrategyName s) {
    switch (s) {
        case StrategyName::Pov: return "pov";
        case StrategyName::Is: return "is";
        case StrategyName::Discrete: return "discrete";
        case StrategyName::Vwap: break;
    }
    return "vwap";
}

namespace {

// Reads one JSON object section and remembers which keys were consumed so
// leftovers can be reported as unknown.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ValidationError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key) && !j_.at(key).is_null();
    }

    template <class T>
    T get(const std::string& key, T fallback) {
        if (!has(key)) return fallback;
        return convert<T>(key);
    }

    template <class T>
    T require(const std::string& key) {
        if (!has(key)) throw ValidationError(field(key), "required field is missing");
        return convert<T>(key);
    }

    template <class T>
    std::optional<T> optional(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return convert<T>(key);
    }

    std::optional<Section> child(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return Section(j_.at(key), field(key));
    }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    void finish() const {
        for (const auto& [k, v] : j_.items())
            if (!seen_.count(k)) throw ValidationError(field(k), "unknown key");
    }

private:
    template <class T>
    T convert(const std::string& key) {
        const json& v = j_.at(key);
        try {
            if constexpr (std::is_same_v<T, double>) {
                if (!v.is_number()) throw ValidationError(field(key), "expected a number");
            } else if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) throw ValidationError(field(key), "expected a boolean");
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v.is_string()) throw ValidationError(field(key), "expected a string");
            } else {
                if (!v.is_number_integer() || v.get<long long>() < 0)
                    throw ValidationError(field(key), "expected a non-negative integer");
            }
            return v.get<T>();
        } catch (const json::exception& e) {
            throw ValidationError(field(key), e.what());
        }
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

template <class F>
void checked(const std::string& field, F&& f) {
    try {
        f();
    } catch (const ValidationError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ValidationError(field, e.what());
    }
}

ImpactParams parse_impact(Section s) {
    ImpactParams p;
    p.i0 = s.require<double>("i0");
    p.beta = s.require<double>("beta");
    p.sigma_d = s.require<double>("sigma_d");
    p.p0 = s.require<double>("p0");
    p.v_d = s.require<double>("v_d");
    p.g0 = s.get<double>("g0", p.g0);
    p.gamma = s.get<double>("gamma", p.gamma);
    s.finish();
    checked(s.field(""), [&] { p.validate(); });
    return p;
}

IsProblem parse_is(Section s, std::optional<double> x0_default) {
    IsProblem pr;
    auto impact = s.child("impact");
    if (!impact) throw ValidationError(s.field("impact"), "required field is missing");
    pr.impact = parse_impact(*impact);
    pr.aversion = s.require<double>("aversion");
    if (!(pr.aversion > 0.0)) throw ValidationError(s.field("aversion"), "must be > 0");
    pr.x0 = x0_default ? s.get<double>("x0", *x0_default) : s.require<double>("x0");
    if (!(pr.x0 > 0.0)) throw ValidationError(s.field("x0"), "must be > 0");
    auto vol = s.child("volume");
    if (!vol) throw ValidationError(s.field("volume"), "required field is missing");
    pr.volume.mu_z = vol->require<double>("mu_z");
    pr.volume.sigma_z = vol->require<double>("sigma_z");
    if (!(pr.volume.sigma_z > 0.0)) throw ValidationError(vol->field("sigma_z"), "must be > 0");
    vol->finish();
    pr.eta = s.get<double>("eta", pr.eta);
    if (!(pr.eta >= 0.0)) throw ValidationError(s.field("eta"), "must be >= 0");
    if (auto qm = s.child("quoted_moments")) {
        pr.quoted_moments = Moments{qm->require<double>("mean"), qm->require<double>("std")};
        qm->finish();
    }
    pr.omega = s.optional<double>("omega");
    if (pr.omega && !(*pr.omega > 0.0)) throw ValidationError(s.field("omega"), "must be > 0");
    if (auto sr = s.child("search")) {
        pr.search.nu_lo = sr->get<double>("nu_lo", pr.search.nu_lo);
        pr.search.nu_hi = sr->get<double>("nu_hi", pr.search.nu_hi);
        pr.search.tol = sr->get<double>("tol", pr.search.tol);
        sr->finish();
        if (!(pr.search.nu_hi > pr.search.nu_lo && pr.search.tol > 0.0))
            throw ValidationError(s.field("search"), "needs nu_hi > nu_lo and tol > 0");
    }
    s.finish();
    return pr;
}

BandMode parse_mode(Section& s, const std::string& key, BandMode fallback) {
    const auto m = s.optional<std::string>(key);
    if (!m) return fallback;
    if (*m == "symmetric") return BandMode::Symmetric;
    if (*m == "quantile") return BandMode::Quantile;
    throw ValidationError(s.field(key), "expected 'symmetric' or 'quantile'");
}

VwapConfig parse_vwap(Section s, VwapConfig v) {
    v.eta = s.get<double>("eta", v.eta);
    v.q = s.get<double>("q", v.q);
    v.mode = parse_mode(s, "mode", v.mode);
    v.strict = s.get<bool>("strict", v.strict);
    s.finish();
    checked(s.field(""), [&] { v.validate(); });
    return v;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

}  // namespace

IsProblem parse_is_problem(const json& j) { return parse_is(Section(j, ""), std::nullopt); }

RunConfig parse_run_config(const json& j, StrategyName strategy) {
    RunConfig cfg;
    cfg.strategy = strategy;
    Section root(j, "");
    root.get<long long>("schema_version", kSchemaVersion);

    if (auto s = root.child("order")) {
        const auto side = s->get<std::string>("side", "buy");
        checked(s->field("side"), [&] { cfg.order.side = side_from_string(side); });
        cfg.order.total_shares = s->get<double>("shares", cfg.order.total_shares);
        cfg.order.start_time = s->get<double>("start_time", cfg.order.start_time);
        cfg.order.end_time = s->optional<double>("end_time");
        cfg.order.limit_price = s->optional<double>("limit_price");
        s->finish();
        checked("order", [&] { cfg.order.validate(); });
    }

    if (auto s = root.child("sim")) {
        auto& m = cfg.sim;
        m.seed = s->get<std::uint64_t>("seed", m.seed);
        m.session_length = s->get<double>("session_length", m.session_length);
        m.tick_interval = s->get<double>("tick_interval", m.tick_interval);
        m.spread = s->get<double>("spread", m.spread);
        m.daily_vol = s->get<double>("daily_vol", m.daily_vol);
        m.price0 = s->get<double>("price0", m.price0);
        m.daily_volume = s->get<double>("daily_volume", m.daily_volume);
        m.volume_dispersion = s->get<double>("volume_dispersion", m.volume_dispersion);
        m.tick_volume_noise = s->get<double>("tick_volume_noise", m.tick_volume_noise);
        m.dark_arrival_rate = s->get<double>("dark_arrival_rate", m.dark_arrival_rate);
        m.dark_block_mean = s->get<double>("dark_block_mean", m.dark_block_mean);
        m.passive_fill_coeff = s->get<double>("passive_fill_coeff", m.passive_fill_coeff);
        m.impact_i0 = s->get<double>("impact_i0", m.impact_i0);
        m.impact_beta = s->get<double>("impact_beta", m.impact_beta);
        m.mean_reversion = s->get<double>("mean_reversion", m.mean_reversion);
        m.alpha_horizon = s->get<double>("alpha_horizon", m.alpha_horizon);
        m.alpha_r_scale = s->get<double>("alpha_r_scale", m.alpha_r_scale);
        s->finish();
    }
    checked("sim", [&] { cfg.sim.validate(); });
    if (cfg.order.end_time && *cfg.order.end_time > cfg.sim.session_length)
        throw ValidationError("order.end_time", "beyond the end of the session");

    if (auto s = root.child("profile")) {
        auto& p = cfg.profile;
        p.seed = s->get<std::uint64_t>("seed", p.seed);
        p.history_days = s->get<std::size_t>("history_days", p.history_days);
        p.n_bins = s->get<std::size_t>("n_bins", p.n_bins);
        p.bin_noise = s->get<double>("bin_noise", p.bin_noise);
        p.q = s->get<double>("q", p.q);
        p.history_csv = s->optional<std::string>("history_csv");
        s->finish();
        if (p.history_days < 2) throw ValidationError("profile.history_days", "needs at least 2 days");
        if (p.n_bins < 1) throw ValidationError("profile.n_bins", "must be >= 1");
        if (!(p.q > 0.0 && p.q < 0.5)) throw ValidationError("profile.q", "must be in (0, 0.5)");
    }

    if (auto s = root.child("driver")) {
        auto& d = cfg.driver;
        d.alpha_lambda = s->get<double>("alpha_lambda", d.alpha_lambda);
        d.escalation_threshold = s->get<double>("escalation_threshold", d.escalation_threshold);
        d.alpha_enabled = s->get<bool>("alpha_enabled", d.alpha_enabled);
        d.pause_all_venues = s->get<bool>("pause_all_venues", d.pause_all_venues);
        d.passive_dark_fraction = s->get<double>("passive_dark_fraction", d.passive_dark_fraction);
        s->finish();
        if (!(d.alpha_lambda >= 0.0 && d.alpha_lambda <= 1.0))
            throw ValidationError("driver.alpha_lambda", "must be in [0, 1]");
        if (!(d.passive_dark_fraction >= 0.0 && d.passive_dark_fraction <= 1.0))
            throw ValidationError("driver.passive_dark_fraction", "must be in [0, 1]");
    }

    if (auto s = root.child("output")) {
        cfg.output.dir = s->get<std::string>("dir", cfg.output.dir);
        cfg.output.trajectory_stride = s->get<std::size_t>("trajectory_stride", cfg.output.trajectory_stride);
        cfg.output.tick_stride = s->get<std::size_t>("tick_stride", cfg.output.tick_stride);
        s->finish();
        if (cfg.output.trajectory_stride == 0 || cfg.output.tick_stride == 0)
            throw ValidationError("output", "strides must be >= 1");
    }

    if (auto s = root.child("vwap")) cfg.vwap = parse_vwap(*s, cfg.vwap);

    if (auto s = root.child("pov")) {
        const auto p_min = s->optional<double>("p_min");
        const auto p_tgt = s->optional<double>("p_tgt");
        const auto p_max = s->optional<double>("p_max");
        const auto tol = s->optional<double>("tolerance");
        cfg.pov.strict = s->get<bool>("strict", cfg.pov.strict);
        checked("pov", [&] {
            if (p_min && p_max)
                cfg.pov.rates = p_tgt ? PovRates::constant(*p_min, *p_tgt, *p_max) : PovRates::from_range(*p_min, *p_max);
            else if (p_tgt && tol)
                cfg.pov.rates = PovRates::from_target(*p_tgt, *tol);
            else if (p_min || p_tgt || p_max || tol)
                throw ValidationError("pov", "give p_min and p_max, or p_tgt with tolerance");
        });
        s->finish();
    }

    if (auto s = root.child("is")) cfg.is = parse_is(*s, cfg.order.total_shares);
    else if (strategy == StrategyName::Is) throw ValidationError("is", "required section is missing");
    cfg.is.x0 = cfg.order.total_shares;

    if (auto s = root.child("discrete")) {
        auto& d = cfg.discrete;
        const auto coord = s->get<std::string>("coordinate", to_string(d.coordinate));
        checked(s->field("coordinate"), [&] { d.coordinate = bin_coordinate_from_string(coord); });
        d.n_bins = s->get<std::size_t>("n_bins", d.n_bins);
        d.bands = s->get<std::string>("bands", d.bands);
        d.vwap.eta = s->get<double>("eta", d.vwap.eta);
        d.vwap.q = s->get<double>("q", d.vwap.q);
        d.vwap.mode = parse_mode(*s, "mode", d.vwap.mode);
        s->finish();
        if (d.n_bins < 1) throw ValidationError("discrete.n_bins", "must be >= 1");
        if (d.bands != "vwap_profile" && d.bands != "linear_vwap")
            throw ValidationError("discrete.bands", "expected 'vwap_profile' or 'linear_vwap'");
        if (d.bands == "vwap_profile" && d.coordinate != BinCoordinate::Clock)
            throw ValidationError("discrete.bands", "'vwap_profile' bands need the clock coordinate");
        checked("discrete", [&] { d.vwap.validate(); });
    }

    root.finish();
    return cfg;
}

json preset(const std::string& name) {
    if (name == "paper-example") {
        return json{
            {"impact", {{"i0", 0.1}, {"beta", 0.5}, {"sigma_d", 0.0113}, {"p0", 24.7}, {"v_d", 7e7}, {"g0", 1.0}, {"gamma", 0.5}}},
            {"aversion", 5.0},
            {"x0", 1e6},
            {"volume", {{"mu_z", 18.0}, {"sigma_z", 0.4}}},
            {"eta", 1.0},
            {"omega", 0.5},
            {"quoted_moments", {{"mean", 1.3e-4}, {"std", 0.4e-4}}},
        };
    }
    if (name == "default") return json::object();
    throw ValidationError("preset", "unknown preset '" + name + "'");
}

VolumeProfile make_profile(const ProfileSpec& spec, double session_length, double t0, double t1) {
    const auto history = spec.history_csv ? load_history_csv(*spec.history_csv)
                                          : synthetic_history(spec.seed, spec.history_days, spec.n_bins, spec.bin_noise);
    if (history.empty()) throw std::runtime_error("no historical volume curves");
    const auto session_grid = uniform_grid(0.0, session_length, history.front().size() - 1);
    auto grid = uniform_grid(t0, t1, spec.n_bins);
    std::vector<std::vector<double>> windowed;
    windowed.reserve(history.size());
    for (const auto& c : history) {
        std::vector<double> raw(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) raw[i] = interpolate(session_grid, c, grid[i]);
        windowed.push_back(normalize_curve(raw));
    }
    return build_profile(windowed, std::move(grid), spec.q);
}

double cost_bps(Side side, double avg_price, double benchmark) {
    return side_sign(side) * (avg_price - benchmark) / benchmark * 1e4;
}

Metrics compute_metrics(const Order& order, std::span<const FillRecord> fills, const MarketTape& tape, double end_time,
                        std::span<const DriverTickReport> reports) {
    Metrics m;
    m.x0 = order.total_shares;
    m.end_time = end_time;
    m.n_fills = fills.size();
    double notional = 0.0, dark = 0.0;
    for (const auto& f : fills) {
        m.filled += f.qty;
        notional += static_cast<double>(f.qty) * f.price;
        if (f.venue == Venue::Dark) dark += static_cast<double>(f.qty);
    }
    m.completed = static_cast<double>(m.filled) >= order.total_shares;
    m.arrival_mid = tape.quote_at(order.start_time).mid();
    double vol = 0.0, vnot = 0.0;
    for (const auto& e : tape.window(order.start_time, end_time))
        if (const auto* tr = std::get_if<Trade>(&e.kind)) {
            vol += tr->qty;
            vnot += tr->qty * tr->price;
        }
    m.market_vwap = vol > 0.0 ? vnot / vol : m.arrival_mid;
    if (m.filled > 0) {
        m.avg_price = notional / static_cast<double>(m.filled);
        m.vwap_slippage_bps = cost_bps(order.side, m.avg_price, m.market_vwap);
        m.shortfall_bps = cost_bps(order.side, m.avg_price, m.arrival_mid);
        m.dark_fill_fraction = dark / static_cast<double>(m.filled);
    }
    m.n_ticks = reports.size();
    if (!reports.empty()) {
        std::size_t within = 0;
        for (const auto& r : reports) within += r.compliance_after == Compliance::Within;
        m.band_compliance = static_cast<double>(within) / static_cast<double>(reports.size());
    }
    return m;
}

json to_json(const Metrics& m) {
    return json{{"schema_version", kSchemaVersion},
                {"x0", m.x0},
                {"filled", m.filled},
                {"completed", m.completed},
                {"end_time", m.end_time},
                {"avg_price", m.avg_price},
                {"arrival_mid", m.arrival_mid},
                {"market_vwap", m.market_vwap},
                {"vwap_slippage_bps", m.vwap_slippage_bps},
                {"shortfall_bps", m.shortfall_bps},
                {"band_compliance", m.band_compliance},
                {"dark_fill_fraction", m.dark_fill_fraction},
                {"n_fills", m.n_fills},
                {"n_ticks", m.n_ticks}};
}

json to_json(const IsReport& r) {
    return json{{"schema_version", kSchemaVersion},
                {"t_opt", r.t_opt},
                {"p_opt", r.p_opt},
                {"nu_opt", r.shape.nu},
                {"nu_at_upper_bound", r.shape.at_upper_bound},
                {"omega", r.omega},
                {"lognormal_mean", r.moments.mean},
                {"lognormal_std", r.moments.std},
                {"t_min", r.durations.t_min},
                {"t_tgt", r.durations.t_tgt},
                {"t_max", r.durations.t_max},
                {"eta", r.durations.eta},
                {"impact_cost_linear", r.impact_cost_linear},
                {"impact_cost", r.impact_cost_shaped},
                {"timing_risk", r.timing_risk},
                {"total_cost", r.total_cost_shaped},
                {"optimal_shortfall", r.optimal_shortfall},
                {"powerlaw_kernel_cost", r.powerlaw_kernel_cost}};
}

json to_json(const DriverTickReport& r) {
    json actions = json::array();
    for (const auto& a : r.actions) actions.push_back({{"kind", to_string(a.kind)}, {"qty", a.qty}});
    return json{{"t", r.time},
                {"x_min", r.bands.x_min},
                {"x_tgt", r.bands.x_tgt},
                {"x_max", r.bands.x_max},
                {"filled", r.filled},
                {"filled_after", r.filled_after},
                {"x_a", r.partition.x_a},
                {"x_p1", r.partition.x_p1},
                {"x_p2", r.partition.x_p2},
                {"x_d", r.partition.x_d},
                {"compliance", to_string(r.compliance)},
                {"compliance_after", to_string(r.compliance_after)},
                {"signal", r.signal},
                {"block_shift", r.block_shift},
                {"actions", actions}};
}

void write_fills_csv(const std::string& path, std::span<const FillRecord> fills) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write fills file " + path);
    out << "# schema_version: " << kSchemaVersion << "\n";
    out << "time,qty,price,venue,aggressive\n";
    for (const auto& f : fills)
        out << fmt17(f.time) << ',' << f.qty << ',' << fmt17(f.price) << ',' << to_string(f.venue) << ','
            << (f.aggressive ? 1 : 0) << '\n';
}

std::vector<FillRecord> read_fills_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fills file " + path);
    std::vector<FillRecord> fills;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("time,", 0) == 0) continue;
        const auto c = split_csv(line);
        if (c.size() != 5) throw std::runtime_error("malformed fills row in " + path + ": " + line);
        fills.push_back({std::stod(c[0]), std::stoll(c[1]), std::stod(c[2]), venue_from_string(c[3]), c[4] == "1"});
    }
    return fills;
}

void write_trajectory_csv(const std::string& path, std::span<const TrajectoryRow> rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trajectory file " + path);
    out << "# schema_version: " << kSchemaVersion << "\n";
    out << "t,x_min,x_tgt,x_max,x_f\n";
    for (const auto& r : rows)
        out << fmt17(r.t) << ',' << fmt17(r.x_min) << ',' << fmt17(r.x_tgt) << ',' << fmt17(r.x_max) << ','
            << fmt17(r.x_f) << '\n';
}

std::vector<TrajectoryRow> read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trajectory file " + path);
    std::vector<TrajectoryRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("t,", 0) == 0) continue;
        const auto c = split_csv(line);
        if (c.size() != 5) throw std::runtime_error("malformed trajectory row in " + path + ": " + line);
        rows.push_back({std::stod(c[0]), std::stod(c[1]), std::stod(c[2]), std::stod(c[3]), std::stod(c[4])});
    }
    return rows;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

json cmd_optimize_is(const IsProblem& problem, const std::optional<std::string>& out_dir) {
    const IsReport rep = optimize_is(problem);
    json j = to_json(rep);
    const double notional = problem.x0 * problem.impact.p0;
    j["impact_cost_bps"] = rep.impact_cost_shaped / notional * 1e4;
    j["total_cost_bps"] = rep.total_cost_shaped / notional * 1e4;
    j["powerlaw_kernel_cost_bps"] = rep.powerlaw_kernel_cost / notional * 1e4;
    j["recomputed_lognormal"] = {{"omega", rep.omega}, {"mean", rep.moments.mean}, {"std", rep.moments.std}};
    if (problem.quoted_moments)
        j["quoted_moments"] = {{"mean", problem.quoted_moments->mean}, {"std", problem.quoted_moments->std}};
    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        write_json(*out_dir + "/is_report.json", j);
    }
    return j;
}

namespace {

void write_driver_outputs(const RunConfig& cfg, const RunResult& res) {
    const auto& dir = cfg.output.dir;
    std::vector<TrajectoryRow> rows;
    for (std::size_t i = 0; i < res.reports.size(); ++i) {
        const bool last = i + 1 == res.reports.size();
        if (i % cfg.output.trajectory_stride != 0 && !last) continue;
        const auto& r = res.reports[i];
        rows.push_back({r.time, r.bands.x_min, r.bands.x_tgt, r.bands.x_max, static_cast<double>(r.filled_after)});
    }
    write_trajectory_csv(dir + "/trajectory.csv", rows);
    write_fills_csv(dir + "/fills.csv", res.state.fills());
    {
        std::ofstream out(dir + "/ticks.jsonl");
        if (!out) throw std::runtime_error("cannot write " + dir + "/ticks.jsonl");
        for (std::size_t i = 0; i < res.reports.size(); i += cfg.output.tick_stride)
            out << to_json(res.reports[i]).dump() << '\n';
    }
}

}  // namespace

json cmd_run(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.output.dir);
    const MarketTape tape = generate_market(cfg.sim);
    const Order& order = cfg.order;
    const double t0 = order.start_time;
    const double t1 = order.end_time.value_or(cfg.sim.session_length);

    json metrics;
    if (cfg.strategy == StrategyName::Discrete) {
        const auto& d = cfg.discrete;
        const VolumeProfile profile = make_profile(cfg.profile, cfg.sim.session_length, t0, t1);
        double expected = 0.0;
        if (d.coordinate == BinCoordinate::Volume)
            expected = cfg.sim.daily_volume * (intraday_cumulative(t1 / cfg.sim.session_length) -
                                               intraday_cumulative(t0 / cfg.sim.session_length));
        else if (d.coordinate == BinCoordinate::Trade)
            expected = (t1 - t0) / cfg.sim.tick_interval;
        const BinGrid grid = realized_grid(d.coordinate, d.n_bins, tape, t0, t1, expected);
        TauBandSource bands;
        if (d.bands == "linear_vwap") {
            if (d.coordinate == BinCoordinate::Clock) {
                auto lin = linear_vwap_bands(order.total_shares, d.n_bins);
                bands = [lin, t0, t1](double tau) { return lin((tau - t0) / (t1 - t0)); };
            } else {
                bands = linear_vwap_bands(order.total_shares, d.n_bins);
            }
        } else {
            bands = [profile, v = d.vwap, x0 = order.total_shares](double tau) {
                return vwap_bands_at(profile, v, x0, tau);
            };
        }
        SimulatedTactic tactic(tape, cfg.sim, order.side);
        const ScheduleResult res = run_schedule(order, grid, bands, tactic);
        save_bin_ledger_csv(cfg.output.dir + "/bin_ledger.csv", res.ledger);
        std::vector<TrajectoryRow> rows{{t0, 0.0, 0.0, 0.0, 0.0}};
        for (const auto& r : res.ledger)
            rows.push_back({r.t_end, r.x_min, r.x_tgt, r.x_max, static_cast<double>(r.filled)});
        write_trajectory_csv(cfg.output.dir + "/trajectory.csv", rows);
        write_fills_csv(cfg.output.dir + "/fills.csv", res.state.fills());
        const double end = res.ledger.empty() ? t0 : res.ledger.back().t_end;
        metrics = to_json(compute_metrics(order, res.state.fills(), tape, end));
        metrics["n_bins"] = d.n_bins;
        metrics["coordinate"] = to_string(d.coordinate);
    } else {
        StrategyKind kind;
        VolumeProfile profile;
        if (cfg.strategy == StrategyName::Vwap) {
            kind = cfg.vwap;
            profile = make_profile(cfg.profile, cfg.sim.session_length, t0, t1);
        } else if (cfg.strategy == StrategyName::Pov) {
            kind = cfg.pov;
            profile = make_profile(cfg.profile, cfg.sim.session_length, t0, t1);
        } else {
            kind = optimize_is(cfg.is).durations;
            profile = make_profile(cfg.profile, cfg.sim.session_length, 0.0, cfg.sim.session_length);
        }
        auto source = make_band_source(kind, order, profile);
        const RunResult res = run_order(*source, order, tape, cfg.sim, cfg.driver);
        write_driver_outputs(cfg, res);
        metrics = to_json(compute_metrics(order, res.state.fills(), tape, res.end_time, res.reports));
        if (cfg.strategy == StrategyName::Is) {
            const auto& dur = std::get<IsBandDurations>(kind);
            metrics["is_durations"] = {{"t_min", dur.t_min}, {"t_tgt", dur.t_tgt}, {"t_max", dur.t_max}, {"nu", dur.nu}};
        }
    }
    metrics["strategy"] = to_string(cfg.strategy);
    metrics["seed"] = cfg.sim.seed;
    write_json(cfg.output.dir + "/metrics.json", metrics);
    return metrics;
}

json cmd_gen_market(const SimConfig& sim, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const MarketTape tape = generate_market(sim);
    save_tape_csv(out_dir + "/tape.csv", tape);
    json j{{"schema_version", kSchemaVersion},
           {"seed", sim.seed},
           {"events", tape.events.size()},
           {"trades", tape.trade_count()},
           {"total_volume", tape.total_volume()}};
    write_json(out_dir + "/market_summary.json", j);
    return j;
}

}  // namespace ubands
