#include "ubands/vwap_bands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <json.hpp>

namespace ubands {

namespace {

double empirical_quantile(std::vector<double>& sorted, double p) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

void VolumeProfile::validate() const {
    const auto m = grid.size();
    if (m < 2) throw std::invalid_argument("profile grid needs at least 2 points");
    if (u_mean.size() != m || u_std.size() != m)
        throw std::invalid_argument("profile series length does not match grid");
    if (std::abs(u_mean.front()) > 1e-12 || std::abs(u_mean.back() - 1.0) > 1e-12)
        throw std::invalid_argument("profile mean must run from 0 to 1");
    for (std::size_t i = 1; i < m; ++i) {
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("profile grid must be increasing");
        if (u_mean[i] < u_mean[i - 1]) throw std::invalid_argument("profile mean must be non-decreasing");
    }
    for (double s : u_std)
        if (s < 0.0) throw std::invalid_argument("profile std must be >= 0");
    if (u_std.front() > 1e-12 || u_std.back() > 1e-12)
        throw std::invalid_argument("profile std must vanish at the endpoints");
    if (has_quantiles()) {
        if (u_quantile_lo.size() != m || u_quantile_hi.size() != m)
            throw std::invalid_argument("profile quantile length does not match grid");
        if (!(q > 0.0 && q < 0.5)) throw std::invalid_argument("profile quantile level must be in (0, 0.5)");
    }
}

void VwapConfig::validate() const {
    if (!(eta >= 0.0)) throw std::invalid_argument("vwap eta must be >= 0");
    if (!(q > 0.0 && q < 0.5)) throw std::invalid_argument("vwap q must be in (0, 0.5)");
}

std::vector<double> normalize_curve(std::span<const double> u_raw) {
    if (u_raw.size() < 2) throw std::invalid_argument("volume curve needs at least 2 samples");
    for (std::size_t i = 1; i < u_raw.size(); ++i)
        if (u_raw[i] < u_raw[i - 1]) throw std::invalid_argument("volume curve must be non-decreasing");
    const double base = u_raw.front();
    const double span = u_raw.back() - base;
    if (!(span > 0.0)) throw std::invalid_argument("flat volume curve cannot be normalized");
    std::vector<double> u(u_raw.size());
    std::transform(u_raw.begin(), u_raw.end(), u.begin(), [&](double v) { return (v - base) / span; });
    u.front() = 0.0;
    u.back() = 1.0;
    return u;
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t n_bins) {
    if (n_bins == 0 || !(t1 > t0)) throw std::invalid_argument("grid needs n_bins >= 1 and t1 > t0");
    std::vector<double> g(n_bins + 1);
    for (std::size_t i = 0; i <= n_bins; ++i)
        g[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n_bins);
    g.back() = t1;
    return g;
}

VolumeProfile build_profile(const std::vector<std::vector<double>>& history, std::vector<double> grid, double q) {
    const std::size_t h = history.size();
    if (h < 2) throw std::invalid_argument("profile needs at least 2 historical curves");
    const std::size_t m = grid.size();
    for (const auto& c : history)
        if (c.size() != m) throw std::invalid_argument("historical curve length does not match grid");

    VolumeProfile p;
    p.grid = std::move(grid);
    p.u_mean.assign(m, 0.0);
    p.u_std.assign(m, 0.0);
    const bool quantiles = h >= kMinQuantileHistory;
    if (quantiles) {
        p.q = q;
        p.u_quantile_lo.resize(m);
        p.u_quantile_hi.resize(m);
    } else {
        std::cerr << "warning: " << h << " historical curves < " << kMinQuantileHistory
                  << "; quantile bands unavailable, Gaussian fallback will be used\n";
    }

    std::vector<double> column(h);
    for (std::size_t j = 0; j < m; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < h; ++i) {
            column[i] = history[i][j];
            sum += column[i];
        }
        const double mean = sum / static_cast<double>(h);
        double ss = 0.0;
        for (double v : column) ss += (v - mean) * (v - mean);
        p.u_mean[j] = mean;
        p.u_std[j] = std::sqrt(ss / static_cast<double>(h - 1));
        if (quantiles) {
            std::sort(column.begin(), column.end());
            p.u_quantile_lo[j] = std::min(empirical_quantile(column, q), mean);
            p.u_quantile_hi[j] = std::max(empirical_quantile(column, 1.0 - q), mean);
        }
    }
    // Normalization pins the endpoints; remove accumulated rounding.
    p.u_mean.front() = 0.0;
    p.u_mean.back() = 1.0;
    p.u_std.front() = p.u_std.back() = 0.0;
    if (quantiles) {
        p.u_quantile_lo.front() = p.u_quantile_hi.front() = 0.0;
        p.u_quantile_lo.back() = p.u_quantile_hi.back() = 1.0;
    }
    for (std::size_t j = 1; j < m; ++j) p.u_mean[j] = std::max(p.u_mean[j], p.u_mean[j - 1]);
    return p;
}

double interpolate(std::span<const double> grid, std::span<const double> values, double t) {
    if (t <= grid.front()) return values.front();
    if (t >= grid.back()) return values.back();
    const auto it = std::upper_bound(grid.begin(), grid.end(), t);
    const auto i = static_cast<std::size_t>(it - grid.begin());
    const double w = (t - grid[i - 1]) / (grid[i] - grid[i - 1]);
    return values[i - 1] + w * (values[i] - values[i - 1]);
}

BandSet vwap_bands_at(const VolumeProfile& profile, const VwapConfig& cfg, double x0, double t) {
    if (t < profile.t0() || t > profile.t1())
        throw std::invalid_argument("time outside the VWAP trading window");
    const double mean = interpolate(profile.grid, profile.u_mean, t);
    BandSet b;
    b.t = t;
    b.x0 = x0;
    b.x_tgt = std::clamp(mean * x0, 0.0, x0);

    if (cfg.mode == BandMode::Quantile && profile.has_quantiles()) {
        if (std::abs(cfg.q - profile.q) > 1e-12)
            throw std::invalid_argument("quantile level differs from the one the profile was built with");
        const double lo = interpolate(profile.grid, profile.u_quantile_lo, t);
        const double hi = interpolate(profile.grid, profile.u_quantile_hi, t);
        b.x_min = std::clamp(lo * x0, 0.0, b.x_tgt);
        b.x_max = std::clamp(hi * x0, b.x_tgt, x0);
        return b;
    }

    double eta = cfg.eta;
    if (cfg.mode == BandMode::Quantile) {
        boost::math::normal_distribution<double> z;
        eta = boost::math::quantile(z, 1.0 - cfg.q);
    }
    const double half_width = eta * interpolate(profile.grid, profile.u_std, t) * x0;
    b.x_min = std::max(0.0, b.x_tgt - half_width);
    b.x_max = std::min(x0, b.x_tgt + half_width);
    return b;
}

VolumeProfile blend_profile(const VolumeProfile& profile, std::span<const double> u_today, double weight) {
    if (u_today.size() != profile.u_mean.size())
        throw std::invalid_argument("intraday curve length does not match profile grid");
    if (!(weight >= 0.0 && weight <= 1.0)) throw std::invalid_argument("blend weight must be in [0, 1]");
    VolumeProfile out = profile;
    for (std::size_t i = 0; i < u_today.size(); ++i)
        out.u_mean[i] = (1.0 - weight) * profile.u_mean[i] + weight * u_today[i];
    return out;
}

std::vector<std::vector<double>> load_history_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open history file " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');  // date
        if (cell == "date") continue;
        std::vector<double> raw;
        while (std::getline(ss, cell, ',')) raw.push_back(std::stod(cell));
        rows.push_back(normalize_curve(raw));
    }
    return rows;
}

void save_history_csv(const std::string& path, const std::vector<std::vector<double>>& history) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write history file " + path);
    out << std::setprecision(17);
    for (std::size_t d = 0; d < history.size(); ++d) {
        out << "day" << d;
        for (double v : history[d]) out << ',' << v;
        out << '\n';
    }
}

void save_profile_json(const std::string& path, const VolumeProfile& profile) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["grid"] = profile.grid;
    j["u_mean"] = profile.u_mean;
    j["u_std"] = profile.u_std;
    if (profile.has_quantiles()) {
        j["q"] = profile.q;
        j["u_quantile_lo"] = profile.u_quantile_lo;
        j["u_quantile_hi"] = profile.u_quantile_hi;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write profile " + path);
    out << j.dump(2) << '\n';
}

VolumeProfile load_profile_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open profile " + path);
    const auto j = nlohmann::json::parse(in);
    VolumeProfile p;
    p.grid = j.at("grid").get<std::vector<double>>();
    p.u_mean = j.at("u_mean").get<std::vector<double>>();
    p.u_std = j.at("u_std").get<std::vector<double>>();
    if (j.contains("u_quantile_lo")) {
        p.q = j.at("q").get<double>();
        p.u_quantile_lo = j.at("u_quantile_lo").get<std::vector<double>>();
        p.u_quantile_hi = j.at("u_quantile_hi").get<std::vector<double>>();
    }
    p.validate();
    return p;
}

}  // namespace ubands
