#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ubands/reporting.hpp"

using nlohmann::json;
using namespace ubands;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::string preset;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "JSON configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", c.seed, "Simulator seed (overrides the config)");
    cmd->add_option("--out", c.out, "Output directory");
    cmd->add_option("--preset", c.preset, "Built-in configuration: default, paper-example");
}

json load_config(const Common& c, bool is_only) {
    json j = json::object();
    if (!c.preset.empty()) {
        if (is_only) {
            j = preset(c.preset == "default" ? "paper-example" : c.preset);
        } else {
            const json p = preset(c.preset);
            if (c.preset == "paper-example") j["is"] = p;
        }
    }
    if (!c.config.empty()) {
        std::ifstream in(c.config);
        if (!in) throw std::runtime_error("cannot open config " + c.config);
        json file;
        try {
            file = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ValidationError("<root>", std::string("malformed JSON: ") + e.what());
        }
        j.merge_patch(file);
    }
    return j;
}

json run(StrategyName strategy, const Common& c) {
    json j = load_config(c, false);
    if (strategy == StrategyName::Is && !j.contains("is")) j["is"] = preset("paper-example");
    RunConfig cfg = parse_run_config(j, strategy);
    if (c.seed) cfg.sim.seed = *c.seed;
    if (c.out) cfg.output.dir = *c.out;
    return cmd_run(cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Execution scheduling with uncertainty bands"};
    app.require_subcommand(1);

    Common c;
    auto* opt = app.add_subcommand("optimize-is", "Optimal duration, participation and shape for an IS order");
    auto* vwap = app.add_subcommand("run-vwap", "Simulate a VWAP order with profile bands");
    auto* pov = app.add_subcommand("run-pov", "Simulate a POV order with participation bands");
    auto* is = app.add_subcommand("run-is", "Simulate an IS order with duration bands");
    auto* disc = app.add_subcommand("run-discrete", "Run the discrete bin scheduler");
    auto* gen = app.add_subcommand("gen-market", "Write a synthetic market tape");
    for (auto* cmd : {opt, vwap, pov, is, disc, gen}) add_common(cmd, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        json summary;
        if (opt->parsed()) {
            const IsProblem problem = parse_is_problem(load_config(c, true));
            summary = cmd_optimize_is(problem, c.out);
        } else if (gen->parsed()) {
            RunConfig cfg = parse_run_config(load_config(c, false), StrategyName::Vwap);
            if (c.seed) cfg.sim.seed = *c.seed;
            summary = cmd_gen_market(cfg.sim, c.out.value_or(cfg.output.dir));
        } else if (vwap->parsed()) {
            summary = run(StrategyName::Vwap, c);
        } else if (pov->parsed()) {
            summary = run(StrategyName::Pov, c);
        } else if (is->parsed()) {
            summary = run(StrategyName::Is, c);
        } else {
            summary = run(StrategyName::Discrete, c);
        }
        std::cout << summary.dump(2) << '\n';
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
