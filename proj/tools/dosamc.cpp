// dosamc: denial-of-sleep analysis from the command line.
//
//   dosamc analyze  --config scenario.json [--out dir]
//   dosamc simulate --config scenario.json --out dir [--seed S] [--runs R]
//   dosamc detect   --config scenario.json [--out dir] [--seed S] [--runs R] [--theta T]
//   dosamc sweep    --config scenario.json --param NAME --values v1,v2,... [--out dir]
//
// Exit codes: 0 ok / Normal, 1 error, 2 UnderAttack, 3 Inconclusive.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dosamc/commands.hpp"

namespace {

struct CommonFlags {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> runs;
    std::optional<double> theta;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool out_required = false)
{
    cmd->add_option("--config", f.config, "scenario JSON file")->required()->check(CLI::ExistingFile);
    auto* out = cmd->add_option("--out", f.out, "output directory");
    if (out_required) out->required();
    cmd->add_option("--seed", f.seed, "override run.seed");
    cmd->add_option("--runs", f.runs, "override run.runs");
    cmd->add_option("--theta", f.theta, "override detector.theta");
}

std::optional<std::filesystem::path> out_dir(const CommonFlags& f)
{
    if (f.out.empty()) return std::nullopt;
    return std::filesystem::path(f.out);
}

dosamc::AppConfig load(const CommonFlags& f)
{
    return dosamc::apply_overrides(dosamc::load_config(f.config), {f.seed, f.runs, f.theta});
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Denial-of-sleep detection with an absorbing Markov chain model of network death"};
    app.require_subcommand(1, 1);

    CommonFlags flags;
    std::string parameter;
    std::vector<double> values;

    auto* analyze = app.add_subcommand("analyze", "closed-form chain quantities next to the matrix oracle");
    add_common(analyze, flags);
    auto* simulate = app.add_subcommand("simulate", "run the node-level simulator and write traces");
    add_common(simulate, flags, true);
    auto* detect = app.add_subcommand("detect", "simulate the scenario and judge it against the baseline");
    add_common(detect, flags);
    auto* sweep = app.add_subcommand("sweep", "tabulate baseline and verdicts over one parameter");
    add_common(sweep, flags);
    sweep->add_option("--param", parameter, "m_threshold, n_deployed, theta, coverage, sleep_block or extra_drain")
        ->required();
    sweep->add_option("--values", values, "comma-separated values")->required()->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        const dosamc::AppConfig cfg = load(flags);
        if (*analyze) return dosamc::cmd_analyze(cfg, out_dir(flags), std::cout);
        if (*simulate) return dosamc::cmd_simulate(cfg, flags.out, std::cout);
        if (*detect) return dosamc::cmd_detect(cfg, out_dir(flags), std::cout);
        if (*sweep) return dosamc::cmd_sweep(cfg, parameter, values, out_dir(flags), std::cout);
    } catch (const dosamc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
