// Command-line front end: single runs, the scenario suite, the alpha sweep,
// config validation and summary replay from a saved run log.
//
// Exit codes: 0 success, 1 invalid configuration or usage, 2 runtime failure.

#include "antilizer/config.hpp"
#include "antilizer/experiments.hpp"
#include "antilizer/metrics.hpp"
#include "antilizer/runlog.hpp"
#include "antilizer/simulator.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace antilizer;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

std::string DefaultOutDir()
{
    const char* env = std::getenv("ANTILIZER_OUT_DIR");
    return env && *env ? env : "out";
}

struct ConfigArgs
{
    std::string path;
    std::vector<std::string> sets;

    void Attach(CLI::App* cmd)
    {
        cmd->add_option("-c,--config", path, "scenario file (key = value)");
        cmd->add_option("--set", sets, "override, key=value (repeatable)");
    }

    ScenarioConfig Build(const std::vector<std::pair<std::string, std::string>>& extra = {}) const
    {
        KeyValues overrides;
        for (const auto& s : sets)
        {
            overrides.push_back(ParseOverride(s));
        }
        overrides.insert(overrides.end(), extra.begin(), extra.end());
        return BuildConfig(path.empty() ? std::nullopt : std::optional<std::string>(path), overrides);
    }
};

void WriteText(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

std::vector<attacks::AttackKind> ParseKinds(const std::vector<std::string>& names)
{
    std::vector<attacks::AttackKind> kinds;
    for (const auto& n : names)
    {
        kinds.push_back(attacks::ParseAttackKind(n));
    }
    return kinds;
}

void Progress(std::size_t done, std::size_t total)
{
    std::fprintf(stderr, "\r%zu/%zu runs", done, total);
    if (done == total)
    {
        std::fprintf(stderr, "\n");
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Antilizer WSN attack-detection simulator"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "simulate one scenario");
    ConfigArgs runCfg;
    runCfg.Attach(run);
    std::optional<std::uint64_t> runSeed;
    std::string runOut = DefaultOutDir();
    std::string runId = "run";
    run->add_option("--seed", runSeed, "scenario seed (overrides config)");
    run->add_option("-o,--out", runOut, "output directory (default $ANTILIZER_OUT_DIR or ./out)");
    run->add_option("--id", runId, "scenario id for the CSV row");

    // suite
    auto* suite = app.add_subcommand("suite", "scenario suite over sizes and attacks");
    ConfigArgs suiteCfg;
    suiteCfg.Attach(suite);
    experiments::SuiteOptions suiteOpts;
    std::vector<std::string> suiteAttacks;
    std::string suiteOut = DefaultOutDir();
    int suiteJobs = 1;
    bool noBaseline = false;
    suite->add_option("--sizes", suiteOpts.sizes, "network sizes");
    suite->add_option("--attacks", suiteAttacks, "attack kinds");
    suite->add_option("--seeds", suiteOpts.seeds, "seeds per scenario")->check(CLI::PositiveNumber);
    suite->add_option("--first-seed", suiteOpts.firstSeed, "first seed");
    suite->add_option("--multi-fraction", suiteOpts.multiAttackerFraction,
                      "attacker fraction of the multi-blackhole scenario (0 disables)");
    suite->add_flag("--no-baseline", noBaseline, "skip the defense-disabled runs");
    suite->add_option("-j,--jobs", suiteJobs, "worker threads")->check(CLI::PositiveNumber);
    suite->add_option("-o,--out", suiteOut, "output directory");

    // sweep-alpha
    auto* sweep = app.add_subcommand("sweep-alpha", "TP / FP as a function of the flag threshold");
    ConfigArgs sweepCfg;
    sweepCfg.Attach(sweep);
    experiments::SweepOptions sweepOpts;
    std::vector<std::string> sweepAttacks;
    std::string sweepOut = DefaultOutDir();
    int sweepJobs = 1;
    sweep->add_option("--alphas", sweepOpts.alphas, "threshold values");
    sweep->add_option("--attacks", sweepAttacks, "attack kinds");
    sweep->add_option("--seeds", sweepOpts.seeds, "seeds per point")->check(CLI::PositiveNumber);
    sweep->add_option("--first-seed", sweepOpts.firstSeed, "first seed");
    sweep->add_option("-j,--jobs", sweepJobs, "worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("-o,--out", sweepOut, "output directory");

    // validate-config
    auto* validate = app.add_subcommand("validate-config", "check a scenario file and print the resolved values");
    ConfigArgs validateCfg;
    validateCfg.Attach(validate);

    // replay-log
    auto* replay = app.add_subcommand("replay-log", "recompute the summary of a saved run log");
    std::string replayPath;
    std::optional<double> windowStart;
    std::optional<double> windowEnd;
    replay->add_option("log", replayPath, "run log file")->required();
    replay->add_option("--window-start", windowStart, "measurement window start (s)");
    replay->add_option("--window-end", windowEnd, "measurement window end (s)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    ScenarioConfig config;
    try
    {
        if (*run)
        {
            KeyValues extra;
            if (runSeed)
            {
                extra.emplace_back("seed", std::to_string(*runSeed));
            }
            config = runCfg.Build(extra);
        }
        else if (*suite)
        {
            config = suiteCfg.Build();
            if (!suiteAttacks.empty())
            {
                suiteOpts.attacks = ParseKinds(suiteAttacks);
            }
            suiteOpts.baseline = !noBaseline;
        }
        else if (*sweep)
        {
            config = sweepCfg.Build();
            if (!sweepAttacks.empty())
            {
                sweepOpts.attacks = ParseKinds(sweepAttacks);
            }
        }
        else if (*validate)
        {
            config = validateCfg.Build();
            std::cout << RenderConfig(config);
            return 0;
        }
    }
    catch (const ConfigError& e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        for (const auto* args : {&runCfg, &suiteCfg, &sweepCfg, &validateCfg})
        {
            if (!args->path.empty() && !fs::exists(args->path))
            {
                std::cerr << "\n" << app.help();
                break;
            }
        }
        return kExitConfig;
    }

    try
    {
        if (*run)
        {
            const auto log = sim::Simulate(config);
            const auto summary = metrics::Summarize(log);
            fs::create_directories(runOut);
            runlog::WriteFile(log, (fs::path(runOut) / "runlog.txt").string());
            WriteText(fs::path(runOut) / "summary.txt", metrics::RenderSummary(summary));
            WriteText(fs::path(runOut) / "results.csv", metrics::RenderCsv({metrics::MakeRow(runId, log, summary)}));
            std::cout << metrics::RenderSummary(summary);
            std::printf("digest               %016llx\n", static_cast<unsigned long long>(runlog::Digest(log)));
        }
        else if (*suite)
        {
            const auto jobs = experiments::SuiteJobs(config, suiteOpts);
            const auto rows = experiments::RunJobs(jobs, suiteJobs, Progress);
            fs::create_directories(suiteOut);
            WriteText(fs::path(suiteOut) / "results.csv", metrics::RenderCsv(rows));
            std::cout << "wrote " << rows.size() << " rows to " << (fs::path(suiteOut) / "results.csv").string()
                      << "\n";
        }
        else if (*sweep)
        {
            const auto jobs = experiments::SweepJobs(config, sweepOpts);
            const auto rows = experiments::RunJobs(jobs, sweepJobs, Progress);
            fs::create_directories(sweepOut);
            WriteText(fs::path(sweepOut) / "results.csv", metrics::RenderCsv(rows));
            const auto reliability = experiments::RenderReliabilityCsv(experiments::Reliability(rows));
            WriteText(fs::path(sweepOut) / "reliability.csv", reliability);
            std::cout << reliability;
        }
        else if (*replay)
        {
            const auto log = runlog::ReadFile(replayPath);
            metrics::Window window;
            window.start = windowStart ? *windowStart : log.MetaDouble("measure_start");
            window.end = windowEnd ? *windowEnd : log.MetaDouble("sim_duration");
            std::cout << metrics::RenderSummary(metrics::Summarize(log, window));
        }
    }
    catch (const ConfigError& e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
