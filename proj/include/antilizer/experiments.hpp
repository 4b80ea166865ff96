#pragma once

// Batches of independent runs: the scenario suite and the alpha sweep.

#include "antilizer/config.hpp"
#include "antilizer/metrics.hpp"

#include <functional>
#include <string>
#include <vector>

namespace antilizer::experiments {

struct Job
{
    std::string scenarioId;
    ScenarioConfig config;
};

// Runs jobs on `threads` workers; rows come back in job order.
// `progress` (optional) is called after each finished job.
std::vector<metrics::CsvRow> RunJobs(const std::vector<Job>& jobs, int threads,
                                     const std::function<void(std::size_t done, std::size_t total)>& progress = {});

struct SuiteOptions
{
    std::vector<int> sizes{25, 50, 100};
    std::vector<attacks::AttackKind> attacks{attacks::AttackKind::None, attacks::AttackKind::Sinkhole,
                                             attacks::AttackKind::Blackhole, attacks::AttackKind::HelloFlood};
    int seeds = 10;
    std::uint64_t firstSeed = 1;
    double multiAttackerFraction = 0.1; // extra blackhole scenario per size; 0 disables
    bool baseline = true;               // also run every attack scenario with the defense disabled
};

// Scenario ids look like "n25-blackhole", "n25-blackhole-multi", "n25-sinkhole-nodef".
std::vector<Job> SuiteJobs(const ScenarioConfig& base, const SuiteOptions& options);

struct SweepOptions
{
    std::vector<double> alphas{0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95};
    std::vector<attacks::AttackKind> attacks{attacks::AttackKind::Sinkhole, attacks::AttackKind::Blackhole,
                                             attacks::AttackKind::HelloFlood};
    int seeds = 10;
    std::uint64_t firstSeed = 1;
};

std::vector<Job> SweepJobs(const ScenarioConfig& base, const SweepOptions& options);

struct ReliabilityPoint
{
    double alpha = 0.0;
    double tpRate = 0.0;
    double fpRate = 0.0;
};

// Mean TP / FP per alpha over the rows that define them.
std::vector<ReliabilityPoint> Reliability(const std::vector<metrics::CsvRow>& rows);
std::string RenderReliabilityCsv(const std::vector<ReliabilityPoint>& points);

} // namespace antilizer::experiments
