#include "antilizer/experiments.hpp"

#include "antilizer/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

namespace antilizer::experiments {

std::vector<metrics::CsvRow> RunJobs(const std::vector<Job>& jobs, int threads,
                                     const std::function<void(std::size_t, std::size_t)>& progress)
{
    std::vector<metrics::CsvRow> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    std::size_t done = 0;
    std::mutex mutex;
    std::exception_ptr failure;

    auto worker = [&]() {
        for (;;)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size())
            {
                return;
            }
            try
            {
                const auto log = sim::Simulate(jobs[i].config);
                rows[i] = metrics::MakeRow(jobs[i].scenarioId, log, metrics::Summarize(log));
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(mutex);
                if (!failure)
                {
                    failure = std::current_exception();
                }
                next.store(jobs.size());
                return;
            }
            std::lock_guard<std::mutex> lock(mutex);
            ++done;
            if (progress)
            {
                progress(done, jobs.size());
            }
        }
    };

    const int count = std::max(1, threads);
    std::vector<std::thread> pool;
    for (int t = 1; t < count; ++t)
    {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool)
    {
        t.join();
    }
    if (failure)
    {
        std::rethrow_exception(failure);
    }
    return rows;
}

std::vector<Job> SuiteJobs(const ScenarioConfig& base, const SuiteOptions& options)
{
    std::vector<Job> jobs;
    auto add = [&](int size, attacks::AttackKind kind, std::optional<double> fraction, bool defense,
                   const std::string& id) {
        for (int s = 0; s < options.seeds; ++s)
        {
            ScenarioConfig c = base;
            c.nodeCount = size;
            c.positions.clear();
            c.areaSide.reset();
            c.attackStart.reset();
            c.attackers.clear();
            c.attackKind = kind;
            c.attackerCount.reset();
            c.attackerFraction = fraction;
            c.defenseEnabled = defense;
            c.seed = options.firstSeed + static_cast<std::uint64_t>(s);
            c.logTrust = defense;
            jobs.push_back({id, c});
        }
    };
    for (int size : options.sizes)
    {
        const std::string prefix = "n" + std::to_string(size) + "-";
        for (auto kind : options.attacks)
        {
            const auto name = prefix + attacks::ToString(kind);
            add(size, kind, std::nullopt, true, name);
            if (options.baseline && kind != attacks::AttackKind::None)
            {
                add(size, kind, std::nullopt, false, name + "-nodef");
            }
        }
        if (options.multiAttackerFraction > 0.0)
        {
            add(size, attacks::AttackKind::Blackhole, options.multiAttackerFraction, true, prefix + "blackhole-multi");
        }
    }
    return jobs;
}

std::vector<Job> SweepJobs(const ScenarioConfig& base, const SweepOptions& options)
{
    std::vector<Job> jobs;
    for (double alpha : options.alphas)
    {
        for (auto kind : options.attacks)
        {
            for (int s = 0; s < options.seeds; ++s)
            {
                ScenarioConfig c = base;
                c.trust.alpha = alpha;
                c.attackKind = kind;
                c.defenseEnabled = true;
                c.seed = options.firstSeed + static_cast<std::uint64_t>(s);
                char id[64];
                std::snprintf(id, sizeof(id), "alpha%.2f-%s", alpha, attacks::ToString(kind).c_str());
                jobs.push_back({id, c});
            }
        }
    }
    return jobs;
}

std::vector<ReliabilityPoint> Reliability(const std::vector<metrics::CsvRow>& rows)
{
    struct Acc
    {
        double tp = 0.0;
        int tpN = 0;
        double fp = 0.0;
        int fpN = 0;
    };
    std::map<double, Acc> byAlpha;
    for (const auto& row : rows)
    {
        auto& acc = byAlpha[row.alpha];
        if (!std::isnan(row.summary.tpRate))
        {
            acc.tp += row.summary.tpRate;
            ++acc.tpN;
        }
        if (!std::isnan(row.summary.fpRate))
        {
            acc.fp += row.summary.fpRate;
            ++acc.fpN;
        }
    }
    std::vector<ReliabilityPoint> points;
    for (const auto& [alpha, acc] : byAlpha)
    {
        const double nan = std::nan("");
        points.push_back({alpha, acc.tpN ? acc.tp / acc.tpN : nan, acc.fpN ? acc.fp / acc.fpN : nan});
    }
    return points;
}

std::string RenderReliabilityCsv(const std::vector<ReliabilityPoint>& points)
{
    std::string out = "alpha,tp_rate,fp_rate\n";
    char buf[128];
    for (const auto& p : points)
    {
        std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.6g\n", p.alpha, p.tpRate, p.fpRate);
        out += buf;
    }
    return out;
}

} // namespace antilizer::experiments
