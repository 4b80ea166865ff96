#pragma once

// Run summaries computed from a RunLog, and the results CSV.

#include "antilizer/runlog.hpp"

#include <string>
#include <vector>

namespace antilizer::metrics {

struct Window
{
    double start = 600.0;
    double end = 0.0; // 0 = end of run
};

struct RunSummary
{
    double dataLoss = 0.0;
    double avgDelay = 0.0;
    double overheadPct = 0.0;
    // Per-observer rates averaged over observers; NaN when no observer had a
    // qualifying neighbour (e.g. no attack or defense disabled).
    double tpRate = 0.0;
    double fpRate = 0.0;
    // Mean slots from attack onset to the first delivered ANT naming each
    // detected attacker; NaN when none was reported.
    double detectLatencySlots = 0.0;

    std::int64_t packetsSent = 0;
    std::int64_t packetsDelivered = 0;
    std::int64_t defenseMessages = 0;
    std::int64_t totalMessages = 0;
};

// Window defaults to [measure_start, end of run] from the log metadata.
RunSummary Summarize(const runlog::RunLog& log);
RunSummary Summarize(const runlog::RunLog& log, const Window& window);

struct CsvRow
{
    std::string scenarioId;
    std::uint64_t seed = 0;
    int nodeCount = 0;
    std::string attackKind;
    int attackers = 0;
    double alpha = 0.0;
    RunSummary summary;
};

CsvRow MakeRow(const std::string& scenarioId, const runlog::RunLog& log, const RunSummary& summary);

std::string CsvHeader();
std::string CsvLine(const CsvRow& row);
std::string RenderCsv(const std::vector<CsvRow>& rows);

// Human-readable one-run report.
std::string RenderSummary(const RunSummary& summary);

} // namespace antilizer::metrics
