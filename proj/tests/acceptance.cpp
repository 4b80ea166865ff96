// Acceptance runner: every criterion prints one PASS/FAIL line with the
// measured values. Exit status is the number of failed criteria (capped).
//
//   antilizer_acceptance [--only N[,N...]]

#include "antilizer/basestation.hpp"
#include "antilizer/experiments.hpp"
#include "antilizer/kernel_features.hpp"
#include "antilizer/metrics.hpp"
#include "antilizer/runlog.hpp"
#include "antilizer/simulator.hpp"
#include "antilizer/trust.hpp"
#include "harness.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <atomic>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace antilizer;
using harness::MakeConfig;

namespace {

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string Fmt(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* fmt, ...)
{
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return buf;
}

double Seconds(std::chrono::steady_clock::time_point since)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

// Runs fn(i) for i in [0, n) on all hardware threads.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn)
{
    const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), n));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
    {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++)
            {
                fn(i);
            }
        });
    }
    for (auto& t : pool)
    {
        t.join();
    }
}

double Mean(const std::vector<double>& xs)
{
    double sum = 0.0;
    int count = 0;
    for (double x : xs)
    {
        if (!std::isnan(x))
        {
            sum += x;
            ++count;
        }
    }
    return count ? sum / count : std::nan("");
}

// ---------------------------------------------------------------------------

Outcome KernelFidelity()
{
    const auto start = std::chrono::steady_clock::now();
    const kernel::RandomFeatureMap map(200, 0.35, 20240611);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double maxErr = 0.0;
    double sumErr = 0.0;
    for (int i = 0; i < 1000; ++i)
    {
        const kernel::MetricVector x{u(rng), u(rng), u(rng)};
        const kernel::MetricVector y{u(rng), u(rng), u(rng)};
        const auto fx = kernel::MapFeatures(x, map);
        const auto fy = kernel::MapFeatures(y, map);
        double approx = 0.0;
        for (std::size_t j = 0; j < fx.Size(); ++j)
        {
            approx += fx.Data()[j] * fy.Data()[j];
        }
        const double err = std::abs(approx - kernel::RbfKernel(x, y, 0.35));
        maxErr = std::max(maxErr, err);
        sumErr += err;
    }
    const double elapsed = Seconds(start);
    const double meanErr = sumErr / 1000.0;
    return {maxErr <= 0.2 && meanErr <= 0.08 && elapsed < 1.0,
            Fmt("max |err| %.4f (<= 0.2), mean %.4f (<= 0.08), %.3f s (< 1 s)", maxErr, meanErr, elapsed)};
}

Outcome TrustFunction()
{
    const trust::TrustParams params;
    const double t0 = trust::SubjectiveTrust(0.0, params);
    const double t75 = trust::SubjectiveTrust(0.75, params);
    const double ref = oracle::TrustHighPrecision(0.75, 6.0);
    bool monotone = true;
    double prev = t0;
    for (int i = 1; i <= 1000; ++i)
    {
        const double t = trust::SubjectiveTrust(i / 1000.0, params);
        monotone = monotone && t >= prev;
        prev = t;
    }
    const bool pass = t0 == 1.0 && std::abs(t75 - 1.46468) <= 1e-4 && std::abs(t75 - ref) <= 1e-12 && monotone;
    return {pass, Fmt("tau(0) = %.17g, tau(0.75) = %.8f (oracle %.8f), monotone on 1000 points: %s", t0, t75, ref,
                      monotone ? "yes" : "no")};
}

struct RunStats
{
    metrics::RunSummary summary;
    metrics::RunSummary postOnset; // window [onset + 300 s, end]
    std::size_t ants = 0;
    std::uint64_t digest = 0;
};

RunStats RunOne(const ScenarioConfig& config)
{
    const auto log = sim::Simulate(config);
    RunStats stats;
    stats.summary = metrics::Summarize(log);
    if (config.attackKind != attacks::AttackKind::None)
    {
        stats.postOnset = metrics::Summarize(log, {config.AttackStart() + 300.0, config.simDuration});
    }
    stats.ants = log.ants.size();
    stats.digest = runlog::Digest(log);
    return stats;
}

std::vector<RunStats> RunAll(const std::vector<ScenarioConfig>& configs)
{
    std::vector<RunStats> out(configs.size());
    ParallelFor(configs.size(), [&](std::size_t i) { out[i] = RunOne(configs[i]); });
    return out;
}

ScenarioConfig Scenario(int nodes, const std::string& attack, std::uint64_t seed, bool defense,
                        std::map<std::string, std::string> extra = {})
{
    extra["node_count"] = std::to_string(nodes);
    extra["attack_kind"] = attack;
    extra["seed"] = std::to_string(seed);
    extra["defense_enabled"] = defense ? "true" : "false";
    return MakeConfig(extra);
}

constexpr int kSeeds = 10;

Outcome ZeroPenalty()
{
    std::vector<ScenarioConfig> configs;
    for (int s = 1; s <= kSeeds; ++s)
    {
        configs.push_back(Scenario(25, "none", s, true));
        configs.push_back(Scenario(25, "none", s, false));
    }
    const auto runs = RunAll(configs);
    std::vector<double> lossOn, lossOff, delayOn, delayOff;
    std::size_t ants = 0;
    for (int s = 0; s < kSeeds; ++s)
    {
        lossOn.push_back(runs[2 * s].summary.dataLoss);
        lossOff.push_back(runs[2 * s + 1].summary.dataLoss);
        delayOn.push_back(runs[2 * s].summary.avgDelay);
        delayOff.push_back(runs[2 * s + 1].summary.avgDelay);
        ants += runs[2 * s].ants;
    }
    const double dLoss = std::abs(Mean(lossOn) - Mean(lossOff));
    const double dDelay = std::abs(Mean(delayOn) - Mean(delayOff)) / Mean(delayOff);
    return {dLoss <= 0.005 && dDelay <= 0.02 && ants == 0,
            Fmt("|d loss| %.3f pp (<= 0.5), |d delay| %.2f%% (<= 2%%), ants %zu (= 0)", dLoss * 100.0,
                dDelay * 100.0, ants)};
}

// Runs shared by the blackhole, overhead and hello-flood criteria.
struct AttackRuns
{
    std::vector<RunStats> sinkhole, blackhole, blackholeOff, helloFlood;
};

const AttackRuns& FiftyNodeAttackRuns()
{
    static const AttackRuns runs = [] {
        std::vector<ScenarioConfig> configs;
        for (const char* kind : {"sinkhole", "blackhole", "hello_flood"})
        {
            for (int s = 1; s <= kSeeds; ++s)
            {
                configs.push_back(Scenario(50, kind, s, true));
            }
        }
        for (int s = 1; s <= kSeeds; ++s)
        {
            configs.push_back(Scenario(50, "blackhole", s, false));
        }
        const auto all = RunAll(configs);
        AttackRuns r;
        r.sinkhole.assign(all.begin(), all.begin() + kSeeds);
        r.blackhole.assign(all.begin() + kSeeds, all.begin() + 2 * kSeeds);
        r.helloFlood.assign(all.begin() + 2 * kSeeds, all.begin() + 3 * kSeeds);
        r.blackholeOff.assign(all.begin() + 3 * kSeeds, all.end());
        return r;
    }();
    return runs;
}

Outcome BlackholeMitigation()
{
    const auto& runs = FiftyNodeAttackRuns();
    std::vector<double> on;
    int strictlyBetter = 0;
    std::ostringstream perSeed;
    for (int s = 0; s < kSeeds; ++s)
    {
        const double a = runs.blackhole[s].postOnset.dataLoss;
        const double b = runs.blackholeOff[s].postOnset.dataLoss;
        on.push_back(a);
        strictlyBetter += a < b ? 1 : 0;
        perSeed << Fmt(" %.1f/%.1f", a * 100.0, b * 100.0);
    }
    const double mean = Mean(on);
    return {mean <= 0.05 && strictlyBetter == kSeeds,
            Fmt("mean post-onset loss %.2f%% (<= 5%%), defended < undefended in %d/%d seeds; on/off %%:",
                mean * 100.0, strictlyBetter, kSeeds) +
                perSeed.str()};
}

Outcome OverheadBounds()
{
    const auto& runs = FiftyNodeAttackRuns();
    auto stats = [](const std::vector<RunStats>& rs) {
        std::vector<double> v;
        double worst = 0.0;
        for (const auto& r : rs)
        {
            v.push_back(r.summary.overheadPct);
            worst = std::max(worst, r.summary.overheadPct);
        }
        return std::pair{Mean(v), worst};
    };
    const auto [sink, sinkMax] = stats(runs.sinkhole);
    const auto [black, blackMax] = stats(runs.blackhole);
    const auto [hello, helloMax] = stats(runs.helloFlood);
    const bool pass = sink < 1.0 && black < 0.5 && hello < 1.0;
    return {pass, Fmt("mean overhead sinkhole %.3f%% (max %.3f), blackhole %.3f%% (max %.3f, < 0.5), "
                      "hello_flood %.3f%% (max %.3f); limit 1%%",
                      sink, sinkMax, black, blackMax, hello, helloMax)};
}

Outcome HelloFloodLatency()
{
    const auto& runs = FiftyNodeAttackRuns();
    int within = 0;
    std::ostringstream perSeed;
    for (const auto& r : runs.helloFlood)
    {
        const double l = r.summary.detectLatencySlots;
        within += (!std::isnan(l) && l <= 2.0) ? 1 : 0;
        perSeed << Fmt(" %.2f", l);
    }
    return {within >= 9, Fmt("latency <= 2 slots in %d/%d seeds (need >= 9); slots:", within, kSeeds) +
                             perSeed.str()};
}

Outcome DetectionReliability()
{
    const std::vector<double> alphas{0.7, 0.75, 0.8, 0.9};
    std::vector<experiments::Job> jobs;
    for (double a : alphas)
    {
        for (const char* kind : {"sinkhole", "blackhole", "hello_flood"})
        {
            for (int s = 1; s <= kSeeds; ++s)
            {
                jobs.push_back({Fmt("alpha%.2f-%s", a, kind),
                                Scenario(50, kind, s, true, {{"alpha", Fmt("%.17g", a)}, {"sim_duration", "6000"}})});
            }
        }
    }
    const auto rows = experiments::RunJobs(jobs, static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
    // Average per attack first, then over the three attacks.
    bool pass = true;
    std::ostringstream text;
    std::map<double, double> fpAt;
    for (double a : alphas)
    {
        std::vector<double> tps, fps;
        for (const char* kind : {"sinkhole", "blackhole", "hello_flood"})
        {
            std::vector<double> tp, fp;
            for (const auto& row : rows)
            {
                if (row.alpha == a && row.attackKind == kind)
                {
                    tp.push_back(row.summary.tpRate);
                    fp.push_back(row.summary.fpRate);
                }
            }
            tps.push_back(Mean(tp));
            fps.push_back(Mean(fp));
        }
        const double tp = Mean(tps);
        const double fp = Mean(fps);
        fpAt[a] = fp;
        pass = pass && tp >= 0.95 && fp <= 0.06;
        text << Fmt(" a=%.2f TP %.3f FP %.4f;", a, tp, fp);
    }
    const bool ordered = fpAt[0.9] <= fpAt[0.7];
    pass = pass && ordered;
    return {pass, "need TP >= 0.95, FP <= 0.06, FP(0.9) <= FP(0.7):" + text.str() +
                      (ordered ? " FP ordered" : " FP not ordered")};
}

Outcome AntAccounting()
{
    const auto config = MakeConfig({{"node_count", "5"},
                                    {"positions", "0,0;40,0;80,-20;120,0;80,20"},
                                    {"tx_range", "50"},
                                    {"link_p", "1"},
                                    {"attack_kind", "none"},
                                    {"sim_duration", "1000"},
                                    {"force_distrust", "3:2@600"}});
    const auto log = sim::Simulate(config);
    std::int64_t defense = 0;
    for (const auto& m : log.messages)
    {
        defense += m.Defense();
    }
    int depth = -1;
    for (const auto& a : log.ants)
    {
        depth = a.hopsUnicast;
    }
    const int expected = 2 * 3 + 1;
    return {defense == expected && log.ants.size() == 1 && depth == 3,
            Fmt("%lld defense messages (expected %d), %zu ant(s), unicast hops %d", static_cast<long long>(defense),
                expected, log.ants.size(), depth)};
}

Outcome FilterOracle()
{
    const basestation::FilterParams params;
    const int cells = 9;
    long long total = 0;
    long long mismatches = 0;
    std::vector<int> counts(cells, 0);
    for (;;)
    {
        basestation::AntMatrix matrix(0);
        std::vector<std::vector<int>> grid(3, std::vector<int>(3, 0));
        for (int i = 0; i < cells; ++i)
        {
            grid[i / 3][i % 3] = counts[i];
            for (int c = 0; c < counts[i]; ++c)
            {
                matrix.Ingest(i / 3, i % 3);
            }
        }
        const auto got = basestation::Filter(matrix, params);
        const auto want = oracle::BruteForceFilter(grid, params.thetaB, params.thetaN);
        bool same = got.size() == want.size();
        for (std::size_t i = 0; same && i < got.size(); ++i)
        {
            const auto expectClass = want[i].verdict == oracle::Verdict::Genuine       ? basestation::VerdictClass::GenuineAttack
                                     : want[i].verdict == oracle::Verdict::Compromised ? basestation::VerdictClass::CompromisedAnt
                                                                                       : basestation::VerdictClass::FalsePositive;
            same = got[i].suspectId == want[i].suspect && got[i].verdict == expectClass &&
                   got[i].culpritId == want[i].culprit;
        }
        ++total;
        mismatches += same ? 0 : 1;

        int i = 0;
        while (i < cells && ++counts[i] > 4)
        {
            counts[i++] = 0;
        }
        if (i == cells)
        {
            break;
        }
    }
    return {mismatches == 0, Fmt("%lld matrices, %lld mismatches", total, mismatches)};
}

Outcome RoutingOracle()
{
    std::mt19937_64 rng(4242);
    routing::RoutingParams params;
    params.hysteresis = 0.0;
    double worst = 0.0;
    for (int g = 0; g < 50; ++g)
    {
        const auto adj = oracle::RandomConnectedGraph(25, 0.12, rng);
        const auto weights = harness::RandomWeights(adj, rng);
        const auto ranks = harness::ConvergeRanks(weights, 0, params);
        const auto dist = oracle::Dijkstra(weights, 0);
        for (std::size_t v = 0; v < ranks.size(); ++v)
        {
            worst = std::max(worst, std::abs(ranks[v] - dist[v]));
        }
    }
    return {worst <= 1e-9, Fmt("50 graphs, max |rank - dijkstra| %.3g", worst)};
}

Outcome KeaReplay()
{
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::bernoulli_distribution gate(0.6);
    double worst = 0.0;
    for (int seq = 0; seq < 100; ++seq)
    {
        const int len = 5 + seq % 40;
        std::vector<std::vector<double>> feats;
        std::vector<bool> gates;
        kernel::KeaVector kea;
        for (int t = 0; t < len; ++t)
        {
            std::vector<double> f(16);
            for (auto& x : f)
            {
                x = u(rng);
            }
            const bool open = gate(rng);
            feats.push_back(f);
            gates.push_back(open);
            kea.Update(kernel::FeatureVector(f), 0.2, open);
        }
        const auto ref = oracle::UnrolledKea(feats, gates, 0.2);
        for (std::size_t d = 0; d < ref.size(); ++d)
        {
            worst = std::max(worst, std::abs(kea.Data()[d] - ref[d]));
        }
    }
    return {worst <= 1e-12, Fmt("100 sequences, max |incremental - unrolled| %.3g", worst)};
}

// x (node 3) routes through one of two relays; its subtree is large enough
// that moving it shifts the new parent's traffic well past the threshold.
Outcome RefractoryAB()
{
    std::map<std::string, std::string> base{
        {"node_count", "13"},
        {"positions", "0,0;35,25;35,-25;75,0;37,-30;45,-5;115,0;110,25;110,-25;118,12;118,-12;100,38;100,-38"},
        {"tx_range", "50"},
        {"link_p", "1"},
        {"traffic_period", "1"},
        {"attack_kind", "none"},
        {"sim_duration", "1400"},
        {"seed", "3"}};
    const NodeId x = 3;
    const double switchTime = 800.0;

    // x's parent just before the switch, from an undisturbed run.
    NodeId oldParent = kNoNode;
    for (const auto& e : sim::Simulate(MakeConfig(base)).events)
    {
        if (e.kind == runlog::EventKind::ParentChange && e.a == x && e.time < switchTime)
        {
            oldParent = e.c;
        }
    }
    base["force_distrust"] = Fmt("%d:%d@%g", x, oldParent, switchTime);

    auto flagsOnNewParent = [&](bool refractory, NodeId& newParent) {
        auto cfg = base;
        cfg["refractory_enabled"] = refractory ? "true" : "false";
        const auto log = sim::Simulate(MakeConfig(cfg));
        newParent = kNoNode;
        for (const auto& e : log.events)
        {
            if (e.kind == runlog::EventKind::ParentChange && e.a == x && e.time >= switchTime && newParent == kNoNode)
            {
                newParent = e.c;
            }
        }
        std::set<NodeId> flaggers;
        for (const auto& t : log.trust)
        {
            if (t.neighbor == newParent && t.flagged)
            {
                flaggers.insert(t.observer);
            }
        }
        return flaggers;
    };
    NodeId parentOn = kNoNode;
    NodeId parentOff = kNoNode;
    const auto on = flagsOnNewParent(true, parentOn);
    const auto off = flagsOnNewParent(false, parentOff);
    const bool pass = oldParent != kNoNode && parentOn != kNoNode && parentOn == parentOff && on.empty() && !off.empty();
    return {pass, Fmt("x=%d switches %d -> %d; flagging neighbours with refractory %zu, without %zu", x, oldParent,
                      parentOn, on.size(), off.size())};
}

Outcome Determinism()
{
    bool pass = true;
    std::ostringstream text;
    for (const char* kind : {"sinkhole", "hello_flood", "ant_flood"})
    {
        const auto config = Scenario(25, kind, 11, true, {{"sim_duration", "2400"}, {"attack_start", "900"}});
        const auto a = RunOne(config);
        const auto b = RunOne(config);
        pass = pass && a.digest == b.digest;
        text << Fmt(" %s %016llx/%016llx", kind, static_cast<unsigned long long>(a.digest),
                    static_cast<unsigned long long>(b.digest));
    }
    return {pass, "digests:" + text.str()};
}

struct Criterion
{
    int id;
    const char* name;
    Outcome (*fn)();
};

} // namespace

int main(int argc, char** argv)
{
    std::set<int> only;
    for (int i = 1; i + 1 < argc; ++i)
    {
        if (std::strcmp(argv[i], "--only") == 0)
        {
            std::stringstream ss(argv[i + 1]);
            for (std::string tok; std::getline(ss, tok, ',');)
            {
                only.insert(std::stoi(tok));
            }
        }
    }

    const std::vector<Criterion> criteria{
        {1, "kernel fidelity", KernelFidelity},
        {2, "trust function", TrustFunction},
        {3, "zero performance penalty", ZeroPenalty},
        {4, "blackhole mitigation", BlackholeMitigation},
        {5, "overhead bounds", OverheadBounds},
        {6, "ANT message accounting", AntAccounting},
        {7, "hello-flood detection latency", HelloFloodLatency},
        {8, "detection reliability sweep", DetectionReliability},
        {9, "filter oracle equivalence", FilterOracle},
        {10, "routing oracle", RoutingOracle},
        {11, "KEA replay", KeaReplay},
        {12, "refractory A/B", RefractoryAB},
        {13, "determinism", Determinism},
    };

    int failed = 0;
    for (const auto& c : criteria)
    {
        if (!only.empty() && !only.count(c.id))
        {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = c.fn();
        }
        catch (const std::exception& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("criterion %2d %s  %s: %s [%.1f s]\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                    Seconds(start));
        std::fflush(stdout);
    }
    return std::min(failed, 100);
}
