#include "antilizer/runlog.hpp"

#include <algorithm>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace antilizer::runlog {

namespace {

void Append(std::string& out, const char* fmt, ...) __attribute__((format(printf, 2, 3)));

void Append(std::string& out, const char* fmt, ...)
{
    char buf[512];
    va_list args;
    va_start(args, fmt);
    const int n = std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    out.append(buf, static_cast<std::size_t>(n < 0 ? 0 : std::min<int>(n, sizeof(buf) - 1)));
}

// Whitespace-separated field reader over one line.
class Fields
{
  public:
    Fields(const std::string& line, int lineNo) : m_p(line.c_str()), m_lineNo(lineNo) {}

    long long Int()
    {
        char* end = nullptr;
        const long long v = std::strtoll(m_p, &end, 10);
        Check(end);
        return v;
    }

    unsigned long long Unsigned()
    {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(m_p, &end, 10);
        Check(end);
        return v;
    }

    double Double()
    {
        char* end = nullptr;
        const double v = std::strtod(m_p, &end);
        Check(end);
        return v;
    }

    char Char()
    {
        while (*m_p == ' ')
        {
            ++m_p;
        }
        if (*m_p == '\0')
        {
            Fail();
        }
        return *m_p++;
    }

    bool AtEnd()
    {
        while (*m_p == ' ')
        {
            ++m_p;
        }
        return *m_p == '\0';
    }

    [[noreturn]] void Fail() const
    {
        throw std::runtime_error("run log line " + std::to_string(m_lineNo) + ": malformed record");
    }

  private:
    void Check(char* end)
    {
        if (end == m_p)
        {
            Fail();
        }
        m_p = end;
    }

    const char* m_p;
    int m_lineNo;
};

} // namespace

double RunLog::MetaDouble(const std::string& key) const
{
    return std::strtod(MetaString(key).c_str(), nullptr);
}

long long RunLog::MetaInt(const std::string& key) const
{
    return std::strtoll(MetaString(key).c_str(), nullptr, 10);
}

const std::string& RunLog::MetaString(const std::string& key) const
{
    auto it = meta.find(key);
    if (it == meta.end())
    {
        throw std::runtime_error("run log is missing metadata '" + key + "'");
    }
    return it->second;
}

std::string Serialize(const RunLog& log)
{
    std::string out;
    out.reserve(64 * (log.packets.size() + log.trust.size()) + 4096);
    out += "antilizer-runlog 1\n";
    for (const auto& [key, value] : log.meta)
    {
        out += "M " + key + " " + value + "\n";
    }
    out += "A";
    for (NodeId a : log.attackers)
    {
        Append(out, " %d", a);
    }
    out += "\n";
    for (std::size_t i = 0; i < log.adjacency.size(); ++i)
    {
        Append(out, "N %zu", i);
        for (NodeId v : log.adjacency[i])
        {
            Append(out, " %d", v);
        }
        out += "\n";
    }
    for (const auto& p : log.packets)
    {
        Append(out, "P %d %.17g %.17g %d %d %d\n", p.origin, p.created, p.fateTime, static_cast<int>(p.fate),
               static_cast<int>(p.reason), p.hops);
    }
    for (const auto& a : log.ants)
    {
        Append(out, "T %llu %d %d %lld %.17g %.17g %d %d %d %d\n", static_cast<unsigned long long>(a.id), a.suspect,
               a.reporter, static_cast<long long>(a.createdSlot), a.created, a.endTime, static_cast<int>(a.fate),
               a.hopsUnicast, a.hopsBroadcast, a.falsified ? 1 : 0);
    }
    for (const auto& v : log.verdicts)
    {
        Append(out, "V %lld %d %c %d\n", static_cast<long long>(v.slot), v.suspect, v.verdict, v.culprit);
    }
    for (const auto& t : log.trust)
    {
        Append(out, "S %lld %d %d %.17g %.17g %.17g %.17g %.17g %d\n", static_cast<long long>(t.slot), t.observer,
               t.neighbor, t.eta, t.tau, t.metrics[0], t.metrics[1], t.metrics[2], (t.flagged ? 1 : 0) | (t.warmup ? 2 : 0) | (t.refractory ? 4 : 0));
    }
    for (const auto& m : log.messages)
    {
        Append(out, "C %lld %lld %lld %lld %lld %lld %lld\n", static_cast<long long>(m.slot),
               static_cast<long long>(m.data), static_cast<long long>(m.beacon), static_cast<long long>(m.hello),
               static_cast<long long>(m.antSpawn), static_cast<long long>(m.antUnicast),
               static_cast<long long>(m.antNotice));
    }
    for (const auto& e : log.events)
    {
        Append(out, "E %.17g %d %d %d %d\n", e.time, static_cast<int>(e.kind), e.a, e.b, e.c);
    }
    return out;
}

RunLog Parse(const std::string& text)
{
    RunLog log;
    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    if (!std::getline(in, line) || line != "antilizer-runlog 1")
    {
        throw std::runtime_error("not an antilizer run log");
    }
    ++lineNo;
    while (std::getline(in, line))
    {
        ++lineNo;
        if (line.empty())
        {
            continue;
        }
        const char tag = line[0];
        if (line.size() > 1 && line[1] != ' ')
        {
            Fields(line, lineNo).Fail();
        }
        const std::string rest = line.size() > 2 ? line.substr(2) : std::string();
        Fields f(rest, lineNo);
        switch (tag)
        {
        case 'M': {
            const auto space = rest.find(' ');
            if (space == std::string::npos)
            {
                log.meta[rest] = "";
            }
            else
            {
                log.meta[rest.substr(0, space)] = rest.substr(space + 1);
            }
            break;
        }
        case 'A':
            while (!f.AtEnd())
            {
                log.attackers.push_back(static_cast<NodeId>(f.Int()));
            }
            break;
        case 'N': {
            const auto node = static_cast<std::size_t>(f.Int());
            if (node != log.adjacency.size())
            {
                f.Fail();
            }
            log.adjacency.emplace_back();
            while (!f.AtEnd())
            {
                log.adjacency.back().push_back(static_cast<NodeId>(f.Int()));
            }
            break;
        }
        case 'P': {
            PacketRecord p;
            p.origin = static_cast<NodeId>(f.Int());
            p.created = f.Double();
            p.fateTime = f.Double();
            p.fate = static_cast<PacketFate>(f.Int());
            p.reason = static_cast<DropReason>(f.Int());
            p.hops = static_cast<int>(f.Int());
            log.packets.push_back(p);
            break;
        }
        case 'T': {
            AntRecord a;
            a.id = f.Unsigned();
            a.suspect = static_cast<NodeId>(f.Int());
            a.reporter = static_cast<NodeId>(f.Int());
            a.createdSlot = f.Int();
            a.created = f.Double();
            a.endTime = f.Double();
            a.fate = static_cast<AntFate>(f.Int());
            a.hopsUnicast = static_cast<int>(f.Int());
            a.hopsBroadcast = static_cast<int>(f.Int());
            a.falsified = f.Int() != 0;
            log.ants.push_back(a);
            break;
        }
        case 'V': {
            VerdictRecord v;
            v.slot = f.Int();
            v.suspect = static_cast<NodeId>(f.Int());
            v.verdict = f.Char();
            v.culprit = static_cast<NodeId>(f.Int());
            log.verdicts.push_back(v);
            break;
        }
        case 'S': {
            TrustRecord t;
            t.slot = f.Int();
            t.observer = static_cast<NodeId>(f.Int());
            t.neighbor = static_cast<NodeId>(f.Int());
            t.eta = f.Double();
            t.tau = f.Double();
            for (auto& m : t.metrics)
            {
                m = f.Double();
            }
            const auto bits = f.Int();
            t.flagged = bits & 1;
            t.warmup = bits & 2;
            t.refractory = bits & 4;
            log.trust.push_back(t);
            break;
        }
        case 'C': {
            SlotMessages m;
            m.slot = f.Int();
            m.data = f.Int();
            m.beacon = f.Int();
            m.hello = f.Int();
            m.antSpawn = f.Int();
            m.antUnicast = f.Int();
            m.antNotice = f.Int();
            log.messages.push_back(m);
            break;
        }
        case 'E': {
            EventRecord e;
            e.time = f.Double();
            e.kind = static_cast<EventKind>(f.Int());
            e.a = static_cast<NodeId>(f.Int());
            e.b = static_cast<NodeId>(f.Int());
            e.c = static_cast<NodeId>(f.Int());
            log.events.push_back(e);
            break;
        }
        default:
            f.Fail();
        }
    }
    return log;
}

void WriteFile(const RunLog& log, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw std::runtime_error("cannot write " + path);
    }
    out << Serialize(log);
}

RunLog ReadFile(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw std::runtime_error("cannot read " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return Parse(buf.str());
}

std::uint64_t Digest(const RunLog& log)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : Serialize(log))
    {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace antilizer::runlog
