#include "antilizer/basestation.hpp"

namespace antilizer::basestation {

int AntMatrix::Count(NodeId suspect, NodeId reporter) const
{
    auto it = m_counts.find({suspect, reporter});
    return it == m_counts.end() ? 0 : it->second;
}

std::string ToString(VerdictClass c)
{
    switch (c)
    {
    case VerdictClass::GenuineAttack:
        return "GA";
    case VerdictClass::CompromisedAnt:
        return "CA";
    case VerdictClass::FalsePositive:
        return "FP";
    }
    return "FP";
}

void FilterParams::Validate() const
{
    if (thetaB < 1 || thetaN < 1)
    {
        throw ConfigError("theta_b and theta_n must be >= 1");
    }
}

std::vector<FilterVerdict> Filter(const AntMatrix& matrix, const FilterParams& params)
{
    std::vector<FilterVerdict> verdicts;
    // Counts are keyed (suspect, reporter), so each suspect's row is contiguous.
    auto it = matrix.Counts().begin();
    const auto end = matrix.Counts().end();
    while (it != end)
    {
        const NodeId suspect = it->first.first;
        int distinct = 0;
        int maxCount = 0;
        NodeId culprit = kNoNode;
        for (; it != end && it->first.first == suspect; ++it)
        {
            if (it->second <= 0)
            {
                continue;
            }
            ++distinct;
            if (it->second > maxCount)
            {
                maxCount = it->second;
                culprit = it->first.second;
            }
        }
        if (distinct == 0)
        {
            continue;
        }
        FilterVerdict v;
        v.suspectId = suspect;
        if (distinct > params.thetaB)
        {
            v.verdict = VerdictClass::GenuineAttack;
        }
        else if (distinct < params.thetaB && maxCount >= params.thetaN)
        {
            v.verdict = VerdictClass::CompromisedAnt;
            v.culpritId = culprit;
        }
        else
        {
            v.verdict = VerdictClass::FalsePositive;
        }
        verdicts.push_back(v);
    }
    return verdicts;
}

AdminAction ActOnVerdict(const FilterVerdict& verdict, SlotIndex verdictSlot, int adminDelaySlots)
{
    switch (verdict.verdict)
    {
    case VerdictClass::GenuineAttack:
        return {AdminActionKind::Revoke, verdict.suspectId, verdictSlot + adminDelaySlots};
    case VerdictClass::CompromisedAnt:
        return {AdminActionKind::Revoke, verdict.culpritId, verdictSlot + adminDelaySlots};
    case VerdictClass::FalsePositive:
        break;
    }
    return {};
}

BaseStation::SlotOutcome BaseStation::CloseSlot(SlotIndex endedSlot)
{
    SlotOutcome outcome;
    outcome.slot = endedSlot;
    outcome.verdicts = Filter(m_matrix, m_params);
    for (const auto& v : outcome.verdicts)
    {
        auto action = ActOnVerdict(v, endedSlot, m_adminDelaySlots);
        if (action.kind != AdminActionKind::None)
        {
            outcome.actions.push_back(action);
        }
    }
    m_matrix = AntMatrix(endedSlot + 1);
    return outcome;
}

} // namespace antilizer::basestation
