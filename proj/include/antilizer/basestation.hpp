#pragma once

// Root-side ANT ingestion and the per-slot filter that separates genuine
// attacks from compromised ANTs and false positives.

#include "antilizer/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace antilizer::basestation {

class AntMatrix
{
  public:
    explicit AntMatrix(SlotIndex slot = 0) : m_slot(slot) {}

    void Ingest(NodeId suspect, NodeId reporter) { ++m_counts[{suspect, reporter}]; }
    int Count(NodeId suspect, NodeId reporter) const;
    SlotIndex Slot() const { return m_slot; }
    bool Empty() const { return m_counts.empty(); }
    const std::map<std::pair<NodeId, NodeId>, int>& Counts() const { return m_counts; }

  private:
    SlotIndex m_slot;
    std::map<std::pair<NodeId, NodeId>, int> m_counts;
};

enum class VerdictClass
{
    GenuineAttack,
    CompromisedAnt,
    FalsePositive,
};

std::string ToString(VerdictClass c);

struct FilterVerdict
{
    NodeId suspectId = kNoNode;
    VerdictClass verdict = VerdictClass::FalsePositive;
    NodeId culpritId = kNoNode; // reporter with the largest count, CA only

    bool operator==(const FilterVerdict&) const = default;
};

struct FilterParams
{
    int thetaB = 2; // distinct-reporter threshold
    int thetaN = 3; // per-reporter count threshold

    void Validate() const;
};

// Per suspect with at least one report: D distinct reporters, M the largest
// per-reporter count.
//   D > thetaB                  -> genuine attack
//   D < thetaB and M >= thetaN  -> compromised ANT, culprit = argmax reporter
//   otherwise (including D == thetaB) -> false positive
// Verdicts come out in ascending suspect id.
std::vector<FilterVerdict> Filter(const AntMatrix& matrix, const FilterParams& params);

enum class AdminActionKind
{
    None,
    Revoke,
};

struct AdminAction
{
    AdminActionKind kind = AdminActionKind::None;
    NodeId target = kNoNode;
    SlotIndex effectiveSlot = 0;
};

// GA revokes the suspect, CA revokes the culprit, FP does nothing; revocation
// takes effect adminDelaySlots after the verdict slot.
AdminAction ActOnVerdict(const FilterVerdict& verdict, SlotIndex verdictSlot, int adminDelaySlots);

class BaseStation
{
  public:
    BaseStation(FilterParams params, int adminDelaySlots)
        : m_params(params),
          m_adminDelaySlots(adminDelaySlots)
    {
    }

    void Ingest(NodeId suspect, NodeId reporter) { m_matrix.Ingest(suspect, reporter); }

    struct SlotOutcome
    {
        SlotIndex slot = 0;
        std::vector<FilterVerdict> verdicts;
        std::vector<AdminAction> actions;
    };

    // Filters the slot that just ended and starts a fresh matrix.
    SlotOutcome CloseSlot(SlotIndex endedSlot);

    const AntMatrix& Matrix() const { return m_matrix; }

  private:
    FilterParams m_params;
    int m_adminDelaySlots;
    AntMatrix m_matrix;
};

} // namespace antilizer::basestation
