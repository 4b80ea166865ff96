#include "antilizer/attacks.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace antilizer;
using namespace antilizer::attacks;

TEST_CASE("attack kinds round trip through their names")
{
    for (auto k : {AttackKind::None, AttackKind::Sinkhole, AttackKind::Blackhole, AttackKind::HelloFlood,
                   AttackKind::AntFlood})
    {
        CHECK(ParseAttackKind(ToString(k)) == k);
    }
    CHECK_THROWS_AS(ParseAttackKind("wormhole"), ConfigError);
}

TEST_CASE("behaviour switches on at the start time")
{
    AttackPlan plan;
    plan.kind = AttackKind::Blackhole;
    plan.attackerIds = {4};
    plan.startTime = 100.0;
    CHECK_FALSE(plan.ActiveAt(4, 99.9));
    CHECK(plan.ActiveAt(4, 100.0));
    CHECK_FALSE(plan.ActiveAt(3, 200.0));
    CHECK(AdvertisedRank(plan, 4, 50.0, 3.5, 0.0) == 3.5);
    CHECK(AdvertisedRank(plan, 4, 150.0, 3.5, 0.0) == 0.0);
    CHECK(DropsForwarded(plan, 4, 150.0));
    CHECK_FALSE(SendsHellos(plan, 4, 150.0));

    plan.kind = AttackKind::Sinkhole;
    CHECK(AdvertisedRank(plan, 4, 150.0, 3.5, 0.0) == 0.0);
    CHECK_FALSE(DropsForwarded(plan, 4, 150.0));

    plan.kind = AttackKind::HelloFlood;
    CHECK(SendsHellos(plan, 4, 150.0));
    CHECK(AdvertisedRank(plan, 4, 150.0, 3.5, 0.0) == 3.5);

    plan.kind = AttackKind::AntFlood;
    CHECK(FloodsAnts(plan, 4, 150.0));
    plan.kind = AttackKind::None;
    CHECK_FALSE(plan.IsAttacker(4));
}

TEST_CASE("default start time by size")
{
    CHECK(DefaultStartTime(25) == 1200.0);
    CHECK(DefaultStartTime(50) == 2400.0);
    CHECK(DefaultStartTime(100) == 2400.0);
}

TEST_CASE("attacker selection prefers relays away from the root")
{
    // 0 - 1 - 2 - 3 - 4, with 5 hanging off 2 and 6 off 1.
    const std::vector<std::vector<NodeId>> adj{{1}, {0, 2, 6}, {1, 3, 5}, {2, 4}, {3}, {2}, {1}};
    const std::vector<NodeId> parent{kNoNode, 0, 1, 2, 3, 2, 1};
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const auto one = SelectAttackers(adj, parent, 0, 1, seed);
        REQUIRE(one.size() == 1);
        CHECK((one[0] == 2 || one[0] == 3));
        const auto three = SelectAttackers(adj, parent, 0, 3, seed);
        CHECK(three == std::vector<NodeId>{1, 2, 3});
        const auto all = SelectAttackers(adj, parent, 0, 6, seed);
        CHECK(all == std::vector<NodeId>{1, 2, 3, 4, 5, 6});
    }
    CHECK_THROWS_AS(SelectAttackers(adj, parent, 0, 7, 1), ConfigError);
}

TEST_CASE("attacker selection is seeded")
{
    std::vector<std::vector<NodeId>> adj(30);
    std::vector<NodeId> parent(30, 0);
    for (NodeId v = 1; v < 30; ++v)
    {
        adj[0].push_back(v);
        adj[v].push_back(0);
    }
    std::set<std::vector<NodeId>> seen;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const auto a = SelectAttackers(adj, parent, 0, 3, seed);
        CHECK(a == SelectAttackers(adj, parent, 0, 3, seed));
        CHECK(std::is_sorted(a.begin(), a.end()));
        CHECK(std::find(a.begin(), a.end(), 0) == a.end());
        seen.insert(a);
    }
    CHECK(seen.size() > 1);
}

TEST_CASE("attacker count from a fraction")
{
    CHECK(AttackerCountForFraction(0.1, 50) == 5);
    CHECK(AttackerCountForFraction(0.01, 25) == 1);
    CHECK_THROWS_AS(AttackerCountForFraction(0.0, 25), ConfigError);
    CHECK_THROWS_AS(AttackerCountForFraction(1.5, 25), ConfigError);
}
