#pragma once

#include <map>

#include "esl/strategy.hpp"

namespace esl {

/// A group of agent tags: the environment tag e, base agents, strategic
/// agents. Stored as bitmasks over the environment's agent order.
struct AgentTagSet {
    bool e = false;
    uint32_t base = 0;
    uint32_t strat = 0;

    bool operator==(const AgentTagSet&) const = default;
    bool empty() const { return !e && base == 0 && strat == 0; }
    bool subsetOf(const AgentTagSet& o) const {
        return (!e || o.e) && (base & ~o.base) == 0 && (strat & ~o.strat) == 0;
    }
    AgentTagSet unionWith(const AgentTagSet& o) const {
        return AgentTagSet{e || o.e, base | o.base, strat | o.strat};
    }
    uint64_t key() const { return (uint64_t(base) << 33) | (uint64_t(strat) << 1) | (e ? 1 : 0); }
};

/// Successor states of `state` when every agent picks from its enabled set.
std::vector<StateId> successors(const Environment& env, StateId state,
                                const StrategyProfile& profile);

/// Least state set containing the initial states and closed under successors.
Bitset reach(const Environment& env, const StrategyProfile& profile);

/// The admissible global states of an environment and strategy class: pairs
/// (state, profile) with the profile in the class and the state reachable
/// under it. Handles are dense and index all derived tables.
class GlobalSpace {
  public:
    GlobalSpace(const Environment& env, ProfileSpace space, int workers = 1);

    const Environment& env() const { return *env_; }
    const ProfileSpace& profiles() const { return space_; }
    uint64_t profileCount() const { return numProfiles_; }
    int32_t admissibleCount() const { return static_cast<int32_t>(handleState_.size()); }
    bool productClass() const { return space_.product; }

    bool reachTest(uint64_t profileIdx, StateId s) const {
        return (reachWords_[profileIdx * words_ + (static_cast<size_t>(s) >> 6)] >>
                (static_cast<size_t>(s) & 63)) & 1;
    }
    int32_t handleOf(uint64_t profileIdx, StateId s) const {
        return pairHandle_[profileIdx * static_cast<size_t>(env_->stateCount()) + static_cast<size_t>(s)];
    }
    StateId stateOf(int32_t h) const { return handleState_[static_cast<size_t>(h)]; }
    uint64_t profileOf(int32_t h) const { return handleProfile_[static_cast<size_t>(h)]; }
    int32_t stratIndexOf(int32_t h, AgentId agent) const {
        return space_.poolIndex(profileOf(h), agent);
    }
    ObsId obsOf(int32_t h, AgentId agent) const {
        return env_->obs[static_cast<size_t>(agent)][static_cast<size_t>(stateOf(h))];
    }
    bool isInitialHandle(int32_t h) const { return env_->isInitial(stateOf(h)); }

    void computeSuccessors(uint64_t profileIdx, StateId s, std::vector<StateId>& out) const;

    /// States reachable under at least one profile of the class.
    const std::vector<uint8_t>& realizable() const { return realizableState_; }

    // ── Indistinguishability ──────────────────────────────────────────────
    bool indist(int32_t g, int32_t h, const AgentTagSet& tags) const;

    /// Handles indistinguishable from g under the distributed relation for
    /// `tags` (g included). Backed by a grouping index built once per tag set.
    const std::vector<int32_t>& distGroup(const AgentTagSet& tags, int32_t g) const;

    /// Common-knowledge closure: admissible states reachable from g through
    /// the union of the per-tag relations, every intermediate admissible.
    /// With `shortcut` (product classes only) the closed-form case analysis is
    /// used; otherwise a breadth-first search over the admissible graph.
    std::vector<int32_t> commonReachable(int32_t g, const AgentTagSet& tags, bool shortcut) const;

    /// Engine entry: cached closure with a canonical key so equal closures are
    /// computed once. BFS when the shortcut is off or the class is not a
    /// per-agent product.
    const std::vector<int32_t>& commonGroup(const AgentTagSet& tags, int32_t g,
                                            bool shortcut = true) const;

    const std::vector<int32_t>& allHandlesSorted() const { return allHandles_; }

  private:
    struct GroupIndex {
        std::vector<int32_t> bucketOf;               // per handle
        std::vector<std::vector<int32_t>> buckets;
    };
    struct CommonIndex {
        // Keyed per the case analysis; see implementation.
        std::vector<int32_t> classOf;                // per handle
        std::vector<std::vector<int32_t>> members;
    };
    const GroupIndex& groupIndex(const AgentTagSet& tags) const;
    const CommonIndex& commonIndex(const AgentTagSet& tags) const;
    std::vector<int32_t> commonReachableBfs(int32_t g, const AgentTagSet& tags) const;

    const Environment* env_;
    ProfileSpace space_;
    uint64_t numProfiles_ = 0;
    size_t words_ = 0;                    // 64-bit words per state set
    std::vector<uint64_t> reachWords_;    // [profile * words_ ..]
    std::vector<int32_t> pairHandle_;     // [profile * |S| + s] -> handle | -1
    std::vector<StateId> handleState_;
    std::vector<uint64_t> handleProfile_;
    std::vector<uint8_t> realizableState_;
    std::vector<int32_t> allHandles_;
    mutable std::map<uint64_t, GroupIndex> groups_;
    mutable std::map<uint64_t, CommonIndex> commons_;
    mutable std::map<uint64_t, std::map<int32_t, std::vector<int32_t>>> bfsCache_;
};

}  // namespace esl
