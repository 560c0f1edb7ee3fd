#pragma once

#include <functional>
#include <memory>

#include "esl/environment.hpp"

namespace esl {

/// Total function from states to nonempty enabled-action sets for one agent.
struct IndividualStrategy {
    std::vector<ActionSet> enabled;  // by state, each mask nonempty

    bool operator==(const IndividualStrategy&) const = default;
    bool deterministic() const {
        for (ActionSet m : enabled)
            if (__builtin_popcount(m) != 1) return false;
        return true;
    }
    bool uniformFor(const Environment& env, AgentId agent) const;
    bool wellFormed(const Environment& env, AgentId agent) const;
};

/// One strategy per agent, in agent order.
struct StrategyProfile {
    std::vector<IndividualStrategy> byAgent;

    bool operator==(const StrategyProfile&) const = default;
    bool wellFormed(const Environment& env) const;
    bool deterministic() const {
        for (const auto& s : byAgent)
            if (!s.deterministic()) return false;
        return true;
    }
    bool locallyUniform(const Environment& env) const {
        for (AgentId i = 0; i < static_cast<AgentId>(byAgent.size()); ++i)
            if (!byAgent[static_cast<size_t>(i)].uniformFor(env, i)) return false;
        return true;
    }
};

/// Enables every action at every state.
IndividualStrategy random_strategy(const Environment& env, AgentId agent);

/// Extension of a group strategy to a full profile: members keep their
/// strategies, everyone else gets the random strategy. The group lists the
/// agents the partial profile covers.
StrategyProfile complete_group_strategy(
    const Environment& env,
    const std::vector<std::pair<AgentId, IndividualStrategy>>& group);

enum class ClassKind {
    All,
    Deterministic,
    LocallyUniform,
    LocallyUniformDeterministic,
    AtelCompletion,  // per agent: inner-class strategy or the random strategy
    Custom,          // predicate filter over an enumerable base class
};

class StrategyClass;
using ClassPtr = std::shared_ptr<const StrategyClass>;

class StrategyClass {
  public:
    using Predicate = std::function<bool(const Environment&, const StrategyProfile&)>;

    static ClassPtr all();
    static ClassPtr deterministic();
    static ClassPtr locallyUniform();
    static ClassPtr locallyUniformDeterministic();
    static ClassPtr atelCompletion(ClassPtr inner);
    static ClassPtr custom(ClassPtr base, Predicate pred, std::string name);

    ClassKind kind() const { return kind_; }
    const ClassPtr& inner() const { return inner_; }
    const std::string& name() const { return name_; }

    /// The "presented" membership test: one profile against the environment.
    bool contains(const Environment& env, const StrategyProfile& profile) const;
    bool containsIndividual(const Environment& env, AgentId agent,
                            const IndividualStrategy& s) const;
    /// True when membership factors through per-agent membership, so the class
    /// is a cartesian product of per-agent strategy sets.
    bool perAgentProduct() const { return kind_ != ClassKind::Custom; }

    static ClassPtr byName(std::string_view name);  // CLI selector

  private:
    StrategyClass(ClassKind k, ClassPtr inner, Predicate pred, std::string name)
        : kind_(k), inner_(std::move(inner)), pred_(std::move(pred)), name_(std::move(name)) {}
    ClassKind kind_;
    ClassPtr inner_;
    Predicate pred_;
    std::string name_;
};

/// The profiles of a class over a fixed environment, kept in factored form:
/// per-agent strategy pools plus either the full product or an explicit tuple
/// list (for filtered classes). Profile handles are dense indices.
class ProfileSpace {
  public:
    std::vector<std::vector<IndividualStrategy>> pools;  // [agent] -> strategies
    bool product = true;
    std::vector<std::vector<int32_t>> tuples;  // used when !product

    int agentCount() const { return static_cast<int>(pools.size()); }
    uint64_t size() const;
    void decode(uint64_t idx, std::vector<int32_t>& out) const;
    int32_t poolIndex(uint64_t idx, AgentId agent) const;
    StrategyProfile materialize(uint64_t idx) const;
    /// Content-based lookup (extensional strategy equality).
    std::optional<uint64_t> indexOf(const StrategyProfile& p) const;
};

/// Exactly the profiles of the class, no duplicates, canonical order.
/// Throws InputError for a Custom class with no enumerable base.
ProfileSpace enumerate_profiles(const Environment& env, const StrategyClass& cls);

/// One agent's strategies of a per-agent class, canonical order.
std::vector<IndividualStrategy> enumerate_individual_strategies(const Environment& env,
                                                                AgentId agent,
                                                                const StrategyClass& cls);

/// Membership test (the class "presented" predicate).
bool profile_in_class(const Environment& env, const StrategyProfile& profile,
                      const StrategyClass& cls);

}  // namespace esl
