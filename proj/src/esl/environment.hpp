#pragma once

#include <map>
#include <span>

#include "esl/basics.hpp"

namespace esl {

using StateId = int32_t;
using AgentId = int32_t;
using ActionId = int32_t;
using ObsId = int32_t;
using PropId = int32_t;

/// Nonempty set of actions of one agent, as a bitmask over action ids.
using ActionSet = uint32_t;

constexpr int kMaxActionsPerAgent = 31;

/// A proposition whose truth is read off the strategy component of a global
/// state rather than the environment labeling (used by commitment operators).
struct StrategyAtom {
    AgentId agent = -1;
    std::vector<ActionSet> enabled;  // by state
};

/// Finite multi-agent transition system: per-agent actions and observations,
/// joint-action transition relation, proposition labeling.
///
/// The transition relation is stored explicitly over joint actions; wildcard
/// and turn-based input forms are expanded by the text reader before the
/// Environment is built. Instances are immutable once constructed.
class Environment {
  public:
    SymbolTable states;
    SymbolTable agents;
    SymbolTable props;
    std::vector<SymbolTable> actions;   // per agent
    std::vector<SymbolTable> obsNames;  // per agent: observation value names
    std::vector<StateId> initial;       // sorted, unique
    std::vector<std::vector<ObsId>> obs;     // [agent][state]
    std::vector<std::vector<PropId>> labels; // [state], each sorted
    // [state][joint action] -> sorted successor states
    std::vector<std::vector<std::vector<StateId>>> trans;
    std::map<PropId, StrategyAtom> strategyAtoms;

    int stateCount() const { return states.size(); }
    int agentCount() const { return agents.size(); }
    int actionCount(AgentId i) const { return actions[static_cast<size_t>(i)].size(); }
    int jointCount() const {
        int n = 1;
        for (const auto& t : actions) n *= t.size();
        return n;
    }

    // Joint actions are mixed-radix encoded with agent 0 in the lowest digit.
    int jointEncode(std::span<const ActionId> acts) const {
        int ja = 0, stride = 1;
        for (size_t i = 0; i < acts.size(); ++i) {
            ja += acts[i] * stride;
            stride *= actions[i].size();
        }
        return ja;
    }
    void jointDecode(int ja, std::vector<ActionId>& out) const {
        out.resize(static_cast<size_t>(agentCount()));
        for (int i = 0; i < agentCount(); ++i) {
            int n = actionCount(i);
            out[static_cast<size_t>(i)] = ja % n;
            ja /= n;
        }
    }
    ActionId jointComponent(int ja, AgentId agent) const {
        for (AgentId i = 0; i < agent; ++i) ja /= actionCount(i);
        return ja % actionCount(agent);
    }
    std::string jointName(int ja) const;

    bool hasLabel(StateId s, PropId p) const {
        const auto& row = labels[static_cast<size_t>(s)];
        return std::binary_search(row.begin(), row.end(), p);
    }
    bool isInitial(StateId s) const {
        return std::binary_search(initial.begin(), initial.end(), s);
    }

    // Construction helpers used by readers and generators.
    AgentId addAgent(std::string_view name);
    StateId addState(std::string_view name);
    ActionId addAction(AgentId agent, std::string_view name);
    void setObservation(AgentId agent, StateId s, std::string_view value);
    void addLabel(StateId s, std::string_view prop);
    void addTransition(StateId from, int jointAction, StateId to);
    void registerStrategyAtom(std::string_view prop, AgentId agent, std::vector<ActionSet> enabled);
    /// Make internal tables consistent after the last add* call.
    void seal();
};

struct Violation {
    enum Kind { Seriality, EmptyInitial, EmptyActions, NoAgents, PartialObservation } kind;
    std::string detail;
};

/// Empty result iff every Environment invariant holds. Violations are data,
/// not failures: each one names the state/action that breaks the invariant.
std::vector<Violation> validate_environment(const Environment& env);

/// Same environment with every state initial.
Environment make_all_initial(const Environment& env);

}  // namespace esl
