#pragma once

#include "esl/checker.hpp"

namespace esl::atel {

// Alternating temporal epistemic logic over the same environments: coalition
// operators plus state-based knowledge. Coalition sets contain base agents
// only.
enum class AKind : uint8_t {
    Atom, True, False, Not, And, Or, Implies,
    CoalitionNext,      // <<G>> X a
    CoalitionGlobally,  // <<G>> G a
    CoalitionUntil,     // <<G>> (a U b)
    Know,               // K[i] a
    DistKnow,           // D[G] a
    CommonKnow,         // C[G] a
};

class AtelFormula;
using AtelPtr = std::shared_ptr<const AtelFormula>;

class AtelFormula {
  public:
    AKind kind;
    std::string text;                // atom
    std::vector<std::string> group;  // coalition / knowledge group (base agents)
    AtelPtr lhs, rhs;

    static AtelPtr atom(std::string name);
    static AtelPtr t();
    static AtelPtr f();
    static AtelPtr notf(AtelPtr a);
    static AtelPtr andf(AtelPtr a, AtelPtr b);
    static AtelPtr orf(AtelPtr a, AtelPtr b);
    static AtelPtr implies(AtelPtr a, AtelPtr b);
    static AtelPtr coalitionNext(std::vector<std::string> g, AtelPtr a);
    static AtelPtr coalitionGlobally(std::vector<std::string> g, AtelPtr a);
    static AtelPtr coalitionUntil(std::vector<std::string> g, AtelPtr a, AtelPtr b);
    static AtelPtr know(std::string agent, AtelPtr a);
    static AtelPtr distKnow(std::vector<std::string> g, AtelPtr a);
    static AtelPtr commonKnow(std::vector<std::string> g, AtelPtr a);

    bool operator==(const AtelFormula& o) const;
};

AtelPtr parse_atel(std::string_view text, const Environment* env);
std::string render_atel(const AtelPtr& f);

/// The family of group strategies the coalition operators draw from.
enum class GroupStrategyKind { Deterministic, LocallyUniformDeterministic };

/// Group strategies for `group` of the given kind, one per-agent pool each.
std::vector<std::vector<IndividualStrategy>> group_strategy_pools(const Environment& env,
                                                                  GroupStrategyKind kind,
                                                                  const std::vector<AgentId>& group);

/// Direct semantics at a state: coalition operators existentially pick a
/// group strategy and quantify over the consistent paths; knowledge is
/// state-based over observation equality (the whole state set, regardless of
/// reachability).
bool eval_atel(const Environment& env, GroupStrategyKind kind, StateId state, const AtelPtr& f);

/// Star translation into branching-time epistemic logic with strategic
/// agents: coalition operators become "some strategy switch the environment
/// agent cannot see, after which the coalition's strategies guarantee the
/// goal".
FormulaPtr translate_atel(const AtelPtr& f, const Environment& env);

/// The system the translated formula is checked in: every state initial, and
/// profiles that complete a group strategy of the given kind by the random
/// strategy.
std::pair<Environment, ClassPtr> prepare_atel_instance(const Environment& env,
                                                       GroupStrategyKind kind);

/// "Group G has a strategy that group H knows achieves the goal", for the
/// three notions of group knowledge.
enum class GroupKnowledge { D, E, C };
FormulaPtr translate_strategic_knowledge(GroupKnowledge kind, const std::vector<std::string>& knowers,
                                         const std::vector<std::string>& strategizers,
                                         const FormulaPtr& goal, const Environment& env);

/// Normal-form constructive-knowledge chains: K_{G1}...K_{Gn}<<H>> goal.
FormulaPtr translate_csl_normal_form(
    const std::vector<std::pair<GroupKnowledge, std::vector<std::string>>>& chain,
    const std::vector<std::string>& strategizers, const FormulaPtr& goal, const Environment& env);

/// Names an individual strategy of one agent so commitment formulas can refer
/// to it; the registered proposition is read off the strategy component of a
/// global state.
std::string register_commitment(Environment& env, const std::string& agent,
                                const std::string& strategyName, const IndividualStrategy& strategy);

/// Commitment operator: "had agent i committed to the named strategy, the
/// goal would hold", as knowledge relative to everyone else's strategies with
/// sig(i) pinned inside every knowledge operator of the translated goal.
FormulaPtr translate_catl(const std::string& agent, const std::string& strategyName,
                          const AtelPtr& goal, const Environment& env);

}  // namespace esl::atel
