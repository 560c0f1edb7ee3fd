#pragma once

#include "esl/checker.hpp"

namespace esl::kbp {

/// One guarded action: the guard is a knowledge formula K[i] body with the
/// body ranging over base agents and plain propositions.
struct Clause {
    FormulaPtr guard;
    std::string action;
};

/// Per-agent guarded-action lists. Actions are distinct within an agent;
/// clause order is kept for reporting only.
struct Program {
    std::vector<std::pair<std::string, std::vector<Clause>>> perAgent;

    const std::vector<Clause>* clausesFor(const std::string& agent) const;
};

/// Text format, one block per agent:
///   agent 1: do K[1] p -> send [] otherwise -> wait od
/// "otherwise" is sugar for K[i] !(disjunction of the other guards).
Program parse_kbp(std::string_view text, const Environment& env);
std::string render_kbp(const Program& p);

/// The environment extended so each non-initial state records the joint
/// action that produced it, labeled with did_<agent>=<action> propositions.
/// Agents do not observe the recorder.
struct ActionRecording {
    Environment env;
    std::vector<StateId> origOf;    // new state -> source state
    std::vector<int> recordedJa;    // new state -> joint action, -1 for none

    StateId plainState(StateId orig) const;  // the (orig, none) copy
    /// Lift a strategy profile of the source environment.
    StrategyProfile lift(const Environment& source, const StrategyProfile& p) const;
    /// Restrict a profile of the recording environment to the source states.
    StrategyProfile project(const Environment& source, const StrategyProfile& p) const;
};
ActionRecording make_action_recording(const Environment& env);

/// Knowledge reinterpreted as if the joint strategy were known: strategic
/// agents join every distributed-knowledge group, and common knowledge pins
/// the profile through a quantified global state.
FormulaPtr dollar_transform(const FormulaPtr& f, const Environment& env);

/// The formula asserting that the current joint strategy implements the
/// program: guards hold exactly where the matching action can be taken next.
FormulaPtr imp_formula(const Program& p, const Environment& recordingEnv);

/// The fixed-point definition, checked directly: at every reachable state the
/// enabled set equals the set of actions whose guards hold in the system
/// generated by the profile itself. Throws CoverageError when the guards
/// enable nothing at a reachable state.
bool is_implementation_direct(const Environment& env, const StrategyProfile& profile,
                              const Program& p);

struct KbpQuery {
    enum Kind { Exists, AllSatisfy } kind = Exists;
    FormulaPtr formula;  // AllSatisfy goal, over base agents
};

/// Existence / verification through the strategy-space encodings, over the
/// locally uniform profiles of the action-recording environment.
Verdict check_kbp(const Environment& env, const Program& p, const KbpQuery& query,
                  const CheckOptions& opts = {});

/// All profiles of the class that implement the program, canonical order.
std::vector<StrategyProfile> find_implementations(const Environment& env, const Program& p,
                                                  const StrategyClass& cls);

}  // namespace esl::kbp
