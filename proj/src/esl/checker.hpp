#pragma once

#include "esl/compiled.hpp"

namespace esl {

enum class EngineKind { Auto, EslMinus, CtlStarK, Full, Reduction };
const char* engine_name(EngineKind e);
EngineKind engine_by_name(std::string_view name);

struct CheckOptions {
    EngineKind engine = EngineKind::Auto;
    int workers = 1;
    uint64_t etsStateBudget = 200'000;       // reduction refuses above this
    uint64_t formulaNodeBudget = 1'000'000;  // transform / path expansion
    bool wantWitness = false;
    bool shortcutCommon = true;  // closed-form common-knowledge closure
};

struct Statistics {
    uint64_t profilesEnumerated = 0;
    uint64_t admissibleStates = 0;
    uint64_t statesExplored = 0;
    uint64_t memoHits = 0;
    std::string engine;
};

struct Witness {
    std::string var;  // empty for a plain knowledge witness
    StateId state = -1;
    StrategyProfile profile;
};

struct Verdict {
    bool holds = false;
    std::optional<Witness> witness;
    Statistics stats;
};

/// A named global state for a context binding.
struct ContextBinding {
    std::string var;
    StateId state = -1;
    StrategyProfile profile;
};

/// One model-checking problem: environment, strategy class, context, formula.
struct Instance {
    const Environment* env = nullptr;
    ClassPtr cls;
    FormulaPtr formula;
    std::vector<ContextBinding> context;
};

/// Decides whether the formula holds at time zero of every run of the
/// strategy-space system, relative to the context.
Verdict check(const Instance& instance, const CheckOptions& opts = {});

/// Satisfaction at one global state (the state-recursive engine's SAT, or the
/// corresponding entry of the other engines). The global state must be
/// admissible for the instance's class.
bool eval_at(const Instance& instance, StateId state, const StrategyProfile& profile,
             EngineKind engine = EngineKind::Auto, const CheckOptions& opts = {});

/// Conjunction over every admissible global state whose environment component
/// is `state` (used by the alternating-logic equivalence harness).
bool holds_at_all_with_state(const Instance& instance, StateId state,
                             EngineKind engine = EngineKind::Auto,
                             const CheckOptions& opts = {});

/// Evaluates at the admissible points carrying `profile`, asserting the
/// verdict is the same at each of them, and returns it.
bool holds_at_profile(const Instance& instance, const StrategyProfile& profile,
                      EngineKind engine = EngineKind::Auto, const CheckOptions& opts = {});

/// Witness for a top-level "!D[]! body" or "exists x . body" formula: an
/// admissible global state (resp. binding) making the body hold, re-checked
/// before emission. Empty when the verdict is false.
std::optional<Witness> extract_witness(const Instance& instance, const CheckOptions& opts = {});

/// All infinite paths from `state` under `profile` satisfy the path formula.
bool ltl_forall_paths(const Environment& env, const StrategyProfile& profile, StateId state,
                      const FormulaPtr& pathFormula, const CheckOptions& opts = {});

/// Repeated evaluation in the system whose only joint strategy is `profile`
/// (knowledge ranges over the states it reaches). Compilation and memo tables
/// are shared across calls.
class SingletonEvaluator {
  public:
    SingletonEvaluator(const Environment& env, const StrategyProfile& profile);
    bool reachable(StateId s) const;
    const std::vector<StateId>& reachableStates() const;
    /// Satisfaction at (s, profile); s must be reachable.
    bool eval(StateId s, const FormulaPtr& f);

  private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

}  // namespace esl
